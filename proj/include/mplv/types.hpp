#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mplv {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct InadmissibleArgument : std::domain_error {
    using std::domain_error::domain_error;
};
struct DivergentIndex : std::domain_error {
    using std::domain_error::domain_error;
};
struct CrossCheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonconvergentExpansion : std::domain_error {
    using std::domain_error::domain_error;
};
struct NegativeExponent : std::domain_error {
    using std::domain_error::domain_error;
};
struct UnknownIdentity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SamplingExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Index: a composition (k1,...,kr) of integers >= 1.  Depth 0 (the empty
// index) is allowed and evaluates to 1 in every series operation.
// ---------------------------------------------------------------------------

class Index {
  public:
    Index() = default;
    Index(std::initializer_list<int> parts) : Index(std::vector<int>(parts)) {}
    explicit Index(std::vector<int> parts) : parts_(std::move(parts)) {
        for (int k : parts_)
            if (k < 1) throw std::invalid_argument("Index: every part must be >= 1");
    }

    static Index parse(const std::string& text) {
        std::vector<int> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            parts.push_back(std::stoi(item));
        }
        return Index(std::move(parts));
    }

    int depth() const { return static_cast<int>(parts_.size()); }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    bool empty() const { return parts_.empty(); }
    int last() const { return parts_.back(); }
    int operator[](int i) const { return parts_[static_cast<size_t>(i)]; }
    const std::vector<int>& parts() const { return parts_; }

    // drop the last part entirely
    Index drop_last() const {
        auto p = parts_;
        p.pop_back();
        return Index(std::move(p));
    }
    // decrement the last part (requires last() >= 2)
    Index dec_last() const {
        auto p = parts_;
        --p.back();
        return Index(std::move(p));
    }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    bool operator==(const Index& o) const { return parts_ == o.parts_; }
    bool operator<(const Index& o) const { return parts_ < o.parts_; }

  private:
    std::vector<int> parts_;
};

// ---------------------------------------------------------------------------
// ArgVector: arguments (z1,...,zr) of the multiple polylogarithm.  The gap
// weights w_j = z_j z_{j+1} ... z_r are what the summation engine actually
// uses; admissibility is |w_j| <= 1 for all j, and w_r != 1 when the trailing
// index part is 1.  Individual |z_j| may exceed 1 (e.g. x^{-1} y arguments).
// ---------------------------------------------------------------------------

struct ArgVector {
    std::vector<cplx> args;

    ArgVector() = default;
    ArgVector(std::initializer_list<cplx> a) : args(a) {}
    explicit ArgVector(std::vector<cplx> a) : args(std::move(a)) {}

    static ArgVector ones(int r) { return ArgVector(std::vector<cplx>(static_cast<size_t>(r), cplx(1.0))); }

    int depth() const { return static_cast<int>(args.size()); }

    std::vector<cplx> gap_weights() const {
        std::vector<cplx> w(args.size());
        cplx suffix = 1.0;
        for (size_t j = args.size(); j-- > 0;) {
            suffix *= args[j];
            w[j] = suffix;
        }
        return w;
    }
};

// 𝕃-series argument pair (x, y), |x| <= 1, |y| <= 1.
struct TwoVarPoint {
    cplx x;
    cplx y;
};

// ---------------------------------------------------------------------------
// Evaluation configuration and result
// ---------------------------------------------------------------------------

enum class AccelMode : std::uint8_t {
    Auto,             // classify from the gap weights
    Interior,         // all |w| < 1: plain summation with analytic tail bound
    BoundaryGeneric,  // unit-modulus weights, not roots of unity: wide-window averaging
    RootOfUnity,      // unit weights are roots of unity: period-q averaging + Richardson
};

inline const char* to_string(AccelMode m) {
    switch (m) {
        case AccelMode::Auto: return "auto";
        case AccelMode::Interior: return "interior";
        case AccelMode::BoundaryGeneric: return "boundary-generic";
        case AccelMode::RootOfUnity: return "root-of-unity";
    }
    return "?";
}

struct EvalConfig {
    double target_tol = 1e-10;
    long n_initial = 1L << 14;
    long n_max = 1L << 24;
    double margin = 0.05;  // distance kept from singular sets by samplers/domain predicates
    AccelMode accel_mode = AccelMode::Auto;
    int root_order = 0;  // forced period for RootOfUnity mode; 0 = detect

    EvalConfig with_tol(double t) const {
        EvalConfig c = *this;
        c.target_tol = t;
        return c;
    }
};

struct EvalResult {
    cplx value{};
    double err_est = 0.0;
    long terms_used = 0;
    AccelMode mode = AccelMode::Interior;
    bool converged = true;
};

}  // namespace mplv
