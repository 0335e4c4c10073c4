#pragma once

// Declarative catalogue of the paper's identities with admissible-domain
// samplers, numeric/exact verification runners, limit checkers, and
// machine-readable reports.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "characters.hpp"
#include "engine.hpp"
#include "eval.hpp"
#include "expand.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "types.hpp"

namespace mplv {

// ---------------------------------------------------------------------------
// Catalogue
// ---------------------------------------------------------------------------

enum class VerifyMode { Exact, Numeric, Limit, Derivative };

inline const char* to_string(VerifyMode m) {
    switch (m) {
        case VerifyMode::Exact: return "exact";
        case VerifyMode::Numeric: return "numeric";
        case VerifyMode::Limit: return "limit";
        case VerifyMode::Derivative: return "derivative";
    }
    return "?";
}

struct IdentitySpec {
    std::string id;
    std::string paper_eq;    // citation
    VerifyMode mode;         // default verification mode
    std::string params;      // parameter schema, human-readable
    std::string domain;      // admissibility constraints
    bool exact_available = false;
    bool informational = false;  // relaxed tolerance (generic boundary points)
};

inline const std::vector<IdentitySpec>& list_identities() {
    static const std::vector<IdentitySpec> catalogue = {
        {"thm1.2", "Theorem 1.2, Eq. (1.7)", VerifyMode::Numeric, "k in 2..6",
         "|x|,|y|<=1, x!=1, y!=1; xy!=1 if k=2", true},
        {"cor1.2", "Corollary 1.2, Eq. (1.8)", VerifyMode::Numeric, "k in 2..6",
         "|x|=1, x!=1", false, true},
        {"wsf-oz", "Eq. (1.3)", VerifyMode::Numeric, "k in 3..8", "value-level"},
        {"wsf-kt", "Eq. (1.4)", VerifyMode::Numeric, "k in 3..8", "value-level"},
        {"lemma2.1", "Lemma 2.1, Eq. (2.2)", VerifyMode::Exact, "k in 2..6", "formal", true},
        {"eq2.3", "Eq. (2.3)", VerifyMode::Exact, "i,j >= 1", "formal", true},
        {"stuffle", "Eq. (2.4)", VerifyMode::Exact, "p,q >= 1", "formal", true},
        {"eq2.5", "Eq. (2.5)", VerifyMode::Exact, "k in 2..6", "formal", true},
        {"eq2.6", "Eq. (2.6)", VerifyMode::Exact, "k in 2..6", "formal", true},
        {"wsf-3", "Eq. (3.2)", VerifyMode::Numeric, "k in 3..6",
         "|x|=|y|=1 roots of unity, x!=1, y!=1"},
        {"limit-3.1", "Eq. (3.1) and companion", VerifyMode::Limit, "k >= 3",
         "x -> 1 along the unit circle"},
        {"prop3.1-f3", "Proposition 3.1, Eq. (3.3)", VerifyMode::Numeric, "k in 2..6",
         "value-level"},
        {"prop3.1-f4", "Proposition 3.1, Eq. (3.4)", VerifyMode::Numeric, "k in 2..6",
         "value-level"},
        {"nishi", "Eq. (3.7)", VerifyMode::Numeric, "k in 2..6", "value-level"},
        {"lsum", "Eq. (3.8)", VerifyMode::Numeric, "k in 2..6", "value-level"},
        {"thm1.4", "Theorem 1.4, Eq. (1.9)", VerifyMode::Numeric, "r >= 1, k >= 2",
         "|x|,|y|<=0.8, |(1-x)/(1-xy)|<=1-margin/2, y!=1, xy!=1"},
        {"thm1.4-k2", "Section 4, k=2 base identity", VerifyMode::Numeric, "r >= 1",
         "as thm1.4"},
        {"diff-formulas", "Section 4 differential formulas", VerifyMode::Derivative,
         "indices of depth <= 4", "|x|<1 interior"},
        {"reflection", "Section 4, Eq. (reflection)", VerifyMode::Numeric, "none",
         "real z in (0.05,0.95)"},
        {"five-term", "Section 4 Example (five-term relation)", VerifyMode::Numeric, "none",
         "real x,y in (0.05,0.95)"},
        {"example-2-2", "Section 4 Example, case (r,k)=(2,2)", VerifyMode::Numeric, "none",
         "real x,y in (0.05,0.95)"},
    };
    return catalogue;
}

inline const IdentitySpec& find_identity(const std::string& id) {
    for (const auto& s : list_identities())
        if (s.id == id) return s;
    throw UnknownIdentity("unknown identity '" + id + "'");
}

// ---------------------------------------------------------------------------
// Shared evaluation context: memoizes constituent evaluations within one
// sample and accumulates the error budget (every use of a value contributes
// its err_est, cached or not).
// ---------------------------------------------------------------------------

class EvalContext {
  public:
    explicit EvalContext(const EvalConfig& cfg) : cfg_(cfg) {}

    cplx li(const Index& idx, const std::vector<cplx>& args) {
        return record(memoized(0, idx, args, [&] { return li_eval(idx, ArgVector(args), cfg_); }));
    }
    cplx ll(const Index& idx, cplx x, cplx y) {
        return record(memoized(1, idx, {x, y}, [&] { return ll_eval(idx, {x, y}, cfg_); }));
    }
    cplx zeta(const Index& idx) {
        return record(memoized(2, idx, {}, [&] { return zeta_eval(idx, cfg_); }));
    }
    cplx t_value(const Index& idx) {
        return record(memoized(3, idx, {}, [&] { return t_value_eval(idx, cfg_); }));
    }
    cplx lsh(const Index& idx, const Character& chi) {
        return record(memoized(4 + chi_tag(chi), idx, {},
                               [&] { return l_sh_eval(idx, all_chars(idx.depth(), chi), cfg_); }));
    }
    cplx lstar(int k1, int k2, const Character& chi) {
        return record(memoized(40 + chi_tag(chi), Index{k1, k2}, {},
                               [&] { return l_star_eval(k1, k2, chi, cfg_); }));
    }
    cplx lval(int k, const Character& chi) {
        return record(
            memoized(80 + chi_tag(chi), Index{k}, {}, [&] { return l_value(k, chi, cfg_); }));
    }

    double budget() const { return budget_; }
    long terms() const { return terms_; }
    bool all_converged() const { return all_converged_; }
    const EvalConfig& config() const { return cfg_; }

  private:
    static std::vector<Character> all_chars(int depth, const Character& chi) {
        return std::vector<Character>(static_cast<size_t>(depth), chi);
    }
    static int chi_tag(const Character& chi) {
        return chi.conductor() * 4 + (chi.non_trivial() ? 1 : 0);
    }

    template <typename Fn>
    const EvalResult& memoized(int tag, const Index& idx, const std::vector<cplx>& args, Fn&& fn) {
        std::vector<double> key;
        key.reserve(args.size() * 2 + idx.parts().size() + 2);
        key.push_back(static_cast<double>(tag));
        key.push_back(static_cast<double>(idx.depth()));
        for (int p : idx.parts()) key.push_back(static_cast<double>(p));
        for (cplx a : args) {
            key.push_back(a.real());
            key.push_back(a.imag());
        }
        auto it = memo_.find(key);
        if (it == memo_.end()) it = memo_.emplace(std::move(key), fn()).first;
        return it->second;
    }

    cplx record(const EvalResult& r) {
        budget_ += r.err_est;
        terms_ += r.terms_used;
        all_converged_ = all_converged_ && r.converged;
        return r.value;
    }

    EvalConfig cfg_;
    std::map<std::vector<double>, EvalResult> memo_;
    double budget_ = 0.0;
    long terms_ = 0;
    bool all_converged_ = true;
};

// ---------------------------------------------------------------------------
// Identity evaluators (lhs, rhs per sample or per parameter value)
// ---------------------------------------------------------------------------

namespace identities {

inline Index ones_then(int ones, int last) {
    std::vector<int> p(static_cast<size_t>(ones), 1);
    if (last > 0) p.push_back(last);
    return Index(std::move(p));
}

inline void for_each_composition(int total, int parts,
                                 const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> comp(static_cast<size_t>(parts), 1);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == parts - 1) {
            comp[static_cast<size_t>(pos)] = remaining;
            fn(comp);
            return;
        }
        for (int v = 1; v <= remaining - (parts - 1 - pos); ++v) {
            comp[static_cast<size_t>(pos)] = v;
            rec(pos + 1, remaining - v);
        }
    };
    if (parts >= 1 && total >= parts) rec(0, total);
}

// Theorem 1.2, Eq. (1.7)
inline std::pair<cplx, cplx> thm12(EvalContext& cx, int k, cplx x, cplx y) {
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j) {
        double w = std::ldexp(1.0, j - 1);
        lhs += w * (cx.li(Index{k - j, j}, {y / x, x}) + cx.li(Index{k - j, j}, {x / y, y}));
    }
    lhs += cx.li(Index{1, k - 1}, {1.0 / x, x * y});
    lhs += cx.li(Index{1, k - 1}, {1.0 / y, x * y});
    cplx rhs = (cx.li(Index{1}, {x}) + cx.li(Index{1}, {y})) * cx.li(Index{k - 1}, {x * y}) +
               static_cast<double>(k - 1) * cx.li(Index{k}, {x * y});
    return {lhs, rhs};
}

// Corollary 1.2, Eq. (1.8); x on the unit circle
inline std::pair<cplx, cplx> cor12(EvalContext& cx, int k, cplx x) {
    cplx xi = 1.0 / x;
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j) {
        double w = std::ldexp(1.0, j - 1);
        lhs += w * (cx.li(Index{k - j, j}, {xi * xi, x}) + cx.li(Index{k - j, j}, {x * x, xi}));
    }
    lhs -= cx.li(Index{k - 1, 1}, {1.0, x});
    lhs -= cx.li(Index{k - 1, 1}, {1.0, xi});
    cplx rhs = cx.li(Index{k}, {x}) + cx.li(Index{k}, {xi}) +
               static_cast<double>(k - 1) * cx.zeta(Index{k});
    return {lhs, rhs};
}

// Eq. (1.3), weighted sum formula for double zeta values
inline std::pair<cplx, cplx> wsf_oz(EvalContext& cx, int k) {
    cplx lhs = 0.0;
    for (int j = 2; j <= k - 1; ++j) lhs += std::ldexp(1.0, j - 1) * cx.zeta(Index{k - j, j});
    cplx rhs = 0.5 * (k + 1) * cx.zeta(Index{k});
    return {lhs, rhs};
}

// Eq. (1.4), weighted sum formula for double T-values
inline std::pair<cplx, cplx> wsf_kt(EvalContext& cx, int k) {
    cplx lhs = 0.0;
    for (int j = 2; j <= k - 1; ++j) lhs += std::ldexp(1.0, j - 1) * cx.t_value(Index{k - j, j});
    cplx rhs = static_cast<double>(k - 1) * cx.t_value(Index{k});
    return {lhs, rhs};
}

// Eq. (3.2), the combined identity; x, y on the unit circle
inline std::pair<cplx, cplx> wsf3(EvalContext& cx, int k, cplx x, cplx y) {
    cplx xi = 1.0 / x, yi = 1.0 / y;
    cplx lhs = 0.0;
    for (int j = 2; j <= k - 1; ++j) {
        double w = std::ldexp(1.0, j - 1);
        Index idx{k - j, j};
        lhs += w * (cx.li(idx, {x * x, xi}) + cx.li(idx, {xi * xi, x}) + cx.li(idx, {y * y, yi}) +
                    cx.li(idx, {yi * yi, y}) - cx.li(idx, {x * y, xi}) - cx.li(idx, {xi * yi, x}) -
                    cx.li(idx, {x * y, yi}) - cx.li(idx, {xi * yi, y}));
    }
    Index i1{1, k - 1};
    lhs += cx.li(i1, {xi, xi * y}) - cx.li(i1, {x, xi * y});
    lhs += cx.li(i1, {y, xi * y}) - cx.li(i1, {yi, xi * y});
    lhs += cx.li(i1, {x, x * yi}) - cx.li(i1, {xi, x * yi});
    lhs += cx.li(i1, {yi, x * yi}) - cx.li(i1, {y, x * yi});
    Index i2{k - 1, 1};
    lhs += cx.li(i2, {xi * xi, x}) - cx.li(i2, {1.0, x});
    lhs += cx.li(i2, {x * x, xi}) - cx.li(i2, {1.0, xi});
    lhs += cx.li(i2, {yi * yi, y}) - cx.li(i2, {1.0, y});
    lhs += cx.li(i2, {y * y, yi}) - cx.li(i2, {1.0, yi});
    lhs += cx.li(i2, {xi * y, xi}) - cx.li(i2, {x * y, xi});
    lhs += cx.li(i2, {xi * y, y}) - cx.li(i2, {xi * yi, y});
    lhs += cx.li(i2, {x * yi, x}) - cx.li(i2, {xi * yi, x});
    lhs += cx.li(i2, {x * yi, yi}) - cx.li(i2, {x * y, yi});

    Index ik{k};
    cplx rhs = cx.li(ik, {x}) + cx.li(ik, {xi}) - cx.li(ik, {xi * y * y}) - cx.li(ik, {x * yi * yi});
    rhs += cx.li(ik, {y}) + cx.li(ik, {yi}) - cx.li(ik, {xi * xi * y}) - cx.li(ik, {x * x * yi});
    rhs += static_cast<double>(k - 1) *
           (2.0 * cx.zeta(ik) - cx.li(ik, {xi * y}) - cx.li(ik, {x * yi}));
    return {lhs, rhs};
}

// Proposition 3.1, Eq. (3.3) (conductor 3)
inline std::pair<cplx, cplx> prop31_f3(EvalContext& cx, int k) {
    const auto& chi = Character::chi3();
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j) lhs += std::ldexp(1.0, j - 1) * cx.lsh(Index{k - j, j}, chi);
    lhs += cx.lsh(Index{k - 1, 1}, chi);
    lhs += cx.lstar(1, k - 1, chi);
    lhs += cx.lstar(k - 1, 1, chi);
    cplx rhs = 0.5 * (k - 3) * cx.lval(k, Character::principal3());
    return {lhs, rhs};
}

// Proposition 3.1, Eq. (3.4) (conductor 4)
inline std::pair<cplx, cplx> prop31_f4(EvalContext& cx, int k) {
    const auto& chi = Character::chi4();
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j) lhs += std::ldexp(1.0, j - 1) * cx.lsh(Index{k - j, j}, chi);
    lhs += cx.lsh(Index{k - 1, 1}, chi);
    cplx rhs = 0.5 * (k - 1) * cx.lval(k, Character::principal4());
    return {lhs, rhs};
}

// Nishi's formula, Eq. (3.7)
inline std::pair<cplx, cplx> nishi(EvalContext& cx, int k) {
    const auto& chi = Character::chi3();
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j)
        lhs += (std::ldexp(1.0, j - 1) + 1.0) * cx.lsh(Index{k - j, j}, chi);
    lhs += cx.lsh(Index{1, k - 1}, chi);
    lhs += cx.lsh(Index{k - 1, 1}, chi);
    cplx rhs = 0.5 * (k - 1) * cx.lval(k, Character::principal3());
    return {lhs, rhs};
}

// Ordinary sum formula, Eq. (3.8)
inline std::pair<cplx, cplx> lsum(EvalContext& cx, int k) {
    const auto& chi = Character::chi3();
    cplx lhs = 0.0;
    for (int j = 1; j <= k - 1; ++j) lhs += cx.lsh(Index{k - j, j}, chi);
    lhs += cx.lsh(Index{1, k - 1}, chi);
    lhs -= cx.lstar(1, k - 1, chi);
    lhs -= cx.lstar(k - 1, 1, chi);
    cplx rhs = cx.lval(k, Character::principal3());
    return {lhs, rhs};
}

// Theorem 1.4 main identity
inline std::pair<cplx, cplx> thm14(EvalContext& cx, int r, int k, cplx x, cplx y) {
    cplx u = (cplx(1.0) - x) / (cplx(1.0) - x * y);
    cplx lhs = cx.ll(ones_then(r - 1, k), u, y);
    cplx rhs = 0.0;
    double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k-1}
    for_each_composition(r + k, k, [&](const std::vector<int>& j) {
        Index prefix(std::vector<int>(j.begin(), j.end() - 1));
        rhs += sign * cx.ll(ones_then(j.back() - 1, 0), u, y) * cx.ll(prefix, x, y);
    });
    double s = 1.0;
    for (int j = 0; j <= k - 2; ++j, s = -s)
        rhs += s * cx.ll(ones_then(r - 1, k - j), 1.0, y) * cx.ll(ones_then(j, 0), x, y);
    return {lhs, rhs};
}

// Section 4, the k = 2 base identity
inline std::pair<cplx, cplx> thm14_k2(EvalContext& cx, int r, cplx x, cplx y) {
    cplx u = (cplx(1.0) - x) / (cplx(1.0) - x * y);
    cplx lhs = cx.ll(ones_then(r - 1, 2), u, y);
    cplx rhs = cx.ll(ones_then(r - 1, 2), 1.0, y);
    for (int j = 0; j <= r; ++j)
        rhs -= cx.ll(ones_then(j, 0), u, y) * cx.ll(Index{r + 1 - j}, x, y);
    return {lhs, rhs};
}

// Dilogarithm reflection formula on real z in (0,1)
inline std::pair<cplx, cplx> reflection(EvalContext& cx, double z) {
    cplx lhs = cx.li(Index{2}, {1.0 - z});
    cplx rhs = -cx.li(Index{2}, {z}) + cx.zeta(Index{2}) - std::log(z) * std::log1p(-z);
    return {lhs, rhs};
}

// Five-term relation, 𝕃 form ((r,k) = (1,2) case of Theorem 1.4)
inline std::pair<cplx, cplx> five_term_ll(EvalContext& cx, double x, double y) {
    cplx u = (1.0 - x) / (1.0 - x * y);
    cplx lhs = cx.ll(Index{2}, u, y);
    cplx rhs = -cx.ll(Index{1}, u, y) * cx.ll(Index{1}, x, y) - cx.ll(Index{2}, x, y) +
               cx.ll(Index{2}, 1.0, y);
    return {lhs, rhs};
}

// Five-term relation, rearranged log form with constant 3 zeta(2)
inline std::pair<cplx, cplx> five_term_log(EvalContext& cx, double x, double y) {
    double u = (1.0 - x) / (1.0 - x * y);
    double v = (1.0 - y) / (1.0 - x * y);
    cplx lhs = cx.li(Index{2}, {x}) + cx.li(Index{2}, {y}) + cx.li(Index{2}, {1.0 - x * y}) +
               cx.li(Index{2}, {u}) + cx.li(Index{2}, {v});
    cplx rhs = 3.0 * cx.zeta(Index{2}) - std::log(x) * std::log1p(-x) -
               std::log(y) * std::log1p(-y) - std::log(u) * std::log(v);
    return {lhs, rhs};
}

// Section 4 Example, case (r,k) = (2,2)
inline std::pair<cplx, cplx> example22(EvalContext& cx, double x, double y) {
    cplx u = (1.0 - x) / (1.0 - x * y);
    cplx lhs = cx.li(Index{1, 2}, {1.0, u}) - cx.li(Index{1, 2}, {y, u}) -
               cx.li(Index{1, 2}, {1.0 / y, u * y}) + cx.li(Index{1, 2}, {1.0, u * y});
    cplx rhs = cx.zeta(Index{3}) - cx.li(Index{3}, {x}) - cx.li(Index{3}, {y}) +
               cx.li(Index{3}, {x * y}) +
               std::log(x) * (cx.li(Index{2}, {x}) - cx.li(Index{2}, {x * y})) +
               0.5 * std::log(x) * std::log(x) * std::log(u.real());
    return {lhs, rhs};
}

}  // namespace identities

// ---------------------------------------------------------------------------
// Limit checks: Eq. (3.1) and its companion, along the unit circle.
// The bracketed difference is evaluated as a single combined series (the two
// Li terms share every gap weight except the first), which factors the
// vanishing O(x-1) scale out of the oscillating tail.
// ---------------------------------------------------------------------------

namespace detail_limits {

// unit-circle point with |1 - x_t| = 2^{-t}
inline cplx circle_point(int t) {
    double eps = std::ldexp(1.0, -t);
    return std::polar(1.0, 2.0 * std::asin(eps / 2.0));
}

// Li_{k-1,1}(a1, x) - Li_{k-1,1}(b1, x) with both arguments sharing the
// trailing x: level-1 weight (a1 x)^d - (b1 x)^d, level-2 weight x^d.
inline EvalResult li_pair_difference(int k, cplx a1, cplx b1, cplx x, const EvalConfig& cfg) {
    std::vector<GapLevel> levels(2);
    levels[0] = GapLevel{k - 1, {{cplx(1.0), a1 * x}, {cplx(-1.0), b1 * x}}};
    levels[1] = GapLevel{1, {{cplx(1.0), x}}};
    return evaluate_series(std::move(levels), cfg);
}

}  // namespace detail_limits

inline LimitReport verify_limit(const std::string& id, int k, int t_max,
                                const EvalConfig& cfg = {}) {
    if (id != "limit-3.1" && id != "limit-companion")
        throw UnknownIdentity("verify_limit: expected limit-3.1 or limit-companion, got '" + id +
                              "'");
    if (k < 3) throw std::invalid_argument("verify_limit requires k >= 3");
    LimitReport rep;
    rep.id = id;
    rep.k = k;
    EvalConfig lcfg = cfg;
    lcfg.target_tol = std::max(cfg.target_tol, 1e-5);
    for (int t = 4; t <= t_max; ++t) {
        cplx x = detail_limits::circle_point(t);
        EvalResult r;
        if (id == "limit-3.1") {
            // Li_{k-1,1}(x^{-2}, x) - Li_{k-1,1}(1, x)
            r = detail_limits::li_pair_difference(k, 1.0 / (x * x), 1.0, x, lcfg);
        } else {
            // companion at y = -1: Li_{k-1,1}(xy^{-1}, x) - Li_{k-1,1}(x^{-1}y^{-1}, x)
            r = detail_limits::li_pair_difference(k, -x, -1.0 / x, x, lcfg);
        }
        rep.ts.push_back(t);
        rep.magnitudes.push_back(std::abs(r.value));
        rep.err_ests.push_back(r.err_est);
    }
    rep.decreasing = true;
    for (size_t i = 0; i + 1 < rep.ts.size(); ++i)
        if (rep.ts[i] >= 8 && rep.magnitudes[i + 1] >= rep.magnitudes[i]) rep.decreasing = false;
    rep.final_magnitude = rep.magnitudes.back();
    rep.pass = rep.decreasing && rep.final_magnitude <= 1e-2;
    return rep;
}

// ---------------------------------------------------------------------------
// Derivative checks: closed-form ∂𝕃/∂x against central finite differences,
// plus the chain-rule composite d/dx 𝕃(u(x,y), y) used in the Section 4
// computation.
// ---------------------------------------------------------------------------

inline IdentityReport verify_derivatives(const std::vector<Index>& index_set, int n_points,
                                         const EvalConfig& cfg = {}, std::uint64_t seed = 42,
                                         double tol = 1e-6) {
    auto t0 = std::chrono::steady_clock::now();
    IdentityReport rep;
    rep.id = "diff-formulas";
    rep.seed = seed;
    rep.tolerance = tol;
    rep.config = config_json(cfg);
    ordered_json idxs = ordered_json::array();
    for (const auto& idx : index_set) idxs.push_back(idx.str());
    rep.params["indices"] = idxs;
    rep.params["n_points"] = n_points;

    EvalConfig tight = cfg;
    tight.target_tol = std::min(cfg.target_tol, 1e-13);
    const double h = 1e-5;

    auto pts = sample_admissible("diff-formulas", n_points, seed, cfg);
    double worst = 0.0;
    int conclusive = 0;
    for (const auto& idx : index_set) {
        for (const auto& p : pts) {
            EvalContext cx(tight);
            cplx closed = ll_partial_x(idx, {p.x, p.y}, tight).value;
            cplx fd = (cx.ll(idx, p.x + h, p.y) - cx.ll(idx, p.x - h, p.y)) / (2.0 * h);
            double rel = std::abs(closed - fd) / std::max({std::abs(closed), std::abs(fd), 1e-12});
            SampleOutcome so;
            so.point = {p.x.real(), p.x.imag(), p.y.real(), p.y.imag()};
            so.lhs = closed;
            so.rhs = fd;
            so.residual = rel;
            so.residual_rel = rel;
            so.err_budget = cx.budget();
            so.terms = cx.terms();
            so.status = cx.all_converged() ? "ok" : "inconclusive";
            if (so.status == "ok") {
                worst = std::max(worst, rel);
                ++conclusive;
            }
            rep.samples.push_back(std::move(so));

            // chain-rule composite for depth-2 indices
            if (idx.depth() == 2) {
                EvalContext cc(tight);
                cplx u = (cplx(1.0) - p.x) / (cplx(1.0) - p.x * p.y);
                if (std::abs(u) < 0.95) {
                    cplx du = -(cplx(1.0) - p.y) /
                              ((cplx(1.0) - p.x * p.y) * (cplx(1.0) - p.x * p.y));
                    cplx chain = ll_partial_x(idx, {u, p.y}, tight).value * du;
                    cplx up = (cplx(1.0) - (p.x + h)) / (cplx(1.0) - (p.x + h) * p.y);
                    cplx um = (cplx(1.0) - (p.x - h)) / (cplx(1.0) - (p.x - h) * p.y);
                    cplx fd2 = (cc.ll(idx, up, p.y) - cc.ll(idx, um, p.y)) / (2.0 * h);
                    double rel2 =
                        std::abs(chain - fd2) / std::max({std::abs(chain), std::abs(fd2), 1e-12});
                    SampleOutcome so2;
                    so2.point = {p.x.real(), p.x.imag(), p.y.real(), p.y.imag()};
                    so2.lhs = chain;
                    so2.rhs = fd2;
                    so2.residual = rel2 / 10.0;  // composite tolerance is 10x (1e-5)
                    so2.err_budget = cc.budget();
                    so2.status = cc.all_converged() ? "ok" : "inconclusive";
                    if (so2.status == "ok") {
                        worst = std::max(worst, so2.residual);
                        ++conclusive;
                    }
                    rep.samples.push_back(std::move(so2));
                }
            }
        }
    }
    rep.max_residual = worst;
    bool enough = conclusive * 5 >= static_cast<int>(rep.samples.size()) * 4;
    rep.pass = enough && worst <= tol;
    if (!enough) rep.note = "fewer than 80% of samples conclusive";
    rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
}

// ---------------------------------------------------------------------------
// verify_identity: the main entry point
// ---------------------------------------------------------------------------

struct VerifyOptions {
    int k = 0;  // 0 = use the identity's default grid
    int r = 0;
    int i = 0, j = 0;  // eq2.3
    int p = 0, q = 0;  // stuffle
    int n_samples = 10;
    std::uint64_t seed = 42;
    double tol = 1e-8;
    int degree = 16;   // exact mode truncation degree
    std::string mode;  // "", "exact", "numeric", "limit", "derivative"
    int t_max = 14;    // limit mode
};

namespace detail_verify {

inline int thread_cap() {
    if (const char* env = std::getenv("MPLV_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    int threads = std::min(thread_cap(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail_verify

inline IdentityReport verify_identity(const std::string& id, const VerifyOptions& opt = {},
                                      const EvalConfig& cfg_in = {}) {
    auto t0 = std::chrono::steady_clock::now();
    const IdentitySpec& spec = find_identity(id);
    VerifyMode mode = spec.mode;
    if (opt.mode == "exact") mode = VerifyMode::Exact;
    else if (opt.mode == "numeric") mode = VerifyMode::Numeric;
    else if (opt.mode == "limit") mode = VerifyMode::Limit;
    else if (opt.mode == "derivative") mode = VerifyMode::Derivative;
    else if (!opt.mode.empty()) throw std::invalid_argument("unknown mode '" + opt.mode + "'");

    EvalConfig cfg = cfg_in;
    // constituent evaluations aim an order below the identity tolerance
    cfg.target_tol = std::max(opt.tol / 10.0, 1e-13);

    IdentityReport rep;
    rep.id = id;
    rep.seed = opt.seed;
    rep.tolerance = opt.tol;
    rep.informational = spec.informational;
    rep.config = config_json(cfg);

    // ---- exact mode --------------------------------------------------------
    if (mode == VerifyMode::Exact) {
        if (!spec.exact_available)
            throw UnknownIdentity("identity '" + id + "' has no exact-mode check");
        std::vector<ExactParams> grid;
        if (id == "eq2.3") {
            ExactParams p;
            p.i = opt.i > 0 ? opt.i : 2;
            p.j = opt.j > 0 ? opt.j : 1;
            grid.push_back(p);
            rep.params["i"] = p.i;
            rep.params["j"] = p.j;
        } else if (id == "stuffle") {
            ExactParams p;
            p.p = opt.p > 0 ? opt.p : 1;
            p.q = opt.q > 0 ? opt.q : 2;
            grid.push_back(p);
            rep.params["p"] = p.p;
            rep.params["q"] = p.q;
        } else {
            for (int k = (opt.k > 0 ? opt.k : 2); k <= (opt.k > 0 ? opt.k : 4); ++k) {
                ExactParams p;
                p.k = k;
                grid.push_back(p);
            }
        }
        rep.params["degree"] = opt.degree;
        double worst = 0.0;
        for (const auto& prm : grid) {
            ExactReport ex = exact_check_identity(id, prm, opt.degree);
            SampleOutcome so;
            so.point = {static_cast<double>(prm.k ? prm.k : prm.p ? prm.p : prm.i),
                        static_cast<double>(prm.q ? prm.q : prm.j)};
            so.lhs = cplx(0.0);
            so.rhs = cplx(0.0);
            so.residual = ex.zero ? 0.0 : static_cast<double>(ex.max_abs_diff);
            so.err_budget = 0.0;
            so.status = "ok";
            worst = std::max(worst, so.residual);
            rep.samples.push_back(std::move(so));
        }
        rep.max_residual = worst;
        rep.pass = worst == 0.0;
        rep.note = "exact coefficient comparison to degree " + std::to_string(opt.degree);
        rep.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    // ---- limit mode ---------------------------------------------------------
    if (mode == VerifyMode::Limit) {
        int k = opt.k > 0 ? opt.k : 4;
        rep.params["k"] = k;
        rep.params["t_max"] = opt.t_max;
        LimitReport main = verify_limit("limit-3.1", k, opt.t_max, cfg);
        LimitReport comp = verify_limit("limit-companion", k, opt.t_max, cfg);
        for (const LimitReport* lr : {&main, &comp}) {
            for (size_t i = 0; i < lr->ts.size(); ++i) {
                SampleOutcome so;
                so.point = {static_cast<double>(lr->ts[i])};
                so.lhs = lr->magnitudes[i];
                so.rhs = 0.0;
                so.residual = lr->magnitudes[i];
                so.err_budget = lr->err_ests[i];
                so.status = "ok";
                rep.samples.push_back(std::move(so));
            }
        }
        rep.max_residual = std::max(main.final_magnitude, comp.final_magnitude);
        rep.pass = main.pass && comp.pass;
        rep.note = "trend check: magnitudes decreasing for t >= 8, final <= 1e-2";
        rep.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    // ---- derivative mode ----------------------------------------------------
    if (mode == VerifyMode::Derivative) {
        std::vector<Index> set = {Index{1}, Index{2}, Index{3}, Index{1, 1},
                                  Index{1, 2}, Index{2, 1}, Index{1, 1, 2}, Index{2, 1, 1, 1}};
        IdentityReport drep = verify_derivatives(set, opt.n_samples, cfg, opt.seed,
                                                 std::min(opt.tol, 1e-6));
        drep.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return drep;
    }

    // ---- numeric mode ---------------------------------------------------------
    using identities::ones_then;
    struct Task {  // one evaluation unit: parameter value and/or sample point
        int k = 0, r = 0;
        SamplePoint pt;
        bool has_point = false;
    };
    std::vector<Task> tasks;
    auto add_value_grid = [&](int lo, int hi) {
        int klo = opt.k > 0 ? opt.k : lo, khi = opt.k > 0 ? opt.k : hi;
        for (int k = klo; k <= khi; ++k) tasks.push_back({k, 0, {}, false});
        rep.params["k"] = opt.k > 0 ? ordered_json(opt.k)
                                    : ordered_json::array({klo, khi});
    };
    auto add_sampled = [&](int default_k, int default_r) {
        int k = opt.k > 0 ? opt.k : default_k;
        int r = opt.r > 0 ? opt.r : default_r;
        auto pts = sample_admissible(id, opt.n_samples, opt.seed, cfg);
        for (const auto& p : pts) tasks.push_back({k, r, p, true});
        if (default_k > 0) rep.params["k"] = k;
        if (default_r > 0) rep.params["r"] = r;
        rep.params["n_samples"] = opt.n_samples;
    };

    if (id == "wsf-oz" || id == "wsf-kt") add_value_grid(3, 8);
    else if (id == "prop3.1-f3" || id == "prop3.1-f4" || id == "nishi" || id == "lsum")
        add_value_grid(2, 6);
    else if (id == "thm1.2") add_sampled(3, 0);
    else if (id == "cor1.2") add_sampled(3, 0);
    else if (id == "wsf-3") add_sampled(3, 0);
    else if (id == "thm1.4") add_sampled(3, 2);
    else if (id == "thm1.4-k2") add_sampled(0, 2);
    else if (id == "five-term" || id == "example-2-2" || id == "reflection")
        add_sampled(0, 0);
    else if (id == "lemma2.1" || id == "eq2.3" || id == "stuffle" || id == "eq2.5" ||
             id == "eq2.6") {
        // exact identities verified numerically: sample like thm1.2
        int k = opt.k > 0 ? opt.k : 3;
        auto pts = sample_admissible("thm1.2", opt.n_samples, opt.seed, cfg);
        for (const auto& p : pts) tasks.push_back({k, 0, p, true});
        rep.params["k"] = k;
        rep.params["n_samples"] = opt.n_samples;
    } else
        throw UnknownIdentity("no numeric runner for identity '" + id + "'");

    std::vector<SampleOutcome> outcomes(tasks.size());
    auto run_task = [&](int ti) {
        const Task& task = tasks[static_cast<size_t>(ti)];
        EvalContext cx(cfg);
        cplx lhs = 0.0, rhs = 0.0;
        double aux = -1.0;
        cplx x = task.pt.x, y = task.pt.y;
        try {
            using namespace identities;
            if (id == "thm1.2") std::tie(lhs, rhs) = thm12(cx, task.k, x, y);
            else if (id == "cor1.2") std::tie(lhs, rhs) = cor12(cx, task.k, x);
            else if (id == "wsf-oz") std::tie(lhs, rhs) = wsf_oz(cx, task.k);
            else if (id == "wsf-kt") std::tie(lhs, rhs) = wsf_kt(cx, task.k);
            else if (id == "wsf-3") std::tie(lhs, rhs) = wsf3(cx, task.k, x, y);
            else if (id == "prop3.1-f3") std::tie(lhs, rhs) = prop31_f3(cx, task.k);
            else if (id == "prop3.1-f4") std::tie(lhs, rhs) = prop31_f4(cx, task.k);
            else if (id == "nishi") std::tie(lhs, rhs) = nishi(cx, task.k);
            else if (id == "lsum") std::tie(lhs, rhs) = lsum(cx, task.k);
            else if (id == "thm1.4") std::tie(lhs, rhs) = thm14(cx, task.r, task.k, x, y);
            else if (id == "thm1.4-k2") std::tie(lhs, rhs) = thm14_k2(cx, task.r, x, y);
            else if (id == "reflection") std::tie(lhs, rhs) = reflection(cx, x.real());
            else if (id == "five-term") {
                std::tie(lhs, rhs) = five_term_ll(cx, x.real(), y.real());
                auto [l2, r2] = five_term_log(cx, x.real(), y.real());
                aux = std::abs(l2 - r2);
            } else if (id == "example-2-2")
                std::tie(lhs, rhs) = example22(cx, x.real(), y.real());
            else if (id == "lemma2.1" || id == "eq2.3" || id == "stuffle" || id == "eq2.5" ||
                     id == "eq2.6") {
                int k = task.k;
                if (id == "lemma2.1") {
                    cplx l = 0.0;
                    for (int j = 1; j <= k - 1; ++j)
                        l += cx.li(Index{k - j}, {x}) * cx.li(Index{j}, {y});
                    cplx r = 0.0;
                    for (int mu = 1; mu <= k - 1; ++mu)
                        r += std::ldexp(1.0, mu - 1) * (cx.li(Index{k - mu, mu}, {y / x, x}) +
                                                        cx.li(Index{k - mu, mu}, {x / y, y}));
                    lhs = l, rhs = r;
                } else if (id == "eq2.3") {
                    int i = opt.i > 0 ? opt.i : 2, j = opt.j > 0 ? opt.j : 1, kk = i + j;
                    cplx l = cx.li(Index{i}, {x}) * cx.li(Index{j}, {y});
                    cplx r = 0.0;
                    auto binom = [](int top, int bot) {
                        double v = 1.0;
                        if (bot < 0 || bot > top) return 0.0;
                        for (int t = 0; t < bot; ++t) v = v * (top - t) / (t + 1);
                        return v;
                    };
                    for (int mu = 1; mu <= kk - 1; ++mu) {
                        r += binom(mu - 1, i - 1) * cx.li(Index{kk - mu, mu}, {y / x, x});
                        r += binom(mu - 1, j - 1) * cx.li(Index{kk - mu, mu}, {x / y, y});
                    }
                    lhs = l, rhs = r;
                } else if (id == "stuffle") {
                    int p = opt.p > 0 ? opt.p : 1, q = opt.q > 0 ? opt.q : 2;
                    lhs = cx.li(Index{p}, {x}) * cx.li(Index{q}, {y});
                    rhs = cx.li(Index{p, q}, {x, y}) + cx.li(Index{q, p}, {y, x}) +
                          cx.li(Index{p + q}, {x * y});
                } else if (id == "eq2.5") {
                    lhs = cx.li(Index{k - 1}, {x * y}) * cx.li(Index{1}, {y});
                    cplx r = cx.li(Index{1, k - 1}, {1.0 / x, x * y});
                    for (int j = 1; j <= k - 1; ++j) r += cx.li(Index{k - j, j}, {x, y});
                    rhs = r;
                } else {  // eq2.6
                    lhs = cx.li(Index{k - 1}, {x * y}) * cx.li(Index{1}, {x});
                    cplx r = cx.li(Index{1, k - 1}, {1.0 / y, x * y});
                    for (int j = 1; j <= k - 1; ++j) r += cx.li(Index{j, k - j}, {y, x});
                    rhs = r;
                }
            }
        } catch (const std::exception& e) {
            SampleOutcome bad;
            bad.point = task.has_point ? std::vector<double>{x.real(), x.imag(), y.real(), y.imag()}
                                       : std::vector<double>{static_cast<double>(task.k)};
            bad.status = std::string("inconclusive: ") + e.what();
            outcomes[static_cast<size_t>(ti)] = std::move(bad);
            return;
        }
        SampleOutcome so;
        so.point = task.has_point ? std::vector<double>{x.real(), x.imag(), y.real(), y.imag()}
                                  : std::vector<double>{static_cast<double>(task.k)};
        so.lhs = lhs;
        so.rhs = rhs;
        so.residual = std::abs(lhs - rhs);
        so.residual_rel = so.residual / std::max({std::abs(lhs), std::abs(rhs), 1.0});
        so.residual_aux = aux;
        so.err_budget = cx.budget();
        so.terms = cx.terms();
        // conclusive when every constituent converged, or when the combined
        // honest error budget still fits inside the identity tolerance
        so.status = (cx.all_converged() || cx.budget() <= opt.tol) ? "ok" : "inconclusive";
        outcomes[static_cast<size_t>(ti)] = std::move(so);
    };
    detail_verify::parallel_for(static_cast<int>(tasks.size()), run_task);

    rep.samples = std::move(outcomes);
    double worst = 0.0;
    int conclusive = 0;
    bool all_ok = true;
    for (const auto& s : rep.samples) {
        if (s.status != "ok") continue;
        ++conclusive;
        worst = std::max(worst, s.residual);
        double allowed = opt.tol + s.err_budget;
        if (s.residual > allowed) all_ok = false;
        if (s.residual_aux >= 0.0 && s.residual_aux > 100.0 * opt.tol + s.err_budget)
            all_ok = false;
    }
    rep.max_residual = worst;
    bool enough = conclusive * 5 >= static_cast<int>(rep.samples.size()) * 4 &&
                  !rep.samples.empty();
    rep.pass = enough && all_ok;
    if (!enough) rep.note = "fewer than 80% of samples conclusive";
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace mplv
