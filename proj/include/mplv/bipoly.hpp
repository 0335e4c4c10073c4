#pragma once

// Truncated bivariate power series over arbitrary-precision rationals.
// This is the coefficient-exact verification backend: no floating point
// anywhere in this module.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "types.hpp"

namespace mplv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt bigint_pow(BigInt base, int exp) {
    BigInt r = 1;
    for (int e = 0; e < exp; ++e) r *= base;
    return r;
}

class BivariatePoly {
  public:
    using Key = std::pair<int, int>;  // exponent pair (a, b)

    explicit BivariatePoly(int max_total_degree) : n_(max_total_degree) {}

    static BivariatePoly constant(int max_total_degree, const Rational& c) {
        BivariatePoly p(max_total_degree);
        p.add_term(0, 0, c);
        return p;
    }

    int max_total_degree() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }
    size_t term_count() const { return coeffs_.size(); }
    const std::map<Key, Rational>& coeffs() const { return coeffs_; }

    // Adds c * x^a y^b, silently truncating beyond the degree bound.
    void add_term(int a, int b, const Rational& c) {
        if (a + b > n_ || c == 0) return;
        auto it = coeffs_.find({a, b});
        if (it == coeffs_.end()) {
            coeffs_.emplace(Key{a, b}, c);
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    Rational at(int a, int b) const {
        auto it = coeffs_.find({a, b});
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    BivariatePoly& operator+=(const BivariatePoly& o) {
        check_degree(o);
        for (const auto& [k, c] : o.coeffs_) add_term(k.first, k.second, c);
        return *this;
    }
    BivariatePoly& operator-=(const BivariatePoly& o) {
        check_degree(o);
        for (const auto& [k, c] : o.coeffs_) add_term(k.first, k.second, -c);
        return *this;
    }
    BivariatePoly& operator*=(const Rational& s) {
        if (s == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [k, c] : coeffs_) c *= s;
        return *this;
    }

    friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
    friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a -= b; }
    friend BivariatePoly operator*(BivariatePoly a, const Rational& s) { return a *= s; }

    friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
        a.check_degree(b);
        BivariatePoly out(a.n_);
        for (const auto& [ka, ca] : a.coeffs_) {
            if (ka.first + ka.second > a.n_) continue;
            for (const auto& [kb, cb] : b.coeffs_) {
                int x = ka.first + kb.first, y = ka.second + kb.second;
                if (x + y > a.n_) continue;
                out.add_term(x, y, ca * cb);
            }
        }
        return out;
    }

    bool operator==(const BivariatePoly& o) const { return n_ == o.n_ && coeffs_ == o.coeffs_; }

    // Largest |coefficient| with its exponent pair (for exact reports).
    std::pair<Rational, Key> max_abs_coeff() const {
        Rational best(0);
        Key where{0, 0};
        for (const auto& [k, c] : coeffs_) {
            Rational a = c < 0 ? Rational(-c) : c;
            if (a > best) {
                best = a;
                where = k;
            }
        }
        return {best, where};
    }

    // Canonical text form: one "a b numerator/denominator" line per term,
    // sorted lexicographically by (a, b).
    std::string serialize() const {
        std::ostringstream os;
        for (const auto& [k, c] : coeffs_)
            os << k.first << " " << k.second << " " << numerator(c) << "/" << denominator(c)
               << "\n";
        return os.str();
    }

    // Numeric evaluation (used for cross-checks against the numeric engine).
    cplx eval(cplx x, cplx y) const {
        cplx total = 0.0;
        for (const auto& [k, c] : coeffs_) {
            cplx t = static_cast<double>(c);
            for (int e = 0; e < k.first; ++e) t *= x;
            for (int e = 0; e < k.second; ++e) t *= y;
            total += t;
        }
        return total;
    }

  private:
    void check_degree(const BivariatePoly& o) const {
        if (n_ != o.n_)
            throw DegreeMismatch("degree bound mismatch: " + std::to_string(n_) + " vs " +
                                 std::to_string(o.n_));
    }

    int n_;
    std::map<Key, Rational> coeffs_;
};

inline BivariatePoly poly_add(const BivariatePoly& p, const BivariatePoly& q) { return p + q; }
inline BivariatePoly poly_sub(const BivariatePoly& p, const BivariatePoly& q) { return p - q; }
inline BivariatePoly poly_mul(const BivariatePoly& p, const BivariatePoly& q) { return p * q; }

}  // namespace mplv
