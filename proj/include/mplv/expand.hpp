#pragma once

// Exact power-series expansion of multiple polylogarithms with monomial
// arguments x^a y^b, and the coefficient-exact identity checks built on it.

#include <optional>
#include <string>
#include <vector>

#include "bipoly.hpp"
#include "types.hpp"

namespace mplv {

// Formal argument x^a y^b; exponents may be negative (e.g. x^{-1} y).
struct MonomialArg {
    int a = 0;
    int b = 0;
};

// Li_{k1..kr}(x^{a_1}y^{b_1}, ..., x^{a_r}y^{b_r}) truncated at total degree N.
//
// In gap coordinates d_j = m_j - m_{j-1} the term exponents are
//   x: sum_j d_j A_j,  y: sum_j d_j B_j,   A_j = sum_{i>=j} a_i,  B_j likewise,
// and the total degree is sum_j d_j (A_j + B_j).  Convergence of the
// enumeration requires every per-gap degree A_j + B_j >= 1.
inline BivariatePoly expand_li(const Index& index, const std::vector<MonomialArg>& args, int N) {
    const int r = index.depth();
    if (static_cast<int>(args.size()) != r)
        throw NonconvergentExpansion("expand_li: argument count != index depth");
    if (r == 0) return BivariatePoly::constant(N, 1);

    std::vector<int> A(static_cast<size_t>(r)), B(static_cast<size_t>(r)), delta(static_cast<size_t>(r));
    int sa = 0, sb = 0;
    for (int j = r; j-- > 0;) {
        sa += args[static_cast<size_t>(j)].a;
        sb += args[static_cast<size_t>(j)].b;
        A[static_cast<size_t>(j)] = sa;
        B[static_cast<size_t>(j)] = sb;
        delta[static_cast<size_t>(j)] = sa + sb;
        if (delta[static_cast<size_t>(j)] < 1)
            throw NonconvergentExpansion("expand_li: per-gap degree < 1 at position " +
                                         std::to_string(j + 1));
    }
    // minimal degree still to come if levels j..r-1 each take d = 1
    std::vector<int> min_rest(static_cast<size_t>(r) + 1, 0);
    for (int j = r; j-- > 0;) min_rest[static_cast<size_t>(j)] = min_rest[static_cast<size_t>(j) + 1] + delta[static_cast<size_t>(j)];

    BivariatePoly out(N);
    // iterative enumeration of (d_1,...,d_r), d_j >= 1, sum d_j delta_j <= N
    std::vector<int> d(static_cast<size_t>(r), 1);
    // running data per level: m (prefix sum), deg, xa, xb, denom
    std::vector<long> m(static_cast<size_t>(r) + 1, 0);
    std::vector<int> deg(static_cast<size_t>(r) + 1, 0), xa(static_cast<size_t>(r) + 1, 0), xb(static_cast<size_t>(r) + 1, 0);
    std::vector<BigInt> denom(static_cast<size_t>(r) + 1, BigInt(1));

    int j = 0;
    while (j >= 0) {
        size_t sj = static_cast<size_t>(j);
        int dj = d[sj];
        int new_deg = deg[sj] + dj * delta[sj];
        if (new_deg + min_rest[sj + 1] > N) {
            // exhausted this level: backtrack
            d[sj] = 1;
            --j;
            if (j >= 0) ++d[static_cast<size_t>(j)];
            continue;
        }
        m[sj + 1] = m[sj] + dj;
        deg[sj + 1] = new_deg;
        xa[sj + 1] = xa[sj] + dj * A[sj];
        xb[sj + 1] = xb[sj] + dj * B[sj];
        denom[sj + 1] = denom[sj] * bigint_pow(BigInt(m[sj + 1]), index[j]);
        if (j + 1 == r) {
            if (xa[sj + 1] < 0 || xb[sj + 1] < 0)
                throw NegativeExponent("expand_li: term with negative exponent at degree " +
                                       std::to_string(new_deg));
            out.add_term(xa[sj + 1], xb[sj + 1], Rational(BigInt(1), denom[sj + 1]));
            ++d[sj];
        } else {
            ++j;
        }
    }
    return out;
}

// Exact check of the partial fraction decomposition
//   1/(m^i n^j) = sum_{mu=1}^{i+j-1} [ C(mu-1, i-1)/(n^{i+j-mu}(m+n)^mu)
//                                    + C(mu-1, j-1)/(m^{i+j-mu}(m+n)^mu) ].
inline bool exact_check_partial_fraction(int i, int j, long m, long n) {
    if (i < 1 || j < 1 || m < 1 || n < 1)
        throw std::invalid_argument("exact_check_partial_fraction: all arguments must be >= 1");
    auto binom = [](int top, int bot) -> BigInt {
        if (bot < 0 || bot > top) return 0;
        BigInt r = 1;
        for (int t = 0; t < bot; ++t) {
            r *= (top - t);
            r /= (t + 1);
        }
        return r;
    };
    Rational lhs(BigInt(1), bigint_pow(BigInt(m), i) * bigint_pow(BigInt(n), j));
    Rational rhs(0);
    for (int mu = 1; mu <= i + j - 1; ++mu) {
        BigInt mn = bigint_pow(BigInt(m + n), mu);
        rhs += Rational(binom(mu - 1, i - 1), bigint_pow(BigInt(n), i + j - mu) * mn);
        rhs += Rational(binom(mu - 1, j - 1), bigint_pow(BigInt(m), i + j - mu) * mn);
    }
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Coefficient-exact identity checks (both sides expand with purely rational
// coefficients; identities with transcendental constants are verified
// numerically in the registry instead).
// ---------------------------------------------------------------------------

struct ExactParams {
    int k = 0;
    int p = 0, q = 0;  // stuffle
    int i = 0, j = 0;  // eq2.3
};

struct ExactReport {
    std::string id;
    int degree = 0;
    bool zero = false;
    Rational max_abs_diff{0};
    int worst_a = 0, worst_b = 0;
    BivariatePoly difference{0};
};

namespace detail {

constexpr MonomialArg kX{1, 0}, kY{0, 1}, kXY{1, 1};
constexpr MonomialArg kXinv{-1, 0}, kYinv{0, -1};
constexpr MonomialArg kXinvY{-1, 1}, kXYinv{1, -1};

inline BivariatePoly li2(int k1, int k2, MonomialArg z1, MonomialArg z2, int N) {
    return expand_li(Index{k1, k2}, {z1, z2}, N);
}
inline BivariatePoly li1(int k, MonomialArg z, int N) { return expand_li(Index{k}, {z}, N); }

inline BigInt binom_big(int top, int bot) {
    if (bot < 0 || bot > top) return 0;
    BigInt r = 1;
    for (int t = 0; t < bot; ++t) {
        r *= (top - t);
        r /= (t + 1);
    }
    return r;
}

// LHS - RHS of each identity as a polynomial.
inline BivariatePoly exact_difference(const std::string& id, const ExactParams& prm, int N) {
    using namespace detail;
    if (id == "thm1.2") {
        const int k = prm.k;
        if (k < 2) throw std::invalid_argument("thm1.2 requires k >= 2");
        BivariatePoly lhs(N);
        for (int j = 1; j <= k - 1; ++j) {
            Rational w(bigint_pow(BigInt(2), j - 1));
            lhs += (li2(k - j, j, kXinvY, kX, N) + li2(k - j, j, kXYinv, kY, N)) * w;
        }
        lhs += li2(1, k - 1, kXinv, kXY, N) + li2(1, k - 1, kYinv, kXY, N);
        BivariatePoly rhs = (li1(1, kX, N) + li1(1, kY, N)) * li1(k - 1, kXY, N) +
                            li1(k, kXY, N) * Rational(k - 1);
        return lhs - rhs;
    }
    if (id == "lemma2.1") {
        const int k = prm.k;
        if (k < 2) throw std::invalid_argument("lemma2.1 requires k >= 2");
        BivariatePoly lhs(N);
        for (int j = 1; j <= k - 1; ++j) lhs += li1(k - j, kX, N) * li1(j, kY, N);
        BivariatePoly rhs(N);
        for (int mu = 1; mu <= k - 1; ++mu) {
            Rational w(bigint_pow(BigInt(2), mu - 1));
            rhs += (li2(k - mu, mu, kXinvY, kX, N) + li2(k - mu, mu, kXYinv, kY, N)) * w;
        }
        return lhs - rhs;
    }
    if (id == "eq2.3") {
        // Li_i(x) Li_j(y) expanded by partial fractions, k = i + j
        const int i = prm.i, j = prm.j;
        if (i < 1 || j < 1) throw std::invalid_argument("eq2.3 requires i, j >= 1");
        const int k = i + j;
        BivariatePoly lhs = li1(i, kX, N) * li1(j, kY, N);
        BivariatePoly rhs(N);
        for (int mu = 1; mu <= k - 1; ++mu) {
            rhs += li2(k - mu, mu, kXinvY, kX, N) * Rational(binom_big(mu - 1, i - 1));
            rhs += li2(k - mu, mu, kXYinv, kY, N) * Rational(binom_big(mu - 1, j - 1));
        }
        return lhs - rhs;
    }
    if (id == "stuffle") {
        const int p = prm.p, q = prm.q;
        if (p < 1 || q < 1) throw std::invalid_argument("stuffle requires p, q >= 1");
        BivariatePoly lhs = li1(p, kX, N) * li1(q, kY, N);
        BivariatePoly rhs = li2(p, q, kX, kY, N) + li2(q, p, kY, kX, N) + li1(p + q, kXY, N);
        return lhs - rhs;
    }
    if (id == "eq2.5") {
        const int k = prm.k;
        if (k < 2) throw std::invalid_argument("eq2.5 requires k >= 2");
        BivariatePoly lhs = li1(k - 1, kXY, N) * li1(1, kY, N);
        BivariatePoly rhs = li2(1, k - 1, kXinv, kXY, N);
        for (int j = 1; j <= k - 1; ++j) rhs += li2(k - j, j, kX, kY, N);
        return lhs - rhs;
    }
    if (id == "eq2.6") {
        const int k = prm.k;
        if (k < 2) throw std::invalid_argument("eq2.6 requires k >= 2");
        BivariatePoly lhs = li1(k - 1, kXY, N) * li1(1, kX, N);
        BivariatePoly rhs = li2(1, k - 1, kYinv, kXY, N);
        for (int j = 1; j <= k - 1; ++j) rhs += li2(j, k - j, kY, kX, N);
        return lhs - rhs;
    }
    throw UnknownIdentity("no exact check for identity '" + id + "'");
}

}  // namespace detail

inline ExactReport exact_check_identity(const std::string& id, const ExactParams& prm, int N) {
    ExactReport rep;
    rep.id = id;
    rep.degree = N;
    rep.difference = detail::exact_difference(id, prm, N);
    auto [worst, where] = rep.difference.max_abs_coeff();
    rep.max_abs_diff = worst;
    rep.worst_a = where.first;
    rep.worst_b = where.second;
    rep.zero = rep.difference.is_zero();
    return rep;
}

}  // namespace mplv
