#pragma once

// Front-line evaluators: Li, 𝕃, zeta, T, and the closed-form x-derivative
// of 𝕃.  All reduce to gap-coordinate series handled by engine.hpp.

#include <cmath>

#include "engine.hpp"
#include "types.hpp"

namespace mplv {

namespace detail {

// Snap near-unit moduli onto the circle so that intended boundary points
// classify exactly (|w| = 1 + 3e-16 after a product is still "on" the circle).
inline cplx unitize(cplx w) {
    double r = std::abs(w);
    if (r > 0.0 && std::abs(r - 1.0) <= 1e-12) return w / r;
    return w;
}

}  // namespace detail

// Gap levels of Li_{k1..kr}(z1..zr): one geometric component w_j per level.
inline std::vector<GapLevel> li_gap_levels(const Index& index, const ArgVector& args) {
    if (index.depth() != args.depth())
        throw InadmissibleArgument("index depth " + std::to_string(index.depth()) +
                                   " != argument count " + std::to_string(args.depth()));
    auto w = args.gap_weights();
    std::vector<GapLevel> levels(w.size());
    for (size_t j = 0; j < w.size(); ++j) {
        cplx wj = detail::unitize(w[j]);
        if (std::abs(wj) > 1.0 + 1e-12)
            throw InadmissibleArgument("gap weight w_" + std::to_string(j + 1) +
                                       " has modulus > 1");
        levels[j] = GapLevel{index[static_cast<int>(j)], {{cplx(1.0), wj}}};
    }
    return levels;
}

inline EvalResult li_eval(const Index& index, const ArgVector& args, const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    return evaluate_series(li_gap_levels(index, args), cfg);
}

// Gap levels of 𝕃_{k1..kr}(x,y): per-gap weight g(d) = x^d - (xy)^d.
inline std::vector<GapLevel> ll_gap_levels(const Index& index, const TwoVarPoint& pt) {
    if (std::abs(pt.x) > 1.0 + 1e-12 || std::abs(pt.y) > 1.0 + 1e-12)
        throw InadmissibleArgument("|x| and |y| must be <= 1");
    cplx x = detail::unitize(pt.x);
    cplx xy = detail::unitize(x * detail::unitize(pt.y));
    std::vector<GapLevel> levels(static_cast<size_t>(index.depth()));
    for (int j = 0; j < index.depth(); ++j)
        levels[static_cast<size_t>(j)] = GapLevel{index[j], {{cplx(1.0), x}, {cplx(-1.0), xy}}};
    return levels;
}

inline EvalResult ll_eval(const Index& index, const TwoVarPoint& pt, const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    return evaluate_series(ll_gap_levels(index, pt), cfg);
}

inline EvalResult zeta_eval(const Index& index, const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    if (index.last() < 2) throw DivergentIndex("zeta" + index.str() + ": last part must be >= 2");
    return li_eval(index, ArgVector::ones(index.depth()), cfg);
}

// Congruence-restricted level-2 series, m-parametrized:
//   A(k1..kr; x) = 2^r sum over 0<m_1<...<m_r, m_i ≡ i (mod 2), of x^{m_r}/prod m_i^{k_i}.
// Kept deliberately independent of the gap DP: it advances candidate m_r and
// maintains per-level restricted partial sums directly.  Serves as the direct
// route of t_value_eval (x = 1) and the y = -1 specialization oracle.
inline EvalResult level2_polylog_direct(const Index& index, cplx x, const EvalConfig& cfg = {}) {
    const int r = index.depth();
    if (r == 0) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    if (std::abs(x) > 1.0 + 1e-12) throw InadmissibleArgument("|x| must be <= 1");
    if (index.last() == 1 && std::abs(x - cplx(1.0)) <= 1e-12)
        throw InadmissibleArgument("trailing part 1 at x = 1: divergent");

    // inner[i-1] = S_i(m) = sum over chains m_1 < ... < m_i <= m with the
    // required parities of 1/prod m_t^{k_t}.  Level i only updates when
    // m ≡ i (mod 2); level i consumes S_{i-1}, whose parity is opposite,
    // so there is no intra-step ordering hazard.
    std::vector<cplx> inner(static_cast<size_t>(r), cplx(0.0));
    long m = 0;
    cplx xp = 1.0;  // x^m
    const bool unit = std::abs(std::abs(x) - 1.0) <= 1e-12;
    const double norm = std::ldexp(1.0, r);  // 2^r
    auto level_contribution = [&](int i) {
        double d = 1.0;
        for (int e = 0; e < index[i - 1]; ++e) d *= static_cast<double>(m);
        return (i == 1 ? cplx(1.0) : inner[static_cast<size_t>(i - 2)]) / d;
    };
    auto term = [&]() -> cplx {
        // advance m until it has the parity of level r, updating inner levels
        for (;;) {
            ++m;
            xp *= x;
            bool emit = (m - r) % 2 == 0;
            cplx out = emit ? norm * xp * level_contribution(r) : cplx(0.0);
            for (int i = r - 1; i >= 1; --i)
                if ((m - i) % 2 == 0) inner[static_cast<size_t>(i - 1)] += level_contribution(i);
            if (emit) return out;
        }
    };

    // Outer terms are indexed by admissible m_r; smooth ladder for |x| on
    // the circle (x^m with x a root of unity folds into the period), plain
    // interior summation otherwise.
    if (!unit) {
        double rho = std::abs(x);
        return sum_interior(term, rho, r, cfg);
    }
    int q = root_of_unity_order(x);
    // Over the reindexed stream, an order-q oscillation in m has period q
    // (consecutive admissible m differ by 2; x^2 has order q/gcd(q,2)).
    int stream_q = q == 0 ? 1 : std::max(1, q / std::gcd(q, 2));
    if (q == 0)
        return sum_ladder(term, 1, std::max(1, index.last() - 1), std::min(r - 1, 3), cfg, true);
    return sum_ladder(term, stream_q, std::max(1, index.last() - 1), std::min(r - 1, 3), cfg, false);
}

// T(k1..kr): evaluated two independent ways and cross-checked.
//  (a) direct congruence-restricted sum (m-parametrization above, x = 1);
//  (b) 𝕃 at (x, y) = (1, -1) in gap coordinates.
// Returns (b); err_est includes the route disagreement.
inline EvalResult t_value_eval(const Index& index, const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    if (index.last() < 2) throw DivergentIndex("T" + index.str() + ": last part must be >= 2");
    EvalResult direct = level2_polylog_direct(index, cplx(1.0), cfg);
    EvalResult gap = ll_eval(index, TwoVarPoint{cplx(1.0), cplx(-1.0)}, cfg);
    double disagreement = std::abs(direct.value - gap.value);
    if (disagreement > 10.0 * cfg.target_tol)
        throw CrossCheckFailure("T" + index.str() + ": direct and gap routes differ by " +
                                std::to_string(disagreement));
    EvalResult res = gap;
    res.err_est = std::max(gap.err_est, disagreement);
    res.terms_used = gap.terms_used + direct.terms_used;
    res.converged = gap.converged && direct.converged && res.err_est <= cfg.target_tol;
    return res;
}

// ∂𝕃/∂x by the closed forms:
//   (1/x) 𝕃_{k1..kr-1}(x,y)                    if k_r > 1
//   (1-y)/((1-x)(1-xy)) 𝕃_{k1..k_{r-1}}(x,y)   if k_r = 1
// x = 0 with k_r > 1 is a removable singularity; the series limit is (1-y)
// at depth 1 and 0 at depth >= 2.
inline EvalResult ll_partial_x(const Index& index, const TwoVarPoint& pt,
                               const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(0.0), 0.0, 0, AccelMode::Interior, true};
    if (std::abs(pt.x) >= 1.0)
        throw InadmissibleArgument("ll_partial_x requires |x| < 1");
    if (index.last() > 1) {
        if (std::abs(pt.x) == 0.0) {
            cplx limit = index.depth() == 1 ? (cplx(1.0) - pt.y) : cplx(0.0);
            return EvalResult{limit, 0.0, 0, AccelMode::Interior, true};
        }
        EvalResult inner = ll_eval(index.dec_last(), pt, cfg);
        inner.value /= pt.x;
        inner.err_est /= std::abs(pt.x);
        return inner;
    }
    EvalResult inner = ll_eval(index.drop_last(), pt, cfg);
    cplx factor = (cplx(1.0) - pt.y) / ((cplx(1.0) - pt.x) * (cplx(1.0) - pt.x * pt.y));
    inner.value *= factor;
    inner.err_est *= std::abs(factor);
    return inner;
}

}  // namespace mplv
