#pragma once

// Summation engine for nested polylogarithm-type series in gap coordinates.
//
// Every series handled here has the shape
//
//     V = sum over n_1,...,n_r >= 1 of  prod_j g_j(n_j) / prod_j (n_1+...+n_j)^{k_j}
//
// where each per-gap weight is a finite sum of geometric components,
// g_j(d) = sum_t c_{j,t} u_{j,t}^d with |u| <= 1.  This covers Li (one
// component per level), the two-variable series 𝕃 (components x and xy),
// character-twisted L-sums (DFT of the character), and congruence
// restrictions (root-of-unity masks).  Because all multipliers have modulus
// <= 1 the recursion never amplifies rounding error.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "types.hpp"

namespace mplv {

struct GeomTerm {
    cplx coeff;
    cplx ratio;
};

struct GapLevel {
    int exponent = 1;             // k_j
    std::vector<GeomTerm> weight; // g_j(d) = sum coeff * ratio^d
};

// ---------------------------------------------------------------------------
// NestedSeries: streaming DP producing P_r(n), the n-th term of the outer sum.
//
//   P_1(n) = g_1(n)/n^{k_1}
//   A_{j,t}(n) = sum_{m<n} u_{j,t}^{n-m} P_{j-1}(m),   A(n+1) = u (A(n) + P_{j-1}(n))
//   P_j(n) = [sum_t c_{j,t} A_{j,t}(n)] / n^{k_j}
// ---------------------------------------------------------------------------

class NestedSeries {
  public:
    explicit NestedSeries(std::vector<GapLevel> levels) : levels_(std::move(levels)) {
        assert(!levels_.empty());
        acc_.resize(levels_.size());
        for (size_t j = 0; j < levels_.size(); ++j)
            acc_[j].assign(levels_[j].weight.size(), j == 0 ? cplx(1.0) : cplx(0.0));
        prev_.assign(levels_.size(), cplx(0.0));
        cur_.assign(levels_.size(), cplx(0.0));
    }

    int depth() const { return static_cast<int>(levels_.size()); }
    long n() const { return n_; }
    const std::vector<GapLevel>& levels() const { return levels_; }

    cplx next() {
        const double nn = static_cast<double>(++n_);
        for (size_t j = 0; j < levels_.size(); ++j) {
            const auto& lv = levels_[j];
            cplx q = 0.0;
            for (size_t t = 0; t < lv.weight.size(); ++t) {
                cplx& a = acc_[j][t];
                if (j == 0)
                    a *= lv.weight[t].ratio;                       // u^n
                else
                    a = lv.weight[t].ratio * (a + prev_[j - 1]);   // uses P_{j-1}(n-1)
                q += lv.weight[t].coeff * a;
            }
            double d = 1.0;
            for (int e = 0; e < lv.exponent; ++e) d *= nn;
            cur_[j] = q / d;
        }
        prev_.swap(cur_);
        return prev_.back();
    }

    // Largest accumulator magnitude; bounded by n^depth for admissible input.
    double state_magnitude() const {
        double m = 0.0;
        for (const auto& level : acc_)
            for (const auto& a : level) m = std::max(m, std::abs(a));
        return m;
    }

  private:
    std::vector<GapLevel> levels_;
    std::vector<std::vector<cplx>> acc_;
    std::vector<cplx> prev_, cur_;
    long n_ = 0;
};

// ---------------------------------------------------------------------------
// Classification of the component ratios
// ---------------------------------------------------------------------------

// Smallest q <= max_order with u^q = 1 (within tol); 0 if none.
inline int root_of_unity_order(cplx u, int max_order = 64, double tol = 1e-9) {
    if (std::abs(std::abs(u) - 1.0) > tol) return 0;
    cplx p = u;
    for (int q = 1; q <= max_order; ++q) {
        if (std::abs(p - cplx(1.0)) <= tol) return q;
        p *= u;
    }
    return 0;
}

struct SeriesTraits {
    double rho_max = 0.0;       // max component |ratio|
    bool all_roots = true;      // every unit-modulus ratio is a root of unity
    int period = 1;             // lcm of unit-ratio orders (valid if all_roots)
    double min_unit_gap = 2.0;  // min |1-u| over unit ratios that are != 1
    bool trailing_divergent = false;  // trailing exponent 1 with a ratio-1 component
};

inline SeriesTraits classify_levels(const std::vector<GapLevel>& levels) {
    SeriesTraits tr;
    const double unit_tol = 1e-9;
    for (size_t j = 0; j < levels.size(); ++j) {
        for (const auto& g : levels[j].weight) {
            if (std::abs(g.coeff) == 0.0) continue;
            double r = std::abs(g.ratio);
            tr.rho_max = std::max(tr.rho_max, r);
            if (std::abs(r - 1.0) <= unit_tol) {
                double gap = std::abs(g.ratio - cplx(1.0));
                if (gap <= unit_tol) {
                    // a genuine ratio-1 component
                    if (j + 1 == levels.size() && levels[j].exponent == 1)
                        tr.trailing_divergent = true;
                } else {
                    tr.min_unit_gap = std::min(tr.min_unit_gap, gap);
                }
                int q = root_of_unity_order(g.ratio);
                if (q == 0)
                    tr.all_roots = false;
                else
                    tr.period = static_cast<int>(std::lcm(static_cast<long>(tr.period), static_cast<long>(q)));
            }
        }
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Interior summation: all |ratio| <= rho < 1.  Terms decay like
// rho^n n^{r-1}, so we stop once the analytic tail bound
// rho^{N+1} (N+1)^{r-1} / (1-rho)^r drops below tol.
// ---------------------------------------------------------------------------

namespace detail {

// Kahan-compensated complex accumulator (branch-free, works per component).
struct Kahan {
    cplx sum{}, c{};
    void add(cplx t) {
        cplx y = t - c;
        cplx u = sum + y;
        c = (u - sum) - y;
        sum = u;
    }
    cplx value() const { return sum; }
};

inline double interior_tail_bound(double rho, long n, int depth) {
    if (rho >= 1.0) return HUGE_VAL;
    if (rho == 0.0) return 0.0;
    double logb = (static_cast<double>(n) + 1.0) * std::log(rho) +
                  (depth - 1) * std::log(static_cast<double>(n) + 1.0) -
                  depth * std::log1p(-rho);
    return logb > 700.0 ? HUGE_VAL : std::exp(logb);
}

}  // namespace detail

template <typename TermFn>
EvalResult sum_interior(TermFn&& term, double rho, int depth, const EvalConfig& cfg) {
    detail::Kahan acc;
    long n = 0;
    double bound = HUGE_VAL;
    while (n < cfg.n_max) {
        acc.add(term());
        ++n;
        if ((n & 0xff) == 0 || n >= cfg.n_max) {
            bound = detail::interior_tail_bound(rho, n, depth);
            if (bound <= 0.5 * cfg.target_tol && n >= 64) break;
        }
    }
    bound = detail::interior_tail_bound(rho, n, depth);
    EvalResult res;
    res.value = acc.value();
    res.err_est = bound + 4e-16 * std::abs(res.value);
    res.terms_used = n;
    res.mode = AccelMode::Interior;
    res.converged = res.err_est <= cfg.target_tol;
    return res;
}

// ---------------------------------------------------------------------------
// Ladder summation for boundary points.
//
// Checkpoints A_t are window means of the partial sums V(n) taken at
// N_t = N0 * 2^t.  A window of q consecutive values cancels the leading
// q-th-root-of-unity oscillation exactly; a window of N_t/2 suppresses a
// generic unit-modulus oscillation by ~2/(W |1-u|).  The remaining error is
// an asymptotic series in 1/N with log^a corrections (a < depth), which a
// Richardson pass with exponent schedule p0,p0,...,p0+1,... removes column
// by column (one repeat per log power).  err_est is the difference of the
// last two extrapolants.
// ---------------------------------------------------------------------------

template <typename TermFn>
EvalResult sum_ladder(TermFn&& term, int q, int p0, int max_log, const EvalConfig& cfg,
                      bool generic_window) {
    p0 = std::max(p0, 1);
    max_log = std::clamp(max_log, 0, 3);
    q = std::max(q, 1);

    long base = std::clamp(cfg.n_initial >> 4, 256L, 1L << 14);
    while (base <= 2 * q) base *= 2;

    detail::Kahan partial;  // V(n)
    long n = 0;
    auto advance_to = [&](long target) {
        while (n < target) {
            partial.add(term());
            ++n;
        }
    };

    std::vector<cplx> checkpoints;
    std::vector<cplx> row;
    EvalResult res;
    res.mode = generic_window ? AccelMode::BoundaryGeneric : AccelMode::RootOfUnity;

    cplx best = 0.0;
    double err = HUGE_VAL, prev_err = HUGE_VAL;
    long Nt = base;
    if (Nt - 1 + (generic_window ? Nt / 2 : q) > cfg.n_max) {
        // n_max too small for even one checkpoint: fall back to the raw sum
        advance_to(cfg.n_max);
        res.value = partial.value();
        res.err_est = HUGE_VAL;
        res.terms_used = n;
        res.converged = false;
        return res;
    }
    while (true) {
        long window = generic_window ? std::max<long>(Nt / 2, 1) : q;
        if (Nt - 1 + window > cfg.n_max) break;
        advance_to(Nt - 1);
        detail::Kahan wsum;
        for (long i = 0; i < window; ++i) {
            partial.add(term());
            ++n;
            wsum.add(partial.value());
        }
        checkpoints.push_back(wsum.value() / static_cast<double>(window));

        // Rebuild the extrapolation row; cheap (few dozen entries).
        row = checkpoints;
        const int steps = static_cast<int>(checkpoints.size()) - 1;
        for (int s = 0; s < steps; ++s) {
            const double f = std::ldexp(1.0, p0 + s / (max_log + 1));  // 2^exponent
            for (size_t i = 0; i + static_cast<size_t>(s) + 1 < checkpoints.size(); ++i)
                row[i] = (f * row[i + 1] - row[i]) / (f - 1.0);
        }
        prev_err = err;
        if (checkpoints.size() >= 2) err = std::abs(row[0] - best);
        best = row[0];
        res.terms_used = n;
        if (checkpoints.size() >= 4 && err <= cfg.target_tol && prev_err <= 4.0 * cfg.target_tol)
            break;
        Nt *= 2;
    }
    res.value = best;
    res.err_est = err + 4e-16 * std::abs(best);
    res.converged = res.err_est <= cfg.target_tol;
    return res;
}

// ---------------------------------------------------------------------------
// boundary_accel_sum: public acceleration primitive.  Feeds a raw term
// stream through the ladder, with the oscillation period taken from the
// root-of-unity order of w and the stated tail exponent p.
// ---------------------------------------------------------------------------

template <typename TermFn>
EvalResult boundary_accel_sum(TermFn&& term, cplx w, int exponent_p, const EvalConfig& cfg,
                              int max_log = 1) {
    int q = cfg.root_order > 0 ? cfg.root_order : root_of_unity_order(w);
    if (q == 0)
        return sum_ladder(std::forward<TermFn>(term), 1, exponent_p, max_log, cfg, /*generic=*/true);
    return sum_ladder(std::forward<TermFn>(term), q, exponent_p, max_log, cfg, /*generic=*/false);
}

// ---------------------------------------------------------------------------
// evaluate_series: dispatch on the classified traits (or a forced mode).
// ---------------------------------------------------------------------------

inline EvalResult evaluate_series(std::vector<GapLevel> levels, const EvalConfig& cfg) {
    if (levels.size() > 8)
        throw InadmissibleArgument("depth cap: nested series of depth > 8 are unsupported");
    SeriesTraits tr = classify_levels(levels);
    if (tr.rho_max > 1.0 + 1e-9)
        throw InadmissibleArgument("series weight has modulus > 1");
    if (tr.trailing_divergent)
        throw InadmissibleArgument("trailing exponent 1 with unit weight 1: divergent series");

    const int depth = static_cast<int>(levels.size());
    const int k_last = levels.back().exponent;
    const int p0 = std::max(1, k_last - 1);
    const int max_log = std::min(depth - 1, 3);

    NestedSeries s(std::move(levels));
    auto term = [&s] { return s.next(); };

    AccelMode mode = cfg.accel_mode;
    if (mode == AccelMode::Auto) {
        if (tr.rho_max < 1.0 - 1e-9)
            mode = AccelMode::Interior;
        else if (tr.all_roots)
            mode = AccelMode::RootOfUnity;
        else
            mode = AccelMode::BoundaryGeneric;
    }
    switch (mode) {
        case AccelMode::Interior:
            return sum_interior(term, tr.rho_max, depth, cfg);
        case AccelMode::RootOfUnity: {
            int q = cfg.root_order > 0 ? cfg.root_order : tr.period;
            return sum_ladder(term, q, p0, max_log, cfg, /*generic=*/false);
        }
        case AccelMode::BoundaryGeneric:
            return sum_ladder(term, 1, p0, max_log, cfg, /*generic=*/true);
        case AccelMode::Auto: break;
    }
    throw std::logic_error("unreachable accel mode");
}

}  // namespace mplv
