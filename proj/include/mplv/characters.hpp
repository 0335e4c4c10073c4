#pragma once

// Dirichlet characters of conductor <= 4 and the L-value families.
//
// A q-periodic weight folds into the gap DP through its discrete Fourier
// expansion chi(d) = sum_t c_t u^{td} over q-th roots of unity, so every
// L-sum here is again a finite-geometric-component nested series.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "engine.hpp"
#include "eval.hpp"
#include "types.hpp"

namespace mplv {

class Character {
  public:
    // values[m % conductor] gives chi(m); entries are 0 or ±1.
    Character(int conductor, std::vector<int> values, std::string name)
        : conductor_(conductor), values_(std::move(values)), name_(std::move(name)) {
        int sum = 0;
        for (int v : values_) sum += v;
        principal_like_ = (sum != 0);  // non-trivial characters have mean zero
    }

    static const Character& one1() {  // trivial pattern mod 1: chi(m) = 1
        static const Character c(1, {1}, "one1");
        return c;
    }
    static const Character& one2() {  // trivial character mod 2
        static const Character c(2, {0, 1}, "one2");
        return c;
    }
    static const Character& chi3() {  // non-trivial character of conductor 3
        static const Character c(3, {0, 1, -1}, "chi3");
        return c;
    }
    static const Character& chi4() {  // non-trivial character of conductor 4
        static const Character c(4, {0, 1, 0, -1}, "chi4");
        return c;
    }
    static const Character& principal3() {  // chi3^2
        static const Character c(3, {0, 1, 1}, "chi3^2");
        return c;
    }
    static const Character& principal4() {  // chi4^2
        static const Character c(4, {0, 1, 0, 1}, "chi4^2");
        return c;
    }

    static const Character& by_name(const std::string& name) {
        if (name == "one1" || name == "1") return one1();
        if (name == "one2" || name == "triv2") return one2();
        if (name == "chi3") return chi3();
        if (name == "chi4") return chi4();
        if (name == "chi3^2" || name == "principal3") return principal3();
        if (name == "chi4^2" || name == "principal4") return principal4();
        throw std::invalid_argument("unknown character: " + name);
    }

    int conductor() const { return conductor_; }
    const std::string& name() const { return name_; }
    bool non_trivial() const { return !principal_like_; }

    int operator()(long m) const {
        long r = m % conductor_;
        if (r < 0) r += conductor_;
        return values_[static_cast<size_t>(r)];
    }

    // chi(d) = sum_t coeff_t * ratio_t^d with ratio_t = e^{2 pi i t / q}.
    std::vector<GeomTerm> gap_components() const {
        const int q = conductor_;
        std::vector<GeomTerm> comps;
        for (int t = 0; t < q; ++t) {
            cplx c = 0.0;
            for (int d = 0; d < q; ++d)
                c += static_cast<double>(values_[static_cast<size_t>(d)]) *
                     std::polar(1.0, -2.0 * std::numbers::pi * t * d / q);
            c /= static_cast<double>(q);
            if (std::abs(c) > 1e-14)
                comps.push_back({c, std::polar(1.0, 2.0 * std::numbers::pi * t / q)});
        }
        return comps;
    }

  private:
    int conductor_;
    std::vector<int> values_;
    std::string name_;
    bool principal_like_;
};

inline int chi_eval(const Character& chi, long m) { return chi(m); }

// Shuffle-type multiple L-value: the sum runs over the gaps m_1,...,m_r >= 1
// directly, so the character weights sit level by level in the DP.
inline EvalResult l_sh_eval(const Index& index, const std::vector<Character>& chars,
                            const EvalConfig& cfg = {}) {
    if (index.empty()) return EvalResult{cplx(1.0), 0.0, 0, AccelMode::Interior, true};
    if (static_cast<int>(chars.size()) != index.depth())
        throw InadmissibleArgument("need one character per index part");
    if (index.last() == 1 && !chars.back().non_trivial())
        throw DivergentIndex("L_sh: trailing part 1 requires a non-trivial trailing character");
    std::vector<GapLevel> levels(static_cast<size_t>(index.depth()));
    for (int j = 0; j < index.depth(); ++j)
        levels[static_cast<size_t>(j)] = GapLevel{index[j], chars[static_cast<size_t>(j)].gap_components()};
    return evaluate_series(std::move(levels), cfg);
}

// Depth-1 L(k; chi).
inline EvalResult l_value(int k, const Character& chi, const EvalConfig& cfg = {}) {
    return l_sh_eval(Index{k}, {chi}, cfg);
}

// Stuffle-type double L-value  sum_{0<m<n} chi(m)chi(n) / (m^{k1} n^{k2}).
// Expanding both characters over root-of-unity components turns this into a
// finite combination of Li_{k1,k2} at root-of-unity argument pairs.
inline EvalResult l_star_eval(int k1, int k2, const Character& chi, const EvalConfig& cfg = {}) {
    if (k2 < 2 && !chi.non_trivial())
        throw DivergentIndex("L_*: k2 = 1 requires a non-trivial character");
    auto comps = chi.gap_components();
    EvalResult res;
    res.mode = AccelMode::RootOfUnity;
    cplx total = 0.0;
    for (const auto& s : comps) {
        for (const auto& t : comps) {
            EvalResult part = li_eval(Index{k1, k2}, ArgVector{s.ratio, t.ratio}, cfg);
            total += s.coeff * t.coeff * part.value;
            res.err_est += std::abs(s.coeff * t.coeff) * part.err_est;
            res.terms_used += part.terms_used;
            res.converged = res.converged && part.converged;
        }
    }
    res.value = total;
    res.converged = res.converged && res.err_est <= cfg.target_tol;
    return res;
}

enum class WhichChi { chi3, chi4 };

// Independent route to L_sh(p,q) through four Li values at roots of unity:
//   4 L_sh(p,q;chi4,chi4) = Li_{p,q}(-1,i)+Li_{p,q}(-1,-i)-Li_{p,q}(1,i)-Li_{p,q}(1,-i)
//   3 L_sh(p,q;chi3,chi3) = Li_{p,q}(w,w)+Li_{p,q}(w^-1,w^-1)-Li_{p,q}(1,w)-Li_{p,q}(1,w^-1)
// with w = e^{2 pi i / 3}.
inline EvalResult l_sh_via_li(int p, int q, WhichChi which, const EvalConfig& cfg = {}) {
    const cplx i_unit(0.0, 1.0);
    const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    struct Term {
        double sign;
        cplx z1, z2;
    };
    std::vector<Term> terms;
    double norm;
    if (which == WhichChi::chi4) {
        norm = 4.0;
        terms = {{+1.0, -1.0, i_unit}, {+1.0, -1.0, -i_unit}, {-1.0, 1.0, i_unit}, {-1.0, 1.0, -i_unit}};
    } else {
        norm = 3.0;
        terms = {{+1.0, omega, omega},
                 {+1.0, std::conj(omega), std::conj(omega)},
                 {-1.0, 1.0, omega},
                 {-1.0, 1.0, std::conj(omega)}};
    }
    EvalResult res;
    res.mode = AccelMode::RootOfUnity;
    cplx total = 0.0;
    for (const auto& t : terms) {
        EvalResult part = li_eval(Index{p, q}, ArgVector{t.z1, t.z2}, cfg);
        total += t.sign * part.value;
        res.err_est += part.err_est;
        res.terms_used += part.terms_used;
        res.converged = res.converged && part.converged;
    }
    res.value = total / norm;
    res.err_est /= norm;
    res.converged = res.converged && res.err_est <= cfg.target_tol;
    return res;
}

}  // namespace mplv
