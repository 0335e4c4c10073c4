#include <catch2/catch_amalgamated.hpp>

#include <mplv/characters.hpp>

#include "oracles.hpp"

using namespace mplv;

namespace {
const double kCatalan = 0.9159655941772190;
const double kZeta2 = 1.6449340668482264;
const double kZeta3 = 1.2020569031595943;
const double kZeta4 = 1.0823232337111382;
const double kT12 = 2.1035995805292898;
const double kPiOver4 = 0.7853981633974483;  // L(1; chi_4)

EvalConfig cfg_tol(double t) {
    EvalConfig cfg;
    cfg.target_tol = t;
    return cfg;
}
}  // namespace

TEST_CASE("chi_eval table values") {
    CHECK(chi_eval(Character::chi4(), 3) == -1);
    CHECK(chi_eval(Character::chi3(), 2) == -1);
    CHECK(chi_eval(Character::one2(), 4) == 0);
    CHECK(chi_eval(Character::chi4(), 1) == 1);
    CHECK(chi_eval(Character::principal4(), 3) == 1);
    CHECK(chi_eval(Character::principal3(), 6) == 0);
}

TEST_CASE("chi_4 and chi_3 match their root-of-unity closed forms") {
    // chi_4(m) = (i^m - (-i)^m)/(2i),  chi_3(m) = (w^m - w^{-m})/(sqrt(3) i)
    const cplx i_unit(0.0, 1.0);
    for (long m = 1; m <= 10000; ++m) {
        cplx f4 = (std::polar(1.0, std::numbers::pi * m / 2.0) -
                   std::polar(1.0, -std::numbers::pi * m / 2.0)) / (2.0 * i_unit);
        CHECK(std::abs(f4 - cplx(chi_eval(Character::chi4(), m))) < 1e-10);
        cplx f3 = (std::polar(1.0, 2.0 * std::numbers::pi * m / 3.0) -
                   std::polar(1.0, -2.0 * std::numbers::pi * m / 3.0)) /
                  (std::sqrt(3.0) * i_unit);
        CHECK(std::abs(f3 - cplx(chi_eval(Character::chi3(), m))) < 1e-10);
    }
}

TEST_CASE("characters are completely multiplicative on units, periodic") {
    for (const Character* chi : {&Character::chi3(), &Character::chi4(), &Character::one2()}) {
        for (long m = 1; m <= 40; ++m) {
            CHECK(chi_eval(*chi, m) == chi_eval(*chi, m + chi->conductor()));
            for (long n = 1; n <= 40; ++n)
                CHECK(chi_eval(*chi, m * n) == chi_eval(*chi, m) * chi_eval(*chi, n));
        }
    }
}

TEST_CASE("gap_components reconstruct the character") {
    for (const Character* chi :
         {&Character::chi3(), &Character::chi4(), &Character::one2(), &Character::principal3(),
          &Character::principal4(), &Character::one1()}) {
        auto comps = chi->gap_components();
        for (long d = 1; d <= 12; ++d) {
            cplx v = 0.0;
            for (const auto& c : comps) v += c.coeff * std::pow(c.ratio, static_cast<double>(d));
            CHECK(std::abs(v - cplx(chi_eval(*chi, d))) < 1e-12);
        }
    }
}

TEST_CASE("l_sh_eval examples") {
    SECTION("L_sh(2; chi_4) = Catalan") {
        auto r = l_sh_eval(Index{2}, {Character::chi4()}, cfg_tol(1e-11));
        CHECK(std::abs(r.value.real() - kCatalan) < 1e-11);
        CHECK(std::abs(r.value.real() - oracles::catalan_direct(4'000'000)) < 1e-11);
    }
    SECTION("4 L_sh(1,2; one2, one2) = T(1,2)") {
        auto r = l_sh_eval(Index{1, 2}, {Character::one2(), Character::one2()}, cfg_tol(1e-11));
        CHECK(std::abs(4.0 * r.value.real() - kT12) < 1e-10);
    }
    SECTION("L_sh(2; chi_4^2) = (1 - 2^{-2}) zeta(2) = pi^2/8") {
        auto r = l_sh_eval(Index{2}, {Character::principal4()}, cfg_tol(1e-11));
        CHECK(std::abs(r.value.real() - 0.75 * kZeta2) < 1e-11);
    }
    SECTION("trailing part 1 requires a non-trivial character") {
        CHECK_THROWS_AS(l_sh_eval(Index{2, 1}, {Character::one2(), Character::one2()},
                                  cfg_tol(1e-8)),
                        DivergentIndex);
        CHECK(l_sh_eval(Index{2, 1}, {Character::chi4(), Character::chi4()}, cfg_tol(1e-8))
                  .converged);
    }
}

TEST_CASE("principal-character L-values interpolate zeta") {
    // L(k; chi_3^2) = (1 - 3^{-k}) zeta(k), L(k; chi_4^2) = (1 - 2^{-k}) zeta(k)
    struct Case {
        int k;
        double zeta;
    };
    for (const auto& c : {Case{2, kZeta2}, Case{3, kZeta3}, Case{4, kZeta4}}) {
        auto l3 = l_value(c.k, Character::principal3(), cfg_tol(1e-11));
        CHECK(std::abs(l3.value.real() - (1.0 - std::pow(3.0, -c.k)) * c.zeta) < 1e-10);
        auto l4 = l_value(c.k, Character::principal4(), cfg_tol(1e-11));
        CHECK(std::abs(l4.value.real() - (1.0 - std::pow(2.0, -c.k)) * c.zeta) < 1e-10);
    }
}

TEST_CASE("l_star_eval") {
    SECTION("stuffle cross-check: L(1)L(2) = L_*(1,2) + L_*(2,1) + L(3; chi_4^2)") {
        auto cfg = cfg_tol(1e-10);
        const auto& chi = Character::chi4();
        double lhs = kPiOver4 * kCatalan;
        auto a = l_star_eval(1, 2, chi, cfg);
        auto b = l_star_eval(2, 1, chi, cfg);
        auto c = l_value(3, Character::principal4(), cfg);
        CHECK(std::abs(lhs - (a.value.real() + b.value.real() + c.value.real())) < 1e-9);
    }
    SECTION("trivial mod-1 pattern degenerates to double zeta") {
        auto r = l_star_eval(1, 2, Character::one1(), cfg_tol(1e-10));
        CHECK(std::abs(r.value.real() - kZeta3) < 1e-9);
        auto r22 = l_star_eval(2, 2, Character::one1(), cfg_tol(1e-10));
        CHECK(std::abs(r22.value.real() - 0.8117424252833536) < 1e-9);
    }
    SECTION("L_*(1,1; chi_3) is finite and satisfies the k=2 sum formula") {
        // Eq. (3.8) at k = 2
        auto cfg = cfg_tol(1e-8);
        const auto& chi = Character::chi3();
        double lhs = l_sh_eval(Index{1, 1}, {chi, chi}, cfg).value.real() +
                     l_sh_eval(Index{1, 1}, {chi, chi}, cfg).value.real() -
                     l_star_eval(1, 1, chi, cfg).value.real() -
                     l_star_eval(1, 1, chi, cfg).value.real();
        double rhs = l_value(2, Character::principal3(), cfg).value.real();
        CHECK(std::abs(lhs - rhs) < 1e-6);
    }
    SECTION("divergence guard") {
        CHECK_THROWS_AS(l_star_eval(2, 1, Character::one1(), cfg_tol(1e-8)), DivergentIndex);
    }
}

TEST_CASE("l_sh_via_li agrees with the direct character DP") {
    auto cfg = cfg_tol(1e-8);
    struct Case {
        int p, q;
    };
    for (const auto& c : {Case{1, 2}, Case{2, 2}, Case{2, 1}}) {
        auto via4 = l_sh_via_li(c.p, c.q, WhichChi::chi4, cfg);
        auto direct4 = l_sh_eval(Index{c.p, c.q}, {Character::chi4(), Character::chi4()}, cfg);
        CHECK(std::abs(via4.value - direct4.value) < 2e-6);
        CHECK(std::abs(via4.value - direct4.value) <= via4.err_est + direct4.err_est);
        auto via3 = l_sh_via_li(c.p, c.q, WhichChi::chi3, cfg);
        auto direct3 = l_sh_eval(Index{c.p, c.q}, {Character::chi3(), Character::chi3()}, cfg);
        CHECK(std::abs(via3.value - direct3.value) < 2e-6);
        CHECK(std::abs(via3.value - direct3.value) <= via3.err_est + direct3.err_est);
    }
}
