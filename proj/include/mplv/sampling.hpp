#pragma once

// Deterministic admissible-point samplers.  The RNG is a fixed splitmix64
// stream (not std::uniform_*_distribution, whose output is
// implementation-defined), so identical seeds give identical samples on any
// platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "types.hpp"

namespace mplv {

class SampleRng {
  public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    cplx annulus(double r_lo, double r_hi) {
        double r = uniform(r_lo, r_hi);
        double th = uniform(0.0, 2.0 * std::numbers::pi);
        return std::polar(r, th);
    }

  private:
    std::uint64_t state_;
};

struct SamplePoint {
    cplx x{};
    cplx y{};
    int index = 0;
};

// Admissible-domain sampler per identity.  Value-level identities (weighted
// sum formulas, limit checks) take no sample points and yield an empty list.
inline std::vector<SamplePoint> sample_admissible(const std::string& id, int n,
                                                  std::uint64_t seed, const EvalConfig& cfg = {}) {
    const double d = cfg.margin;
    SampleRng rng(seed);
    std::vector<SamplePoint> pts;
    pts.reserve(static_cast<size_t>(n));
    long attempts = 0;
    const long cap = 10000L * std::max(n, 1);

    auto reject = [&]() {
        if (++attempts > cap)
            throw SamplingExhausted("sample_admissible(" + id + "): rejection cap reached");
    };

    if (id == "wsf-oz" || id == "wsf-kt" || id == "prop3.1-f3" || id == "prop3.1-f4" ||
        id == "nishi" || id == "lsum" || id == "limit-3.1" || id == "lemma2.1" ||
        id == "eq2.3" || id == "eq2.5" || id == "eq2.6")
        return pts;  // parameter-level, no sample points

    while (static_cast<int>(pts.size()) < n) {
        SamplePoint p;
        p.index = static_cast<int>(pts.size());
        if (id == "thm1.2" || id == "stuffle") {
            p.x = rng.annulus(0.15, 0.9);
            p.y = rng.annulus(0.15, 0.9);
            if (std::abs(p.x - 1.0) < d || std::abs(p.y - 1.0) < d ||
                std::abs(p.x * p.y - 1.0) < d) {
                reject();
                continue;
            }
        } else if (id == "cor1.2") {
            double th = rng.uniform(d, 2.0 * std::numbers::pi - d);
            p.x = std::polar(1.0, th);
            p.y = std::conj(p.x);
        } else if (id == "wsf-3") {
            // unit-circle points are forced (the identity involves both x and
            // x^{-1}); roots of unity of small order keep the boundary sums
            // exactly periodic.
            static const int orders[] = {3, 4, 6, 8, 12};
            auto draw = [&] {
                int q = orders[rng.uniform_int(0, 4)];
                int a = rng.uniform_int(1, q - 1);
                return std::polar(1.0, 2.0 * std::numbers::pi * a / q);
            };
            p.x = draw();
            p.y = draw();
            if (std::abs(p.x - 1.0) < d || std::abs(p.y - 1.0) < d) {
                reject();
                continue;
            }
        } else if (id == "thm1.4" || id == "thm1.4-k2") {
            p.x = rng.annulus(0.1, 0.8);
            p.y = rng.annulus(0.1, 0.8);
            cplx u = (cplx(1.0) - p.x) / (cplx(1.0) - p.x * p.y);
            if (std::abs(u) > 1.0 - d / 2 || std::abs(p.y - 1.0) < d ||
                std::abs(p.x * p.y - 1.0) < d) {
                reject();
                continue;
            }
        } else if (id == "five-term" || id == "example-2-2" || id == "reflection") {
            p.x = rng.uniform(0.05, 0.95);
            p.y = rng.uniform(0.05, 0.95);
        } else if (id == "diff-formulas") {
            p.x = rng.annulus(0.1, 0.85);
            p.y = rng.annulus(0.1, 0.85);
            if (std::abs(p.x - 1.0) < d || std::abs(p.x * p.y - 1.0) < d) {
                reject();
                continue;
            }
        } else {
            throw UnknownIdentity("sample_admissible: unknown identity '" + id + "'");
        }
        pts.push_back(p);
    }
    return pts;
}

}  // namespace mplv
