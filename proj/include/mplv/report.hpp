#pragma once

// Report types and their stable JSON shape.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "types.hpp"

namespace mplv {

using ordered_json = nlohmann::ordered_json;

inline ordered_json cplx_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

struct SampleOutcome {
    std::vector<double> point;  // flattened [x_re, x_im, y_re, y_im] (or shorter)
    cplx lhs{};
    cplx rhs{};
    double residual = 0.0;
    double residual_rel = 0.0;
    double residual_aux = -1.0;  // secondary form (five-term log form); -1 = none
    double err_budget = 0.0;
    long terms = 0;  // summation terms consumed across all constituents
    std::string status;  // "ok" | "inconclusive"

    ordered_json to_json() const {
        ordered_json j;
        j["point"] = point;
        j["lhs"] = cplx_json(lhs);
        j["rhs"] = cplx_json(rhs);
        j["residual"] = residual;
        j["residual_rel"] = residual_rel;
        if (residual_aux >= 0.0) j["residual_logform"] = residual_aux;
        j["err_budget"] = err_budget;
        j["terms"] = terms;
        j["status"] = status;
        return j;
    }
};

struct IdentityReport {
    std::string id;
    ordered_json params = ordered_json::object();
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<SampleOutcome> samples;
    double max_residual = 0.0;
    bool pass = false;
    bool informational = false;  // relaxed-tolerance entries (cor1.2 boundary)
    double runtime_ms = 0.0;     // excluded from the deterministic body
    ordered_json config = ordered_json::object();
    std::string note;

    int conclusive() const {
        int c = 0;
        for (const auto& s : samples)
            if (s.status == "ok") ++c;
        return c;
    }

    // Deterministic body: runtime/timestamp live in a separate header line
    // added by the writer.
    ordered_json to_json() const {
        ordered_json j;
        j["id"] = id;
        j["params"] = params;
        j["seed"] = seed;
        j["tolerance"] = tolerance;
        j["samples"] = ordered_json::array();
        for (const auto& s : samples) j["samples"].push_back(s.to_json());
        j["max_residual"] = max_residual;
        j["pass"] = pass;
        if (informational) j["informational"] = true;
        if (!note.empty()) j["note"] = note;
        j["config"] = config;
        return j;
    }
};

struct LimitReport {
    std::string id;
    int k = 0;
    std::vector<int> ts;
    std::vector<double> magnitudes;
    std::vector<double> err_ests;
    bool decreasing = false;  // magnitudes decreasing for t >= 8
    double final_magnitude = 0.0;
    bool pass = false;

    ordered_json to_json() const {
        ordered_json j;
        j["id"] = id;
        j["k"] = k;
        j["t"] = ts;
        j["magnitude"] = magnitudes;
        j["err_est"] = err_ests;
        j["decreasing_from_t8"] = decreasing;
        j["final_magnitude"] = final_magnitude;
        j["pass"] = pass;
        return j;
    }
};

inline ordered_json config_json(const EvalConfig& cfg) {
    ordered_json j;
    j["target_tol"] = cfg.target_tol;
    j["n_initial"] = cfg.n_initial;
    j["n_max"] = cfg.n_max;
    j["margin"] = cfg.margin;
    j["accel_mode"] = to_string(cfg.accel_mode);
    return j;
}

}  // namespace mplv
