// mplv: evaluation and verification front end.
//
//   mplv eval    --func zeta --index 1,2
//   mplv verify  --all --samples 10 --seed 42 --tol 1e-8
//   mplv table   --family zeta2 --weight-max 6 --out zeta2.csv
//   mplv coeffs  --term "li 1,2 x,y" --degree 8

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <mplv/registry.hpp>

using namespace mplv;

namespace {

// Complex literal grammar: "a", "a+bi", "a-bi", "bi", "i", and polar
// "rho@theta" (theta in radians).
cplx parse_complex(std::string s) {
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (auto at = s.find('@'); at != std::string::npos) {
        double rho = std::stod(s.substr(0, at));
        double theta = std::stod(s.substr(at + 1));
        return std::polar(rho, theta);
    }
    if (s.back() != 'i') return cplx(std::stod(s), 0.0);
    s.pop_back();  // strip 'i'
    // split at the last +/- that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t p = s.size(); p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    auto imag_part = [&](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    if (split == std::string::npos) return cplx(0.0, imag_part(s));
    return cplx(std::stod(s.substr(0, split)), imag_part(s.substr(split)));
}

std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_complex(item));
    }
    return out;
}

// Monomial grammar for coeffs --term: "1" | "x", "y", "xy", "x^-1y", "xy^-1", "x^2", ...
MonomialArg parse_monomial(const std::string& s) {
    MonomialArg m;
    if (s == "1") return m;
    size_t p = 0;
    auto read_exp = [&]() -> int {
        if (p < s.size() && s[p] == '^') {
            ++p;
            size_t start = p;
            if (p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
            while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
            return std::stoi(s.substr(start, p - start));
        }
        return 1;
    };
    while (p < s.size()) {
        if (s[p] == 'x') {
            ++p;
            m.a += read_exp();
        } else if (s[p] == 'y') {
            ++p;
            m.b += read_exp();
        } else {
            throw std::invalid_argument("bad monomial '" + s + "'");
        }
    }
    return m;
}

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Report body is deterministic; timestamp and runtime sit together on one
// header line (a compact nested object), so reruns differ in that line only.
void write_report(const IdentityReport& rep, std::ostream& os) {
    std::string body = rep.to_json().dump(2);
    auto brace = body.find("{\n");
    char meta[160];
    std::snprintf(meta, sizeof meta,
                  "  \"meta\": {\"generated_at\": \"%s\", \"runtime_ms\": %.1f},\n",
                  iso_timestamp().c_str(), rep.runtime_ms);
    body.insert(brace + 2, meta);
    os << body << "\n";
}

// key=value config file; flags take precedence, defaults lose.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

struct CommonFlags {
    double tol = 1e-8;
    long n_max = 1L << 24;
    double margin = 0.05;
    std::uint64_t seed = 42;
    std::string format = "text";
    std::string out;
    std::string config_path;
};

void apply_config_defaults(CLI::App* cmd, CommonFlags& flags) {
    if (flags.config_path.empty()) return;
    auto kv = read_config(flags.config_path);
    auto absent = [&](const std::string& opt) {
        auto* o = cmd->get_option_no_throw(opt);
        return o != nullptr && o->count() == 0;
    };
    if (kv.count("tol") && absent("--tol")) flags.tol = std::stod(kv["tol"]);
    if (kv.count("n_max") && absent("--nmax")) flags.n_max = std::stol(kv["n_max"]);
    if (kv.count("margin") && absent("--margin")) flags.margin = std::stod(kv["margin"]);
    if (kv.count("seed") && absent("--seed")) flags.seed = std::stoull(kv["seed"]);
    if (kv.count("format") && absent("--format")) flags.format = kv["format"];
}

EvalConfig make_config(const CommonFlags& f) {
    EvalConfig cfg;
    cfg.target_tol = f.tol;
    cfg.n_max = f.n_max;
    cfg.margin = f.margin;
    return cfg;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) {
        std::cerr << "error: cannot write to " << path << "\n";
        std::exit(1);
    }
    return file;
}

int run_eval(const CommonFlags& flags, const std::string& func, const std::string& index_str,
             const std::string& args_str, const std::string& chars_str) {
    EvalConfig cfg = make_config(flags);
    if (flags.tol == 1e-8) cfg.target_tol = 1e-10;  // eval default is tighter
    Index index = Index::parse(index_str);
    EvalResult res;
    try {
        if (func == "li") {
            res = li_eval(index, ArgVector(parse_complex_list(args_str)), cfg);
        } else if (func == "ll") {
            auto a = parse_complex_list(args_str);
            if (a.size() != 2) throw InadmissibleArgument("ll needs --args x,y");
            res = ll_eval(index, {a[0], a[1]}, cfg);
        } else if (func == "zeta") {
            res = zeta_eval(index, cfg);
        } else if (func == "t") {
            res = t_value_eval(index, cfg);
        } else if (func == "lsh") {
            std::vector<Character> chars;
            std::stringstream ss(chars_str);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) chars.push_back(Character::by_name(item));
            if (chars.empty())
                chars.assign(static_cast<size_t>(index.depth()), Character::one2());
            res = l_sh_eval(index, chars, cfg);
        } else if (func == "lstar") {
            if (index.depth() != 2) throw InadmissibleArgument("lstar needs a depth-2 index");
            const Character& chi =
                chars_str.empty() ? Character::chi3() : Character::by_name(chars_str);
            res = l_star_eval(index[0], index[1], chi, cfg);
        } else {
            std::cerr << "error: unknown --func '" << func << "'\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::ofstream file;
    std::ostream& os = open_out(flags.out, file);
    if (flags.format == "json") {
        ordered_json j;
        j["func"] = func;
        j["index"] = index.str();
        j["value"] = cplx_json(res.value);
        j["err_est"] = res.err_est;
        j["terms_used"] = res.terms_used;
        j["mode"] = to_string(res.mode);
        j["converged"] = res.converged;
        os << j.dump(2) << "\n";
    } else if (flags.format == "csv") {
        os << "func,index,value_re,value_im,err_est,terms_used,converged\n";
        char line[256];
        std::snprintf(line, sizeof line, "%s,\"%s\",%.16g,%.16g,%.3g,%ld,%d\n", func.c_str(),
                      index.str().c_str(), res.value.real(), res.value.imag(), res.err_est,
                      res.terms_used, res.converged ? 1 : 0);
        os << line;
    } else {
        char line[256];
        std::snprintf(line, sizeof line, "value     = %.16g %+.16gi\n", res.value.real(),
                      res.value.imag());
        os << line;
        std::snprintf(line, sizeof line, "err_est   = %.3e\nterms     = %ld\nmode      = %s\n",
                      res.err_est, res.terms_used, to_string(res.mode));
        os << line << (res.converged ? "converged = yes\n" : "converged = NO\n");
    }
    return res.converged ? 0 : 2;
}

int run_verify(const CommonFlags& flags, const std::string& id, bool all, VerifyOptions opt,
               const std::string& report_dir) {
    EvalConfig cfg = make_config(flags);
    opt.seed = flags.seed;
    opt.tol = flags.tol;
    std::vector<std::string> ids;
    if (all) {
        for (const auto& s : list_identities()) ids.push_back(s.id);
    } else {
        find_identity(id);  // throws UnknownIdentity
        ids.push_back(id);
    }
    bool any_fail = false, any_inconclusive = false;
    for (const auto& one : ids) {
        IdentityReport rep = verify_identity(one, opt, cfg);
        std::string verdict = rep.pass ? "PASS" : (rep.note.empty() ? "FAIL" : "INCONCLUSIVE");
        if (rep.informational && !rep.pass) verdict = "INCONCLUSIVE";  // relaxed entries never FAIL
        if (verdict == "FAIL") any_fail = true;
        if (verdict == "INCONCLUSIVE") any_inconclusive = true;
        char line[256];
        std::string params = rep.params.dump();
        std::snprintf(line, sizeof line, "%-14s %-24s max_residual=%.3e %s%s\n", one.c_str(),
                      params.c_str(), rep.max_residual, verdict.c_str(),
                      rep.informational ? " (informational)" : "");
        std::cout << line;
        if (!report_dir.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(report_dir, ec);
            std::ofstream f(report_dir + "/" + one + ".json");
            if (!f) {
                std::cerr << "error: cannot write report for " << one << "\n";
                return 1;
            }
            write_report(rep, f);
        }
    }
    if (any_fail) return 3;
    if (any_inconclusive) return 4;
    return 0;
}

int run_table(const CommonFlags& flags, const std::string& family, int weight_max) {
    if (weight_max > 12) {
        std::cerr << "error: --weight-max must be <= 12\n";
        return 1;
    }
    EvalConfig cfg = make_config(flags);
    cfg.target_tol = std::min(flags.tol, 1e-10);
    struct Row {
        Index index;
        EvalResult res;
    };
    std::vector<Index> indices;
    const bool lfamily = family == "Lsh3" || family == "Lsh4";
    int k_min_depth1 = lfamily ? 1 : 2;
    for (int w = 1; w <= weight_max; ++w) {
        std::vector<Index> of_weight;
        if (w >= k_min_depth1) of_weight.push_back(Index{w});
        for (int k1 = 1; k1 < w; ++k1) {
            int k2 = w - k1;
            if (k2 >= (lfamily ? 1 : 2)) of_weight.push_back(Index{k1, k2});
        }
        std::sort(of_weight.begin(), of_weight.end());
        indices.insert(indices.end(), of_weight.begin(), of_weight.end());
    }
    std::vector<Row> rows;
    for (const auto& idx : indices) {
        Row row{idx, {}};
        try {
            if (family == "zeta2") row.res = zeta_eval(idx, cfg);
            else if (family == "T2") row.res = t_value_eval(idx, cfg);
            else if (family == "Lsh3")
                row.res = l_sh_eval(idx, std::vector<Character>(static_cast<size_t>(idx.depth()),
                                                                Character::chi3()),
                                    cfg);
            else if (family == "Lsh4")
                row.res = l_sh_eval(idx, std::vector<Character>(static_cast<size_t>(idx.depth()),
                                                                Character::chi4()),
                                    cfg);
            else {
                std::cerr << "error: unknown --family '" << family << "'\n";
                return 1;
            }
        } catch (const std::exception&) {
            continue;  // divergent index for this family
        }
        rows.push_back(std::move(row));
    }
    std::ofstream file;
    std::ostream& os = open_out(flags.out, file);
    os << "family,index,value_re,value_im,err_est\n";
    for (const auto& r : rows) {
        char line[256];
        std::string idx = r.index.str().substr(1, r.index.str().size() - 2);  // strip parens
        std::snprintf(line, sizeof line, "%s,\"%s\",%.16g,%.16g,%.3g\n", family.c_str(),
                      idx.c_str(), r.res.value.real(), r.res.value.imag(), r.res.err_est);
        os << line;
    }
    return 0;
}

int run_coeffs(const CommonFlags& flags, const std::string& identity, const std::string& term,
               int degree, const VerifyOptions& opt) {
    if (degree > 40) {
        std::cerr << "error: --degree must be <= 40\n";
        return 1;
    }
    try {
        BivariatePoly poly(degree);
        if (!identity.empty()) {
            ExactParams prm;
            prm.k = opt.k > 0 ? opt.k : 3;
            prm.i = opt.i > 0 ? opt.i : 2;
            prm.j = opt.j > 0 ? opt.j : 1;
            prm.p = opt.p > 0 ? opt.p : 1;
            prm.q = opt.q > 0 ? opt.q : 2;
            poly = detail::exact_difference(identity, prm, degree);
        } else {
            std::stringstream ss(term);
            std::string fn, idx_str, args_str;
            ss >> fn >> idx_str >> args_str;
            if (fn != "li") throw std::invalid_argument("--term must start with 'li'");
            Index index = Index::parse(idx_str);
            std::vector<MonomialArg> margs;
            std::stringstream as(args_str);
            std::string item;
            while (std::getline(as, item, ','))
                if (!item.empty()) margs.push_back(parse_monomial(item));
            poly = expand_li(index, margs, degree);
        }
        std::ofstream file;
        std::ostream& os = open_out(flags.out, file);
        os << poly.serialize();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple polylogarithm evaluation and identity verification"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string func = "zeta", index_str = "2", args_str, chars_str;
    std::string id, family = "zeta2", identity, term, report_dir;
    bool all = false;
    int weight_max = 6, degree = 16;
    VerifyOptions opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", flags.tol, "target tolerance");
        cmd->add_option("--nmax", flags.n_max, "summation term cap");
        cmd->add_option("--margin", flags.margin, "singular-set margin");
        cmd->add_option("--seed", flags.seed, "sampler seed");
        cmd->add_option("--format", flags.format, "text|json|csv");
        cmd->add_option("--out", flags.out, "output path (default stdout)");
        cmd->add_option("--config", flags.config_path, "key=value config file");
    };

    auto* eval = app.add_subcommand("eval", "evaluate one value");
    eval->add_option("--func", func, "li|ll|zeta|t|lsh|lstar")->required();
    eval->add_option("--index", index_str, "comma-separated index, e.g. 1,2")->required();
    eval->add_option("--args", args_str, "complex args: a, a+bi, rho@theta");
    eval->add_option("--chars", chars_str, "characters, e.g. chi4,chi4");
    add_common(eval);

    auto* verify = app.add_subcommand("verify", "verify identities");
    verify->add_option("--id", id, "identity id");
    verify->add_flag("--all", all, "verify the whole catalogue");
    verify->add_option("--k", opt.k, "weight parameter");
    verify->add_option("--r", opt.r, "depth parameter");
    verify->add_option("--i", opt.i, "eq2.3 left exponent");
    verify->add_option("--j", opt.j, "eq2.3 right exponent");
    verify->add_option("--p", opt.p, "stuffle left exponent");
    verify->add_option("--q", opt.q, "stuffle right exponent");
    verify->add_option("--samples", opt.n_samples, "sample count");
    verify->add_option("--mode", opt.mode, "exact|numeric|limit|derivative");
    verify->add_option("--degree", opt.degree, "exact-mode truncation degree");
    verify->add_option("--tmax", opt.t_max, "limit-mode max t");
    verify->add_option("--report-dir", report_dir, "directory for IdentityReport JSON files");
    add_common(verify);

    auto* table = app.add_subcommand("table", "tabulate a value family to CSV");
    table->add_option("--family", family, "zeta2|T2|Lsh3|Lsh4")->required();
    table->add_option("--weight-max", weight_max, "max weight (<= 12)")->required();
    add_common(table);

    auto* coeffs = app.add_subcommand("coeffs", "exact coefficient dumps");
    coeffs->add_option("--identity", identity, "exact identity id (emits LHS-RHS)");
    coeffs->add_option("--term", term, "series term, e.g. \"li 1,2 x,y\"");
    coeffs->add_option("--degree", degree, "truncation degree (<= 40)")->required();
    coeffs->add_option("--k", opt.k, "weight parameter");
    coeffs->add_option("--i", opt.i, "eq2.3 i");
    coeffs->add_option("--j", opt.j, "eq2.3 j");
    coeffs->add_option("--p", opt.p, "stuffle p");
    coeffs->add_option("--q", opt.q, "stuffle q");
    add_common(coeffs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            apply_config_defaults(eval, flags);
            return run_eval(flags, func, index_str, args_str, chars_str);
        }
        if (verify->parsed()) {
            apply_config_defaults(verify, flags);
            if (!all && id.empty()) {
                std::cerr << "error: need --id or --all\n";
                return 1;
            }
            return run_verify(flags, id, all, opt, report_dir);
        }
        if (table->parsed()) {
            apply_config_defaults(table, flags);
            return run_table(flags, family, weight_max);
        }
        if (coeffs->parsed()) {
            apply_config_defaults(coeffs, flags);
            if (identity.empty() == term.empty()) {
                std::cerr << "error: need exactly one of --identity / --term\n";
                return 1;
            }
            return run_coeffs(flags, identity, term, degree, opt);
        }
    } catch (const UnknownIdentity& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
