#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "klp/baker.hpp"
#include "klp/palindrome.hpp"
#include "klp/pipeline.hpp"
#include "klp/sequence.hpp"
#include "klp/util.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

klp::FormKind parse_form(const std::string& s) {
    if (s == "G1") return klp::FormKind::G1;
    if (s == "G2") return klp::FormKind::G2;
    if (s == "G3") return klp::FormKind::G3;
    if (s == "G4") return klp::FormKind::G4;
    throw CLI::ValidationError("--form/--kind must be one of G1, G2, G3, G4");
}

std::string form_name(klp::FormKind f) {
    switch (f) {
        case klp::FormKind::G1: return "G1";
        case klp::FormKind::G2: return "G2";
        case klp::FormKind::G3: return "G3";
        case klp::FormKind::G4: return "G4";
    }
    return "?";
}

int cmd_seq(long k, long n, long hi, bool json) {
    klp::KLucasSequence seq(k);
    if (hi < n) throw std::domain_error("seq: --n-max below --n");
    seq.extend(hi);
    for (long i = n; i <= hi; ++i) {
        if (json) {
            ordered_json j;
            j["k"] = k;
            j["n"] = i;
            j["value"] = seq.term(i).get_str();
            std::cout << j.dump() << "\n";
        } else {
            std::cout << seq.term(i).get_str() << "\n";
        }
    }
    return 0;
}

int cmd_alpha(long k, int digits, bool json) {
    long bits = static_cast<long>(digits * 3.322) + 96;
    klp::AlgebraicContext alg(k, klp::Precision::with_bits(bits));
    if (json) {
        ordered_json j;
        j["k"] = k;
        j["digits"] = digits;
        j["alpha"] = {alg.alpha().lo_string(digits), alg.alpha().hi_string(digits)};
        j["f_alpha"] = {alg.f_alpha().lo_string(digits), alg.f_alpha().hi_string(digits)};
        j["log_alpha"] = {alg.log_alpha().lo_string(digits), alg.log_alpha().hi_string(digits)};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "alpha     in [" << alg.alpha().lo_string(digits) << ", "
                  << alg.alpha().hi_string(digits) << "]\n";
        std::cout << "f_k(alpha) in [" << alg.f_alpha().lo_string(digits) << ", "
                  << alg.f_alpha().hi_string(digits) << "]\n";
        std::cout << "log alpha  in [" << alg.log_alpha().lo_string(digits) << ", "
                  << alg.log_alpha().hi_string(digits) << "]\n";
    }
    return 0;
}

int cmd_pal_check(const std::string& value) {
    mpz_class v(value);
    auto dec = klp::decompose(v);
    if (!dec) {
        std::cout << "none\n";
        return 0;
    }
    std::cout << "d1=" << dec->d1 << " d2=" << dec->d2 << " ell=" << dec->ell << " m=" << dec->m
              << "\n";
    return 0;
}

int cmd_pal_power_case() {
    auto res = klp::power_case_search();
    ordered_json j;
    j["searched"] = res.searched;
    j["hits"] = ordered_json::array();
    for (const auto& h : res.hits)
        j["hits"].push_back({{"d1", h.dec.d1},
                             {"d2", h.dec.d2},
                             {"ell", h.dec.ell},
                             {"m", h.dec.m},
                             {"n", h.n},
                             {"value", h.value.get_str()}});
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_matveev(const std::string& kind_s, long k, const std::string& n_s, int d1, int d2, long ell,
                long m, bool json) {
    klp::FormKind kind = parse_form(kind_s);
    klp::FormParams params;
    params.k = k;
    params.d1 = d1;
    params.d2 = d2;
    params.ell = ell;
    params.m = m;
    params.n = klp::mpz_from_sci(n_s);

    std::unique_ptr<klp::AlgebraicContext> alg;
    if (kind == klp::FormKind::G1 || kind == klp::FormKind::G2)
        alg = std::make_unique<klp::AlgebraicContext>(k, klp::Precision::with_bits(256));
    auto spec = klp::build_linear_form(kind, params, alg.get());
    double lower = klp::matveev_lower_bound(spec);

    if (json) {
        ordered_json j;
        j["kind"] = kind_s;
        j["A"] = {spec.gammas[0].a_bound, spec.gammas[1].a_bound, spec.gammas[2].a_bound};
        j["B"] = spec.b_max.get_str();
        j["D"] = spec.degree;
        j["lower_bound"] = lower;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "A1=" << spec.gammas[0].a_bound << " A2=" << spec.gammas[1].a_bound
                  << " A3=" << spec.gammas[2].a_bound << "\n";
        std::cout << "B=" << spec.b_max.get_str() << " D=" << spec.degree << "\n";
        std::cout << "log|Gamma| > " << lower << "\n";
    }
    return 0;
}

int cmd_reduce(const std::string& form_s, const std::string& k_range, const std::string& c_s,
               const std::string& n_bound_s, const std::string& ell_range, int threads,
               const std::string& out_path) {
    klp::ReductionPlan plan;
    plan.form = parse_form(form_s);
    auto colon = k_range.find(':');
    plan.k_min = std::stol(k_range.substr(0, colon));
    plan.k_max = colon == std::string::npos ? plan.k_min : std::stol(k_range.substr(colon + 1));
    if (!ell_range.empty()) {
        auto c2 = ell_range.find(':');
        plan.ell_min = std::stol(ell_range.substr(0, c2));
        plan.ell_max = c2 == std::string::npos ? plan.ell_min : std::stol(ell_range.substr(c2 + 1));
    }
    plan.C = klp::mpz_from_sci(c_s);
    plan.n_bound = klp::mpz_from_sci(n_bound_s);
    plan.parallelism = threads;
    bool with_d2 = plan.form == klp::FormKind::G2 || plan.form == klp::FormKind::G4;
    for (int d1 = 1; d1 <= 9; ++d1) {
        if (with_d2) {
            for (int d2 = 0; d2 <= 9; ++d2)
                if (d2 != d1) plan.digit_pairs.emplace_back(d1, d2);
        } else {
            plan.digit_pairs.emplace_back(d1, 0);
        }
    }
    switch (plan.form) {
        case klp::FormKind::G1: plan.c3 = 18.0; plan.c4 = std::log(10.0); break;
        case klp::FormKind::G2: plan.c3 = 19.0; plan.c4 = std::log(10.0); break;
        case klp::FormKind::G3: plan.c3 = 59.0; plan.c4 = std::log(2.0); break;
        case klp::FormKind::G4: plan.c3 = 11.0; plan.c4 = std::log(2.0); break;
    }
    std::shared_ptr<std::map<long, std::shared_ptr<const klp::AlgebraicContext>>> cache;
    std::shared_ptr<std::mutex> cache_mutex;
    if (plan.form == klp::FormKind::G1 || plan.form == klp::FormKind::G2) {
        long bits = klp::Precision::for_scaling(plan.C).bits + 80;
        cache = std::make_shared<std::map<long, std::shared_ptr<const klp::AlgebraicContext>>>();
        cache_mutex = std::make_shared<std::mutex>();
        plan.alg_provider = [cache, cache_mutex, bits](long k) {
            std::lock_guard<std::mutex> lock(*cache_mutex);
            auto it = cache->find(k);
            if (it != cache->end()) return it->second;
            auto ctx =
                std::make_shared<const klp::AlgebraicContext>(k, klp::Precision::with_bits(bits));
            return cache->emplace(k, std::move(ctx)).first->second;
        };
    }

    auto summary = klp::reduction_round(plan);

    ordered_json j;
    j["form"] = form_name(summary.form);
    j["cells"] = ordered_json::array();
    for (const auto& c : summary.cells) {
        ordered_json cj;
        cj["k"] = c.k;
        cj["d1"] = c.d1;
        cj["d2"] = c.d2;
        cj["ell"] = c.ell;
        cj["C_used"] = klp::sci_string(c.C_used);
        cj["delta"] = c.resolved ? klp::Interval(c.delta_sq, 160).sqrt().lo_string(4) : "-";
        cj["S"] = klp::sci_string(c.S);
        cj["T"] = klp::sci_string(c.T);
        cj["H"] = c.H;
        j["cells"].push_back(cj);
    }
    j["max_H"] = summary.max_H;
    j["unresolved"] = ordered_json::array();
    for (const auto& c : summary.unresolved)
        j["unresolved"].push_back({{"k", c.k},
                                   {"d1", c.d1},
                                   {"d2", c.d2},
                                   {"ell", c.ell},
                                   {"C_used", klp::sci_string(c.C_used)}});
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
        std::cout << "max_H = " << summary.max_H << " (" << summary.cells.size()
                  << " cells) -> " << out_path << "\n";
    }
    return summary.all_resolved() ? 0 : 2;
}

klp::RunConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open config file " + path);
    klp::RunConfig cfg = klp::RunConfig::desk();
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto last = s.find_last_not_of(" \t\r");
            s.erase(last == std::string::npos ? 0 : last + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "k_min") cfg.k_min = std::stol(value);
        else if (key == "k_max") cfg.k_max = std::stol(value);
        else if (key == "n_cap") cfg.n_cap = std::stol(value);
        else if (key == "red_k_max") cfg.red_k_max = std::stol(value);
        else if (key == "full_grids") cfg.full_grids = value == "1" || value == "true";
        else if (key == "precision_bits") cfg.precision_bits = std::stol(value);
        else if (key == "parallelism") cfg.parallelism = std::stoi(value);
        else if (key == "out") cfg.output_path = value;
        else throw CLI::ValidationError("unknown config key '" + key + "'");
    }
    return cfg;
}

int cmd_verify_all(const klp::RunConfig& cfg) {
    auto report = klp::run_all(cfg);
    std::cout << "digit bounds: " << (report.digit_bounds.ok ? "ok" : "FAILED") << " ("
              << report.digit_bounds.checked << " checked)\n";
    std::cout << "small case:   " << (report.small_case.passed() ? "ok" : "FAILED") << " ("
              << report.small_case.searched << " + " << report.small_case.widened_searched
              << " candidates, " << report.small_case.hits.size() << " hits)\n";
    std::cout << "case 1:       " << (report.case1.passed() ? "ok" : "FAILED")
              << " (ell<=" << report.case1.ell_cap << ", m<=" << report.case1.m_cap
              << ", n<=" << report.case1.n_search << ", " << report.case1.terms_checked
              << " terms, " << report.case1.hits.size() << " hits)\n";
    std::cout << "case 2:       " << (report.case2.passed() ? "ok" : "FAILED")
              << " (round1 k<=" << report.case2.round1.k_cap
              << ", round2 k<=" << report.case2.round2.k_cap << ")\n";
    std::cout << "verdict: " << report.verdict << "\n";
    return report.verdict.rfind("no solutions", 0) == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-generalized Lucas / repdigit-palindrome verification toolkit"};
    app.require_subcommand(1);

    // seq
    auto* seq = app.add_subcommand("seq", "print exact sequence terms");
    long seq_k = 2, seq_n = 0, seq_n_max = -1;
    bool seq_json = false;
    seq->add_option("--k", seq_k, "order of the recurrence")->required();
    seq->add_option("--n", seq_n, "first index")->required();
    auto* seq_max_opt = seq->add_option("--n-max", seq_n_max, "last index (default: n)");
    seq->add_flag("--json", seq_json, "one JSON object per line");

    // alpha
    auto* alpha = app.add_subcommand("alpha", "certified dominant-root constants");
    long alpha_k = 2;
    int alpha_digits = 30;
    bool alpha_json = false;
    alpha->add_option("--k", alpha_k)->required();
    alpha->add_option("--digits", alpha_digits, "decimal digits to print");
    alpha->add_flag("--json", alpha_json);

    // pal
    auto* pal = app.add_subcommand("pal", "palindromic repdigit decomposition");
    std::string pal_value;
    bool pal_power = false;
    pal->add_option("--check", pal_value, "integer to decompose");
    pal->add_flag("--power-case", pal_power, "search the 3*2^t palindrome cells");

    // matveev
    auto* mat = app.add_subcommand("matveev", "linear-form lower bound");
    std::string mat_kind, mat_n = "8";
    long mat_k = 3, mat_ell = 1, mat_m = 1;
    int mat_d1 = 1, mat_d2 = 0;
    bool mat_json = false;
    mat->add_option("--kind", mat_kind, "G1|G2|G3|G4")->required();
    mat->add_option("--k", mat_k);
    mat->add_option("--n", mat_n, "n (also the coefficient bound B)");
    mat->add_option("--d1", mat_d1);
    mat->add_option("--d2", mat_d2);
    mat->add_option("--ell", mat_ell);
    mat->add_option("--m", mat_m);
    mat->add_flag("--json", mat_json);

    // reduce
    auto* red = app.add_subcommand("reduce", "lattice reduction sweep");
    std::string red_form, red_krange = "3:3", red_c, red_nbound, red_ellrange, red_out;
    int red_threads = 1;
    red->add_option("--form", red_form, "G1|G2|G3|G4")->required();
    red->add_option("--k-range", red_krange, "A:B (G1/G2)");
    red->add_option("--c", red_c, "scaling constant, e.g. 2.1e178")->required();
    red->add_option("--n-bound", red_nbound, "coefficient bound, e.g. 8.8e58")->required();
    red->add_option("--ell-range", red_ellrange, "A:B (G2/G4)");
    red->add_option("--threads", red_threads);
    red->add_option("--out", red_out, "write the JSON report here");

    // verify-all
    auto* ver = app.add_subcommand("verify-all", "run the whole verification");
    std::string ver_preset, ver_config;
    ver->add_option("--preset", ver_preset, "desk|full");
    ver->add_option("--config", ver_config, "flat key=value config file");

    try {
        app.parse(argc, argv);

        if (*seq) return cmd_seq(seq_k, seq_n, seq_max_opt->count() ? seq_n_max : seq_n, seq_json);
        if (*alpha) return cmd_alpha(alpha_k, alpha_digits, alpha_json);
        if (*pal) {
            if (pal_power) return cmd_pal_power_case();
            if (!pal_value.empty()) return cmd_pal_check(pal_value);
            std::cerr << "pal: need --check or --power-case\n";
            return 1;
        }
        if (*mat)
            return cmd_matveev(mat_kind, mat_k, mat_n, mat_d1, mat_d2, mat_ell, mat_m, mat_json);
        if (*red)
            return cmd_reduce(red_form, red_krange, red_c, red_nbound, red_ellrange, red_threads,
                              red_out);
        if (*ver) {
            klp::RunConfig cfg;
            if (!ver_config.empty())
                cfg = config_from_file(ver_config);
            else if (ver_preset == "full")
                cfg = klp::RunConfig::full_scale();
            else if (ver_preset == "desk" || ver_preset.empty())
                cfg = klp::RunConfig::desk();
            else {
                std::cerr << "unknown preset '" << ver_preset << "'\n";
                return 1;
            }
            return cmd_verify_all(cfg);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
