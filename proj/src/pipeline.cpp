#include "klp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "klp/baker.hpp"
#include "klp/sequence.hpp"
#include "klp/util.hpp"

namespace klp {

using ordered_json = nlohmann::ordered_json;

RunConfig RunConfig::desk() {
    RunConfig cfg;
    cfg.k_min = 3;
    cfg.k_max = 60;
    cfg.n_cap = 400;
    cfg.red_k_max = 60;
    cfg.full_grids = false;
    return cfg;
}

RunConfig RunConfig::full_scale() {
    RunConfig cfg;
    cfg.k_min = 3;
    cfg.k_max = 1500;
    cfg.n_cap = 1871;
    cfg.red_k_max = 1500;
    cfg.full_grids = true;
    return cfg;
}

void RunConfig::validate() const {
    if (k_min < 3) throw std::domain_error("config: k_min must be >= 3");
    if (k_max < k_min) throw std::domain_error("config: k_max below k_min");
    if (n_cap < 8) throw std::domain_error("config: n_cap must be >= 8");
    if (red_k_max < 3) throw std::domain_error("config: red_k_max must be >= 3");
}

int RunConfig::threads() const {
    if (parallelism > 0) return parallelism;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

bool digit_bound_check(long k, long n, long ell, long m) {
    (void)k;
    if (n < 8 || ell < 1 || m < 1) throw std::domain_error("digit_bound_check: out of range");
    long digits = 2 * ell + m;
    return digits - 3 < n && n < 5 * digits + 1;
}

namespace {

// thread-safe per-k context cache for the reduction sweeps
class AlgCache {
public:
    explicit AlgCache(long bits) : bits_(bits) {}

    std::shared_ptr<const AlgebraicContext> get(long k) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(k);
            if (it != cache_.end()) return it->second;
        }
        auto ctx = std::make_shared<const AlgebraicContext>(k, Precision::with_bits(bits_));
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(k, std::move(ctx)).first->second;
    }

private:
    long bits_;
    std::mutex mutex_;
    std::map<long, std::shared_ptr<const AlgebraicContext>> cache_;
};

std::vector<std::pair<int, int>> all_digit_pairs() {
    std::vector<std::pair<int, int>> pairs;
    for (int d1 = 1; d1 <= 9; ++d1)
        for (int d2 = 0; d2 <= 9; ++d2)
            if (d2 != d1) pairs.emplace_back(d1, d2);
    return pairs;
}

std::vector<std::pair<int, int>> single_digit_cells() {
    std::vector<std::pair<int, int>> pairs;
    for (int d1 = 1; d1 <= 9; ++d1) pairs.emplace_back(d1, 0);
    return pairs;
}

constexpr double kLog2Of10 = 3.321928094887362;

}  // namespace

DigitBoundReport run_digit_bounds(const RunConfig& cfg) {
    // Synthetic palindromes: every n admitted by the growth envelope
    // alpha^(n-1) <= P <= 2 alpha^n must satisfy the digit-count window.
    DigitBoundReport rep;
    Precision prec = Precision::with_bits(256);
    for (long k : {cfg.k_min, std::min(cfg.k_max, cfg.k_min + 7), cfg.k_max}) {
        AlgebraicContext alg(k, prec);
        for (int d1 : {1, 4, 9})
            for (int d2 : {0, 5})
                for (long ell : {1L, 2L, 5L})
                    for (long m : {1L, 3L, 8L}) {
                        if (d1 == d2) continue;
                        mpz_class p = compose({d1, d2, ell, m});
                        long digits = 2 * ell + m;
                        if (pow10_z(static_cast<unsigned long>(digits - 1)) > p ||
                            p >= pow10_z(static_cast<unsigned long>(digits)))
                            return rep;  // ok stays false
                        // n window from the growth envelope
                        Interval lp = Interval(p, 256).log();
                        double la = alg.log_alpha().mid_double();
                        long n_lo = static_cast<long>(
                            std::ceil((lp - Interval(mpq_class(2), 256).log()).mid_double() / la));
                        long n_hi =
                            static_cast<long>(std::floor(lp.mid_double() / la)) + 1;
                        for (long n = std::max(8L, n_lo); n <= n_hi; ++n) {
                            ++rep.checked;
                            if (!digit_bound_check(k, n, ell, m)) return rep;
                        }
                    }
    }
    rep.ok = true;
    return rep;
}

SmallCaseReport run_small_case() {
    SmallCaseReport rep;
    // the screens themselves, verified over their stated ranges
    rep.screens_ok = true;
    for (long n : {6L, 10L, 16L, 40L})
        for (long ell = 1; ell <= 6; ++ell)
            for (long m = 1; m <= 16; ++m) {
                bool keep = small_case_filter(n, ell, m);
                bool expect = !(ell >= 4 || (n >= 16 && ell + m >= 14));
                if (keep != expect) rep.screens_ok = false;
            }

    PowerCaseResult base = power_case_search(3, 12);
    rep.searched = base.searched;
    rep.hits = base.hits;
    // widened search with the screens off
    PowerCaseResult wide = power_case_search(4, 13);
    rep.widened_searched = wide.searched;
    rep.widened_hits = wide.hits;
    return rep;
}

namespace {

std::vector<SearchHit> sequence_search(long k_min, long k_max, long n_lo, long n_hi, int threads,
                                       long* terms_checked) {
    std::vector<long> ks;
    for (long k = k_min; k <= k_max; ++k) ks.push_back(k);
    std::vector<std::vector<SearchHit>> found(ks.size());
    std::atomic<size_t> next{0};
    std::atomic<long> counted{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= ks.size()) return;
            long k = ks[i];
            KLucasSequence seq(k);
            seq.extend(n_hi);
            long local = 0;
            for (long n = n_lo; n <= n_hi; ++n) {
                ++local;
                auto dec = decompose(seq.term(n));
                if (dec) found[i].push_back(SearchHit{k, n, seq.term(n), *dec});
            }
            counted += local;
        }
    };
    std::vector<std::thread> pool;
    int tc = std::max(1, threads);
    for (int t = 0; t < tc; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::vector<SearchHit> hits;
    for (auto& f : found)
        for (auto& h : f) hits.push_back(std::move(h));
    if (terms_checked) *terms_checked = counted.load();
    return hits;
}

}  // namespace

Case1Report run_case1(const RunConfig& cfg) {
    cfg.validate();
    Case1Report rep;
    const mpz_class C_ell = mpz_from_sci("2.1e178");
    const mpz_class C_m = mpz_from_sci("3.0e178");
    const mpz_class n_bound = mpz_from_sci("8.8e58");

    long ctx_bits = Precision::for_scaling(C_m).bits + 10 * 5 + 16;
    AlgCache cache(ctx_bits);

    ReductionPlan plan;
    plan.form = FormKind::G1;
    plan.k_min = 3;
    plan.k_max = cfg.red_k_max;
    plan.k_stride = cfg.full_grids ? 1 : std::max<long>(1, (cfg.red_k_max - 3) / 12);
    plan.digit_pairs = single_digit_cells();
    plan.C = C_ell;
    plan.n_bound = n_bound;
    plan.c3 = 18.0;
    plan.c4 = std::log(10.0);
    plan.parallelism = cfg.threads();
    plan.keep_cell_records = false;  // sweep-scale: aggregates only
    plan.alg_provider = [&cache](long k) { return cache.get(k); };
    rep.round_ell = reduction_round(plan);
    if (!rep.round_ell.all_resolved()) return rep;
    rep.ell_cap = static_cast<long>(std::floor(rep.round_ell.max_H));

    plan.form = FormKind::G2;
    plan.C = C_m;
    plan.c3 = 19.0;
    plan.ell_min = 1;
    plan.ell_max = rep.ell_cap;
    plan.ell_stride = cfg.full_grids ? 1 : std::max<long>(1, rep.ell_cap / 4);
    plan.digit_pairs = cfg.full_grids
                           ? all_digit_pairs()
                           : std::vector<std::pair<int, int>>{{1, 0}, {1, 4}, {5, 7}, {9, 8}};
    rep.round_m = reduction_round(plan);
    if (!rep.round_m.all_resolved()) return rep;
    rep.m_cap = static_cast<long>(std::floor(rep.round_m.max_H));

    rep.n_search = std::min(5 * (2 * rep.ell_cap + rep.m_cap) + 1, cfg.n_cap);
    rep.hits = sequence_search(cfg.k_min, cfg.k_max, 7, rep.n_search, cfg.threads(),
                               &rep.terms_checked);
    rep.resolved = true;
    return rep;
}

Case2Report run_case2(const RunConfig& cfg) {
    cfg.validate();
    Case2Report rep;
    rep.symbolic_k_bound = case2_closure(Case2Branch::b).k_bound;
    rep.symbolic_n_bound = case2_closure(Case2Branch::b).n_bound;
    // branch-a closure must also land below its cap
    (void)case2_closure(Case2Branch::a);

    auto run_round = [&](const mpz_class& C, const mpz_class& n_bound) {
        Case2Round round;
        ReductionPlan plan;
        plan.form = FormKind::G3;
        plan.digit_pairs = single_digit_cells();
        plan.C = C;
        plan.n_bound = n_bound;
        plan.c3 = 59.0;
        plan.c4 = std::log(2.0);
        plan.parallelism = cfg.threads();
        plan.keep_cell_records = false;
        round.g3 = reduction_round(plan);
        if (!round.g3.all_resolved()) return round;
        round.min_bound = round.g3.max_H;
        round.ell_cap = static_cast<long>(std::floor(round.min_bound / kLog2Of10)) + 1;

        plan.form = FormKind::G4;
        plan.c3 = 11.0;
        plan.ell_min = 1;
        plan.ell_max = round.ell_cap;
        plan.ell_stride = cfg.full_grids ? 1 : std::max<long>(1, round.ell_cap / 8);
        plan.digit_pairs = all_digit_pairs();
        round.g4 = reduction_round(plan);
        if (!round.g4.all_resolved()) return round;
        round.k_cap = 2.0 * std::max(round.g3.max_H, round.g4.max_H);
        return round;
    };

    const mpz_class C1 = mpz_from_sci("1.3e867");
    const mpz_class C2 = mpz_from_sci("9.0e188");
    rep.round1 = run_round(C1, mpz_from_sci("3.5e288"));
    if (!rep.round1.g3.all_resolved() || !rep.round1.g4.all_resolved()) return rep;

    // updated n bound from the reduced k cap
    double k1 = rep.round1.k_cap;
    double n2 = 1.63e29 * std::pow(k1, 8) * std::pow(std::log(k1), 5);
    // exact ceiling with one digit of headroom
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_d(t, n2 * 1.01, MPFR_RNDU);
    mpfr_ceil(t, t);
    mpz_class n2_z;
    mpfr_get_z(n2_z.get_mpz_t(), t, MPFR_RNDU);
    mpfr_clear(t);
    rep.n_bound2 = n2_z;

    rep.round2 = run_round(C2, rep.n_bound2);
    if (!rep.round2.g3.all_resolved() || !rep.round2.g4.all_resolved()) return rep;

    rep.contradiction = rep.round2.k_cap < 1500.0;
    rep.resolved = true;
    return rep;
}

namespace {

std::string sci_sqrt(const mpq_class& squared) {
    if (squared <= 0) return "0";
    return Interval(squared, 160).sqrt().lo_string(4);
}

ordered_json value_json(const mpz_class& v) {
    std::string dec = v.get_str();
    if (dec.size() <= 10000) return dec;
    ordered_json digest;
    digest["digits"] = dec.size();
    digest["head"] = dec.substr(0, 20);
    digest["tail"] = dec.substr(dec.size() - 20);
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(dec)));
    digest["fnv64"] = buf;
    return digest;
}

ordered_json summary_json(const ReductionSummary& s, bool include_cells) {
    ordered_json j;
    switch (s.form) {
        case FormKind::G1: j["form"] = "G1"; break;
        case FormKind::G2: j["form"] = "G2"; break;
        case FormKind::G3: j["form"] = "G3"; break;
        case FormKind::G4: j["form"] = "G4"; break;
    }
    j["cells"] = ordered_json::array();
    if (include_cells) {
        for (const auto& c : s.cells) {
            ordered_json cj;
            cj["k"] = c.k;
            cj["d1"] = c.d1;
            cj["d2"] = c.d2;
            cj["ell"] = c.ell;
            cj["C_used"] = sci_string(c.C_used);
            cj["delta"] = c.resolved ? sci_sqrt(c.delta_sq) : "-";
            cj["S"] = sci_string(c.S);
            cj["T"] = sci_string(c.T);
            cj["H"] = c.H;
            j["cells"].push_back(cj);
        }
    }
    j["cell_count"] = s.cell_count;
    j["max_H"] = s.max_H;
    j["unresolved"] = ordered_json::array();
    for (const auto& c : s.unresolved)
        j["unresolved"].push_back(
            {{"k", c.k}, {"d1", c.d1}, {"d2", c.d2}, {"ell", c.ell}, {"C_used", sci_string(c.C_used)}});
    return j;
}

}  // namespace

std::string report_to_json(const ProofReport& report, const RunConfig& cfg, bool deterministic) {
    ordered_json j;
    j["schema_version"] = 1;
    j["verdict"] = report.verdict;
    j["config"] = {{"k_min", cfg.k_min},
                   {"k_max", cfg.k_max},
                   {"n_cap", cfg.n_cap},
                   {"red_k_max", cfg.red_k_max},
                   {"full_grids", cfg.full_grids},
                   {"parallelism", cfg.threads()}};

    ordered_json stages;
    stages["digit_bounds"] = {{"checked", report.digit_bounds.checked},
                              {"ok", report.digit_bounds.ok}};

    ordered_json small;
    small["screens_ok"] = report.small_case.screens_ok;
    small["searched"] = report.small_case.searched;
    small["widened_searched"] = report.small_case.widened_searched;
    small["hits"] = ordered_json::array();
    for (const auto& h : report.small_case.hits)
        small["hits"].push_back({{"d1", h.dec.d1},
                                 {"d2", h.dec.d2},
                                 {"ell", h.dec.ell},
                                 {"m", h.dec.m},
                                 {"n", h.n},
                                 {"value", value_json(h.value)}});
    small["widened_hits"] = ordered_json::array();
    for (const auto& h : report.small_case.widened_hits)
        small["widened_hits"].push_back({{"n", h.n}, {"value", value_json(h.value)}});
    stages["small_case"] = small;

    ordered_json c1;
    c1["round_ell"] = summary_json(report.case1.round_ell, false);
    c1["round_m"] = summary_json(report.case1.round_m, false);
    c1["ell_cap"] = report.case1.ell_cap;
    c1["m_cap"] = report.case1.m_cap;
    c1["n_search"] = report.case1.n_search;
    c1["terms_checked"] = report.case1.terms_checked;
    c1["hits"] = ordered_json::array();
    for (const auto& h : report.case1.hits)
        c1["hits"].push_back({{"k", h.k},
                              {"n", h.n},
                              {"d1", h.dec.d1},
                              {"d2", h.dec.d2},
                              {"ell", h.dec.ell},
                              {"m", h.dec.m},
                              {"value", value_json(h.value)}});
    c1["resolved"] = report.case1.resolved;
    stages["case1"] = c1;

    ordered_json c2;
    c2["symbolic_k_bound"] = report.case2.symbolic_k_bound;
    c2["symbolic_n_bound"] = report.case2.symbolic_n_bound;
    auto round_json = [&](const Case2Round& r) {
        ordered_json rj;
        rj["g3"] = summary_json(r.g3, false);
        rj["g4"] = summary_json(r.g4, false);
        rj["min_bound"] = r.min_bound;
        rj["ell_cap"] = r.ell_cap;
        rj["k_cap"] = r.k_cap;
        return rj;
    };
    c2["round1"] = round_json(report.case2.round1);
    c2["n_bound2"] = sci_string(report.case2.n_bound2);
    c2["round2"] = round_json(report.case2.round2);
    c2["contradiction"] = report.case2.contradiction;
    c2["resolved"] = report.case2.resolved;
    stages["case2"] = c2;

    j["stages"] = stages;
    if (!deterministic) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
    return j.dump(2);
}

ProofReport run_all(const RunConfig& cfg) {
    cfg.validate();
    ProofReport report;
    report.digit_bounds = run_digit_bounds(cfg);
    report.small_case = run_small_case();
    report.case1 = run_case1(cfg);
    report.case2 = run_case2(cfg);

    bool all_pass = report.digit_bounds.ok && report.small_case.passed() &&
                    report.case1.passed() && report.case2.passed();
    if (all_pass)
        report.verdict = cfg.full_grids ? "no solutions" : "no solutions (desk scale)";
    else
        report.verdict = "inconclusive";

    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) throw std::runtime_error("cannot write report to " + cfg.output_path);
        out << report_to_json(report, cfg) << "\n";
    }
    return report;
}

}  // namespace klp
