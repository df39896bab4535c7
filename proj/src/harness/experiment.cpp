#include "ldtlab/harness/experiment.hpp"

#include "ldtlab/corrector.hpp"
#include "ldtlab/errors.hpp"
#include "ldtlab/harness/io.hpp"
#include "ldtlab/harness/plant.hpp"
#include "ldtlab/incidence.hpp"
#include "ldtlab/support.hpp"

#include <algorithm>
#include <chrono>

namespace ldtlab::harness {

using nlohmann::json;

namespace {

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

class Stopwatch {
public:
    Stopwatch(const ExperimentConfig& cfg, TestReport& r) : on_(cfg.timings), r_(r) {}
    void lap(const std::string& name) {
        if (!on_) return;
        const auto now = std::chrono::steady_clock::now();
        r_.timings.emplace_back(name, std::chrono::duration<double>(now - t_).count());
        t_ = now;
    }

private:
    bool on_;
    TestReport& r_;
    std::chrono::steady_clock::time_point t_ = std::chrono::steady_clock::now();
};

ReportPoly report_poly(const Space& S, const PointsTable& f, const MultiPoly& Q) {
    return {dense_coeffs(Q, S.m(), f.d),
            Rational(i64(agreement_count(S, f, Q)), i64(S.num_points()))};
}

TestReport skeleton(const ExperimentConfig& cfg, std::uint64_t seed) {
    TestReport r;
    r.config = config_to_json(cfg);
    r.seed = seed;
    r.pipeline = pipeline_name(cfg.pipeline);
    return r;
}

void run_ldt(const ExperimentConfig& cfg, const Space& S, const PointsTable& f,
             const std::optional<LinesOracle>& oracle, std::uint64_t seed, TestReport& r, Stopwatch& sw) {
    const LinesOracle O = oracle ? *oracle : canonical_oracle(S, f);
    r.accept_exact = accept_prob_exact(S, f, O);
    r.stages.push_back({"accept",
                        "ok",
                        {{"framing", std::string(framing_name(O.framing()))},
                         {"bot_lines", i64(O.bot_count())},
                         {"accept", *r.accept_exact}}});
    sw.lap("accept");
    if (cfg.sampled_trials > 0) {
        auto s = accept_prob_sampled(S, f, O, cfg.sampled_trials, seed);
        r.accept_sampled = SampledSummary{s.estimate, s.half_width, s.trials, s.accepts};
        r.stages.push_back({"sampled", "ok", {{"trials", i64(s.trials)}, {"accepts", i64(s.accepts)}}});
        sw.lap("sampled");
    }
    try {
        auto prof = delta_profile(S, f, cfg.with_planes);
        DeltaSummary ds;
        ds.global = prof.global;
        std::uint64_t worst = 0, total = 0;
        for (auto a : prof.line_agree) {
            worst = std::max<std::uint64_t>(worst, S.q() - a);
            total += S.q() - a;
        }
        ds.max_line = Rational(i64(worst), S.q());
        ds.mean_line = Rational(i64(total), i64(prof.line_agree.size()) * S.q());
        if (!prof.per_plane.empty()) ds.max_plane = *std::max_element(prof.per_plane.begin(), prof.per_plane.end());
        r.delta = ds;
        r.stages.push_back({"delta", "ok", {{"global", ds.global}, {"planes", i64(prof.per_plane.size())}}});
    } catch (const BudgetExceeded& e) {
        r.stages.push_back({"delta", "skipped", {{"reason", std::string(e.what())}}});
    }
    sw.lap("delta");
    if (cfg.eps) {
        auto good = epsilon_good(S, f, O, *cfg.eps);
        auto W = make_well_behaved(S, f, O, *cfg.eps);
        r.stages.push_back({"eps_good",
                            "ok",
                            {{"eps", *cfg.eps},
                             {"good_points", i64(good.size())},
                             {"well_behaved_bot_lines", i64(W.bot_count())}}});
        sw.lap("eps_good");
    }
}

void run_decode2(const ExperimentConfig& cfg, const Space& S, const PointsTable& f, std::uint64_t seed,
                 TestReport& r, Stopwatch& sw) {
    BiDecodeParams p;
    p.min_agreement = cfg.min_agreement;
    p.D_max = cfg.D_max;
    p.seed = seed;
    auto res = decode_bivariate(S, f, *cfg.eps, p);
    for (auto& st : res.stages) r.stages.push_back(std::move(st));
    for (const auto& e : res.results) r.results.push_back({dense_coeffs(e.Q, 2, f.d), e.agreement});
    r.extra["decode2"] = {{"eps", rational_to_json(res.eps)}, {"min_agreement", rational_to_json(res.min_agreement)}};
    sw.lap("decode2");
    if (cfg.forms) {
        auto fm = list_and_highagreement_forms(S, f, cfg.forms_eps0, *cfg.eps, std::nullopt, Rational(1, 10),
                                               cfg.brute_budget);
        json j = {{"h1", rational_to_json(fm.h1)},
                  {"list_size", fm.list.size()},
                  {"good_points", fm.good_points},
                  {"unexplained_good", fm.unexplained_good},
                  {"unexplained_fraction", rational_to_json(fm.unexplained_fraction)},
                  {"list_form_met", fm.list_form_met}};
        if (fm.low_error) {
            const auto& w = *fm.low_error;
            j["low_error"] = {{"delta", rational_to_json(w.delta)},
                              {"hypothesis_met", w.hypothesis_met},
                              {"corr_agreement", rational_to_json(w.corr_agreement)},
                              {"q_agreement", rational_to_json(w.q_agreement)},
                              {"bound", rational_to_json(w.bound)},
                              {"bound_met", w.bound_met},
                              {"coeffs", w.Q ? json(dense_coeffs(*w.Q, 2, f.d)) : json(nullptr)}};
        } else {
            j["low_error"] = nullptr;
        }
        r.extra["forms"] = j;
        r.stages.push_back({"forms", "ok", {{"list_form_met", fm.list_form_met}}});
        sw.lap("forms");
    }
}

void run_decodem(const ExperimentConfig& cfg, const Space& S, const PointsTable& f, TestReport& r,
                 Stopwatch& sw) {
    MultiDecodeParams p;
    p.list_threshold = cfg.list_threshold;
    p.min_agreement = cfg.min_agreement;
    p.trigger_delta = cfg.trigger_delta;
    p.advice_cap = cfg.advice_cap;
    p.max_iters = cfg.max_iters;
    p.best_effort = cfg.best_effort;
    p.budget = cfg.enum_budget;
    auto res = decode_multivariate(S, f, *cfg.eps, p);
    for (auto& st : res.stages) r.stages.push_back(std::move(st));
    for (const auto& e : res.results) r.results.push_back({dense_coeffs(e.Q, S.m(), f.d), e.agreement});
    r.accept_exact = res.accept;
    json adv = json::array();
    for (const auto& a : res.advice) {
        json x = json::array();
        for (auto c : a.x.coords()) x.push_back(c);
        adv.push_back({{"x", x},
                       {"sigma", a.sigma},
                       {"rank", a.rank},
                       {"bot_count", a.bot_count},
                       {"corrected_delta", a.corrected_delta ? rational_to_json(*a.corrected_delta) : json(nullptr)},
                       {"outcome", a.outcome},
                       {"coeffs", a.Q ? json(dense_coeffs(*a.Q, S.m(), f.d)) : json(nullptr)}});
    }
    r.extra["advice"] = adv;
    r.extra["decodem"] = {{"eps", rational_to_json(res.eps)},
                          {"list_threshold", rational_to_json(res.list_threshold)},
                          {"gamma", rational_to_json(res.gamma)},
                          {"mu", rational_to_json(res.mu)},
                          {"min_agreement", rational_to_json(res.min_agreement)},
                          {"hypothesis_met", res.hypothesis_met},
                          {"candidates", res.candidates},
                          {"density_met", res.density_met}};
    sw.lap("decodem");
}

void run_correct(const ExperimentConfig& cfg, const Space& S, const PointsTable& f, TestReport& r,
                 Stopwatch& sw, const std::vector<MultiPoly>& truth) {
    auto O = canonical_oracle(S, f);
    auto c = plurality_correct(S, f, O);
    std::uint64_t moved = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) moved += f.values[i] != c.table.values[i];
    const Rational moved_frac(i64(moved), i64(S.num_points()));
    const Rational corr_delta = delta_global(S, c.table);
    r.accept_exact = 1 - c.delta;
    r.stages.push_back({"plurality",
                        "ok",
                        {{"delta_f", c.delta},
                         {"moved", i64(moved)},
                         {"moved_fraction", moved_frac},
                         {"moved_within_2delta", moved_frac <= 2 * c.delta},
                         {"corrected_delta", corr_delta},
                         {"halved", corr_delta <= c.delta / 2}}});
    sw.lap("plurality");
    auto it = iterate_correct(S, f, cfg.max_iters);
    StageRecord st{"iterate", it ? "ok" : "failed", {}};
    if (it) {
        st.metrics.emplace_back("iters", std::int64_t(it->iters));
        r.results.push_back(report_poly(S, f, it->Q));
    }
    json deltas = json::array();
    if (it)
        for (const auto& d : it->deltas) deltas.push_back(rational_to_json(d));
    r.extra["iterate_deltas"] = deltas;
    if (!truth.empty()) {
        const Rational dist = distance(S, f, truth[0]);
        st.metrics.emplace_back("distance_to_truth", dist);
        st.metrics.emplace_back("within_4delta", dist <= 4 * c.delta);
        st.metrics.emplace_back("recovered_truth", it.has_value() && it->Q == truth[0]);
    }
    r.stages.push_back(std::move(st));
    sw.lap("iterate");
}

void run_spectra(const ExperimentConfig& cfg, TestReport& r, Stopwatch& sw) {
    json rows = json::array();
    for (auto q : cfg.spectra.qs)
        for (auto m : cfg.spectra.ms)
            for (auto kind : cfg.spectra.kinds) {
                // Plane graphs need m >= 3 (F_q^2 is a single plane).
                if (kind != GraphKind::points_lines && m < 3) continue;
                auto row = spectrum_row(kind, q, m);
                rows.push_back({{"kind", graph_kind_name(kind)},
                                {"q", q},
                                {"m", m},
                                {"lambda", row.lambda},
                                {"expected", row.expected},
                                {"closed_form", row.closed_form},
                                {"abs_err", row.abs_err}});
            }
    r.extra["spectra"] = rows;
    r.stages.push_back({"spectra", "ok", {{"rows", i64(rows.size())}}});
    sw.lap("spectra");
}

void run_count(const ExperimentConfig& cfg, TestReport& r, Stopwatch& sw) {
    json rows = json::array();
    std::int64_t violations = 0;
    for (auto d : cfg.count.ds) {
        std::vector<unsigned> Ds = cfg.count.Ds;
        if (Ds.empty()) Ds = {d, 2 * d, 21 * d, 70};
        for (auto D : Ds)
            for (auto p : cfg.count.ps) {
                auto b = support_bounds(d, D, p);
                violations += !b.two_sided_holds + !b.half_holds + !b.final_holds;
                rows.push_back({{"d", d},
                                {"D", D},
                                {"p", p},
                                {"n_dD", b.n_dD},
                                {"n_dDp", b.n_dDp},
                                {"lower", rational_to_json(b.lower)},
                                {"upper", rational_to_json(b.upper)},
                                {"final_bound", rational_to_json(b.final_bound)},
                                {"two_sided_holds", b.two_sided_holds},
                                {"half_holds", b.half_holds},
                                {"final_applies", b.final_applies},
                                {"final_holds", b.final_holds}});
            }
    }
    r.extra["count"] = rows;
    r.stages.push_back({"count", "ok", {{"rows", i64(rows.size())}, {"violations", violations}}});
    sw.lap("count");
}

template <class Fn>
void guarded(TestReport& r, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        r.status = ReportStatus::config_error;
        r.error = e.what();
    } catch (const BudgetExceeded& e) {
        r.status = ReportStatus::budget_exceeded;
        r.error = e.what();
    } catch (const std::exception& e) {
        r.status = ReportStatus::stage_failure;
        r.error = e.what();
    }
}

} // namespace

TestReport run_on_table(const ExperimentConfig& cfg, const PointsTable& f, const std::optional<LinesOracle>& oracle,
                        const std::vector<MultiPoly>& truth, std::uint64_t seed) {
    TestReport r = skeleton(cfg, seed);
    guarded(r, [&] {
        validate(cfg);
        if (f.q != cfg.q || f.m != cfg.m || f.d != cfg.d) throw ConfigError("table does not match (q, m, d)");
        Space S(cfg.q, cfg.m);
        Stopwatch sw(cfg, r);
        for (const auto& Q : truth) r.truth.push_back(report_poly(S, f, Q));
        switch (cfg.pipeline) {
        case Pipeline::ldt: run_ldt(cfg, S, f, oracle, seed, r, sw); break;
        case Pipeline::decode2: run_decode2(cfg, S, f, seed, r, sw); break;
        case Pipeline::decodem: run_decodem(cfg, S, f, r, sw); break;
        case Pipeline::correct: run_correct(cfg, S, f, r, sw, truth); break;
        default: throw ConfigError("pipeline does not take a table");
        }
    });
    return r;
}

TestReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    TestReport r = skeleton(cfg, seed);
    guarded(r, [&] {
        validate(cfg);
        Stopwatch sw(cfg, r);
        if (cfg.pipeline == Pipeline::spectra) return run_spectra(cfg, r, sw);
        if (cfg.pipeline == Pipeline::count) return run_count(cfg, r, sw);
        auto inst = plant_instance(cfg, seed);
        sw.lap("plant");
        auto timings = r.timings;
        r = run_on_table(cfg, inst.f, std::nullopt, inst.truth, seed);
        r.timings.insert(r.timings.begin(), timings.begin(), timings.end());
        r.extra["plant"] = {{"model", noise_name(cfg.noise.kind)}, {"changed", inst.changed}};
    });
    return r;
}

std::vector<TestReport> run_all_seeds(const ExperimentConfig& cfg) {
    std::vector<TestReport> out;
    for (auto s : cfg.seeds) out.push_back(run_experiment(cfg, s));
    return out;
}

} // namespace ldtlab::harness
