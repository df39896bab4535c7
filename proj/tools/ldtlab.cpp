#include "ldtlab/corrector.hpp"
#include "ldtlab/errors.hpp"
#include "ldtlab/harness/config.hpp"
#include "ldtlab/harness/experiment.hpp"
#include "ldtlab/harness/io.hpp"
#include "ldtlab/harness/plant.hpp"
#include "ldtlab/harness/report.hpp"
#include "ldtlab/parallel.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace ldtlab;
using namespace ldtlab::harness;

namespace {

struct Output {
    std::string path;
    std::string format = "json";

    void add(CLI::App* app, const std::string& dflt = "json") {
        format = dflt;
        app->add_option("-o,--out", path, "Output file (stdout if omitted)");
        app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }
    void write(const TestReport& r) const {
        const std::string text = emit_report(r, format == "csv" ? ReportFormat::csv : ReportFormat::json);
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write " + path);
        out << text;
    }
};

struct TableOptions {
    std::string table;
    std::string eps;
    std::string min_agreement;
    std::uint64_t seed = 0;

    void add(CLI::App* app, bool need_eps) {
        app->add_option("-t,--table", table, "Table file")->required();
        auto* e = app->add_option("--eps", eps, "Agreement parameter, e.g. 2/5 or 0.4");
        if (need_eps) e->required();
        app->add_option("--min-agreement", min_agreement, "Reporting floor");
        app->add_option("--seed", seed, "Seed for randomized stages");
    }
    ExperimentConfig config(Pipeline p, const PointsTable& f) const {
        ExperimentConfig c;
        c.name = pipeline_name(p);
        c.pipeline = p;
        c.q = f.q;
        c.m = f.m;
        c.d = f.d;
        c.seeds = {seed};
        if (!eps.empty()) c.eps = parse_rational(eps);
        if (!min_agreement.empty()) c.min_agreement = parse_rational(min_agreement);
        return c;
    }
};

ExperimentConfig resolve_config(const std::string& path, const std::string& preset_name) {
    if (!path.empty() && !preset_name.empty()) throw ConfigError("give either --config or --preset");
    if (!path.empty()) return load_config(path);
    if (!preset_name.empty()) return preset(preset_name);
    throw ConfigError("need --config or --preset");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line-point low-degree testing laboratory"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (overrides LDTLAB_THREADS)");

    // run
    auto* run = app.add_subcommand("run", "Plant an instance from a config and run its pipeline");
    std::string cfg_path, preset_name;
    std::optional<std::uint64_t> run_seed;
    Output run_out;
    run->add_option("-c,--config", cfg_path, "Config JSON");
    run->add_option("--preset", preset_name, "Named config: tiny, bi, multi, spectra");
    run->add_option("--seed", run_seed, "Seed (default: first seed of the config)");
    run_out.add(run);

    // decode2 / decodem / correct / ldt on a table file
    auto* dec2 = app.add_subcommand("decode2", "Bivariate list decoding of a table");
    TableOptions d2;
    std::optional<unsigned> d2_dmax;
    bool d2_forms = false;
    Output d2_out;
    d2.add(dec2, true);
    dec2->add_option("--D-max", d2_dmax, "Largest explainer weighted degree tried");
    dec2->add_flag("--forms", d2_forms, "Also evaluate the list and high-agreement forms");
    d2_out.add(dec2);

    auto* decm = app.add_subcommand("decodem", "Multivariate list decoding of a table");
    TableOptions dm;
    std::string dm_list;
    unsigned dm_cap = 32;
    bool dm_best = false;
    Output dm_out;
    dm.add(decm, true);
    decm->add_option("--list-threshold", dm_list, "Line list-decoding threshold");
    decm->add_option("--advice-cap", dm_cap, "Advice candidates tried");
    decm->add_flag("--best-effort", dm_best, "Run even when acceptance is below 5 eps");
    dm_out.add(decm);

    auto* corr = app.add_subcommand("correct", "Plurality and iterated correction of a table");
    TableOptions co;
    unsigned co_iters = 16;
    std::string co_table_out;
    Output co_out;
    co.add(corr, false);
    corr->add_option("--max-iters", co_iters, "Iteration cap");
    corr->add_option("--corrected-out", co_table_out, "Write the plurality-corrected table here");
    co_out.add(corr);

    auto* ldt = app.add_subcommand("ldt", "Acceptance probability and delta profile of a table");
    TableOptions lt;
    std::string lt_oracle;
    std::uint64_t lt_trials = 0;
    Output lt_out;
    lt.add(ldt, false);
    ldt->add_option("--oracle", lt_oracle, "Lines oracle file (canonical oracle if omitted)");
    ldt->add_option("--trials", lt_trials, "Sampled test repetitions");
    lt_out.add(ldt);

    // spectra / count
    auto* spec = app.add_subcommand("spectra", "Second eigenvalues of the incidence graphs");
    std::vector<std::uint32_t> sp_q{3, 5, 7};
    std::vector<std::size_t> sp_m{2, 3};
    std::vector<std::string> sp_kinds;
    Output sp_out;
    spec->add_option("--q", sp_q, "Field sizes")->delimiter(',');
    spec->add_option("--m", sp_m, "Dimensions")->delimiter(',');
    spec->add_option("--kinds", sp_kinds, "Graph kinds")->delimiter(',');
    sp_out.add(spec, "csv");

    auto* cnt = app.add_subcommand("count", "Monomial support counts against their size bounds");
    std::vector<unsigned> ct_d{1, 2, 3}, ct_D, ct_p{2, 3, 5};
    Output ct_out;
    cnt->add_option("--d", ct_d, "Degree weights")->delimiter(',');
    cnt->add_option("--D", ct_D, "Weighted-degree bounds (default d, 2d, 21d, 70)")->delimiter(',');
    cnt->add_option("--p", ct_p, "Characteristics")->delimiter(',');
    ct_out.add(cnt, "csv");

    // plant
    auto* plant = app.add_subcommand("plant", "Write the planted table of a config");
    std::string pl_cfg, pl_preset, pl_out, pl_oracle;
    std::optional<std::uint64_t> pl_seed;
    plant->add_option("-c,--config", pl_cfg, "Config JSON");
    plant->add_option("--preset", pl_preset, "Named config");
    plant->add_option("--seed", pl_seed, "Seed (default: first seed of the config)");
    plant->add_option("-o,--out", pl_out, "Table file")->required();
    plant->add_option("--oracle-out", pl_oracle, "Also write the canonical oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (threads) set_thread_count(threads);

    try {
        TestReport r;
        const Output* out = nullptr;
        if (*run) {
            auto cfg = resolve_config(cfg_path, preset_name);
            r = run_experiment(cfg, run_seed ? *run_seed : cfg.seeds.front());
            out = &run_out;
        } else if (*dec2) {
            auto f = load_table(d2.table);
            auto cfg = d2.config(Pipeline::decode2, f);
            cfg.D_max = d2_dmax;
            cfg.forms = d2_forms;
            r = run_on_table(cfg, f, std::nullopt, {}, d2.seed);
            out = &d2_out;
        } else if (*decm) {
            auto f = load_table(dm.table);
            auto cfg = dm.config(Pipeline::decodem, f);
            if (!dm_list.empty()) cfg.list_threshold = parse_rational(dm_list);
            cfg.advice_cap = dm_cap;
            cfg.best_effort = dm_best;
            r = run_on_table(cfg, f, std::nullopt, {}, dm.seed);
            out = &dm_out;
        } else if (*corr) {
            auto f = load_table(co.table);
            auto cfg = co.config(Pipeline::correct, f);
            cfg.max_iters = co_iters;
            r = run_on_table(cfg, f, std::nullopt, {}, co.seed);
            if (!co_table_out.empty() && r.status == ReportStatus::ok)
                save_table(co_table_out, plurality_correct(Space(f.q, f.m), f).table);
            out = &co_out;
        } else if (*ldt) {
            auto f = load_table(lt.table);
            auto cfg = lt.config(Pipeline::ldt, f);
            cfg.sampled_trials = lt_trials;
            std::optional<LinesOracle> O;
            if (!lt_oracle.empty()) O = load_oracle(lt_oracle, Space(f.q, f.m), f.d);
            r = run_on_table(cfg, f, O, {}, lt.seed);
            out = &lt_out;
        } else if (*spec) {
            ExperimentConfig cfg = preset("spectra");
            cfg.spectra.qs = sp_q;
            cfg.spectra.ms = sp_m;
            if (!sp_kinds.empty()) {
                cfg.spectra.kinds.clear();
                for (const auto& k : sp_kinds) cfg.spectra.kinds.push_back(parse_graph_kind(k));
            }
            r = run_experiment(cfg, 0);
            out = &sp_out;
        } else if (*cnt) {
            ExperimentConfig cfg;
            cfg.name = "count";
            cfg.pipeline = Pipeline::count;
            cfg.count = {ct_d, ct_D, ct_p};
            r = run_experiment(cfg, 0);
            out = &ct_out;
        } else if (*plant) {
            auto cfg = resolve_config(pl_cfg, pl_preset);
            auto inst = plant_instance(cfg, pl_seed ? *pl_seed : cfg.seeds.front());
            save_table(pl_out, inst.f);
            if (!pl_oracle.empty()) {
                Space S(cfg.q, cfg.m);
                save_oracle(pl_oracle, S, canonical_oracle(S, inst.f));
            }
            return 0;
        }
        out->write(r);
        if (r.status != ReportStatus::ok) std::cerr << "ldtlab: " << status_name(r.status) << ": " << r.error << "\n";
        return exit_code(r.status);
    } catch (const ConfigError& e) {
        std::cerr << "ldtlab: config error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "ldtlab: config error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "ldtlab: budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ldtlab: failure: " << e.what() << "\n";
        return 4;
    }
}
