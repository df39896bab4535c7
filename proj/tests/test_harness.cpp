#include "doctest.h"

#include "support.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/harness/config.hpp"
#include "ldtlab/harness/experiment.hpp"
#include "ldtlab/harness/io.hpp"
#include "ldtlab/harness/plant.hpp"
#include "ldtlab/harness/report.hpp"
#include "ldtlab/parallel.hpp"

#include <set>
#include <sstream>

using namespace ldtlab;
using namespace ldtlab::harness;
using nlohmann::json;

namespace {

std::int64_t ceil_mul(const Rational& r, std::uint64_t n) {
    const Rational x = r * Rational(static_cast<std::int64_t>(n));
    return (x.numerator() + x.denominator() - 1) / x.denominator();
}

ExperimentConfig noisy(std::uint32_t q, std::size_t m, unsigned d, NoiseKind kind) {
    ExperimentConfig c;
    c.q = q;
    c.m = m;
    c.d = d;
    c.noise.kind = kind;
    return c;
}

// The bi preset at q=31 keeps unit runs short.
ExperimentConfig small_bi() {
    auto c = preset("bi");
    c.q = 31;
    return c;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("config json round trip") {
    for (const auto& name : preset_names()) {
        auto c = preset(name);
        CHECK(config_from_json(config_to_json(c)) == c);
        CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
    }
    auto c = noisy(13, 3, 2, NoiseKind::mixture);
    c.noise.weights = {Rational(1, 3), Rational(1, 4)};
    c.eps = Rational(2, 5);
    c.D_max = 7;
    c.seeds = {4, 9, 2};
    c.spectra.kinds = {GraphKind::lines_planes};
    c.count.Ds = {5, 6};
    CHECK(config_from_json(config_to_json(c)) == c);
}

TEST_CASE("config rationals accept several spellings") {
    CHECK(rational_from_json(json("2/5")) == Rational(2, 5));
    CHECK(rational_from_json(json("0.4")) == Rational(2, 5));
    CHECK(rational_from_json(json(0.25)) == Rational(1, 4));
    CHECK(rational_from_json(json{{"num", 3}, {"den", 9}}) == Rational(1, 3));
    CHECK(rational_from_json(rational_to_json(Rational(-7, 3))) == Rational(-7, 3));
    CHECK_THROWS_AS(rational_from_json(json("x/2")), ConfigError);
}

TEST_CASE("presets") {
    auto names = preset_names();
    CHECK(std::set<std::string>(names.begin(), names.end()) ==
          std::set<std::string>{"tiny", "bi", "multi", "spectra"});
    auto t = preset("tiny");
    CHECK((t.q == 5 && t.m == 2 && t.d == 1));
    auto b = preset("bi");
    CHECK((b.q == 101 && b.m == 2 && b.d == 2 && b.pipeline == Pipeline::decode2));
    auto m = preset("multi");
    CHECK((m.q == 31 && m.m == 3 && m.d == 1 && m.pipeline == Pipeline::decodem));
    CHECK(preset("spectra").spectra.qs == std::vector<std::uint32_t>{3, 5, 7});
    CHECK_THROWS_AS(preset("huge"), ConfigError);

    json j = {{"schema_version", 1}, {"preset", "bi"}, {"q", 31}};
    auto c = config_from_json(j);
    CHECK(c.q == 31);
    CHECK(c.noise == b.noise);
}

TEST_CASE("config validation") {
    auto bad = [](auto mutate) {
        json j = config_to_json(preset("tiny"));
        mutate(j);
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    };
    bad([](json& j) { j.erase("schema_version"); });
    bad([](json& j) { j["schema_version"] = 2; });
    bad([](json& j) { j["q"] = 6; });
    bad([](json& j) { j["d"] = 5; });
    bad([](json& j) { j["seeds"] = json::array(); });
    bad([](json& j) { j["enum_budget"] = 0; });
    bad([](json& j) { j["noise"] = {{"model", "random_corrupt"}, {"delta", "3/2"}}; });
    bad([](json& j) { j["noise"] = {{"model", "mixture"}, {"weights", {"1/2", "2/3"}}}; });
    bad([](json& j) { j["noise"] = {{"model", "mixture"}}; });
    bad([](json& j) { j["noise"] = {{"model", "gaussian"}}; });
    bad([](json& j) { j["pipeline"] = "decode2"; }); // no eps
    bad([](json& j) {
        j["pipeline"] = "decode2";
        j["eps"] = "1/2";
        j["m"] = 3;
    });
    bad([](json& j) { j["q"] = "five"; });
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
    CHECK_NOTHROW(config_from_json(config_to_json(preset("tiny"))));
}

TEST_CASE("plant_instance noise models are exact") {
    SUBCASE("exact") {
        auto c = noisy(7, 2, 2, NoiseKind::exact);
        auto inst = plant_instance(c, 3);
        REQUIRE(inst.truth.size() == 1);
        CHECK(inst.changed == 0);
        CHECK(inst.f == table_of(Space(7, 2), inst.truth[0], 2));
    }
    SUBCASE("random_corrupt at q=101") {
        auto c = noisy(101, 2, 3, NoiseKind::random_corrupt);
        c.noise.delta = Rational(1, 20);
        Space S(101, 2);
        for (std::uint64_t seed : {1, 2, 3}) {
            auto inst = plant_instance(c, seed);
            const std::int64_t k = ceil_mul(c.noise.delta, S.num_points());
            CHECK(k == 511);
            CHECK(distance(S, inst.f, inst.truth[0]) == Rational(k, 10201));
            CHECK(inst.changed == static_cast<std::uint64_t>(k));
        }
    }
    SUBCASE("planted_agreement") {
        for (auto [q, m] : {std::pair{31u, 2u}, std::pair{13u, 3u}}) {
            auto c = noisy(q, m, 1, NoiseKind::planted_agreement);
            c.noise.eps = Rational(2, 5);
            Space S(q, m);
            auto inst = plant_instance(c, 5);
            const std::int64_t k = ceil_mul(c.noise.eps, S.num_points());
            CHECK(static_cast<std::int64_t>(agreement_count(S, inst.f, inst.truth[0])) == k);
            const Rational measured(k, static_cast<std::int64_t>(S.num_points()));
            CHECK(measured - c.noise.eps < Rational(1, static_cast<std::int64_t>(S.num_points())));
        }
    }
    SUBCASE("mixture") {
        auto c = noisy(31, 2, 1, NoiseKind::mixture);
        c.noise.weights = {Rational(3, 10), Rational(1, 5)};
        Space S(31, 2);
        auto inst = plant_instance(c, 8);
        REQUIRE(inst.truth.size() == 2);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(static_cast<std::int64_t>(agreement_count(S, inst.f, inst.truth[i])) >=
                  ceil_mul(c.noise.weights[i], S.num_points()));
    }
    SUBCASE("structured_rows") {
        auto c = noisy(13, 2, 1, NoiseKind::structured_rows);
        c.noise.eps = Rational(1, 3);
        Space S(13, 2);
        auto inst = plant_instance(c, 2);
        const auto& Q = inst.truth[0];
        std::int64_t full_rows = 0;
        for (Elem a = 0; a < 13; ++a) {
            bool all = true;
            for (Elem b = 0; b < 13; ++b) {
                Point x{a, b};
                const Elem at[2] = {a, b};
                all = all && inst.f.values[S.point_index(x)] == Q.eval(S.field(), at);
            }
            full_rows += all;
        }
        CHECK(full_rows == ceil_mul(c.noise.eps, 13));
        // Every row is itself a low-degree restriction.
        auto O = canonical_oracle(S, inst.f);
        for (Elem a = 0; a < 13; ++a) {
            Line l = S.canonical_line(Point{a, 0}, Point{0, 1});
            CHECK(line_agreements(S, inst.f, O)[S.line_id(l)] == 13);
        }
    }
    SUBCASE("deterministic per seed") {
        auto c = preset("tiny");
        CHECK(plant_instance(c, 11).f == plant_instance(c, 11).f);
        CHECK(plant_instance(c, 11).f != plant_instance(c, 12).f);
    }
    SUBCASE("infeasible") {
        auto c = noisy(5, 2, 1, NoiseKind::random_corrupt);
        c.noise.delta = Rational(3, 2);
        CHECK_THROWS_AS(plant_instance(c, 1), ConfigError);
    }
}

TEST_CASE("table file round trip") {
    Space S(7, 2);
    CounterRng r(1, Stream::test);
    auto f = testsupport::random_table(S, 2, r);
    std::stringstream ss;
    write_table(ss, f);
    CHECK(read_table(ss) == f);

    for (const char* text : {"7 2 2\n1 2 3\n", "6 2 1\n", "5 1 1\n0 1 2 3 9\n", "5 1 1\n0 1 2 3 4 0\n", "x"}) {
        std::stringstream bad(text);
        CHECK_THROWS_AS(read_table(bad), ConfigError);
    }
}

TEST_CASE("oracle file round trip") {
    Space S(5, 2);
    const auto& F = S.field();
    CounterRng r(2, Stream::test);
    auto f = testsupport::random_table(S, 1, r);
    auto O = canonical_oracle(S, f);
    O.set_bot(3);
    O.set_framing(OracleFraming::supplied);
    std::stringstream ss;
    write_oracle(ss, S, O);
    CHECK(read_oracle(ss, S, 1) == O);

    // One line written through another representative: base b + 2u, dir 3u.
    std::stringstream out;
    write_oracle(out, S, O);
    std::string text = out.str(), rewritten;
    std::stringstream in(text);
    std::string row;
    const std::uint64_t target = 7;
    std::uint64_t id = 0;
    for (; std::getline(in, row); ++id) {
        if (id != target) {
            rewritten += row + "\n";
            continue;
        }
        Line l = S.line_at(id);
        Point b = S.axpy(l.base, 2, l.dir);
        Point u = l.dir;
        for (std::size_t i = 0; i < 2; ++i) u[i] = F.mul(3, u[i]);
        // Q(t) on b + t u equals P(2 + 3t) on the canonical line.
        UniPoly Q = compose_affine(F, O.poly(id), 2, 3);
        rewritten += std::to_string(b[0]) + "," + std::to_string(b[1]) + ";" + std::to_string(u[0]) + "," +
                     std::to_string(u[1]) + ";";
        for (std::size_t k = 0; k <= 1; ++k) rewritten += (k ? "," : "") + std::to_string(Q.coeff(k));
        rewritten += "\n";
    }
    std::stringstream back(rewritten);
    CHECK(read_oracle(back, S, 1) == O);

    std::stringstream missing(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS_AS(read_oracle(missing, S, 1), ConfigError);
    std::stringstream twice(text + text.substr(0, text.find('\n') + 1));
    CHECK_THROWS_AS(read_oracle(twice, S, 1), ConfigError);
}

TEST_CASE("dense coefficient order") {
    MultiPoly Q(2);
    Q.set_term({0, 0}, 1);
    Q.set_term({1, 0}, 2);
    Q.set_term({0, 1}, 3);
    Q.set_term({1, 1}, 4);
    auto c = dense_coeffs(Q, 2, 2);
    REQUIRE(c.size() == 6);
    CHECK(from_dense(c, 2, 2) == Q);
    auto mons = monomials_up_to(2, 2);
    for (std::size_t i = 0; i < mons.size(); ++i) CHECK(c[i] == Q.coeff(mons[i]));
    CHECK_THROWS(dense_coeffs(Q, 2, 1));
}

TEST_CASE("report emit and parse") {
    TestReport empty;
    empty.pipeline = "decode2";
    auto text = emit_report(empty, ReportFormat::json);
    auto j = json::parse(text);
    CHECK(j["results"].is_array());
    CHECK(j["results"].empty());
    CHECK(parse_report(text) == empty);
    CHECK(count_lines(emit_report(empty, ReportFormat::csv)) == 1);

    for (const auto& cfg : {preset("tiny"), small_bi()}) {
        auto r = run_experiment(cfg, 1);
        CHECK(r.status == ReportStatus::ok);
        auto t = emit_report(r, ReportFormat::json);
        CHECK(parse_report(t) == r);
        CHECK(emit_report(parse_report(t), ReportFormat::json) == t);
        CHECK(count_lines(emit_report(r, ReportFormat::csv)) == r.results.size() + 1);
    }

    TestReport full;
    full.accept_exact = Rational(3, 7);
    full.accept_sampled = SampledSummary{0.5, 0.01, 100, 50};
    full.delta = DeltaSummary{Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5)};
    full.results = {{{1, 2, 3}, Rational(2, 5)}, {{0, 0, 1}, Rational(1, 5)}};
    full.stages = {{"s", "ok", {{"i", std::int64_t(-3)}, {"b", true}, {"r", Rational(5, 6)}, {"x", 0.125}, {"n", std::string("z")}}}};
    full.timings = {{"s", 0.5}};
    full.extra = {{"k", 1}};
    CHECK(parse_report(emit_report(full, ReportFormat::json)) == full);
    auto jf = json::parse(emit_report(full, ReportFormat::json));
    CHECK(jf["accept_exact"] == json{{"num", 3}, {"den", 7}});
    CHECK(count_lines(emit_report(full, ReportFormat::csv)) == 3);
    CHECK_THROWS_AS(parse_report("{"), ConfigError);
}

TEST_CASE("report key order is stable") {
    auto text = emit_report(run_experiment(preset("tiny"), 1), ReportFormat::json);
    const char* keys[] = {"\"code_version\"", "\"pipeline\"", "\"seed\"", "\"status\"", "\"config\"",
                          "\"accept_exact\"", "\"results\"", "\"stages\"", "\"extra\""};
    std::size_t pos = 0;
    for (const char* k : keys) {
        auto p = text.find(k);
        REQUIRE(p != std::string::npos);
        CHECK(p >= pos);
        pos = p;
    }
}

TEST_CASE("ldt pipeline on an exact instance") {
    auto c = noisy(7, 3, 2, NoiseKind::exact);
    auto r = run_experiment(c, 4);
    REQUIRE(r.status == ReportStatus::ok);
    CHECK(r.accept_exact == Rational(1));
    REQUIRE(r.delta.has_value());
    CHECK(r.delta->global == Rational(0));
    CHECK(r.delta->max_line == Rational(0));
    CHECK(r.delta->max_plane == Rational(0));
    CHECK(r.truth.size() == 1);
    CHECK(r.truth[0].agreement == Rational(1));
}

TEST_CASE("decode2 pipeline lists the planted polynomial") {
    auto r = run_experiment(small_bi(), 1);
    REQUIRE(r.status == ReportStatus::ok);
    REQUIRE(r.truth.size() == 1);
    bool hit = false;
    for (const auto& p : r.results) hit = hit || p.coeffs == r.truth[0].coeffs;
    CHECK(hit);
    CHECK(r.truth[0].agreement == Rational(ceil_mul(Rational(2, 5), 961), 961));
}

TEST_CASE("correct pipeline on a low-error instance") {
    auto c = noisy(31, 2, 2, NoiseKind::random_corrupt);
    c.noise.delta = Rational(1, 50);
    c.pipeline = Pipeline::correct;
    auto r = run_experiment(c, 3);
    REQUIRE(r.status == ReportStatus::ok);
    REQUIRE(r.results.size() == 1);
    CHECK(r.results[0].coeffs == r.truth[0].coeffs);
    const auto& it = r.stages.back();
    CHECK(it.name == "iterate");
    bool recovered = false;
    for (const auto& [k, v] : it.metrics)
        if (k == "recovered_truth") recovered = std::get<bool>(v);
    CHECK(recovered);
}

TEST_CASE("errors become report statuses") {
    auto c = preset("tiny");
    c.q = 6;
    auto r = run_experiment(c, 1);
    CHECK(r.status == ReportStatus::config_error);
    CHECK_FALSE(r.error.empty());
    CHECK(json::parse(emit_report(r, ReportFormat::json))["status"] == "config_error");

    auto b = noisy(13, 2, 1, NoiseKind::exact);
    b.pipeline = Pipeline::decodem;
    b.eps = Rational(1, 10);
    b.enum_budget = 10;
    CHECK(run_experiment(b, 1).status == ReportStatus::budget_exceeded);

    auto t = preset("tiny");
    auto f = plant_instance(t, 1).f;
    t.q = 7;
    CHECK(run_on_table(t, f).status == ReportStatus::config_error);

    CHECK(exit_code(ReportStatus::ok) == 0);
    CHECK(exit_code(ReportStatus::config_error) == 2);
    CHECK(exit_code(ReportStatus::budget_exceeded) == 3);
    CHECK(exit_code(ReportStatus::stage_failure) == 4);
    for (auto s : {ReportStatus::ok, ReportStatus::config_error, ReportStatus::budget_exceeded,
                   ReportStatus::stage_failure})
        CHECK(parse_status(status_name(s)) == s);
}

TEST_CASE("reports are independent of the thread count") {
    auto cfg = preset("tiny");
    cfg.pipeline = Pipeline::correct;
    for (auto c : {preset("tiny"), cfg, small_bi()}) {
        set_thread_count(1);
        auto a = emit_report(run_experiment(c, 2), ReportFormat::json);
        set_thread_count(8);
        auto b = emit_report(run_experiment(c, 2), ReportFormat::json);
        CHECK(a == b);
        CHECK(emit_report(run_experiment(c, 2), ReportFormat::json) == b);
    }
    set_thread_count(0);
}

TEST_CASE("run_all_seeds follows the seed list") {
    auto c = preset("tiny");
    c.seeds = {3, 1, 2};
    auto rs = run_all_seeds(c);
    REQUIRE(rs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rs[i].seed == c.seeds[i]);
        CHECK(rs[i] == run_experiment(c, c.seeds[i]));
    }
}

TEST_CASE("spectra and count pipelines") {
    auto s = preset("spectra");
    s.spectra.qs = {3};
    auto r = run_experiment(s, 0);
    REQUIRE(r.status == ReportStatus::ok);
    // m=2: points-lines only; m=3: all four kinds.
    CHECK(r.extra["spectra"].size() == 5);
    CHECK(count_lines(emit_report(r, ReportFormat::csv)) == 6);

    ExperimentConfig c;
    c.pipeline = Pipeline::count;
    c.count = {{1}, {2, 3}, {2}};
    auto rc = run_experiment(c, 0);
    REQUIRE(rc.status == ReportStatus::ok);
    REQUIRE(rc.extra["count"].size() == 2);
    CHECK(rc.extra["count"][0]["n_dD"] == 10);
    CHECK(count_lines(emit_report(rc, ReportFormat::csv)) == 3);
}
