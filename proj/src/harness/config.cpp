#include "ldtlab/harness/config.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/field.hpp"

#include <fstream>

namespace ldtlab::harness {

using nlohmann::json;

namespace {

constexpr std::pair<NoiseKind, const char*> kNoiseNames[] = {
    {NoiseKind::exact, "exact"},
    {NoiseKind::random_corrupt, "random_corrupt"},
    {NoiseKind::planted_agreement, "planted_agreement"},
    {NoiseKind::mixture, "mixture"},
    {NoiseKind::structured_rows, "structured_rows"},
};
constexpr std::pair<Pipeline, const char*> kPipelineNames[] = {
    {Pipeline::ldt, "ldt"},         {Pipeline::decode2, "decode2"}, {Pipeline::decodem, "decodem"},
    {Pipeline::correct, "correct"}, {Pipeline::spectra, "spectra"}, {Pipeline::count, "count"},
};

void check_unit(const Rational& r, const char* what) {
    if (r < Rational(0) || r > Rational(1)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

template <class T>
T get_or(const json& j, const char* key, T dflt) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return dflt;
    return it->get<T>();
}

std::optional<Rational> opt_rational(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return rational_from_json(*it);
}

json opt_to_json(const std::optional<Rational>& r) { return r ? rational_to_json(*r) : json(nullptr); }

} // namespace

const char* noise_name(NoiseKind k) noexcept {
    for (const auto& [v, n] : kNoiseNames)
        if (v == k) return n;
    return "?";
}

const char* pipeline_name(Pipeline p) noexcept {
    for (const auto& [v, n] : kPipelineNames)
        if (v == p) return n;
    return "?";
}

NoiseKind parse_noise(const std::string& s) {
    for (const auto& [v, n] : kNoiseNames)
        if (s == n) return v;
    throw ConfigError("unknown noise model: " + s);
}

Pipeline parse_pipeline(const std::string& s) {
    for (const auto& [v, n] : kPipelineNames)
        if (s == n) return v;
    throw ConfigError("unknown pipeline: " + s);
}

Rational rational_from_json(const json& j) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_number_float()) return parse_rational(j.dump());
        if (j.is_object()) return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad rational: ") + e.what());
    }
    throw ConfigError("bad rational: " + j.dump());
}

json rational_to_json(const Rational& r) {
    json j = json::object();
    j["num"] = r.numerator();
    j["den"] = r.denominator();
    return j;
}

void validate(const ExperimentConfig& c) {
    if (c.schema_version != kSchemaVersion)
        throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
    if (c.seeds.empty()) throw ConfigError("seeds must not be empty");
    if (c.enum_budget == 0 || c.brute_budget == 0) throw ConfigError("budgets must be positive");
    if (c.pipeline == Pipeline::spectra) {
        if (c.spectra.qs.empty() || c.spectra.ms.empty() || c.spectra.kinds.empty())
            throw ConfigError("spectra: empty grid");
        for (auto q : c.spectra.qs)
            if (!is_prime(q)) throw ConfigError("spectra: q = " + std::to_string(q) + " is not prime");
        for (auto m : c.spectra.ms)
            if (m < 1) throw ConfigError("spectra: m must be positive");
        return;
    }
    if (c.pipeline == Pipeline::count) {
        for (auto d : c.count.ds)
            if (d == 0) throw ConfigError("count: d must be positive");
        for (auto p : c.count.ps)
            if (!is_prime(p)) throw ConfigError("count: p = " + std::to_string(p) + " is not prime");
        return;
    }
    if (!is_prime(c.q)) throw ConfigError("q = " + std::to_string(c.q) + " is not prime");
    if (c.m < 1) throw ConfigError("m must be positive");
    if (c.d >= c.q) throw ConfigError("need d < q");
    switch (c.noise.kind) {
    case NoiseKind::exact: break;
    case NoiseKind::random_corrupt: check_unit(c.noise.delta, "delta"); break;
    case NoiseKind::planted_agreement:
    case NoiseKind::structured_rows: check_unit(c.noise.eps, "eps"); break;
    case NoiseKind::mixture: {
        if (c.noise.weights.empty()) throw ConfigError("mixture needs weights");
        Rational s(0);
        for (const auto& w : c.noise.weights) {
            check_unit(w, "weight");
            s += w;
        }
        if (s > Rational(1)) throw ConfigError("mixture weights sum above 1");
        break;
    }
    }
    if (c.noise.kind == NoiseKind::structured_rows && c.m < 2)
        throw ConfigError("structured_rows needs m >= 2");
    if (c.eps) check_unit(*c.eps, "eps");
    if (c.min_agreement) check_unit(*c.min_agreement, "min_agreement");
    if (c.list_threshold) check_unit(*c.list_threshold, "list_threshold");
    check_unit(c.forms_eps0, "forms_eps0");
    check_unit(c.trigger_delta, "trigger_delta");
    if ((c.pipeline == Pipeline::decode2 || c.pipeline == Pipeline::decodem) && !c.eps)
        throw ConfigError("decoder pipelines need eps");
    if (c.pipeline == Pipeline::decode2 && (c.m != 2 || c.d == 0))
        throw ConfigError("decode2 needs m = 2 and d >= 1");
    if (c.pipeline == Pipeline::decodem && *c.eps == Rational(0)) throw ConfigError("decodem needs eps > 0");
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    try {
        c.schema_version = get_or<int>(j, "schema_version", -1);
        if (c.schema_version == -1) throw ConfigError("missing schema_version");
        if (j.contains("preset")) {
            ExperimentConfig base = preset(j.at("preset").get<std::string>());
            base.schema_version = c.schema_version;
            c = base;
        }
        c.name = get_or<std::string>(j, "name", c.name);
        c.q = get_or<std::uint32_t>(j, "q", c.q);
        c.m = get_or<std::size_t>(j, "m", c.m);
        c.d = get_or<unsigned>(j, "d", c.d);
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            NoiseModel nm;
            nm.kind = parse_noise(n.at("model").get<std::string>());
            if (n.contains("delta")) nm.delta = rational_from_json(n.at("delta"));
            if (n.contains("eps")) nm.eps = rational_from_json(n.at("eps"));
            if (n.contains("weights"))
                for (const auto& w : n.at("weights")) nm.weights.push_back(rational_from_json(w));
            c.noise = nm;
        }
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("pipeline")) c.pipeline = parse_pipeline(j.at("pipeline").get<std::string>());
        if (j.contains("eps")) c.eps = opt_rational(j, "eps");
        if (j.contains("min_agreement")) c.min_agreement = opt_rational(j, "min_agreement");
        if (j.contains("list_threshold")) c.list_threshold = opt_rational(j, "list_threshold");
        if (j.contains("D_max")) {
            if (j.at("D_max").is_null()) c.D_max.reset();
            else c.D_max = j.at("D_max").get<unsigned>();
        }
        if (j.contains("trigger_delta")) c.trigger_delta = rational_from_json(j.at("trigger_delta"));
        c.max_iters = get_or<unsigned>(j, "max_iters", c.max_iters);
        c.advice_cap = get_or<unsigned>(j, "advice_cap", c.advice_cap);
        c.best_effort = get_or<bool>(j, "best_effort", c.best_effort);
        c.with_planes = get_or<bool>(j, "with_planes", c.with_planes);
        c.forms = get_or<bool>(j, "forms", c.forms);
        if (j.contains("forms_eps0")) c.forms_eps0 = rational_from_json(j.at("forms_eps0"));
        c.sampled_trials = get_or<std::uint64_t>(j, "sampled_trials", c.sampled_trials);
        c.enum_budget = get_or<std::uint64_t>(j, "enum_budget", c.enum_budget);
        c.brute_budget = get_or<std::uint64_t>(j, "brute_budget", c.brute_budget);
        c.timings = get_or<bool>(j, "timings", c.timings);
        if (j.contains("spectra")) {
            const json& s = j.at("spectra");
            if (s.contains("qs")) c.spectra.qs = s.at("qs").get<std::vector<std::uint32_t>>();
            if (s.contains("ms")) c.spectra.ms = s.at("ms").get<std::vector<std::size_t>>();
            if (s.contains("kinds")) {
                c.spectra.kinds.clear();
                for (const auto& k : s.at("kinds")) c.spectra.kinds.push_back(parse_graph_kind(k.get<std::string>()));
            }
        }
        if (j.contains("count")) {
            const json& s = j.at("count");
            if (s.contains("ds")) c.count.ds = s.at("ds").get<std::vector<unsigned>>();
            if (s.contains("Ds")) c.count.Ds = s.at("Ds").get<std::vector<unsigned>>();
            if (s.contains("ps")) c.count.ps = s.at("ps").get<std::vector<unsigned>>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j = json::object();
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["q"] = c.q;
    j["m"] = c.m;
    j["d"] = c.d;
    json n = json::object();
    n["model"] = noise_name(c.noise.kind);
    n["delta"] = rational_to_json(c.noise.delta);
    n["eps"] = rational_to_json(c.noise.eps);
    n["weights"] = json::array();
    for (const auto& w : c.noise.weights) n["weights"].push_back(rational_to_json(w));
    j["noise"] = n;
    j["seeds"] = c.seeds;
    j["pipeline"] = pipeline_name(c.pipeline);
    j["eps"] = opt_to_json(c.eps);
    j["min_agreement"] = opt_to_json(c.min_agreement);
    j["list_threshold"] = opt_to_json(c.list_threshold);
    j["D_max"] = c.D_max ? json(*c.D_max) : json(nullptr);
    j["trigger_delta"] = rational_to_json(c.trigger_delta);
    j["max_iters"] = c.max_iters;
    j["advice_cap"] = c.advice_cap;
    j["best_effort"] = c.best_effort;
    j["with_planes"] = c.with_planes;
    j["forms"] = c.forms;
    j["forms_eps0"] = rational_to_json(c.forms_eps0);
    j["sampled_trials"] = c.sampled_trials;
    j["enum_budget"] = c.enum_budget;
    j["brute_budget"] = c.brute_budget;
    j["timings"] = c.timings;
    json s = json::object();
    s["qs"] = c.spectra.qs;
    s["ms"] = c.spectra.ms;
    s["kinds"] = json::array();
    for (auto k : c.spectra.kinds) s["kinds"].push_back(graph_kind_name(k));
    j["spectra"] = s;
    json ct = json::object();
    ct["ds"] = c.count.ds;
    ct["Ds"] = c.count.Ds;
    ct["ps"] = c.count.ps;
    j["count"] = ct;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

std::vector<std::string> preset_names() { return {"tiny", "bi", "multi", "spectra"}; }

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    if (name == "tiny") {
        c.q = 5;
        c.m = 2;
        c.d = 1;
        c.noise.kind = NoiseKind::random_corrupt;
        c.noise.delta = Rational(1, 10);
        c.pipeline = Pipeline::ldt;
    } else if (name == "bi") {
        c.q = 101;
        c.m = 2;
        c.d = 2;
        c.noise.kind = NoiseKind::planted_agreement;
        c.noise.eps = Rational(2, 5);
        c.eps = Rational(2, 5);
        c.pipeline = Pipeline::decode2;
    } else if (name == "multi") {
        c.q = 31;
        c.m = 3;
        c.d = 1;
        c.noise.kind = NoiseKind::planted_agreement;
        c.noise.eps = Rational(2, 5);
        c.eps = Rational(2, 25);
        c.pipeline = Pipeline::decodem;
    } else if (name == "spectra") {
        c.pipeline = Pipeline::spectra;
        c.spectra = SpectraConfig{};
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return c;
}

} // namespace ldtlab::harness
