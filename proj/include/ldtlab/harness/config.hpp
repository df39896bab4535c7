#pragma once

#include "ldtlab/incidence.hpp"
#include "ldtlab/rational.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Experiment configuration and its versioned JSON form.
namespace ldtlab::harness {

inline constexpr int kSchemaVersion = 1;

enum class NoiseKind { exact, random_corrupt, planted_agreement, mixture, structured_rows };
enum class Pipeline { ldt, decode2, decodem, correct, spectra, count };

const char* noise_name(NoiseKind k) noexcept;
const char* pipeline_name(Pipeline p) noexcept;
NoiseKind parse_noise(const std::string& s);
Pipeline parse_pipeline(const std::string& s);

struct NoiseModel {
    NoiseKind kind = NoiseKind::exact;
    Rational delta{0};            // random_corrupt: fraction of points changed
    Rational eps{0};              // planted_agreement, structured_rows: agreement
    std::vector<Rational> weights; // mixture: one share per planted polynomial

    bool operator==(const NoiseModel&) const = default;
};

struct SpectraConfig {
    std::vector<std::uint32_t> qs{3, 5, 7};
    std::vector<std::size_t> ms{2, 3};
    std::vector<GraphKind> kinds{GraphKind::points_lines, GraphKind::points_planes,
                                 GraphKind::lines_planes, GraphKind::lines_planes_through_x};

    bool operator==(const SpectraConfig&) const = default;
};

struct CountConfig {
    std::vector<unsigned> ds{1, 2, 3};
    std::vector<unsigned> Ds{}; // empty: d, 2d, 21d, 70
    std::vector<unsigned> ps{2, 3, 5};

    bool operator==(const CountConfig&) const = default;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name = "custom";
    std::uint32_t q = 5;
    std::size_t m = 2;
    unsigned d = 1;
    NoiseModel noise;
    std::vector<std::uint64_t> seeds{1};
    Pipeline pipeline = Pipeline::ldt;

    std::optional<Rational> eps;           // decoder agreement parameter
    std::optional<Rational> min_agreement; // reporting floor
    std::optional<Rational> list_threshold;
    std::optional<unsigned> D_max;
    Rational trigger_delta{1, 10};
    unsigned max_iters = 16;
    unsigned advice_cap = 32;
    bool best_effort = false;
    bool with_planes = true;
    bool forms = false; // decode2: also evaluate the list / high-agreement forms
    Rational forms_eps0{1, 10};
    std::uint64_t sampled_trials = 0;
    std::uint64_t enum_budget = 10'000'000;
    std::uint64_t brute_budget = 1'000'000'000;
    bool timings = false; // wall-clock per stage; off keeps reports byte-stable

    SpectraConfig spectra;
    CountConfig count;

    bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError on any violated invariant.
void validate(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// tiny, bi, multi, spectra.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

// Rationals in configs: "2/5", "0.4", a JSON number, or {num, den}.
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& r);

} // namespace ldtlab::harness
