#pragma once

#include "ldtlab/harness/config.hpp"
#include "ldtlab/harness/report.hpp"
#include "ldtlab/ldt.hpp"

#include <optional>
#include <vector>

// Pipeline orchestration. Errors are recorded in the report, never thrown.
namespace ldtlab::harness {

// Plants an instance (except for spectra and count) and runs the pipeline.
TestReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

// Runs a table pipeline (ldt, decode2, decodem, correct) on a given table.
// The oracle, if given, replaces the canonical one in the ldt pipeline.
TestReport run_on_table(const ExperimentConfig& cfg, const PointsTable& f,
                        const std::optional<LinesOracle>& oracle = std::nullopt,
                        const std::vector<MultiPoly>& truth = {}, std::uint64_t seed = 0);

// One report per configured seed, in seed order.
std::vector<TestReport> run_all_seeds(const ExperimentConfig& cfg);

} // namespace ldtlab::harness
