#pragma once

#include "ldtlab/bidecoder.hpp"
#include "ldtlab/harness/config.hpp"
#include "ldtlab/ldt.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

// TestReport and its JSON / CSV forms.
namespace ldtlab::harness {

inline constexpr const char* kCodeVersion = "ldtlab 0.1.0";

enum class ReportStatus { ok, config_error, budget_exceeded, stage_failure };
const char* status_name(ReportStatus s) noexcept;
ReportStatus parse_status(const std::string& s);
// 0, 2, 3, 4.
int exit_code(ReportStatus s) noexcept;

struct ReportPoly {
    std::vector<Elem> coeffs; // over monomials_up_to(m, d)
    Rational agreement{0};
    bool operator==(const ReportPoly&) const = default;
};

struct DeltaSummary {
    Rational global{0};
    Rational max_line{0};
    Rational mean_line{0};
    std::optional<Rational> max_plane;
    bool operator==(const DeltaSummary&) const = default;
};

struct SampledSummary {
    double estimate = 0, half_width = 0;
    std::uint64_t trials = 0, accepts = 0;
    bool operator==(const SampledSummary&) const = default;
};

struct TestReport {
    nlohmann::json config; // echo of config_to_json
    std::uint64_t seed = 0;
    std::string pipeline;
    std::string code_version = kCodeVersion;
    ReportStatus status = ReportStatus::ok;
    std::string error;

    std::optional<Rational> accept_exact;
    std::optional<SampledSummary> accept_sampled;
    std::optional<DeltaSummary> delta;
    std::vector<ReportPoly> truth;
    std::vector<ReportPoly> results;
    std::vector<StageRecord> stages;
    std::vector<std::pair<std::string, double>> timings; // seconds, only when enabled
    nlohmann::json extra = nlohmann::json::object();     // pipeline-specific tables

    bool operator==(const TestReport&) const = default;
};

nlohmann::json report_to_json(const TestReport& r);
TestReport report_from_json(const nlohmann::json& j);

enum class ReportFormat { json, csv };
// JSON: pretty-printed with stable key order. CSV: see docs/report_schema.md.
std::string emit_report(const TestReport& r, ReportFormat fmt);
TestReport parse_report(const std::string& json_text);

nlohmann::json metric_to_json(const Metric& m);
Metric metric_from_json(const nlohmann::json& j);

} // namespace ldtlab::harness
