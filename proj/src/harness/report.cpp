#include "ldtlab/harness/report.hpp"

#include "ldtlab/errors.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace ldtlab::harness {

using nlohmann::json;
// Member order is the emitted key order.
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::pair<ReportStatus, const char*> kStatusNames[] = {
    {ReportStatus::ok, "ok"},
    {ReportStatus::config_error, "config_error"},
    {ReportStatus::budget_exceeded, "budget_exceeded"},
    {ReportStatus::stage_failure, "stage_failure"},
};

ojson rat(const Rational& r) {
    ojson j = ojson::object();
    j["num"] = r.numerator();
    j["den"] = r.denominator();
    return j;
}

Rational unrat(const ojson& j) { return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>()); }

ojson opt_rat(const std::optional<Rational>& r) { return r ? rat(*r) : ojson(nullptr); }

std::optional<Rational> unopt_rat(const ojson& j) {
    if (j.is_null()) return std::nullopt;
    return unrat(j);
}

ojson poly_json(const ReportPoly& p) {
    ojson j = ojson::object();
    j["coeffs"] = p.coeffs;
    j["agreement_num"] = p.agreement.numerator();
    j["agreement_den"] = p.agreement.denominator();
    return j;
}

ReportPoly poly_from(const ojson& j) {
    return {j.at("coeffs").get<std::vector<Elem>>(),
            Rational(j.at("agreement_num").get<std::int64_t>(), j.at("agreement_den").get<std::int64_t>())};
}

// A metric is tagged by JSON type; rationals are {num, den} objects.
ojson metric_o(const Metric& m) {
    return std::visit(
        [](const auto& v) -> ojson {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Rational>) return rat(v);
            else return ojson(v);
        },
        m);
}

Metric metric_from_o(const ojson& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object()) return unrat(j);
    throw ConfigError("report: bad metric " + j.dump());
}

ojson to_o(const json& j) { return ojson::parse(j.dump()); }
json from_o(const ojson& j) { return json::parse(j.dump()); }

ojson report_o(const TestReport& r) {
    ojson j = ojson::object();
    j["code_version"] = r.code_version;
    j["pipeline"] = r.pipeline;
    j["seed"] = r.seed;
    j["status"] = status_name(r.status);
    j["error"] = r.error;
    j["config"] = to_o(r.config);
    j["accept_exact"] = opt_rat(r.accept_exact);
    if (r.accept_sampled) {
        ojson s = ojson::object();
        s["estimate"] = r.accept_sampled->estimate;
        s["half_width"] = r.accept_sampled->half_width;
        s["trials"] = r.accept_sampled->trials;
        s["accepts"] = r.accept_sampled->accepts;
        j["accept_sampled"] = s;
    } else {
        j["accept_sampled"] = nullptr;
    }
    if (r.delta) {
        ojson s = ojson::object();
        s["global"] = rat(r.delta->global);
        s["max_line"] = rat(r.delta->max_line);
        s["mean_line"] = rat(r.delta->mean_line);
        s["max_plane"] = opt_rat(r.delta->max_plane);
        j["delta"] = s;
    } else {
        j["delta"] = nullptr;
    }
    j["truth"] = ojson::array();
    for (const auto& p : r.truth) j["truth"].push_back(poly_json(p));
    j["results"] = ojson::array();
    for (const auto& p : r.results) j["results"].push_back(poly_json(p));
    j["stages"] = ojson::array();
    for (const auto& st : r.stages) {
        ojson s = ojson::object();
        s["name"] = st.name;
        s["status"] = st.status;
        ojson m = ojson::object();
        for (const auto& [k, v] : st.metrics) m[k] = metric_o(v);
        s["metrics"] = m;
        j["stages"].push_back(s);
    }
    j["timings"] = ojson::array();
    for (const auto& [k, v] : r.timings) j["timings"].push_back(ojson::array({k, v}));
    j["extra"] = to_o(r.extra);
    return j;
}

TestReport report_from_o(const ojson& j) {
    TestReport r;
    r.code_version = j.at("code_version").get<std::string>();
    r.pipeline = j.at("pipeline").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.error = j.at("error").get<std::string>();
    r.config = from_o(j.at("config"));
    r.accept_exact = unopt_rat(j.at("accept_exact"));
    if (const auto& s = j.at("accept_sampled"); !s.is_null())
        r.accept_sampled = SampledSummary{s.at("estimate").get<double>(), s.at("half_width").get<double>(),
                                          s.at("trials").get<std::uint64_t>(), s.at("accepts").get<std::uint64_t>()};
    if (const auto& s = j.at("delta"); !s.is_null())
        r.delta = DeltaSummary{unrat(s.at("global")), unrat(s.at("max_line")), unrat(s.at("mean_line")),
                               unopt_rat(s.at("max_plane"))};
    for (const auto& p : j.at("truth")) r.truth.push_back(poly_from(p));
    for (const auto& p : j.at("results")) r.results.push_back(poly_from(p));
    for (const auto& s : j.at("stages")) {
        StageRecord st{s.at("name").get<std::string>(), s.at("status").get<std::string>(), {}};
        for (const auto& [k, v] : s.at("metrics").items()) st.metrics.emplace_back(k, metric_from_o(v));
        r.stages.push_back(std::move(st));
    }
    for (const auto& t : j.at("timings")) r.timings.emplace_back(t.at(0).get<std::string>(), t.at(1).get<double>());
    r.extra = from_o(j.at("extra"));
    return r;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string csv_cell(const json& v) {
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_object() && v.contains("num") && v.contains("den"))
        return to_string(Rational(v["num"].get<std::int64_t>(), v["den"].get<std::int64_t>()));
    if (v.is_number_float()) return fmt_double(v.get<double>());
    return csv_field(v.dump());
}

// Flattens an array of flat objects with the given column order.
std::string csv_table(const json& rows, const std::vector<std::string>& cols) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_cell(row.at(cols[i]));
        out += '\n';
    }
    return out;
}

} // namespace

const char* status_name(ReportStatus s) noexcept {
    for (const auto& [v, n] : kStatusNames)
        if (v == s) return n;
    return "?";
}

ReportStatus parse_status(const std::string& s) {
    for (const auto& [v, n] : kStatusNames)
        if (s == n) return v;
    throw ConfigError("unknown report status: " + s);
}

int exit_code(ReportStatus s) noexcept {
    switch (s) {
    case ReportStatus::ok: return 0;
    case ReportStatus::config_error: return 2;
    case ReportStatus::budget_exceeded: return 3;
    case ReportStatus::stage_failure: return 4;
    }
    return 4;
}

json metric_to_json(const Metric& m) { return from_o(metric_o(m)); }
Metric metric_from_json(const json& j) { return metric_from_o(to_o(j)); }

json report_to_json(const TestReport& r) { return from_o(report_o(r)); }
TestReport report_from_json(const json& j) { return report_from_o(to_o(j)); }

std::string emit_report(const TestReport& r, ReportFormat fmt) {
    if (fmt == ReportFormat::json) return report_o(r).dump(2) + "\n";
    if (r.pipeline == "spectra" && r.extra.contains("spectra"))
        return csv_table(r.extra["spectra"], {"kind", "q", "m", "lambda", "expected", "abs_err"});
    if (r.pipeline == "count" && r.extra.contains("count"))
        return csv_table(r.extra["count"], {"d", "D", "p", "n_dD", "n_dDp", "lower", "upper", "final_bound",
                                            "two_sided_holds", "half_holds", "final_applies", "final_holds"});
    std::string out = "seed,pipeline,rank,coeffs,agreement_num,agreement_den,agreement\n";
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& p = r.results[i];
        std::string c;
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) c += (k ? " " : "") + std::to_string(p.coeffs[k]);
        out += std::to_string(r.seed) + "," + csv_field(r.pipeline) + "," + std::to_string(i) + "," + c + "," +
               std::to_string(p.agreement.numerator()) + "," + std::to_string(p.agreement.denominator()) + "," +
               fmt_double(to_double(p.agreement)) + "\n";
    }
    return out;
}

TestReport parse_report(const std::string& text) {
    try {
        return report_from_o(ojson::parse(text));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("report: ") + e.what());
    }
}

} // namespace ldtlab::harness
