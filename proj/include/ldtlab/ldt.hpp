#pragma once

#include "ldtlab/geometry.hpp"
#include "ldtlab/multipoly.hpp"
#include "ldtlab/rational.hpp"
#include "ldtlab/rsline.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// The line-point test: oracles, acceptance probabilities, the delta
// hierarchy, good points and well-behaved oracles.
namespace ldtlab {

// f : F_q^m -> F_q in point-index order. Corrected tables may hold kBot.
struct PointsTable {
    std::uint32_t q = 0;
    std::size_t m = 0;
    unsigned d = 0;
    std::vector<Elem> values;

    Elem at(std::uint64_t idx) const { return values[idx]; }
    bool operator==(const PointsTable&) const = default;
};

PointsTable make_table(const Space& S, unsigned d, std::vector<Elem> values);
PointsTable table_of(const Space& S, const MultiPoly& Q, unsigned d);
// f restricted to a line, indexed by the line parameter.
LineValues line_values(const Space& S, const PointsTable& f, const Line& l);
// Q(base + t dir) as a univariate polynomial.
UniPoly restrict_to_line(const Space& S, const MultiPoly& Q, const Line& l);
// Fraction of points where f and g differ; kBot never matches.
Rational distance(const PointsTable& f, const PointsTable& g);
Rational distance(const Space& S, const PointsTable& f, const MultiPoly& Q);
std::uint64_t agreement_count(const Space& S, const PointsTable& f, const MultiPoly& Q);

// How an oracle was produced; recorded in reports.
enum class OracleFraming { canonical, supplied };
const char* framing_name(OracleFraming f) noexcept;

// Entry per line id: a polynomial of degree <= d or kBot.
class LinesOracle {
public:
    LinesOracle() = default;
    LinesOracle(const Space& S, unsigned d, OracleFraming framing);

    std::uint32_t q() const noexcept { return q_; }
    std::size_t m() const noexcept { return m_; }
    unsigned d() const noexcept { return d_; }
    std::uint64_t size() const noexcept { return bot_.size(); }
    OracleFraming framing() const noexcept { return framing_; }
    void set_framing(OracleFraming f) noexcept { framing_ = f; }

    bool is_bot(std::uint64_t id) const { return bot_[id] != 0; }
    std::span<const Elem> coeffs(std::uint64_t id) const { return {&c_[id * (d_ + 1)], d_ + 1}; }
    UniPoly poly(std::uint64_t id) const;
    std::optional<UniPoly> entry(std::uint64_t id) const;
    // Throws PreconditionError if deg P > d.
    void set(std::uint64_t id, const UniPoly& P);
    void set_bot(std::uint64_t id);
    std::uint64_t bot_count() const;

    bool operator==(const LinesOracle&) const = default;

private:
    std::uint32_t q_ = 0;
    std::size_t m_ = 0;
    unsigned d_ = 0;
    OracleFraming framing_ = OracleFraming::supplied;
    std::vector<Elem> c_;
    std::vector<std::uint8_t> bot_;
};

// Maximal enumeration sizes for exact delta profiles.
void require_profile_feasible(const Space& S);

// best_fit on every line; also fills per-line agreement counts if asked.
LinesOracle canonical_oracle(const Space& S, const PointsTable& f,
                             std::vector<std::uint32_t>* agree = nullptr);
// Per line: #{t : O(l)(t) == f(l(t))}; 0 for kBot entries.
std::vector<std::uint32_t> line_agreements(const Space& S, const PointsTable& f, const LinesOracle& O);
// Per point: number of lines through x whose entry matches f(x).
std::vector<std::uint32_t> point_agreements(const Space& S, const PointsTable& f, const LinesOracle& O);

// Probability over uniform x and uniform line through x that O(l)(x) = f(x).
Rational accept_prob_exact(const Space& S, const PointsTable& f, const LinesOracle& O);

struct SampledAcceptance {
    double estimate = 0;
    double half_width = 0; // 95% normal-approximation (Wald) interval
    std::uint64_t trials = 0, accepts = 0;
};
SampledAcceptance accept_prob_sampled(const Space& S, const PointsTable& f, const LinesOracle& O,
                                      std::uint64_t trials, std::uint64_t seed);

struct DeltaProfile {
    std::uint32_t q = 0;
    std::vector<std::uint32_t> line_agree; // by line id
    std::vector<Rational> per_plane;       // by plane id (empty when m < 2)
    Rational global{0};

    Rational per_line(std::uint64_t id) const { return Rational(q - line_agree[id], q); }
};
// Exact profile from the canonical oracle. Throws BudgetExceeded outside
// m <= 3 with q <= 31, or m = 2 with q <= 101.
DeltaProfile delta_profile(const Space& S, const PointsTable& f, bool with_planes = true);
// delta_f = 1 - accept_prob_exact(f, canonical_oracle(f)).
Rational delta_global(const Space& S, const PointsTable& f);

// Points with Pr_{l through x}[f(x) = O(l)(x)] >= eps, as sorted indices.
std::vector<std::uint64_t> epsilon_good(const Space& S, const PointsTable& f, const LinesOracle& O,
                                        const Rational& eps);

// Entries with agreement < eps replaced by kBot.
LinesOracle make_well_behaved(const Space& S, const PointsTable& f, const LinesOracle& O,
                              const Rational& eps);

inline constexpr std::uint64_t kDefaultBruteBudget = 1'000'000'000;

// Every m-variate polynomial of total degree <= d with agreement >= threshold
// against f, by exhaustive enumeration. Sorted by agreement desc, then by the
// coefficient vector over monomials_up_to order. The budget bounds point
// evaluations, q^(M-1) q^m for M monomials.
struct PolyAgreement {
    MultiPoly Q;
    std::uint64_t agree = 0;
};
std::vector<PolyAgreement> brute_force_list(const Space& S, const PointsTable& f, unsigned d,
                                            const Rational& threshold,
                                            std::uint64_t budget = kDefaultBruteBudget);

struct PlaneDiagnostics {
    Plane plane;
    Rational delta{0};              // delta_f(pi)
    std::uint64_t locally_good = 0; // points of pi that are eps-good within pi
    Rational explain_threshold{0};
    std::vector<PolyAgreement> explaining; // bivariate, in plane coordinates (s, t)
    std::vector<std::uint8_t> explained;   // per plane point, (s, t) lexicographic
    std::uint64_t explained_count = 0;
};
// explain_threshold defaults to eps when not given.
PlaneDiagnostics plane_diagnostics(const Space& S, const PointsTable& f, const LinesOracle& canonical,
                                   const Plane& pl, const Rational& eps,
                                   std::optional<Rational> explain_threshold = std::nullopt,
                                   std::uint64_t budget = kDefaultBruteBudget);

// Unique polynomial of individual degree < q in every variable agreeing with
// f everywhere (f must be total).
MultiPoly interpolate_table(const Space& S, const PointsTable& f);

// Monomials of total degree <= d in n variables, graded then lexicographic.
std::vector<Exponent> monomials_up_to(std::size_t n, unsigned d);

} // namespace ldtlab
