#pragma once

#include "ldtlab/geometry.hpp"
#include "ldtlab/ldt.hpp"
#include "ldtlab/multipoly.hpp"
#include "ldtlab/rational.hpp"
#include "ldtlab/support.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Bivariate high-error decoding: good directions, structured grid, explainer
// interpolation, pencil decoding and the end-to-end pipeline.
namespace ldtlab {

// Trivariate A(x, y, z) with the invariants checked at construction:
// wdeg_(1,1,d)(A) <= D, d/dz A != 0, Disc_z(A) != 0, support within
// N_{d,D,p}, deg_z(A) <= D/d.
struct Explainer {
    MultiPoly A;
    unsigned d = 0;
    unsigned D = 0;
    MonomialSupport support;
    unsigned d_z = 0;
    MultiPoly disc; // Disc_z(A), bivariate in (x, y)
};
// Throws InconsistencyError when an invariant fails.
Explainer make_explainer(const PrimeField& F, MultiPoly A, unsigned d, unsigned D);

// Linear frame (a, b) -> a*dir1 + b*dir2 of F_q^2. Columns x = a run along
// dir2 and rows y = b along dir1.
struct GoodDirections {
    Point dir1, dir2;
    std::vector<std::uint8_t> H; // frame-indexed, a*q + b
    std::uint64_t h_count = 0;
};
Point frame_point(const Space& S, const GoodDirections& g, Elem a, Elem b);

// Best direction pair over all pairs by |H|. The smallest pair of direction
// indices wins ties. nullopt if |H| < eps^2 q^2 / 8.
std::optional<GoodDirections> find_good_directions(const Space& S, const PointsTable& f,
                                                   const LinesOracle& O, const Rational& eps);

struct StructuredGrid {
    std::uint32_t q = 0;
    std::vector<std::uint8_t> H; // frame-indexed
    Point dir1, dir2;
    std::vector<Elem> S1, S2; // sorted
    Rational gamma{0};        // |H| = 2 gamma q^2
    bool window_ok = false;   // 2 ln(q) / gamma^2 <= r <= gamma q
    unsigned attempts = 0;
};
inline constexpr unsigned kDefaultGridRetries = 64;
// nullopt if no S1 passing the per-row check is found within max_attempts.
std::optional<StructuredGrid> structured_grid(const Space& S, const GoodDirections& g, unsigned r,
                                              std::uint64_t seed,
                                              unsigned max_attempts = kDefaultGridRetries);

// P(tau) with P(tau) = O(l)(p0 + tau*w) for the line l through p0 along w;
// nullopt for kBot entries.
std::optional<UniPoly> oracle_along(const Space& S, const LinesOracle& O, const Point& p0,
                                    const Point& w);

struct InterpolationResult {
    MultiPoly A; // frame coordinates
    bool dimension_count_met = false;
    std::size_t unknowns = 0, equations = 0, kernel_dim = 0;
};
// Nonzero A on N_{d,D,p} with A(a, y, P_{x=a}(y)) = 0 for every a in S1,
// the first reduced-echelon kernel vector. nullopt if the kernel is
// trivial. With strict, a failed dimension count throws PreconditionError.
std::optional<InterpolationResult> interpolate_explainer(const Space& S, const LinesOracle& O,
                                                         const StructuredGrid& grid, unsigned d,
                                                         unsigned D, bool strict = false);

struct PropagationResult {
    std::vector<Point> points;      // original coordinates, sorted
    std::vector<Elem> rows_checked; // rows of S2 whose row polynomial vanished
    std::vector<Elem> rows_failed;
};
// Points (a, b) of H with b in S2 on rows where A(x, b, R_b(x)) = 0.
PropagationResult vanish_propagate(const Space& S, const PointsTable& f, const LinesOracle& O,
                                   const StructuredGrid& grid, const MultiPoly& A);

struct LabeledPoint {
    Point x;
    Elem value;
};
// Minimal (1,1,d)-weighted degree A on N_{d,D,p} vanishing at every
// (x, value) with d/dz A != 0 and Disc_z(A) != 0; nullopt above D_max.
std::optional<Explainer> minimal_explainer(const PrimeField& F, const std::vector<LabeledPoint>& pts,
                                           unsigned d, unsigned D_max);

struct PencilInstance {
    Point center;
    std::map<Point, UniPoly> local_roots; // direction -> P_{b,u}(t)
};
// Throws PreconditionError unless A(b, z) is square-free with nonzero
// derivative.
PencilInstance make_pencil(const PrimeField& F, const Explainer& A, const Point& b);
// Stores P after checking A(b + t u, P(t)) = 0 exactly; false if it fails.
bool add_local_root(const PrimeField& F, const Explainer& A, PencilInstance& pencil, const Point& u,
                    const UniPoly& P);

struct PencilDecode {
    MultiPoly P;
    Elem alpha = 0;
    std::vector<Point> agreeing; // S', sorted
    bool lemma_hypothesis_met = false;
};
// Majority constant term (smallest on ties), Newton lift, exact check.
std::optional<PencilDecode> pencil_decode(const PrimeField& F, const Explainer& A,
                                          const PencilInstance& pencil);
// Same for every constant term occurring in the pencil, in increasing alpha.
std::vector<PencilDecode> pencil_decode_all(const PrimeField& F, const Explainer& A,
                                            const PencilInstance& pencil);

using Metric = std::variant<std::int64_t, double, bool, std::string, Rational>;
struct StageRecord {
    std::string name;
    std::string status; // ok | empty | skipped | failed
    std::vector<std::pair<std::string, Metric>> metrics;

    bool operator==(const StageRecord&) const = default;
};

struct DecodedPoly {
    MultiPoly Q;
    Rational agreement{0};
};

struct BiDecodeParams {
    std::optional<Rational> min_agreement; // default eps / 2
    std::optional<unsigned> D_max;         // default d + 8
    unsigned grid_retries = kDefaultGridRetries;
    unsigned max_centers = 8;
    std::uint64_t seed = 0;
};

struct BiDecodeResult {
    Rational eps{0};
    Rational min_agreement{0};
    std::vector<StageRecord> stages;
    std::vector<DecodedPoly> results; // agreement desc, then coefficients
};

BiDecodeResult decode_bivariate(const Space& S, const PointsTable& f, const Rational& eps,
                                const BiDecodeParams& params = {});
// Same with a precomputed canonical oracle.
BiDecodeResult decode_bivariate(const Space& S, const PointsTable& f, const LinesOracle& canonical,
                                const Rational& eps, const BiDecodeParams& params = {});

struct LowErrorWitness {
    Rational delta{0};       // delta_f
    bool hypothesis_met = false; // delta < 1/100
    Rational corr_agreement{0};  // Pr[f = f_corr]
    std::optional<MultiPoly> Q;  // f_corr when it has degree <= d
    Rational q_agreement{0};
    Rational bound{0};           // 1 - 2 delta
    bool bound_met = false;
};

struct ListHighAgreement {
    Rational h1{0};
    std::vector<PolyAgreement> list;
    std::uint64_t good_points = 0;
    std::uint64_t unexplained_good = 0;
    Rational unexplained_fraction{0}; // over all q^2 points
    bool list_form_met = false;       // unexplained_fraction <= eps0
    std::optional<LowErrorWitness> low_error;
};
// List threshold h1 defaults to max(eps^8, 2 sqrt(d/q)); the low-error
// witness is computed when delta_f <= low_error_max.
ListHighAgreement list_and_highagreement_forms(const Space& S, const PointsTable& f,
                                               const Rational& eps0, const Rational& eps,
                                               std::optional<Rational> h1 = std::nullopt,
                                               const Rational& low_error_max = Rational(1, 10),
                                               std::uint64_t budget = kDefaultBruteBudget);

} // namespace ldtlab
