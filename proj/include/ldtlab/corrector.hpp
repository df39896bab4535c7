#pragma once

#include "ldtlab/bidecoder.hpp"
#include "ldtlab/geometry.hpp"
#include "ldtlab/ldt.hpp"
#include "ldtlab/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Self-correction: plurality correction, iterated correction to a
// polynomial, and the advice corrector with list-decoding disambiguation.
namespace ldtlab {

enum class CorrectionMode { plurality, advice };

struct CorrectedTable {
    PointsTable table; // kBot where disambiguation failed
    CorrectionMode mode = CorrectionMode::plurality;
    std::optional<Point> advice_point;
    std::optional<Elem> advice_value;
    Rational delta{0};
};

// Most frequent canonical line value through each point; ties go to the
// smallest field element.
CorrectedTable plurality_correct(const Space& S, const PointsTable& f);
CorrectedTable plurality_correct(const Space& S, const PointsTable& f, const LinesOracle& canonical);

struct IterateResult {
    MultiPoly Q;
    unsigned iters = 0;
    std::vector<Rational> deltas; // delta of each table visited, starting with f
};
inline constexpr unsigned kDefaultMaxIters = 16;
// Plurality correction until delta = 0; then the interpolated polynomial if
// its total degree is <= d. nullopt otherwise.
std::optional<IterateResult> iterate_correct(const Space& S, const PointsTable& f,
                                             unsigned max_iters = kDefaultMaxIters);

// f^{x,sigma}_corr at list threshold delta. The value at x is sigma; at y,
// the unique entry P of the list on line(x, y) with P(x) = sigma gives P(y),
// otherwise kBot.
CorrectedTable advice_correct(const Space& S, const PointsTable& f, const Point& x, Elem sigma,
                              const Rational& delta, std::uint64_t budget = kDefaultEnumBudget);

struct AdviceDiagnostics {
    Point x;
    Elem sigma = 0;
    std::uint64_t rank = 0;      // position in the ranked candidate order
    std::uint64_t bot_count = 0; // kBot entries of the corrected table
    std::optional<Rational> corrected_delta;
    std::string outcome; // recovered, covered, not_low_error, iterate_failed, below_floor
    std::optional<MultiPoly> Q;
};

struct MultiDecodeParams {
    std::optional<Rational> list_threshold; // default max(eps^8/2, sqrt(d/q))
    std::optional<Rational> gamma;          // default eps^2/12
    std::optional<Rational> mu;             // default eps
    std::optional<Rational> min_agreement;  // default eps^2
    Rational trigger_delta{1, 10};
    unsigned advice_cap = 32;
    unsigned max_iters = kDefaultMaxIters;
    bool skip_covered = true;
    bool best_effort = false;
    std::uint64_t budget = kDefaultEnumBudget;
};

struct MultiDecodeResult {
    Rational eps{0};
    Rational list_threshold{0};
    Rational gamma{0}, mu{0}, min_agreement{0};
    Rational accept{0};
    bool hypothesis_met = false; // accept >= 5 eps
    std::uint64_t candidates = 0; // |S|
    bool density_met = false;     // |S| >= mu q^m
    std::vector<StageRecord> stages;
    std::vector<AdviceDiagnostics> advice;
    std::vector<DecodedPoly> results;
};

// Throws PreconditionError if accept < 5 eps and best_effort is unset.
MultiDecodeResult decode_multivariate(const Space& S, const PointsTable& f, const Rational& eps,
                                      const MultiDecodeParams& params = {});

} // namespace ldtlab
