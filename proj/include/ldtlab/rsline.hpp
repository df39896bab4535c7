#pragma once

#include "ldtlab/field.hpp"
#include "ldtlab/geometry.hpp"
#include "ldtlab/rational.hpp"
#include "ldtlab/unipoly.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// Reed-Solomon decoding on a single line. Line values are indexed by the
// parameter t = 0..q-1; kBot entries never agree with anything.
namespace ldtlab {

using LineValues = std::vector<Elem>;

inline constexpr std::uint64_t kDefaultEnumBudget = 10'000'000;

struct DecodeEntry {
    UniPoly poly;
    std::uint32_t agree = 0; // number of agreeing positions out of q

    bool operator==(const DecodeEntry&) const = default;
};

// Sorted by (agreement desc, coefficients lex asc).
struct DecodeList {
    std::uint32_t q = 0;
    unsigned d = 0;
    Rational threshold{0};
    std::vector<DecodeEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    Rational agreement(std::size_t i) const { return Rational(entries[i].agree, q); }
};

// #{t : P(t) == v[t]}.
std::uint32_t agreement_count(const PrimeField& F, const UniPoly& P, std::span<const Elem> v);
// Largest agreement with the lex-smallest coefficient vector among ties.
DecodeEntry best_fit_entry(const PrimeField& F, std::span<const Elem> v, unsigned d);
UniPoly best_fit(const PrimeField& F, std::span<const Elem> v, unsigned d);
// The polynomial within Hamming distance < (q-d)/2, or nullopt.
std::optional<UniPoly> unique_decode(const PrimeField& F, std::span<const Elem> v, unsigned d);
// Every P with deg P <= d and agreement >= eps, by exhaustive enumeration.
// Throws BudgetExceeded if q^(d+1) > budget.
DecodeList list_decode(const PrimeField& F, std::span<const Elem> v, unsigned d, const Rational& eps,
                       std::uint64_t budget = kDefaultEnumBudget);
// Parameters t where two distinct entries agree in value.
std::vector<Elem> non_unique_params(const PrimeField& F, const DecodeList& L);
std::vector<Point> non_unique_points(const Space& S, const DecodeList& L, const Line& line);

// Values of P at all t in [0, q).
void eval_all_into(const PrimeField& F, const UniPoly& P, std::span<Elem> out);

} // namespace ldtlab
