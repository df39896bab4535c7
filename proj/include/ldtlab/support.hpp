#pragma once

#include "ldtlab/rational.hpp"

#include <cstdint>
#include <vector>

namespace ldtlab {

// Monomial x^i y^j z^k.
struct Triple {
    unsigned i, j, k;
    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

// N_{d,D}: triples with i + j + d*k <= D. With `restricted`, only k = 0 or
// p not dividing k (N_{d,D,p}).
struct MonomialSupport {
    unsigned d = 0, D = 0, p = 0;
    bool restricted = false;
    std::vector<Triple> members; // sorted
};

MonomialSupport enumerate_support(unsigned d, unsigned D, unsigned p = 0, bool restricted = false);

// Closed form of |N_{d,D}|.
std::uint64_t support_size_closed_form(unsigned d, unsigned D);

// Exact counts against the three size bounds:
//   D^3/3d - 5/2 D^2 + Dd/6 <= |N_{d,D}| <= D^3/3d + 3/2 D^2 + Dd/6,
//   |N_{d,D,p}| >= |N_{d,D}| / 2,
//   |N_{d,D,p}| >= D^3/12d when D > 20d.
struct SupportBounds {
    unsigned d = 0, D = 0, p = 0;
    std::uint64_t n_dD = 0, n_dDp = 0;
    Rational lower{0}, upper{0}, final_bound{0};
    bool two_sided_holds = false;
    bool half_holds = false;
    bool final_applies = false; // D > 20d
    bool final_holds = false;   // vacuously true when it does not apply
};
SupportBounds support_bounds(unsigned d, unsigned D, unsigned p);

} // namespace ldtlab
