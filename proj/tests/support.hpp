#pragma once

#include "ldtlab/ldt.hpp"
#include "ldtlab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

// Instance builders shared by the unit tests.
namespace testsupport {

using namespace ldtlab;

inline MultiPoly random_poly(std::uint32_t q, std::size_t n, unsigned d, CounterRng& r) {
    MultiPoly Q(n);
    for (const auto& e : monomials_up_to(n, d)) Q.set_term(e, static_cast<Elem>(r.below(q)));
    return Q;
}

inline MultiPoly random_poly(const Space& S, unsigned d, CounterRng& r) {
    return random_poly(S.q(), S.m(), d, r);
}

inline PointsTable random_table(const Space& S, unsigned d, CounterRng& r) {
    std::vector<Elem> v(S.num_points());
    for (auto& x : v) x = static_cast<Elem>(r.below(S.q()));
    return make_table(S, d, std::move(v));
}

// k distinct points moved to a different value.
inline PointsTable corrupt_exact(const Space& S, PointsTable f, std::size_t k, CounterRng& r) {
    std::vector<std::uint64_t> idx(S.num_points());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + r.below(idx.size() - i)]);
    for (std::size_t i = 0; i < k; ++i)
        f.values[idx[i]] = S.field().add(f.values[idx[i]], 1 + static_cast<Elem>(r.below(S.q() - 1)));
    return f;
}

// Q on exactly k points, other values uniform among those differing from Q.
inline PointsTable planted(const Space& S, const MultiPoly& Q, unsigned d, std::size_t k, CounterRng& r) {
    auto f = table_of(S, Q, d);
    return corrupt_exact(S, std::move(f), S.num_points() - k, r);
}

} // namespace testsupport
