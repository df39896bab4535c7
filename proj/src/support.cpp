#include "ldtlab/support.hpp"

#include "ldtlab/errors.hpp"

namespace ldtlab {

MonomialSupport enumerate_support(unsigned d, unsigned D, unsigned p, bool restricted) {
    if (d == 0) throw PreconditionError("support: d must be positive");
    if (restricted && p < 2) throw PreconditionError("support: restricted needs a characteristic");
    MonomialSupport s{d, D, p, restricted, {}};
    for (unsigned i = 0; i <= D; ++i)
        for (unsigned j = 0; i + j <= D; ++j)
            for (unsigned k = 0; i + j + d * k <= D; ++k) {
                if (restricted && k != 0 && k % p == 0) continue;
                s.members.push_back({i, j, k});
            }
    return s;
}

std::uint64_t support_size_closed_form(unsigned d, unsigned D) {
    // sum over k of the number of (i, j) with i + j <= D - d k
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; d * k <= D; ++k) {
        std::uint64_t r = D - d * k;
        total += (r + 1) * (r + 2) / 2;
    }
    return total;
}

SupportBounds support_bounds(unsigned d, unsigned D, unsigned p) {
    SupportBounds b;
    b.d = d;
    b.D = D;
    b.p = p;
    b.n_dD = enumerate_support(d, D).members.size();
    b.n_dDp = enumerate_support(d, D, p, true).members.size();
    const Rational Dr(D), dr(d);
    const Rational cube = Dr * Dr * Dr / (3 * dr), lin = Dr * dr / 6;
    b.lower = cube - Rational(5, 2) * Dr * Dr + lin;
    b.upper = cube + Rational(3, 2) * Dr * Dr + lin;
    b.final_bound = Dr * Dr * Dr / (12 * dr);
    const Rational n(static_cast<std::int64_t>(b.n_dD)), np(static_cast<std::int64_t>(b.n_dDp));
    b.two_sided_holds = b.lower <= n && n <= b.upper;
    b.half_holds = 2 * np >= n;
    b.final_applies = D > 20 * d;
    b.final_holds = !b.final_applies || np >= b.final_bound;
    return b;
}

} // namespace ldtlab
