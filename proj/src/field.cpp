#include "ldtlab/field.hpp"

#include "ldtlab/errors.hpp"

#include <string>

namespace ldtlab {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (p >= (1u << 31) || !is_prime(p))
        throw NotPrime("modulus " + std::to_string(p) + " is not a prime below 2^31");
    if (p < (1u << 16)) {
        fastmod_m_ = ~std::uint64_t(0) / p + 1;
        inv_table_.assign(p, 0);
        if (p > 1) inv_table_[1] = 1;
        for (std::uint32_t a = 2; a < p; ++a)
            inv_table_[a] = mul(p - p / a, inv_table_[p % a]);
    }
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const noexcept {
    Elem r = 1 % p_;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw PreconditionError("inverse of zero");
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, p_ - 2);
}

} // namespace ldtlab
