#pragma once

#include <cstdint>
#include <vector>

namespace ldtlab {

using Elem = std::uint32_t;

// Marks an undefined table entry. Never equal to a field value.
inline constexpr Elem kBot = 0xffffffffu;

bool is_prime(std::uint64_t n);

// Arithmetic in F_p for a prime p < 2^31. Elements are canonical residues.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t size() const noexcept { return p_; }

    Elem reduce(std::int64_t v) const noexcept {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<Elem>(r < 0 ? r + p_ : r);
    }
    Elem add(Elem a, Elem b) const noexcept {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const noexcept {
        if (fastmod_m_) {
            // p < 2^16: the product fits 32 bits; Lemire's fastmod.
            std::uint64_t low = fastmod_m_ * (a * b);
            return static_cast<Elem>((static_cast<unsigned __int128>(low) * p_) >> 64);
        }
        return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
    }
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    // Throws PreconditionError on zero.
    Elem inv(Elem a) const;
    // Inverse table for p <= 2^16 (empty otherwise).
    const std::vector<Elem>& inv_table() const noexcept { return inv_table_; }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

private:
    std::uint32_t p_;
    std::uint64_t fastmod_m_ = 0;
    std::vector<Elem> inv_table_; // filled for small p
};

} // namespace ldtlab
