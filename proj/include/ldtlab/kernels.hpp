#pragma once

#include "ldtlab/field.hpp"

#include <cstddef>
#include <span>

// Hot loops over evaluation vectors. Every entry point has a scalar
// reference implementation; an AVX2 variant is picked at runtime when the
// CPU supports it. Values are residues mod p < 2^31; kBot marks holes.
namespace ldtlab::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa() noexcept;
bool isa_available(Isa isa) noexcept;
// Forces a variant (tests). Throws PreconditionError if unavailable.
void force_isa(Isa isa);
const char* isa_name(Isa isa) noexcept;

// acc[i] = acc[i] + inc[i] mod p
void add_mod(std::span<Elem> acc, std::span<const Elem> inc, Elem p);
// out[i] = a[i] - b[i] mod p, or kBot where a[i] == kBot
void sub_mod(std::span<Elem> out, std::span<const Elem> a, std::span<const Elem> b, Elem p);
// #{i : a[i] == b[i] != kBot}
std::size_t count_equal(std::span<const Elem> a, std::span<const Elem> b);

namespace scalar {
void add_mod(Elem* acc, const Elem* inc, std::size_t n, Elem p);
void sub_mod(Elem* out, const Elem* a, const Elem* b, std::size_t n, Elem p);
std::size_t count_equal(const Elem* a, const Elem* b, std::size_t n);
} // namespace scalar

namespace avx2 {
void add_mod(Elem* acc, const Elem* inc, std::size_t n, Elem p);
void sub_mod(Elem* out, const Elem* a, const Elem* b, std::size_t n, Elem p);
std::size_t count_equal(const Elem* a, const Elem* b, std::size_t n);
} // namespace avx2

} // namespace ldtlab::kernels
