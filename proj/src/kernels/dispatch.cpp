#include "ldtlab/kernels.hpp"

#include "ldtlab/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ldtlab::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(LDTLAB_WITH_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() noexcept {
    // LDTLAB_ISA=scalar disables the vector path for A/B runs.
    if (const char* e = std::getenv("LDTLAB_ISA"); e && std::strcmp(e, "scalar") == 0)
        return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void check_len(std::size_t a, std::size_t b) {
    if (a != b) throw DimensionMismatch("kernel operands differ in length");
}

} // namespace

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw PreconditionError("requested ISA not available");
    current().store(isa);
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if defined(LDTLAB_WITH_AVX2)
#define LDTLAB_DISPATCH(fn, ...)                                                        \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define LDTLAB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void add_mod(std::span<Elem> acc, std::span<const Elem> inc, Elem p) {
    check_len(acc.size(), inc.size());
    LDTLAB_DISPATCH(add_mod, acc.data(), inc.data(), acc.size(), p);
}

void sub_mod(std::span<Elem> out, std::span<const Elem> a, std::span<const Elem> b, Elem p) {
    check_len(out.size(), a.size());
    check_len(a.size(), b.size());
    LDTLAB_DISPATCH(sub_mod, out.data(), a.data(), b.data(), a.size(), p);
}

std::size_t count_equal(std::span<const Elem> a, std::span<const Elem> b) {
    check_len(a.size(), b.size());
    return LDTLAB_DISPATCH(count_equal, a.data(), b.data(), a.size());
}

} // namespace ldtlab::kernels
