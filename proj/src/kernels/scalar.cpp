#include "ldtlab/kernels.hpp"

namespace ldtlab::kernels::scalar {

void add_mod(Elem* acc, const Elem* inc, std::size_t n, Elem p) {
    for (std::size_t i = 0; i < n; ++i) {
        Elem s = acc[i] + inc[i];
        acc[i] = s >= p ? s - p : s;
    }
}

void sub_mod(Elem* out, const Elem* a, const Elem* b, std::size_t n, Elem p) {
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == kBot) {
            out[i] = kBot;
            continue;
        }
        out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i];
    }
}

std::size_t count_equal(const Elem* a, const Elem* b, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (a[i] == b[i]) & (a[i] != kBot);
    return c;
}

} // namespace ldtlab::kernels::scalar
