#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

// Under C++20 the reversed-operand rewrite makes Boost 1.74's mixed
// rational/integer operator== call itself. Exact non-template overloads win
// overload resolution and break the cycle.
namespace boost {
#define LDTLAB_RATIONAL_EQ(T)                                                                   \
    inline bool operator==(const rational<std::int64_t>& a, T b) {                              \
        return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);           \
    }                                                                                           \
    inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }             \
    inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }          \
    inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
LDTLAB_RATIONAL_EQ(int)
LDTLAB_RATIONAL_EQ(long)
LDTLAB_RATIONAL_EQ(long long)
#undef LDTLAB_RATIONAL_EQ
} // namespace boost

namespace ldtlab {

using Rational = boost::rational<std::int64_t>;

// Parses "3/7", "0.25" or "2" exactly. Throws PreconditionError on junk.
Rational parse_rational(std::string_view s);
std::string to_string(const Rational& r);
inline double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

// Exact comparisons of count/total against a rational threshold.
inline bool ratio_ge(std::int64_t count, std::int64_t total, const Rational& t) {
    return static_cast<__int128>(count) * t.denominator() >=
           static_cast<__int128>(t.numerator()) * total;
}
inline bool ratio_gt(std::int64_t count, std::int64_t total, const Rational& t) {
    return static_cast<__int128>(count) * t.denominator() >
           static_cast<__int128>(t.numerator()) * total;
}
inline bool ratio_le(std::int64_t count, std::int64_t total, const Rational& t) {
    return !ratio_gt(count, total, t);
}
inline bool ratio_lt(std::int64_t count, std::int64_t total, const Rational& t) {
    return !ratio_ge(count, total, t);
}

// Smallest integer c with c/total >= t (t >= 0).
std::int64_t ceil_count(const Rational& t, std::int64_t total);

// Smallest n/den with (n/den)^2 >= x, for x >= 0.
Rational sqrt_upper(const Rational& x, std::int64_t den = 1'000'000);
// Smallest n/den >= x^e, for x >= 0.
Rational pow_upper(const Rational& x, unsigned e, std::int64_t den = 1'000'000'000);

} // namespace ldtlab
