#include "ldtlab/rational.hpp"

#include "ldtlab/errors.hpp"

#include <charconv>
#include <cmath>

namespace ldtlab {

namespace {

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw PreconditionError("bad rational literal '" + std::string(s) + "'");
    return v;
}

} // namespace

Rational parse_rational(std::string_view s) {
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::int64_t den = parse_int(s.substr(slash + 1));
        if (den == 0) throw PreconditionError("zero denominator");
        return Rational(parse_int(s.substr(0, slash)), den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip.remove_prefix(1);
        if (fp.size() > 15) throw PreconditionError("too many decimals in '" + std::string(s) + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        std::int64_t num = (ip.empty() ? 0 : parse_int(ip)) * den + (fp.empty() ? 0 : parse_int(fp));
        return Rational(neg ? -num : num, den);
    }
    return Rational(parse_int(s));
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t ceil_count(const Rational& t, std::int64_t total) {
    __int128 n = static_cast<__int128>(t.numerator()) * total;
    __int128 d = t.denominator();
    __int128 c = n / d;
    if (c * d < n) ++c;
    return static_cast<std::int64_t>(c < 0 ? 0 : c);
}

Rational sqrt_upper(const Rational& x, std::int64_t den) {
    if (x < 0) throw PreconditionError("sqrt_upper: negative argument");
    // (n/den)^2 >= a/b  <=>  n^2 b >= a den^2
    const __int128 a = x.numerator(), b = x.denominator();
    const __int128 rhs = a * den * den;
    auto n = static_cast<std::int64_t>(std::floor(std::sqrt(to_double(x)) * den));
    if (n < 0) n = 0;
    while (n > 0 && static_cast<__int128>(n - 1) * (n - 1) * b >= rhs) --n;
    while (static_cast<__int128>(n) * n * b < rhs) ++n;
    return Rational(n, den);
}

Rational pow_upper(const Rational& x, unsigned e, std::int64_t den) {
    if (x < 0) throw PreconditionError("pow_upper: negative argument");
    const __int128 limit = static_cast<__int128>(1) << 100;
    __int128 a = 1, b = 1;
    for (unsigned i = 0; i < e; ++i) {
        a *= x.numerator();
        b *= x.denominator();
        if (a > limit || b > limit) throw PreconditionError("pow_upper: overflow");
    }
    // ceil(a den / b); a <= b keeps the product in range for x <= 1.
    if (a > limit / den) throw PreconditionError("pow_upper: overflow");
    __int128 n = a * den;
    __int128 c = n / b;
    if (c * b < n) ++c;
    return Rational(static_cast<std::int64_t>(c), den);
}

} // namespace ldtlab
