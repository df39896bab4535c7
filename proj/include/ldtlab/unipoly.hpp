#pragma once

#include "ldtlab/field.hpp"

#include <compare>
#include <span>
#include <utility>
#include <vector>

namespace ldtlab {

// Dense univariate polynomial, coefficients ascending, no trailing zeros.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Elem> coeffs);
    static UniPoly constant(Elem c);
    static UniPoly monomial(Elem c, std::size_t deg);

    bool is_zero() const noexcept { return c_.empty(); }
    // -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    Elem coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Elem>& coeffs() const noexcept { return c_; }
    // Coefficients padded with zeros to length n (n >= size).
    std::vector<Elem> padded(std::size_t n) const;
    Elem lead() const noexcept { return c_.empty() ? 0 : c_.back(); }

    Elem eval(const PrimeField& F, Elem t) const noexcept;
    // Values at t = 0, 1, ..., q-1.
    std::vector<Elem> eval_all(const PrimeField& F) const;

    bool operator==(const UniPoly&) const = default;
    // Lexicographic on constant-first coefficient vectors padded to equal length.
    std::strong_ordering operator<=>(const UniPoly& o) const;

private:
    void trim();
    std::vector<Elem> c_;
};

UniPoly add(const PrimeField& F, const UniPoly& a, const UniPoly& b);
UniPoly sub(const PrimeField& F, const UniPoly& a, const UniPoly& b);
UniPoly mul(const PrimeField& F, const UniPoly& a, const UniPoly& b);
UniPoly scale(const PrimeField& F, const UniPoly& a, Elem s);
// Quotient and remainder; b nonzero.
std::pair<UniPoly, UniPoly> divmod(const PrimeField& F, const UniPoly& a, const UniPoly& b);
// Monic gcd (zero if both are zero).
UniPoly gcd(const PrimeField& F, UniPoly a, UniPoly b);
UniPoly derivative(const PrimeField& F, const UniPoly& a);
// t -> s + lambda*t.
UniPoly compose_affine(const PrimeField& F, const UniPoly& a, Elem s, Elem lambda);
// Lagrange interpolation through distinct xs.
UniPoly interpolate(const PrimeField& F, std::span<const Elem> xs, std::span<const Elem> ys);
// Unique polynomial of degree < q taking values v[t] at t = 0..q-1.
UniPoly interpolate_full(const PrimeField& F, std::span<const Elem> v);

} // namespace ldtlab
