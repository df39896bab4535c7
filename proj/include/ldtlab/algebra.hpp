#pragma once

#include "ldtlab/field.hpp"
#include "ldtlab/multipoly.hpp"
#include "ldtlab/rational.hpp"
#include "ldtlab/unipoly.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ldtlab {

// C(n, k) mod p via Lucas.
Elem binom_mod(const PrimeField& F, std::uint64_t n, std::uint64_t k);

// Hasse derivative: the coefficient of z^e in f(x + z).
MultiPoly hasse_derivative(const PrimeField& F, const MultiPoly& f, std::span<const unsigned> e);
// First-order partial along one variable.
MultiPoly partial(const PrimeField& F, const MultiPoly& f, std::size_t var);

// Sylvester matrix in `var`, ascending layout: the first deg(B) rows hold the
// coefficients of A shifted right, the remaining deg(A) rows those of B.
std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& A, const MultiPoly& B,
                                                     std::size_t var);
// Determinant over the polynomial ring by fraction-free elimination.
MultiPoly bareiss_determinant(const PrimeField& F, std::vector<std::vector<MultiPoly>> M);
// Res_var(A, B); either input may have degree 0 in var, not both of degree <= 0.
MultiPoly resultant(const PrimeField& F, const MultiPoly& A, const MultiPoly& B, std::size_t var);
// Res_var(A, d/dvar A).
MultiPoly discriminant(const PrimeField& F, const MultiPoly& A, std::size_t var);
// Requires d/dvar A != 0. True iff the discriminant is nonzero.
bool is_squarefree(const PrimeField& F, const MultiPoly& A, std::size_t var);

// Drops every term whose degree in `vars` is at least k + 1.
MultiPoly truncate_mod_ideal(const MultiPoly& f, std::span<const std::size_t> vars, unsigned k);

// Number of zeros of f on S^n (S a set of field elements).
std::uint64_t count_zeros_product_set(const PrimeField& F, const MultiPoly& f,
                                      std::span<const Elem> S);

// Indices with xs[i] >= mu/2. Requires sum(xs) >= mu * n; then the result
// has at least mu*n/2 members carrying at least mu*n/2 of the mass.
std::vector<std::size_t> averaging_split(std::span<const Rational> xs, const Rational& mu);

} // namespace ldtlab
