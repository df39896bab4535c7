#pragma once

#include "ldtlab/field.hpp"
#include "ldtlab/multipoly.hpp"

namespace ldtlab {

// A(x_1..x_n, z) with z the last variable. For a simple root alpha of
// A(0, z), returns the unique Phi_k of degree <= k with Phi_k(0) = alpha and
// A(x, Phi_k(x)) = 0 mod <x>^(k+1). Phi_k is an n-variate polynomial.
// Throws PreconditionError if alpha is not a simple root.
MultiPoly newton_lift(const PrimeField& F, const MultiPoly& A, Elem alpha, unsigned k);

// A(x, Phi(x)) reduced mod <x>^(k+1); Phi is n-variate.
MultiPoly substitute_z_truncated(const PrimeField& F, const MultiPoly& A, const MultiPoly& Phi,
                                 unsigned k);

// A(x, Phi(x)) exactly.
MultiPoly substitute_z(const PrimeField& F, const MultiPoly& A, const MultiPoly& Phi);

} // namespace ldtlab
