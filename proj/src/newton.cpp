#include "ldtlab/newton.hpp"

#include "ldtlab/algebra.hpp"
#include "ldtlab/errors.hpp"

#include <vector>

namespace ldtlab {

namespace {

unsigned degree_of(const Exponent& e) {
    unsigned s = 0;
    for (auto x : e) s += x;
    return s;
}

// Product keeping only terms of total degree <= k.
MultiPoly mul_trunc(const PrimeField& F, const MultiPoly& a, const MultiPoly& b, unsigned k) {
    MultiPoly r(a.nvars());
    Exponent e(a.nvars());
    for (const auto& [ea, ca] : a.terms()) {
        unsigned da = degree_of(ea);
        if (da > k) continue;
        for (const auto& [eb, cb] : b.terms()) {
            if (da + degree_of(eb) > k) continue;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            r.add_term(F, e, F.mul(ca, cb));
        }
    }
    return r;
}

// Coefficients of A in its last variable, each as an n-variate polynomial.
std::vector<MultiPoly> z_coeffs(const MultiPoly& A) {
    const std::size_t n = A.nvars() - 1;
    int dz = A.degree_in(n);
    std::vector<MultiPoly> out(dz < 0 ? 0 : dz + 1, MultiPoly(n));
    for (const auto& [e, c] : A.terms()) {
        Exponent f(e.begin(), e.end() - 1);
        out[e[n]].set_term(f, c);
    }
    return out;
}

MultiPoly horner(const PrimeField& F, const MultiPoly& A, const MultiPoly& Phi, int k) {
    if (A.nvars() == 0) throw DimensionMismatch("newton: A needs a z variable");
    if (Phi.nvars() + 1 != A.nvars()) throw DimensionMismatch("newton: Phi arity");
    auto cs = z_coeffs(A);
    MultiPoly acc(Phi.nvars());
    for (std::size_t i = cs.size(); i-- > 0;) {
        acc = k < 0 ? mul(F, acc, Phi) : mul_trunc(F, acc, Phi, static_cast<unsigned>(k));
        acc = add(F, acc, cs[i]);
    }
    if (k >= 0) {
        std::vector<std::size_t> vars(Phi.nvars());
        for (std::size_t i = 0; i < vars.size(); ++i) vars[i] = i;
        acc = truncate_mod_ideal(acc, vars, static_cast<unsigned>(k));
    }
    return acc;
}

} // namespace

MultiPoly substitute_z_truncated(const PrimeField& F, const MultiPoly& A, const MultiPoly& Phi,
                                 unsigned k) {
    return horner(F, A, Phi, static_cast<int>(k));
}

MultiPoly substitute_z(const PrimeField& F, const MultiPoly& A, const MultiPoly& Phi) {
    return horner(F, A, Phi, -1);
}

MultiPoly newton_lift(const PrimeField& F, const MultiPoly& A, Elem alpha, unsigned k) {
    if (A.nvars() == 0) throw DimensionMismatch("newton_lift: A needs a z variable");
    const std::size_t n = A.nvars() - 1;
    std::vector<Elem> at(n + 1, 0);
    at[n] = alpha;
    if (A.eval(F, at) != 0) throw PreconditionError("newton_lift: alpha is not a root of A(0, z)");
    Elem c = partial(F, A, n).eval(F, at);
    if (c == 0) throw PreconditionError("newton_lift: alpha is not a simple root");
    const Elem cinv = F.inv(c);

    MultiPoly phi = MultiPoly::constant(n, alpha);
    for (unsigned j = 0; j < k; ++j) {
        // A(x, Phi_j) lies in <x>^(j+1), so only u mod <x> = 1/c contributes
        // to the correction mod <x>^(j+2).
        MultiPoly r = substitute_z_truncated(F, A, phi, j + 1);
        phi = sub(F, phi, scale(F, r, cinv));
    }
    return phi;
}

} // namespace ldtlab
