#pragma once

#include "ldtlab/field.hpp"
#include "ldtlab/unipoly.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ldtlab {

using Exponent = std::vector<std::uint16_t>;

// Sparse multivariate polynomial over F_p. Terms are keyed by exponent
// vectors in lexicographic order; zero coefficients are never stored.
class MultiPoly {
public:
    using Terms = std::map<Exponent, Elem>;

    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : n_(nvars) {}
    static MultiPoly constant(std::size_t nvars, Elem c);
    static MultiPoly variable(std::size_t nvars, std::size_t i);
    static MultiPoly monomial(Exponent e, Elem c);
    // Embeds a univariate polynomial as a polynomial in variable `var`.
    static MultiPoly from_uni(std::size_t nvars, std::size_t var, const UniPoly& u);

    std::size_t nvars() const noexcept { return n_; }
    const Terms& terms() const noexcept { return t_; }
    bool is_zero() const noexcept { return t_.empty(); }
    std::size_t size() const noexcept { return t_.size(); }

    Elem coeff(const Exponent& e) const;
    // Adds c to the coefficient of e.
    void add_term(const PrimeField& F, const Exponent& e, Elem c);
    void set_term(const Exponent& e, Elem c);

    int total_degree() const;
    int degree_in(std::size_t var) const;
    int weighted_degree(std::span<const int> w) const;
    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    Elem eval(const PrimeField& F, std::span<const Elem> x) const;

    bool operator==(const MultiPoly&) const = default;

private:
    std::size_t n_ = 0;
    Terms t_;
};

MultiPoly add(const PrimeField& F, const MultiPoly& a, const MultiPoly& b);
MultiPoly sub(const PrimeField& F, const MultiPoly& a, const MultiPoly& b);
MultiPoly mul(const PrimeField& F, const MultiPoly& a, const MultiPoly& b);
MultiPoly scale(const PrimeField& F, const MultiPoly& a, Elem s);
MultiPoly pow(const PrimeField& F, const MultiPoly& a, unsigned e);

// Coefficients of a as a polynomial in `var`: result[k] multiplies var^k and
// does not involve var.
std::vector<MultiPoly> coeffs_in(const MultiPoly& a, std::size_t var);
// Simultaneous substitution x_i <- images[i]; images share one arity.
MultiPoly compose(const PrimeField& F, const MultiPoly& a, std::span<const MultiPoly> images);
// x_var <- g, other variables unchanged.
MultiPoly substitute(const PrimeField& F, const MultiPoly& a, std::size_t var, const MultiPoly& g);
// Evaluates all variables except `keep` at point (entry for `keep` ignored).
UniPoly restrict_to_var(const PrimeField& F, const MultiPoly& a, std::size_t keep,
                        std::span<const Elem> point);
// Requires at most one variable `var` to occur.
UniPoly to_uni(const MultiPoly& a, std::size_t var);
// Exact division; throws InconsistencyError when b does not divide a.
MultiPoly divide_exact(const PrimeField& F, const MultiPoly& a, const MultiPoly& b);

} // namespace ldtlab
