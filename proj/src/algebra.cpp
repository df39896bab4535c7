#include "ldtlab/algebra.hpp"

#include "ldtlab/errors.hpp"

#include <numeric>

namespace ldtlab {

namespace {

Elem small_binom(const PrimeField& F, std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    Elem num = 1, den = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        num = F.mul(num, F.reduce(static_cast<std::int64_t>(n - i)));
        den = F.mul(den, F.reduce(static_cast<std::int64_t>(i + 1)));
    }
    return F.div(num, den);
}

} // namespace

Elem binom_mod(const PrimeField& F, std::uint64_t n, std::uint64_t k) {
    const std::uint64_t p = F.p();
    Elem r = 1 % F.p();
    while (n || k) {
        std::uint64_t a = n % p, b = k % p;
        if (b > a) return 0;
        r = F.mul(r, small_binom(F, a, b));
        n /= p;
        k /= p;
    }
    return r;
}

MultiPoly hasse_derivative(const PrimeField& F, const MultiPoly& f, std::span<const unsigned> e) {
    if (e.size() != f.nvars()) throw DimensionMismatch("hasse: order arity");
    MultiPoly r(f.nvars());
    Exponent g(f.nvars());
    for (const auto& [a, c] : f.terms()) {
        Elem m = c;
        bool keep = true;
        for (std::size_t i = 0; i < a.size() && keep; ++i) {
            if (a[i] < e[i]) {
                keep = false;
                break;
            }
            m = F.mul(m, binom_mod(F, a[i], e[i]));
            g[i] = static_cast<std::uint16_t>(a[i] - e[i]);
        }
        if (keep && m) r.add_term(F, g, m);
    }
    return r;
}

MultiPoly partial(const PrimeField& F, const MultiPoly& f, std::size_t var) {
    std::vector<unsigned> e(f.nvars(), 0);
    e.at(var) = 1;
    return hasse_derivative(F, f, e);
}

std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& A, const MultiPoly& B,
                                                     std::size_t var) {
    if (A.nvars() != B.nvars()) throw DimensionMismatch("sylvester: arity");
    auto ca = coeffs_in(A, var), cb = coeffs_in(B, var);
    if (ca.empty() || cb.empty()) throw PreconditionError("sylvester: zero polynomial");
    const std::size_t a = ca.size() - 1, b = cb.size() - 1, n = a + b;
    MultiPoly zero(A.nvars());
    std::vector<std::vector<MultiPoly>> M(n, std::vector<MultiPoly>(n, zero));
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t k = 0; k <= a; ++k) M[i][i + k] = ca[k];
    for (std::size_t j = 0; j < a; ++j)
        for (std::size_t k = 0; k <= b; ++k) M[b + j][j + k] = cb[k];
    return M;
}

MultiPoly bareiss_determinant(const PrimeField& F, std::vector<std::vector<MultiPoly>> M) {
    const std::size_t n = M.size();
    if (n == 0) throw PreconditionError("bareiss: empty matrix");
    const std::size_t nv = M[0][0].nvars();
    MultiPoly prev = MultiPoly::constant(nv, 1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k].is_zero()) {
            std::size_t s = k + 1;
            while (s < n && M[s][k].is_zero()) ++s;
            if (s == n) return MultiPoly(nv);
            std::swap(M[s], M[k]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MultiPoly t = sub(F, mul(F, M[k][k], M[i][j]), mul(F, M[i][k], M[k][j]));
                M[i][j] = divide_exact(F, t, prev);
            }
            M[i][k] = MultiPoly(nv);
        }
        prev = M[k][k];
    }
    MultiPoly det = M[n - 1][n - 1];
    return negate ? scale(F, det, F.neg(1)) : det;
}

MultiPoly resultant(const PrimeField& F, const MultiPoly& A, const MultiPoly& B, std::size_t var) {
    int a = A.degree_in(var), b = B.degree_in(var);
    if (a < 0 || b < 0) throw PreconditionError("resultant of a zero polynomial");
    if (a == 0 && b == 0) throw PreconditionError("resultant: both inputs constant in the variable");
    return bareiss_determinant(F, sylvester_matrix(A, B, var));
}

MultiPoly discriminant(const PrimeField& F, const MultiPoly& A, std::size_t var) {
    MultiPoly dA = partial(F, A, var);
    if (dA.is_zero()) throw PreconditionError("discriminant: derivative vanishes");
    return resultant(F, A, dA, var);
}

bool is_squarefree(const PrimeField& F, const MultiPoly& A, std::size_t var) {
    return !discriminant(F, A, var).is_zero();
}

MultiPoly truncate_mod_ideal(const MultiPoly& f, std::span<const std::size_t> vars, unsigned k) {
    MultiPoly r(f.nvars());
    for (const auto& [e, c] : f.terms()) {
        unsigned s = 0;
        for (auto v : vars) s += e.at(v);
        if (s <= k) r.set_term(e, c);
    }
    return r;
}

std::uint64_t count_zeros_product_set(const PrimeField& F, const MultiPoly& f,
                                      std::span<const Elem> S) {
    const std::size_t n = f.nvars();
    if (S.empty()) return 0;
    std::vector<std::size_t> idx(n, 0);
    std::vector<Elem> x(n, S[0]);
    std::uint64_t zeros = 0;
    for (;;) {
        if (f.eval(F, x) == 0) ++zeros;
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++idx[i] < S.size()) {
                x[i] = S[idx[i]];
                break;
            }
            idx[i] = 0;
            x[i] = S[0];
            if (i == 0) return zeros;
        }
        if (n == 0) return zeros;
    }
}

std::vector<std::size_t> averaging_split(std::span<const Rational> xs, const Rational& mu) {
    Rational sum(0);
    for (const auto& x : xs) {
        if (x < 0 || x > 1) throw PreconditionError("averaging: entries must lie in [0, 1]");
        sum += x;
    }
    if (sum < mu * static_cast<std::int64_t>(xs.size()))
        throw PreconditionError("averaging: mean below mu");
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] >= mu / 2) S.push_back(i);
    return S;
}

} // namespace ldtlab
