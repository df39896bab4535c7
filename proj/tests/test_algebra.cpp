#include "doctest.h"

#include "ldtlab/algebra.hpp"
#include "ldtlab/errors.hpp"
#include "ldtlab/linalg.hpp"
#include "ldtlab/rng.hpp"
#include "ldtlab/support.hpp"

#include <cmath>

using namespace ldtlab;

namespace {

MultiPoly var(std::size_t n, std::size_t i) { return MultiPoly::variable(n, i); }
MultiPoly cst(std::size_t n, Elem c) { return MultiPoly::constant(n, c); }

UniPoly random_uni(const PrimeField& F, CounterRng& r, int deg) {
    std::vector<Elem> c(deg + 1);
    for (auto& x : c) x = static_cast<Elem>(r.below(F.p()));
    if (c.back() == 0) c.back() = 1;
    return UniPoly(c);
}

MultiPoly random_multi(const PrimeField& F, CounterRng& r, std::size_t n, int deg, int terms) {
    MultiPoly f(n);
    for (int t = 0; t < terms; ++t) {
        Exponent e(n, 0);
        int left = deg;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = static_cast<std::uint16_t>(r.below(left + 1));
            left -= e[i];
        }
        f.add_term(F, e, static_cast<Elem>(r.below(F.p())));
    }
    return f;
}

} // namespace

TEST_CASE("univariate basics") {
    PrimeField F(7);
    UniPoly a({1, 2, 3});
    CHECK(a.degree() == 2);
    CHECK(UniPoly().degree() == -1);
    CHECK(a.eval(F, 2) == (1 + 4 + 12) % 7);
    auto [q, r] = divmod(F, mul(F, a, UniPoly({5, 1})), UniPoly({5, 1}));
    CHECK(q == a);
    CHECK(r.is_zero());
    CHECK(gcd(F, mul(F, a, UniPoly({1, 1})), mul(F, UniPoly({3, 1}), UniPoly({1, 1}))) == UniPoly({1, 1}));
    // compose_affine against pointwise evaluation
    auto c = compose_affine(F, a, 3, 5);
    for (Elem t = 0; t < 7; ++t) CHECK(c.eval(F, t) == a.eval(F, F.add(3, F.mul(5, t))));
}

TEST_CASE("full-field interpolation round trip") {
    for (std::uint32_t p : {2u, 3u, 5u, 13u}) {
        PrimeField F(p);
        CounterRng r(p, Stream::test);
        for (int it = 0; it < 20; ++it) {
            std::vector<Elem> v(p);
            for (auto& x : v) x = static_cast<Elem>(r.below(p));
            auto P = interpolate_full(F, v);
            CHECK(P.degree() < static_cast<int>(p));
            CHECK(P.eval_all(F) == v);
            std::vector<Elem> xs(p);
            for (Elem i = 0; i < p; ++i) xs[i] = i;
            CHECK(interpolate(F, xs, v) == P);
        }
    }
}

TEST_CASE("weighted degree") {
    PrimeField F(7);
    std::vector<int> w{1, 1, 3};
    CHECK(var(3, 2).weighted_degree(w) == 3);
    MultiPoly f = add(F, mul(F, mul(F, var(3, 0), var(3, 0)), var(3, 1)), mul(F, var(3, 2), var(3, 2)));
    CHECK(f.weighted_degree(w) == 6);
    CHECK(MultiPoly(3).weighted_degree(w) == -1);
    std::vector<int> bad{1, 1};
    CHECK_THROWS_AS(f.weighted_degree(bad), DimensionMismatch);
}

TEST_CASE("hasse derivatives") {
    PrimeField F(7);
    for (unsigned d = 1; d < 10; ++d) {
        auto f = pow(F, var(1, 0), d);
        auto expect = scale(F, pow(F, var(1, 0), d - 1), F.reduce(d));
        CHECK(partial(F, f, 0) == expect);
    }
    PrimeField F2(2);
    CHECK(partial(F2, pow(F2, var(1, 0), 2), 0).is_zero());
    std::vector<unsigned> e2{2};
    CHECK(hasse_derivative(F, pow(F, var(1, 0), 3), e2) == scale(F, var(1, 0), 3));
    // Hasse derivative of x^5 of order 2 over F_2: C(5,2)=10 = 0 mod 2
    CHECK(hasse_derivative(F2, pow(F2, var(1, 0), 5), e2).is_zero());
    // coefficient-extraction definition: f(x+z) expanded, numerically
    CounterRng r(1, Stream::test);
    auto f = random_multi(F, r, 2, 5, 6);
    for (unsigned a = 0; a <= 3; ++a)
        for (unsigned b = 0; b <= 3; ++b) {
            std::vector<unsigned> e{a, b};
            auto h = hasse_derivative(F, f, e);
            // f(x + z) in vars (x0, x1, z0, z1)
            std::vector<MultiPoly> img{add(F, var(4, 0), var(4, 2)), add(F, var(4, 1), var(4, 3))};
            auto shifted = compose(F, f, img);
            MultiPoly coef(2);
            for (const auto& [ex, c] : shifted.terms())
                if (ex[2] == a && ex[3] == b) coef.add_term(F, Exponent{ex[0], ex[1]}, c);
            CHECK(h == coef);
        }
}

TEST_CASE("Leibniz rule for first-order Hasse derivatives") {
    for (std::uint32_t p : {2u, 3u, 7u}) {
        PrimeField F(p);
        CounterRng r(p, Stream::test, 9);
        for (int it = 0; it < 50; ++it) {
            auto A = random_multi(F, r, 3, 4, 5), B = random_multi(F, r, 3, 4, 5);
            for (std::size_t v = 0; v < 3; ++v) {
                auto lhs = partial(F, mul(F, A, B), v);
                auto rhs = add(F, mul(F, partial(F, A, v), B), mul(F, A, partial(F, B, v)));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("resultant examples") {
    PrimeField F7(7);
    auto x = var(1, 0);
    CHECK(resultant(F7, sub(F7, x, cst(1, 1)), sub(F7, x, cst(1, 1)), 0).is_zero());
    // det [[-2, 1], [-5, 1]] = -2 + 5 = 3
    CHECK(resultant(F7, sub(F7, x, cst(1, 2)), sub(F7, x, cst(1, 5)), 0) == cst(1, 3));
    PrimeField F5(5);
    auto x5 = var(1, 0);
    // Sylvester rows (4,0,1), (3,1,0), (0,3,1): determinant 13 = 3 mod 5
    auto res = resultant(F5, sub(F5, mul(F5, x5, x5), cst(1, 1)), add(F5, x5, cst(1, 3)), 0);
    CHECK(res == cst(1, 3));
    CHECK_THROWS_AS(resultant(F5, MultiPoly(1), x5, 0), PreconditionError);
}

TEST_CASE("discriminant examples") {
    PrimeField F5(5);
    auto x = var(1, 0);
    CHECK(!discriminant(F5, sub(F5, mul(F5, x, x), cst(1, 1)), 0).is_zero());
    auto xm1 = sub(F5, x, cst(1, 1));
    CHECK(discriminant(F5, mul(F5, xm1, xm1), 0).is_zero());
    // z^2 - (1 + x) over F_7: rows (-(1+x), 0, 1), (0, 2, 0), (0, 0, 2) -> -4(1 + x)
    PrimeField F7(7);
    auto X = var(2, 0), Z = var(2, 1);
    auto A = sub(F7, mul(F7, Z, Z), add(F7, cst(2, 1), X));
    auto D = discriminant(F7, A, 1);
    CHECK(D == add(F7, cst(2, 3), scale(F7, X, 3)));
    CHECK_THROWS_AS(discriminant(F5, pow(F5, x, 5), 0), PreconditionError);
}

TEST_CASE("is_squarefree examples") {
    PrimeField F5(5), F7(7);
    auto x = var(1, 0);
    CHECK(is_squarefree(F5, sub(F5, mul(F5, x, x), cst(1, 1)), 0));
    auto xm1 = sub(F5, x, cst(1, 1));
    CHECK(!is_squarefree(F5, mul(F5, mul(F5, xm1, xm1), add(F5, x, cst(1, 1))), 0));
    auto z = var(1, 0);
    auto c = mul(F7, mul(F7, z, sub(F7, z, cst(1, 1))), sub(F7, z, cst(1, 2)));
    CHECK(is_squarefree(F7, c, 0));
}

TEST_CASE("resultant vanishes iff gcd is nontrivial (500 random pairs)") {
    int checked = 0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u}) {
        PrimeField F(p);
        CounterRng r(p, Stream::test, 1);
        for (int it = 0; it < 100; ++it) {
            int da = 1 + static_cast<int>(r.below(4)), db = 1 + static_cast<int>(r.below(4));
            UniPoly a = random_uni(F, r, da), b = random_uni(F, r, db);
            if (it % 3 == 0) {
                UniPoly common = random_uni(F, r, 1);
                a = mul(F, a, common);
                b = mul(F, b, common);
            }
            auto res = resultant(F, MultiPoly::from_uni(1, 0, a), MultiPoly::from_uni(1, 0, b), 0);
            bool nontrivial = gcd(F, a, b).degree() >= 1;
            CHECK(res.is_zero() == nontrivial);
            ++checked;
        }
    }
    CHECK(checked == 500);
}

TEST_CASE("is_squarefree agrees with gcd(A, A') oracle") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u}) {
        PrimeField F(p);
        CounterRng r(p, Stream::test, 2);
        for (int it = 0; it < 100; ++it) {
            UniPoly a = random_uni(F, r, 1 + static_cast<int>(r.below(4)));
            if (it % 4 == 0) {
                UniPoly s = random_uni(F, r, 1);
                a = mul(F, a, mul(F, s, s));
            }
            if (derivative(F, a).is_zero()) continue;
            bool oracle = gcd(F, a, derivative(F, a)).degree() == 0;
            CHECK(is_squarefree(F, MultiPoly::from_uni(1, 0, a), 0) == oracle);
        }
    }
}

TEST_CASE("Bareiss determinant commutes with specialisation") {
    PrimeField F(13);
    CounterRng r(5, Stream::test);
    for (int it = 0; it < 20; ++it) {
        std::size_t n = 2 + r.below(3);
        std::vector<std::vector<MultiPoly>> M(n, std::vector<MultiPoly>(n));
        for (auto& row : M)
            for (auto& e : row) e = random_multi(F, r, 2, 2, 3);
        auto det = bareiss_determinant(F, M);
        for (int s = 0; s < 10; ++s) {
            std::vector<Elem> pt{static_cast<Elem>(r.below(13)), static_cast<Elem>(r.below(13))};
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m.at(i, j) = M[i][j].eval(F, pt);
            CHECK(det.eval(F, pt) == determinant(F, m));
        }
    }
}

TEST_CASE("exact multivariate division") {
    PrimeField F(7);
    CounterRng r(3, Stream::test);
    for (int it = 0; it < 30; ++it) {
        auto a = random_multi(F, r, 3, 3, 4), b = random_multi(F, r, 3, 3, 4);
        if (b.is_zero()) continue;
        CHECK(divide_exact(F, mul(F, a, b), b) == a);
    }
    CHECK_THROWS_AS(divide_exact(F, add(F, var(2, 0), cst(2, 1)), var(2, 0)), InconsistencyError);
}

TEST_CASE("truncate_mod_ideal") {
    PrimeField F(7);
    auto x = var(2, 0), y = var(2, 1);
    auto f = add(F, add(F, cst(2, 1), x), mul(F, mul(F, x, x), y));
    std::vector<std::size_t> xy{0, 1};
    CHECK(truncate_mod_ideal(f, xy, 1) == add(F, cst(2, 1), x));
    CHECK(truncate_mod_ideal(f, xy, 10) == f);
    std::vector<std::size_t> xo{0};
    CHECK(truncate_mod_ideal(pow(F, var(1, 0), 3), xo, 2).is_zero());
}

TEST_CASE("monomial support enumeration") {
    CHECK(enumerate_support(1, 2).members.size() == 10);
    auto r = enumerate_support(1, 2, 2, true);
    CHECK(r.members.size() == 9);
    for (const auto& t : r.members) CHECK(!(t.k == 2 && t.i == 0 && t.j == 0));
    CHECK(enumerate_support(3, 70, 2, true).members.size() >= 9528);
    for (unsigned d = 1; d <= 3; ++d)
        for (unsigned D = 0; D <= 40; ++D) {
            CHECK(enumerate_support(d, D).members.size() == support_size_closed_form(d, D));
            for (unsigned p : {2u, 3u, 5u})
                CHECK(2 * enumerate_support(d, D, p, true).members.size() >= enumerate_support(d, D).members.size());
        }
}

TEST_CASE("support size bounds") {
    auto b = support_bounds(1, 2, 2);
    CHECK(b.n_dD == 10);
    CHECK(b.upper == Rational(9));
    CHECK_FALSE(b.two_sided_holds);
    CHECK(b.half_holds);
    CHECK_FALSE(b.final_applies);
    CHECK(b.final_holds);
    auto c = support_bounds(1, 70, 3);
    CHECK(c.n_dD == 62196); // C(73, 3)
    CHECK(c.lower == Rational(102095));
    CHECK_FALSE(c.two_sided_holds);
    auto e = support_bounds(3, 70, 2);
    CHECK(e.final_applies);
    CHECK(e.final_holds);
    CHECK(e.n_dDp >= 9528);
    CHECK(e.final_bound == Rational(343000, 36));
}

TEST_CASE("zero counting on product sets") {
    PrimeField F5(5), F7(7);
    std::vector<Elem> S5{0, 1, 2, 3, 4}, S7{0, 1, 2, 3, 4, 5, 6};
    CHECK(count_zeros_product_set(F5, mul(F5, var(2, 0), var(2, 1)), S5) == 9);
    CHECK(count_zeros_product_set(F5, cst(2, 1), S5) == 0);
    CHECK(count_zeros_product_set(F7, sub(F7, var(2, 0), var(2, 1)), S7) == 7);
    CounterRng r(11, Stream::test);
    for (int it = 0; it < 40; ++it) {
        auto f = random_multi(F7, r, 3, 3, 4);
        if (f.is_zero()) continue;
        std::vector<Elem> S{0, 2, 3, 5};
        CHECK(count_zeros_product_set(F7, f, S) <= static_cast<std::uint64_t>(f.total_degree()) * 16);
    }
}

TEST_CASE("averaging split") {
    std::vector<Rational> xs{1, 1, 0, 0};
    CHECK(averaging_split(xs, Rational(1, 2)) == std::vector<std::size_t>{0, 1});
    std::vector<Rational> flat(5, Rational(1, 3));
    CHECK(averaging_split(flat, Rational(1, 3)).size() == 5);
    std::vector<Rational> low{0, 0};
    CHECK_THROWS_AS(averaging_split(low, Rational(1, 2)), PreconditionError);
    CounterRng r(4, Stream::test);
    for (int it = 0; it < 1000; ++it) {
        std::size_t n = 1 + r.below(20);
        std::vector<Rational> v(n);
        Rational sum(0);
        for (auto& x : v) {
            x = Rational(static_cast<std::int64_t>(r.below(11)), 10);
            sum += x;
        }
        Rational mu = sum / static_cast<std::int64_t>(n);
        auto S = averaging_split(v, mu);
        Rational mass(0);
        for (auto i : S) mass += v[i];
        CHECK(Rational(static_cast<std::int64_t>(S.size())) >= mu * static_cast<std::int64_t>(n) / 2);
        CHECK(mass >= mu * static_cast<std::int64_t>(n) / 2);
    }
}
