#include "doctest.h"

#include "ldtlab/errors.hpp"
#include "ldtlab/ldt.hpp"
#include "ldtlab/linalg.hpp"
#include "ldtlab/rng.hpp"

#include <algorithm>
#include <set>

using namespace ldtlab;

namespace {

MultiPoly random_poly(const Space& S, unsigned d, CounterRng& r) {
    MultiPoly Q(S.m());
    for (const auto& e : monomials_up_to(S.m(), d)) Q.set_term(e, static_cast<Elem>(r.below(S.q())));
    return Q;
}

PointsTable random_table(const Space& S, unsigned d, CounterRng& r) {
    std::vector<Elem> v(S.num_points());
    for (auto& x : v) x = static_cast<Elem>(r.below(S.q()));
    return make_table(S, d, std::move(v));
}

PointsTable corrupt(const Space& S, PointsTable f, std::size_t k, CounterRng& r) {
    for (std::size_t i = 0; i < k; ++i) {
        auto idx = r.below(S.num_points());
        f.values[idx] = S.field().add(f.values[idx], 1 + static_cast<Elem>(r.below(S.q() - 1)));
    }
    return f;
}

// Acceptance by walking every point and every line through it.
Rational accept_by_incidences(const Space& S, const PointsTable& f, const LinesOracle& O) {
    std::int64_t acc = 0, tot = 0;
    for (std::uint64_t xi = 0; xi < S.num_points(); ++xi) {
        Point x = S.point_at(xi);
        for (const auto& l : S.lines_through(x)) {
            ++tot;
            auto e = O.entry(S.line_id(l));
            if (e && e->eval(S.field(), *S.param_of(l, x)) == f.values[xi]) ++acc;
        }
    }
    return Rational(acc, tot);
}

} // namespace

TEST_CASE("canonical oracle of a codeword carries its restrictions") {
    Space S(5, 2);
    CounterRng r(1, Stream::test);
    auto Q = random_poly(S, 2, r);
    auto f = table_of(S, Q, 2);
    auto O = canonical_oracle(S, f);
    CHECK(O.size() == 30);
    CHECK(O.framing() == OracleFraming::canonical);
    for (std::uint64_t id = 0; id < O.size(); ++id) CHECK(O.poly(id) == restrict_to_line(S, Q, S.line_at(id)));
}

TEST_CASE("canonical oracle equals per-line best_fit") {
    Space S(7, 2);
    CounterRng r(2, Stream::test);
    auto f = random_table(S, 1, r);
    auto O = canonical_oracle(S, f);
    for (std::uint64_t id = 0; id < O.size(); ++id)
        CHECK(O.poly(id) == best_fit(S.field(), line_values(S, f, S.line_at(id)), 1));
}

TEST_CASE("restrict_to_line matches pointwise evaluation") {
    Space S(7, 3);
    CounterRng r(3, Stream::test);
    auto Q = random_poly(S, 3, r);
    for (std::uint64_t id = 0; id < S.num_lines(); id += 37) {
        Line l = S.line_at(id);
        auto P = restrict_to_line(S, Q, l);
        auto pts = S.points_on(l);
        for (Elem t = 0; t < 7; ++t) CHECK(P.eval(S.field(), t) == Q.eval(S.field(), pts[t].coords()));
    }
}

TEST_CASE("accept_prob_exact") {
    Space S(5, 2);
    CounterRng r(4, Stream::test);
    auto Q = random_poly(S, 1, r);
    auto f = table_of(S, Q, 1);
    CHECK(accept_prob_exact(S, f, canonical_oracle(S, f)) == Rational(1));

    // One corrupted value: the 6 lines through it still decode to Q, so the
    // 6 incidences at the point reject out of 150.
    auto g = f;
    g.values[7] = S.field().add(g.values[7], 1);
    auto O = canonical_oracle(S, g);
    CHECK(accept_by_incidences(S, g, O) == Rational(144, 150));
    CHECK(accept_prob_exact(S, g, O) == Rational(24, 25));

    LinesOracle bot(S, 1, OracleFraming::supplied);
    for (std::uint64_t id = 0; id < bot.size(); ++id) bot.set_bot(id);
    CHECK(accept_prob_exact(S, f, bot) == Rational(0));

    for (std::uint64_t s = 0; s < 10; ++s) {
        CounterRng rr(s, Stream::test, 44);
        auto h = random_table(S, 1, rr);
        auto Oh = canonical_oracle(S, h);
        CHECK(accept_prob_exact(S, h, Oh) == accept_by_incidences(S, h, Oh));
    }
}

TEST_CASE("incidence counting identity") {
    for (auto [q, m] : {std::pair{5u, 2u}, {7u, 2u}, {3u, 3u}, {5u, 3u}}) {
        Space S(q, m);
        std::uint64_t qm = S.num_points();
        CHECK(S.num_lines() * q == qm * (qm - 1) / (q - 1));
        if (m == 2) CHECK(S.num_lines() * q == static_cast<std::uint64_t>(q) * q * (q + 1));
    }
}

TEST_CASE("accept_prob_sampled") {
    Space S(5, 2);
    CounterRng r(5, Stream::test);
    auto f = table_of(S, random_poly(S, 1, r), 1);
    auto O = canonical_oracle(S, f);
    auto a = accept_prob_sampled(S, f, O, 1000, 9);
    CHECK(a.estimate == 1.0);
    CHECK(a.half_width == 0.0);

    auto g = random_table(S, 1, r);
    auto Og = canonical_oracle(S, g);
    auto b1 = accept_prob_sampled(S, g, Og, 500, 3);
    auto b2 = accept_prob_sampled(S, g, Og, 500, 3);
    CHECK(b1.estimate == b2.estimate);
    CHECK(b1.accepts == b2.accepts);

    double exact = to_double(accept_prob_exact(S, g, Og));
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto e = accept_prob_sampled(S, g, Og, 2000, seed);
        if (std::abs(e.estimate - exact) <= e.half_width) ++covered;
    }
    // A nominal 95% interval misses Binomial(100, 0.05) times; 90 is below
    // the 1% tail of that count.
    MESSAGE("interval covered the exact value on " << covered << " of 100 seeds");
    CHECK(covered >= 90);
}

TEST_CASE("delta_profile") {
    Space S(5, 2);
    CounterRng r(6, Stream::test);
    auto Q = random_poly(S, 1, r);
    auto f = table_of(S, Q, 1);
    auto P = delta_profile(S, f);
    CHECK(P.global == Rational(0));
    for (std::uint64_t id = 0; id < S.num_lines(); ++id) CHECK(P.per_line(id) == Rational(0));
    for (const auto& x : P.per_plane) CHECK(x == Rational(0));

    auto g = f;
    Point x0{2, 3};
    g.values[S.point_index(x0)] = S.field().add(g.values[S.point_index(x0)], 2);
    auto Pg = delta_profile(S, g);
    std::size_t nonzero = 0;
    for (std::uint64_t id = 0; id < S.num_lines(); ++id) {
        bool through = S.contains(S.line_at(id), x0);
        CHECK((P.per_line(id) == Rational(0)));
        CHECK((Pg.per_line(id) != Rational(0)) == through);
        nonzero += Pg.per_line(id) != Rational(0);
    }
    CHECK(nonzero == 6);
    CHECK(Pg.global == 1 - accept_prob_exact(S, g, canonical_oracle(S, g)));
}

TEST_CASE("per-plane values are means of per-line values") {
    Space S(3, 3);
    CounterRng r(7, Stream::test);
    auto f = random_table(S, 1, r);
    auto P = delta_profile(S, f);
    REQUIRE(P.per_plane.size() == S.num_planes());
    Rational mean_planes(0);
    for (std::uint64_t pid = 0; pid < S.num_planes(); ++pid) {
        Plane pl = S.plane_at(pid);
        Rational sum(0);
        int n = 0;
        for (std::uint64_t id = 0; id < S.num_lines(); ++id) {
            Line l = S.line_at(id);
            if (S.contains(pl, l.base) && S.contains(pl, S.add(l.base, l.dir))) {
                sum += P.per_line(id);
                ++n;
            }
        }
        CHECK(n == 12);
        CHECK(P.per_plane[pid] == sum / n);
        mean_planes += P.per_plane[pid];
    }
    CHECK(mean_planes / static_cast<std::int64_t>(S.num_planes()) == P.global);
}

TEST_CASE("delta_profile size limits") {
    CHECK_THROWS_AS(require_profile_feasible(Space(37, 3)), BudgetExceeded);
    CHECK_THROWS_AS(require_profile_feasible(Space(3, 4)), BudgetExceeded);
    CHECK_NOTHROW(require_profile_feasible(Space(101, 2)));
    CHECK_NOTHROW(require_profile_feasible(Space(31, 3)));
}

TEST_CASE("acceptance one iff delta zero iff low degree") {
    Space S(5, 2);
    for (unsigned d = 0; d <= 2; ++d) {
        for (std::uint64_t s = 0; s < 60; ++s) {
            CounterRng r(s, Stream::test, 100 + d);
            PointsTable f;
            if (s % 3 == 0) f = random_table(S, d, r);
            else if (s % 3 == 1) f = table_of(S, random_poly(S, d, r), d);
            else f = corrupt(S, table_of(S, random_poly(S, d, r), d), 1 + r.below(3), r);
            bool acc1 = accept_prob_exact(S, f, canonical_oracle(S, f)) == Rational(1);
            bool del0 = delta_global(S, f) == Rational(0);
            bool low = interpolate_table(S, f).total_degree() <= static_cast<int>(d);
            CHECK(acc1 == del0);
            CHECK(del0 == low);
            if (s % 3 == 1) CHECK(low);
        }
    }
}

TEST_CASE("acceptance is affine invariant") {
    Space S(7, 2);
    const auto& F = S.field();
    for (std::uint64_t s = 0; s < 10; ++s) {
        CounterRng r(s, Stream::test, 200);
        auto f = corrupt(S, table_of(S, random_poly(S, 2, r), 2), 5, r);
        Matrix A(2, 2);
        do {
            for (auto& x : A.a) x = static_cast<Elem>(r.below(7));
        } while (determinant(F, A) == 0);
        Elem b0 = static_cast<Elem>(r.below(7)), b1 = static_cast<Elem>(r.below(7));
        std::vector<Elem> v(S.num_points());
        for (std::uint64_t i = 0; i < v.size(); ++i) {
            Point x = S.point_at(i);
            Point y{F.add(F.add(F.mul(A.at(0, 0), x[0]), F.mul(A.at(0, 1), x[1])), b0),
                    F.add(F.add(F.mul(A.at(1, 0), x[0]), F.mul(A.at(1, 1), x[1])), b1)};
            v[i] = f.values[S.point_index(y)];
        }
        auto g = make_table(S, 2, v);
        CHECK(accept_prob_exact(S, f, canonical_oracle(S, f)) == accept_prob_exact(S, g, canonical_oracle(S, g)));
    }
}

TEST_CASE("epsilon_good") {
    Space S(5, 2);
    CounterRng r(8, Stream::test);
    auto f = table_of(S, random_poly(S, 1, r), 1);
    auto O = canonical_oracle(S, f);
    CHECK(epsilon_good(S, f, O, Rational(1)).size() == 25);
    auto g = random_table(S, 1, r);
    auto Og = canonical_oracle(S, g);
    CHECK(epsilon_good(S, g, Og, Rational(0)).size() == 25);
    for (std::int64_t a = 0; a < 6; ++a) {
        auto lo = epsilon_good(S, g, Og, Rational(a, 6));
        auto hi = epsilon_good(S, g, Og, Rational(a + 1, 6));
        CHECK(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
    }
}

TEST_CASE("epsilon_good on a planted mixture") {
    Space S(31, 2);
    CounterRng r(9, Stream::test);
    auto Q = random_poly(S, 1, r);
    auto f = random_table(S, 1, r);
    auto tq = table_of(S, Q, 1);
    for (std::uint64_t i = 0; i < f.values.size(); ++i)
        if (r.below(10) < 3) f.values[i] = tq.values[i];
    auto O = canonical_oracle(S, f);
    auto good = epsilon_good(S, f, O, Rational(1, 4));
    REQUIRE(!good.empty());
    std::size_t on = 0;
    for (auto i : good) on += f.values[i] == tq.values[i];
    CHECK(2 * on > good.size());
}

TEST_CASE("make_well_behaved") {
    Space S(5, 2);
    CounterRng r(10, Stream::test);
    auto f = table_of(S, random_poly(S, 1, r), 1);
    auto O = canonical_oracle(S, f);
    CHECK(make_well_behaved(S, f, O, Rational(1)) == O);

    auto g = corrupt(S, f, 3, r);
    auto Og = canonical_oracle(S, g);
    auto W1 = make_well_behaved(S, g, Og, Rational(1));
    auto a = line_agreements(S, g, Og);
    for (std::uint64_t id = 0; id < Og.size(); ++id) CHECK(W1.is_bot(id) == (a[id] < 5));

    for (std::uint64_t s = 0; s < 50; ++s) {
        CounterRng rr(s, Stream::test, 300);
        auto h = s % 2 ? random_table(S, 1, rr) : corrupt(S, f, 1 + rr.below(8), rr);
        auto Oh = canonical_oracle(S, h);
        Rational eps(static_cast<std::int64_t>(1 + rr.below(5)), 5);
        auto W = make_well_behaved(S, h, Oh, eps);
        CHECK(accept_prob_exact(S, h, W) >= accept_prob_exact(S, h, Oh) - eps);
        CHECK(make_well_behaved(S, h, W, eps) == W);
        auto aw = line_agreements(S, h, W);
        for (std::uint64_t id = 0; id < W.size(); ++id) {
            if (!W.is_bot(id)) CHECK(Rational(aw[id], 5) >= eps);
            if (Oh.is_bot(id)) CHECK(W.is_bot(id));
        }
    }
}

TEST_CASE("brute_force_list matches direct enumeration") {
    Space S(3, 2);
    CounterRng r(11, Stream::test);
    auto f = random_table(S, 1, r);
    auto L = brute_force_list(S, f, 1, Rational(4, 9));
    std::set<std::vector<Elem>> want, got;
    for (Elem a = 0; a < 3; ++a)
        for (Elem b = 0; b < 3; ++b)
            for (Elem c = 0; c < 3; ++c) {
                int agree = 0;
                for (std::uint64_t i = 0; i < 9; ++i) {
                    Point x = S.point_at(i);
                    agree += (a + b * x[0] + c * x[1]) % 3 == f.values[i];
                }
                if (agree >= 4) want.insert({a, b, c});
            }
    for (const auto& e : L) {
        got.insert({e.Q.coeff({0, 0}), e.Q.coeff({1, 0}), e.Q.coeff({0, 1})});
        CHECK(agreement_count(S, f, e.Q) == e.agree);
    }
    CHECK(got == want);
    for (std::size_t i = 1; i < L.size(); ++i) CHECK(L[i - 1].agree >= L[i].agree);
    CHECK_THROWS_AS(brute_force_list(Space(31, 3), f, 1, Rational(1, 2)), DimensionMismatch);
    PointsTable big = make_table(Space(31, 3), 1, std::vector<Elem>(29791, 0));
    CHECK_THROWS_AS(brute_force_list(Space(31, 3), big, 2, Rational(1, 2)), BudgetExceeded);
}

TEST_CASE("interpolate_table round trip") {
    for (auto [q, m] : {std::pair{5u, 2u}, {3u, 3u}, {7u, 2u}}) {
        Space S(q, m);
        CounterRng r(q * m, Stream::test);
        auto f = random_table(S, 1, r);
        auto Q = interpolate_table(S, f);
        CHECK(table_of(S, Q, 1) == f);
        for (int i = 0; i < static_cast<int>(m); ++i) CHECK(Q.degree_in(i) < static_cast<int>(q));
        auto P = random_poly(S, 2, r);
        CHECK(interpolate_table(S, table_of(S, P, 2)) == P);
    }
}

TEST_CASE("plane_diagnostics") {
    Space S(5, 3);
    CounterRng r(12, Stream::test);
    auto Q = random_poly(S, 1, r);
    auto f = table_of(S, Q, 1);
    auto O = canonical_oracle(S, f);
    Plane pl = S.plane_at(17);
    auto D = plane_diagnostics(S, f, O, pl, Rational(1, 2));
    CHECK(D.delta == Rational(0));
    CHECK(D.locally_good == 25);
    CHECK(D.explained_count == 25);
    REQUIRE(D.explaining.size() == 1);
    CHECK(D.explaining[0].agree == 25);

    Space S7(7, 3);
    auto g = random_table(S7, 1, r);
    auto Og = canonical_oracle(S7, g);
    auto Dg = plane_diagnostics(S7, g, Og, S7.plane_at(5), Rational(1, 2));
    CHECK(Dg.explaining.empty());
    CHECK(Dg.explained_count == 0);
    CHECK(Dg.delta > Rational(0));

    // Mixture on the plane: the planted agreement set is explained.
    auto h = g;
    auto tq = table_of(S7, random_poly(S7, 1, r), 1);
    for (std::uint64_t i = 0; i < h.values.size(); ++i)
        if (i % 5 < 3) h.values[i] = tq.values[i];
    auto Oh = canonical_oracle(S7, h);
    Plane p7 = S7.plane_at(11);
    auto pts = S7.points_on(p7);
    std::int64_t planted = 0;
    for (const auto& x : pts) planted += h.values[S7.point_index(x)] == tq.values[S7.point_index(x)];
    REQUIRE(planted > 10);
    auto Dh = plane_diagnostics(S7, h, Oh, p7, Rational(1, 3), Rational(planted, 49));
    REQUIRE(!Dh.explaining.empty());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto idx = S7.point_index(pts[i]);
        if (h.values[idx] == tq.values[idx]) CHECK(Dh.explained[i] == 1);
    }
    CHECK_THROWS_AS(plane_diagnostics(Space(5, 2), make_table(Space(5, 2), 1, std::vector<Elem>(25, 0)),
                                      canonical_oracle(Space(5, 2), make_table(Space(5, 2), 1, std::vector<Elem>(25, 0))),
                                      Space(5, 2).plane_at(0), Rational(1, 2)),
                    PreconditionError);
}
