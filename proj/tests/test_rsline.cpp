#include "doctest.h"

#include "ldtlab/errors.hpp"
#include "ldtlab/rng.hpp"
#include "ldtlab/rsline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace ldtlab;

namespace {

// Every polynomial of degree <= d with its agreement, by direct evaluation.
std::vector<DecodeEntry> all_polys(const PrimeField& F, const LineValues& v, unsigned d) {
    const Elem q = F.p();
    std::vector<DecodeEntry> out;
    std::vector<Elem> c(d + 1, 0);
    for (;;) {
        UniPoly P(c);
        std::uint32_t a = 0;
        for (Elem t = 0; t < q; ++t) {
            Elem x = 0, pw = 1;
            for (unsigned k = 0; k <= d; ++k) {
                x = F.add(x, F.mul(c[k], pw));
                pw = F.mul(pw, t);
            }
            if (v[t] == x) ++a;
        }
        out.push_back({P, a});
        unsigned k = 0;
        for (; k <= d; ++k) {
            if (++c[k] < q) break;
            c[k] = 0;
        }
        if (k > d) break;
    }
    return out;
}

DecodeEntry oracle_best(const PrimeField& F, const LineValues& v, unsigned d) {
    auto all = all_polys(F, v, d);
    DecodeEntry best = all[0];
    for (const auto& e : all)
        if (e.agree > best.agree || (e.agree == best.agree && e.poly < best.poly)) best = e;
    return best;
}

LineValues random_line(const PrimeField& F, CounterRng& r) {
    LineValues v(F.p());
    for (auto& x : v) x = static_cast<Elem>(r.below(F.p()));
    return v;
}

LineValues planted(const PrimeField& F, const UniPoly& P, std::size_t errors, CounterRng& r) {
    LineValues v = P.eval_all(F);
    std::vector<Elem> pos(F.p());
    for (Elem t = 0; t < F.p(); ++t) pos[t] = t;
    for (std::size_t i = 0; i < errors; ++i) {
        std::size_t j = i + r.below(pos.size() - i);
        std::swap(pos[i], pos[j]);
        v[pos[i]] = F.add(v[pos[i]], 1 + static_cast<Elem>(r.below(F.p() - 1)));
    }
    return v;
}

} // namespace

TEST_CASE("best_fit small examples") {
    PrimeField F5(5);
    LineValues v{0, 1, 2, 3, 4};
    auto e = best_fit_entry(F5, v, 1);
    CHECK(e.poly == UniPoly({0, 1}));
    CHECK(e.agree == 5);

    PrimeField F7(7);
    LineValues w{0, 1, 2, 5, 4, 5, 6};
    CHECK(best_fit(F7, w, 1) == UniPoly({0, 1}));
    CHECK(oracle_best(F7, w, 1).poly == UniPoly({0, 1}));
}

TEST_CASE("best_fit tie resolves to the lex-smallest candidate") {
    // Over F_5: positions 0,1 follow t, positions 2,3 follow 4; no three are collinear.
    PrimeField F(5);
    LineValues v{0, 1, 4, 4, kBot};
    auto all = all_polys(F, v, 1);
    auto o = oracle_best(F, v, 1);
    std::size_t ties = std::count_if(all.begin(), all.end(), [&](const DecodeEntry& e) { return e.agree == o.agree; });
    CHECK(ties >= 2);
    auto e = best_fit_entry(F, v, 1);
    CHECK(e.agree == o.agree);
    CHECK(e.poly == o.poly);
}

TEST_CASE("best_fit matches exhaustive oracle") {
    for (Elem q : {2u, 3u, 5u, 7u, 11u, 13u}) {
        PrimeField F(q);
        for (unsigned d = 0; d <= 2 && d < q; ++d) {
            for (std::uint64_t s = 0; s < 60; ++s) {
                CounterRng r(1000 + s, Stream::test, q * 10 + d);
                LineValues v;
                if (s % 3 == 0) {
                    v = random_line(F, r);
                } else {
                    std::vector<Elem> c(d + 1);
                    for (auto& x : c) x = static_cast<Elem>(r.below(q));
                    v = planted(F, UniPoly(c), r.below(q), r);
                }
                if (s % 5 == 4) v[r.below(q)] = kBot;
                auto o = oracle_best(F, v, d);
                auto e = best_fit_entry(F, v, d);
                CHECK(e.agree == o.agree);
                CHECK(e.poly == o.poly);
                CHECK(agreement_count(F, e.poly, v) == e.agree);
            }
        }
    }
}

TEST_CASE("best_fit with mostly undefined values") {
    PrimeField F(7);
    LineValues v(7, kBot);
    CHECK(best_fit(F, v, 2).is_zero());
    v[3] = 5;
    auto o = oracle_best(F, v, 2);
    auto e = best_fit_entry(F, v, 2);
    CHECK(e.agree == 1);
    CHECK(e.poly == o.poly);
    v[5] = 1;
    o = oracle_best(F, v, 2);
    e = best_fit_entry(F, v, 2);
    CHECK(e.agree == 2);
    CHECK(e.poly == o.poly);
}

TEST_CASE("unique_decode") {
    PrimeField F(13);
    for (unsigned d : {1u, 2u, 3u}) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            CounterRng r(s, Stream::test, 77 + d);
            std::vector<Elem> c(d + 1);
            for (auto& x : c) x = static_cast<Elem>(r.below(13));
            UniPoly P(c);
            CHECK(unique_decode(F, P.eval_all(F), d) == P);
            std::size_t maxerr = (13 - d - 1) / 2;
            auto v = planted(F, P, maxerr, r);
            auto u = unique_decode(F, v, d);
            REQUIRE(u.has_value());
            CHECK(*u == P);
            CHECK(best_fit(F, v, d) == P);
        }
    }
    int nonbot = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        CounterRng r(s, Stream::test, 5);
        auto v = random_line(F, r);
        auto u = unique_decode(F, v, 1);
        if (u) {
            ++nonbot;
            CHECK(*u == best_fit(F, v, 1));
            CHECK(2 * (13 - agreement_count(F, *u, v)) < 12u);
        }
    }
    CHECK(nonbot < 10);
}

TEST_CASE("unique_decode agrees with oracle definition") {
    for (Elem q : {5u, 7u, 11u}) {
        PrimeField F(q);
        for (unsigned d = 1; d <= 2; ++d) {
            for (std::uint64_t s = 0; s < 80; ++s) {
                CounterRng r(s, Stream::test, 900 + q + d);
                std::vector<Elem> c(d + 1);
                for (auto& x : c) x = static_cast<Elem>(r.below(q));
                auto v = planted(F, UniPoly(c), r.below(q / 2 + 2), r);
                if (s % 4 == 0) v[r.below(q)] = kBot;
                std::optional<UniPoly> want;
                for (const auto& e : all_polys(F, v, d))
                    if (2 * (q - e.agree) < q - d) want = e.poly;
                CHECK(unique_decode(F, v, d) == want);
            }
        }
    }
}

TEST_CASE("list_decode equals the exhaustive set and is sorted") {
    for (Elem q : {5u, 7u, 13u}) {
        PrimeField F(q);
        for (unsigned d = 1; d <= 2; ++d) {
            for (std::uint64_t s = 0; s < 20; ++s) {
                CounterRng r(s, Stream::test, 300 + q + d);
                auto v = random_line(F, r);
                if (s % 4 == 1) v[0] = kBot;
                Rational eps(static_cast<std::int64_t>(1 + r.below(4)), 7);
                auto L = list_decode(F, v, d, eps);
                std::set<std::vector<Elem>> want, got;
                for (const auto& e : all_polys(F, v, d))
                    if (ratio_ge(e.agree, q, eps)) want.insert(e.poly.coeffs());
                for (std::size_t i = 0; i < L.size(); ++i) {
                    got.insert(L.entries[i].poly.coeffs());
                    CHECK(L.agreement(i) >= eps);
                    CHECK(agreement_count(F, L.entries[i].poly, v) == L.entries[i].agree);
                    if (i > 0) {
                        const auto& a = L.entries[i - 1];
                        const auto& b = L.entries[i];
                        CHECK((a.agree > b.agree || (a.agree == b.agree && a.poly < b.poly)));
                    }
                }
                CHECK(got.size() == L.size());
                CHECK(got == want);
            }
        }
    }
}

TEST_CASE("list_decode examples, Johnson bound and monotonicity") {
    PrimeField F(13);
    UniPoly P({3, 4});
    auto L = list_decode(F, P.eval_all(F), 1, Rational(1));
    REQUIRE(L.size() == 1);
    CHECK(L.entries[0].poly == P);

    for (std::uint64_t s = 0; s < 200; ++s) {
        CounterRng r(s, Stream::test, 41);
        auto v = random_line(F, r);
        if (s % 2 == 0) {
            UniPoly A({static_cast<Elem>(r.below(13)), static_cast<Elem>(r.below(13))});
            UniPoly B({static_cast<Elem>(r.below(13)), static_cast<Elem>(r.below(13))});
            for (Elem t = 0; t < 13; ++t) v[t] = t < 7 ? A.eval(F, t) : B.eval(F, t);
        }
        for (Rational eps : {Rational(4, 5), Rational(3, 5), Rational(7, 12)}) {
            REQUIRE(to_double(eps) >= 2 * std::sqrt(1.0 / 13));
            auto Ls = list_decode(F, v, 1, eps);
            CHECK(Rational(static_cast<std::int64_t>(Ls.size())) <= 2 / eps);
        }
        auto lo = list_decode(F, v, 1, Rational(1, 13));
        auto hi = list_decode(F, v, 1, Rational(3, 13));
        std::set<std::vector<Elem>> los;
        for (const auto& e : lo.entries) los.insert(e.poly.coeffs());
        for (const auto& e : hi.entries) CHECK(los.count(e.poly.coeffs()) == 1);
    }

    // Mixture: half the positions from P1, half from P2.
    PrimeField F11(11);
    UniPoly P1({1, 2, 3}), P2({5, 0, 7});
    LineValues v(11);
    for (Elem t = 0; t < 11; ++t) v[t] = (t % 2 == 0) ? P1.eval(F11, t) : P2.eval(F11, t);
    auto M = list_decode(F11, v, 2, Rational(2, 5));
    std::set<std::vector<Elem>> ms;
    for (const auto& e : M.entries) ms.insert(e.poly.coeffs());
    CHECK(ms.count(P1.coeffs()) == 1);
    CHECK(ms.count(P2.coeffs()) == 1);
}

TEST_CASE("list_decode budget") {
    PrimeField F(101);
    LineValues v(101, 0);
    CHECK_THROWS_AS(list_decode(F, v, 3, Rational(1, 2)), BudgetExceeded);
    CHECK_THROWS_AS(list_decode(F, v, 2, Rational(1, 2), 1000), BudgetExceeded);
    CHECK_NOTHROW(list_decode(F, v, 2, Rational(1, 2)));
}

TEST_CASE("non_unique_points") {
    PrimeField F(5);
    Space S(5, 2);
    Line l = S.all_lines()[7];
    DecodeList one{5, 1, Rational(0), {{UniPoly({0, 1}), 5}}};
    CHECK(non_unique_points(S, one, l).empty());
    DecodeList two{5, 1, Rational(0), {{UniPoly({0, 1}), 3}, {UniPoly({0, 4}), 3}}};
    auto pts = non_unique_params(F, two);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == 0);
    auto P = non_unique_points(S, two, l);
    REQUIRE(P.size() == 1);
    CHECK(P[0] == l.base);

    PrimeField F13(13);
    for (std::uint64_t s = 0; s < 50; ++s) {
        CounterRng r(s, Stream::test, 8);
        LineValues v(13);
        std::vector<UniPoly> comps;
        for (int k = 0; k < 3; ++k)
            comps.push_back(UniPoly({static_cast<Elem>(r.below(13)), static_cast<Elem>(r.below(13)),
                                     static_cast<Elem>(r.below(13))}));
        for (Elem t = 0; t < 13; ++t) v[t] = comps[t % 3].eval(F13, t);
        auto L = list_decode(F13, v, 2, Rational(3, 13));
        std::size_t rr = L.size();
        CHECK(non_unique_params(F13, L).size() <= rr * (rr - 1) / 2 * 2);
    }
}
