#include "ldtlab/bidecoder.hpp"

#include "ldtlab/algebra.hpp"
#include "ldtlab/corrector.hpp"
#include "ldtlab/errors.hpp"
#include "ldtlab/linalg.hpp"
#include "ldtlab/newton.hpp"
#include "ldtlab/parallel.hpp"
#include "ldtlab/rng.hpp"
#include "ldtlab/rsline.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace ldtlab {

namespace {

constexpr std::size_t kX = 0, kY = 1, kZ = 2;

// Dense term list of a trivariate polynomial for repeated evaluation.
struct Terms3 {
    std::vector<std::array<unsigned, 3>> e;
    std::vector<Elem> c;
    unsigned mx = 0;

    explicit Terms3(const MultiPoly& A) {
        for (const auto& [ex, cf] : A.terms()) {
            e.push_back({ex[0], ex[1], ex[2]});
            c.push_back(cf);
            mx = std::max({mx, unsigned(ex[0]), unsigned(ex[1]), unsigned(ex[2])});
        }
    }

    Elem eval(const PrimeField& F, Elem x, Elem y, Elem z, std::vector<Elem>& scratch) const {
        const std::size_t w = mx + 1;
        scratch.resize(3 * w);
        Elem* px = scratch.data();
        Elem* py = px + w;
        Elem* pz = py + w;
        px[0] = py[0] = pz[0] = 1;
        for (std::size_t k = 1; k < w; ++k) {
            px[k] = F.mul(px[k - 1], x);
            py[k] = F.mul(py[k - 1], y);
            pz[k] = F.mul(pz[k - 1], z);
        }
        Elem acc = 0;
        for (std::size_t t = 0; t < c.size(); ++t)
            acc = F.add(acc, F.mul(c[t], F.mul(px[e[t][0]], F.mul(py[e[t][1]], pz[e[t][2]]))));
        return acc;
    }
};

// Powers P^0..P^k.
std::vector<UniPoly> powers(const PrimeField& F, const UniPoly& P, unsigned k) {
    std::vector<UniPoly> out{UniPoly::constant(1)};
    for (unsigned i = 1; i <= k; ++i) out.push_back(mul(F, out.back(), P));
    return out;
}

// A(x, b, R(x)) as a univariate polynomial in x.
UniPoly row_restriction(const PrimeField& F, const MultiPoly& A, Elem b, const UniPoly& R) {
    auto Rp = powers(F, R, std::max(0, A.degree_in(kZ)));
    std::vector<Elem> acc;
    for (const auto& [e, c] : A.terms()) {
        Elem s = F.mul(c, F.pow(b, e[kY]));
        const auto& rk = Rp[e[kZ]].coeffs();
        if (acc.size() < e[kX] + rk.size()) acc.resize(e[kX] + rk.size(), 0);
        for (std::size_t i = 0; i < rk.size(); ++i)
            acc[e[kX] + i] = F.add(acc[e[kX] + i], F.mul(s, rk[i]));
    }
    return UniPoly(std::move(acc));
}

// A(b + t u, P(t)) exactly.
UniPoly line_substitution(const PrimeField& F, const MultiPoly& A, const Point& b, const Point& u,
                          const UniPoly& P) {
    std::vector<MultiPoly> images{MultiPoly::from_uni(1, 0, UniPoly({b[0], u[0]})),
                                  MultiPoly::from_uni(1, 0, UniPoly({b[1], u[1]})),
                                  MultiPoly::from_uni(1, 0, P)};
    return to_uni(compose(F, A, images), 0);
}

std::vector<Elem> coeff_vector(const MultiPoly& Q, const std::vector<Exponent>& mons) {
    std::vector<Elem> v;
    v.reserve(mons.size());
    for (const auto& e : mons) v.push_back(Q.coeff(e));
    return v;
}

void check_bivariate(const Space& S, const PointsTable& f) {
    if (S.m() != 2) throw PreconditionError("bivariate decoder needs m = 2");
    if (f.q != S.q() || f.m != 2 || f.values.size() != S.num_points())
        throw DimensionMismatch("points table does not match the space");
    if (f.d == 0 || f.d >= S.q()) throw PreconditionError("bivariate decoder needs 1 <= d < q");
}

std::int64_t to_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

} // namespace

Explainer make_explainer(const PrimeField& F, MultiPoly A, unsigned d, unsigned D) {
    if (A.nvars() != 3) throw InconsistencyError("explainer: A must be trivariate");
    if (d == 0) throw PreconditionError("explainer: need d >= 1");
    const int w[3] = {1, 1, static_cast<int>(d)};
    if (A.is_zero() || A.weighted_degree(w) > static_cast<int>(D))
        throw InconsistencyError("explainer: weighted degree exceeds D");
    const unsigned p = F.p();
    for (const auto& [e, c] : A.terms())
        if (e[kZ] != 0 && e[kZ] % p == 0)
            throw InconsistencyError("explainer: z exponent divisible by p");
    if (partial(F, A, kZ).is_zero()) throw InconsistencyError("explainer: d/dz A vanishes");
    const unsigned dz = static_cast<unsigned>(A.degree_in(kZ));
    if (dz > D / d) throw InconsistencyError("explainer: z-degree exceeds D/d");
    MultiPoly disc = discriminant(F, A, kZ);
    if (disc.is_zero()) throw InconsistencyError("explainer: Disc_z(A) vanishes");
    // Drop the z variable from the discriminant.
    MultiPoly disc2(2);
    for (const auto& [e, c] : disc.terms()) disc2.set_term({e[kX], e[kY]}, c);
    return {std::move(A), d, D, enumerate_support(d, D, p, true), dz, std::move(disc2)};
}

Point frame_point(const Space& S, const GoodDirections& g, Elem a, Elem b) {
    return S.add(S.scale(g.dir1, a), S.scale(g.dir2, b));
}

static Point frame_point(const Space& S, const StructuredGrid& g, Elem a, Elem b) {
    return S.add(S.scale(g.dir1, a), S.scale(g.dir2, b));
}

std::optional<GoodDirections> find_good_directions(const Space& S, const PointsTable& f,
                                                   const LinesOracle& O, const Rational& eps) {
    check_bivariate(S, f);
    if (O.size() != S.num_lines()) throw DimensionMismatch("lines oracle does not match the space");
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::uint64_t n = S.num_points();
    const std::uint64_t nd = S.num_dirs();
    const std::size_t words = (n + 63) / 64;

    auto pa = point_agreements(S, f, O);
    std::vector<std::uint8_t> good(n);
    for (std::uint64_t i = 0; i < n; ++i) good[i] = ratio_ge(pa[i], to_i64(nd), eps / 2);

    // bits[u]: good x whose line along u matches f at x.
    std::vector<std::vector<std::uint64_t>> bits(nd, std::vector<std::uint64_t>(words, 0));
    parallel_for(nd, [&](std::size_t u) {
        std::vector<std::uint32_t> idx(q);
        std::vector<Elem> ev(q);
        for (std::uint64_t j = 0; j < q; ++j) {
            const std::uint64_t id = u * q + j;
            if (O.is_bot(id)) continue;
            S.line_point_indices(S.line_at(id), idx);
            eval_all_into(F, O.poly(id), ev);
            for (std::uint32_t t = 0; t < q; ++t)
                if (good[idx[t]] && f.values[idx[t]] == ev[t]) bits[u][idx[t] / 64] |= 1ull << (idx[t] % 64);
        }
    });

    // Best partner per first direction; strict comparisons keep the
    // smallest index pair on ties.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> best(nd, {0, 0});
    parallel_for(nd, [&](std::size_t u) {
        std::uint64_t bc = 0, bv = u + 1;
        for (std::uint64_t v = u + 1; v < nd; ++v) {
            std::uint64_t c = 0;
            for (std::size_t w = 0; w < words; ++w) c += std::popcount(bits[u][w] & bits[v][w]);
            if (c > bc) {
                bc = c;
                bv = v;
            }
        }
        best[u] = {bc, bv};
    });
    std::uint64_t bu = 0, bv = best[0].second, bc = best[0].first;
    for (std::uint64_t u = 1; u + 1 < nd; ++u)
        if (best[u].first > bc) {
            bu = u;
            bv = best[u].second;
            bc = best[u].first;
        }
    if (ratio_lt(to_i64(8 * bc), to_i64(n), eps * eps)) return std::nullopt;

    GoodDirections g;
    g.dir1 = S.dir_at(bu);
    g.dir2 = S.dir_at(bv);
    g.H.assign(n, 0);
    for (Elem a = 0; a < q; ++a)
        for (Elem b = 0; b < q; ++b) {
            std::uint64_t i = S.point_index(frame_point(S, g, a, b));
            if ((bits[bu][i / 64] & bits[bv][i / 64]) >> (i % 64) & 1) g.H[a * q + b] = 1;
        }
    g.h_count = bc;
    return g;
}

std::optional<StructuredGrid> structured_grid(const Space& S, const GoodDirections& g, unsigned r,
                                              std::uint64_t seed, unsigned max_attempts) {
    const std::uint32_t q = S.q();
    if (g.H.size() != static_cast<std::size_t>(q) * q) throw DimensionMismatch("structured_grid: H size");
    if (r == 0 || r > q) throw PreconditionError("structured_grid: need 0 < r <= q");
    const std::uint64_t h = std::accumulate(g.H.begin(), g.H.end(), std::uint64_t{0});
    if (h == 0) return std::nullopt;

    StructuredGrid grid;
    grid.q = q;
    grid.H = g.H;
    grid.dir1 = g.dir1;
    grid.dir2 = g.dir2;
    grid.gamma = Rational(to_i64(h), 2 * to_i64(q) * q);
    const double gd = to_double(grid.gamma);
    grid.window_ok = 2.0 * std::log(double(q)) / (gd * gd) <= r && Rational(r) <= grid.gamma * Rational(q);

    std::vector<std::uint32_t> row(q, 0);
    for (Elem a = 0; a < q; ++a)
        for (Elem b = 0; b < q; ++b) row[b] += g.H[a * q + b];
    for (Elem b = 0; b < q; ++b)
        if (ratio_ge(row[b], q, grid.gamma)) grid.S2.push_back(b);

    std::vector<Elem> perm(q);
    for (unsigned att = 0; att < max_attempts; ++att) {
        CounterRng rng(seed, Stream::grid, att);
        std::iota(perm.begin(), perm.end(), 0);
        for (unsigned i = 0; i < r; ++i) std::swap(perm[i], perm[i + rng.below(q - i)]);
        std::vector<Elem> S1(perm.begin(), perm.begin() + r);
        std::sort(S1.begin(), S1.end());
        bool ok = true;
        for (Elem b : grid.S2) {
            std::uint32_t hits = 0;
            for (Elem a : S1) hits += g.H[a * q + b];
            if (ratio_lt(2 * hits, r, grid.gamma)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            grid.S1 = std::move(S1);
            grid.attempts = att + 1;
            return grid;
        }
    }
    return std::nullopt;
}

std::optional<UniPoly> oracle_along(const Space& S, const LinesOracle& O, const Point& p0,
                                    const Point& w) {
    Line l = S.canonical_line(p0, w);
    const std::uint64_t id = S.line_id(l);
    if (O.is_bot(id)) return std::nullopt;
    Elem lambda = 0;
    for (std::size_t i = 0; i < S.m(); ++i)
        if (l.dir[i] != 0) {
            lambda = S.field().div(w[i], l.dir[i]);
            break;
        }
    Elem tau0 = *S.param_of(l, p0);
    return compose_affine(S.field(), O.poly(id), tau0, lambda);
}

std::optional<InterpolationResult> interpolate_explainer(const Space& S, const LinesOracle& O,
                                                         const StructuredGrid& grid, unsigned d,
                                                         unsigned D, bool strict) {
    if (S.m() != 2) throw PreconditionError("interpolate_explainer needs m = 2");
    if (d == 0) throw PreconditionError("interpolate_explainer needs d >= 1");
    const auto& F = S.field();
    auto sup = enumerate_support(d, D, F.p(), true);
    const std::size_t nu = sup.members.size();

    InterpolationResult res;
    res.unknowns = nu;
    res.dimension_count_met = nu > grid.S1.size() * (D + 1);
    if (strict && !res.dimension_count_met)
        throw PreconditionError("interpolate_explainer: |N_{d,D,p}| <= |S1| (D + 1)");

    std::vector<std::vector<Elem>> rows;
    for (Elem a : grid.S1) {
        auto P = oracle_along(S, O, frame_point(S, grid, a, 0), grid.dir2);
        if (!P) continue;
        auto Pp = powers(F, *P, D / d);
        std::vector<std::vector<Elem>> block(D + 1, std::vector<Elem>(nu, 0));
        for (std::size_t col = 0; col < nu; ++col) {
            const auto& [i, j, k] = sup.members[col];
            const Elem ai = F.pow(a, i);
            const auto& pk = Pp[k].coeffs();
            for (std::size_t s = 0; s < pk.size(); ++s)
                if (j + s <= D) block[j + s][col] = F.add(block[j + s][col], F.mul(ai, pk[s]));
        }
        for (auto& r : block) rows.push_back(std::move(r));
    }
    res.equations = rows.size();
    Matrix M(rows.size(), nu);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < nu; ++c) M.at(r, c) = rows[r][c];
    auto ker = kernel(F, M);
    res.kernel_dim = ker.size();
    if (ker.empty()) return std::nullopt;
    MultiPoly A(3);
    for (std::size_t c = 0; c < nu; ++c)
        if (ker[0][c]) A.set_term({std::uint16_t(sup.members[c].i), std::uint16_t(sup.members[c].j),
                                   std::uint16_t(sup.members[c].k)},
                                  ker[0][c]);
    res.A = std::move(A);
    return res;
}

PropagationResult vanish_propagate(const Space& S, const PointsTable& f, const LinesOracle& O,
                                   const StructuredGrid& grid, const MultiPoly& A) {
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    PropagationResult res;
    std::vector<Elem> pt(3);
    for (Elem b : grid.S2) {
        auto R = oracle_along(S, O, frame_point(S, grid, 0, b), grid.dir1);
        if (!R) {
            res.rows_failed.push_back(b);
            continue;
        }
        UniPoly Qb = row_restriction(F, A, b, *R);
        if (!Qb.is_zero()) {
            // Every hit of S1 in this row is a root of Qb.
            int hits = 0;
            for (Elem a : grid.S1) hits += grid.H[a * q + b];
            if (hits > Qb.degree())
                throw InconsistencyError("vanish_propagate: row polynomial has too many roots");
            res.rows_failed.push_back(b);
            continue;
        }
        res.rows_checked.push_back(b);
        for (Elem a = 0; a < q; ++a) {
            if (!grid.H[a * q + b]) continue;
            Point x = frame_point(S, grid, a, b);
            pt = {a, b, f.values[S.point_index(x)]};
            if (A.eval(F, pt) != 0) throw InconsistencyError("vanish_propagate: pointwise check failed");
            res.points.push_back(x);
        }
    }
    std::sort(res.points.begin(), res.points.end());
    return res;
}

std::optional<Explainer> minimal_explainer(const PrimeField& F, const std::vector<LabeledPoint>& pts,
                                           unsigned d, unsigned D_max) {
    if (pts.empty()) throw PreconditionError("minimal_explainer: empty point set");
    if (d == 0) throw PreconditionError("minimal_explainer: need d >= 1");
    std::vector<Elem> pw;
    for (unsigned D = d; D <= D_max; ++D) {
        auto sup = enumerate_support(d, D, F.p(), true);
        // xy-only monomials first: a kernel vector depends on z iff its free
        // column is a z column.
        std::vector<Triple> cols;
        for (const auto& t : sup.members)
            if (t.k == 0) cols.push_back(t);
        const std::size_t nxy = cols.size();
        for (const auto& t : sup.members)
            if (t.k != 0) cols.push_back(t);
        const std::size_t nc = cols.size();

        IncrementalRowSpace rs(F, nc);
        const std::size_t w = D + 1;
        pw.resize(3 * w);
        std::vector<Elem> row(nc);
        for (const auto& p : pts) {
            const Elem v[3] = {p.x[0], p.x[1], p.value};
            for (int a = 0; a < 3; ++a) {
                pw[a * w] = 1;
                for (std::size_t k = 1; k < w; ++k) pw[a * w + k] = F.mul(pw[a * w + k - 1], v[a]);
            }
            for (std::size_t c = 0; c < nc; ++c)
                row[c] = F.mul(pw[cols[c].i], F.mul(pw[w + cols[c].j], pw[2 * w + cols[c].k]));
            rs.add_row(row);
            if (rs.rank() == nc) break;
        }
        if (rs.rank() == nc) continue;
        for (const auto& v : rs.kernel()) {
            // The free column is the last nonzero entry; xy-only if it is below nxy.
            std::size_t last = nc;
            for (std::size_t c = nc; c-- > 0;)
                if (v[c]) {
                    last = c;
                    break;
                }
            if (last < nxy) continue;
            MultiPoly A(3);
            for (std::size_t c = 0; c < nc; ++c)
                if (v[c]) A.set_term({std::uint16_t(cols[c].i), std::uint16_t(cols[c].j),
                                      std::uint16_t(cols[c].k)},
                                     v[c]);
            if (partial(F, A, kZ).is_zero()) continue;
            if (discriminant(F, A, kZ).is_zero()) continue;
            return make_explainer(F, std::move(A), d, D);
        }
    }
    return std::nullopt;
}

PencilInstance make_pencil(const PrimeField& F, const Explainer& E, const Point& b) {
    const Elem at[3] = {b[0], b[1], 0};
    UniPoly Ab = restrict_to_var(F, E.A, kZ, at);
    UniPoly dAb = derivative(F, Ab);
    if (Ab.is_zero() || dAb.is_zero() || gcd(F, Ab, dAb).degree() > 0)
        throw PreconditionError("make_pencil: A(b, z) is not square-free");
    PencilInstance P;
    P.center = b;
    return P;
}

bool add_local_root(const PrimeField& F, const Explainer& E, PencilInstance& pencil, const Point& u,
                    const UniPoly& P) {
    if (P.degree() > static_cast<int>(E.d)) return false;
    if (!line_substitution(F, E.A, pencil.center, u, P).is_zero()) return false;
    pencil.local_roots[u] = P;
    return true;
}

namespace {

std::optional<PencilDecode> decode_class(const PrimeField& F, const Explainer& E,
                                         const PencilInstance& pencil, Elem alpha) {
    const Point& b = pencil.center;
    // Translate the center to the origin.
    std::vector<MultiPoly> shift{
        add(F, MultiPoly::variable(3, kX), MultiPoly::constant(3, b[0])),
        add(F, MultiPoly::variable(3, kY), MultiPoly::constant(3, b[1])), MultiPoly::variable(3, kZ)};
    MultiPoly Ab = compose(F, E.A, shift);
    MultiPoly phi;
    try {
        phi = newton_lift(F, Ab, alpha, E.d);
    } catch (const PreconditionError&) {
        return std::nullopt;
    }
    std::vector<MultiPoly> back{sub(F, MultiPoly::variable(2, 0), MultiPoly::constant(2, b[0])),
                                sub(F, MultiPoly::variable(2, 1), MultiPoly::constant(2, b[1]))};
    MultiPoly P = compose(F, phi, back);
    if (!substitute_z(F, E.A, P).is_zero()) return std::nullopt;

    PencilDecode out;
    out.P = P;
    out.alpha = alpha;
    for (const auto& [u, R] : pencil.local_roots) {
        std::vector<MultiPoly> line{MultiPoly::from_uni(1, 0, UniPoly({b[0], u[0]})),
                                    MultiPoly::from_uni(1, 0, UniPoly({b[1], u[1]}))};
        if (to_uni(compose(F, P, line), 0) == R) out.agreeing.push_back(u);
    }
    // Each stored line stands for q - 1 nonzero directions.
    const std::uint64_t dirs = pencil.local_roots.size() * (F.p() - 1ull);
    out.lemma_hypothesis_met = dirs > std::uint64_t(E.d_z) * E.D * F.p();
    return out;
}

std::map<Elem, std::uint64_t> alpha_counts(const PencilInstance& pencil) {
    std::map<Elem, std::uint64_t> cnt;
    for (const auto& [u, R] : pencil.local_roots) ++cnt[R.coeff(0)];
    return cnt;
}

} // namespace

std::optional<PencilDecode> pencil_decode(const PrimeField& F, const Explainer& E,
                                          const PencilInstance& pencil) {
    auto cnt = alpha_counts(pencil);
    if (cnt.empty()) return std::nullopt;
    Elem alpha = cnt.begin()->first;
    std::uint64_t best = 0;
    for (const auto& [a, c] : cnt)
        if (c > best) {
            best = c;
            alpha = a;
        }
    return decode_class(F, E, pencil, alpha);
}

std::vector<PencilDecode> pencil_decode_all(const PrimeField& F, const Explainer& E,
                                            const PencilInstance& pencil) {
    std::vector<PencilDecode> out;
    for (const auto& [a, c] : alpha_counts(pencil))
        if (auto r = decode_class(F, E, pencil, a)) out.push_back(std::move(*r));
    return out;
}

BiDecodeResult decode_bivariate(const Space& S, const PointsTable& f, const Rational& eps,
                                const BiDecodeParams& params) {
    check_bivariate(S, f);
    return decode_bivariate(S, f, canonical_oracle(S, f), eps, params);
}

BiDecodeResult decode_bivariate(const Space& S, const PointsTable& f, const LinesOracle& O,
                                const Rational& eps, const BiDecodeParams& params) {
    check_bivariate(S, f);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const unsigned d = f.d;
    const auto n = to_i64(S.num_points());

    BiDecodeResult res;
    res.eps = eps;
    res.min_agreement = params.min_agreement ? *params.min_agreement : eps / 2;
    const unsigned D_max = params.D_max ? *params.D_max : d + 8;

    auto gd = find_good_directions(S, f, O, eps);
    {
        StageRecord st{"good_directions", gd ? "ok" : "failed", {}};
        if (gd) {
            st.metrics.emplace_back("dir1", to_i64(S.dir_index(gd->dir1)));
            st.metrics.emplace_back("dir2", to_i64(S.dir_index(gd->dir2)));
            st.metrics.emplace_back("h_count", to_i64(gd->h_count));
        }
        st.metrics.emplace_back("threshold", eps * eps * Rational(n) / 8);
        res.stages.push_back(std::move(st));
    }
    if (!gd) return res;

    const Rational gamma(to_i64(gd->h_count), 2 * n);
    const auto mons = monomials_up_to(2, d);
    std::map<std::vector<Elem>, DecodedPoly> found;

    for (unsigned D = d; D <= D_max && found.empty(); ++D) {
        // Smallest r with D < gamma r / 2.
        std::int64_t r0 = boost::rational_cast<std::int64_t>(Rational(2 * D) / gamma) + 1;
        const unsigned r = static_cast<unsigned>(std::min<std::int64_t>(q, std::max<std::int64_t>(D + 2, r0)));
        const std::int64_t Di = D;

        auto grid = structured_grid(S, *gd, r, params.seed ^ (std::uint64_t(D) << 32), params.grid_retries);
        {
            StageRecord st{"grid", grid ? "ok" : "failed", {{"D", Di}, {"r", std::int64_t(r)}}};
            if (grid) {
                st.metrics.emplace_back("S2", to_i64(grid->S2.size()));
                st.metrics.emplace_back("attempts", std::int64_t(grid->attempts));
                st.metrics.emplace_back("window_ok", grid->window_ok);
            }
            res.stages.push_back(std::move(st));
        }
        if (!grid) continue;

        auto interp = interpolate_explainer(S, O, *grid, d, D);
        {
            StageRecord st{"interpolate", interp ? "ok" : "empty", {{"D", Di}}};
            if (interp) {
                st.metrics.emplace_back("unknowns", to_i64(interp->unknowns));
                st.metrics.emplace_back("equations", to_i64(interp->equations));
                st.metrics.emplace_back("kernel_dim", to_i64(interp->kernel_dim));
                st.metrics.emplace_back("dimension_count_met", interp->dimension_count_met);
            }
            res.stages.push_back(std::move(st));
        }
        if (!interp) continue;

        auto prop = vanish_propagate(S, f, O, *grid, interp->A);
        res.stages.push_back({"propagate",
                              prop.points.empty() ? "empty" : "ok",
                              {{"D", Di},
                               {"points", to_i64(prop.points.size())},
                               {"rows_checked", to_i64(prop.rows_checked.size())},
                               {"rows_failed", to_i64(prop.rows_failed.size())}}});
        if (prop.points.empty()) continue;

        std::vector<LabeledPoint> lp;
        lp.reserve(prop.points.size());
        for (const auto& x : prop.points) lp.push_back({x, f.values[S.point_index(x)]});
        auto E = minimal_explainer(F, lp, d, D);
        {
            StageRecord st{"explainer", E ? "ok" : "empty", {{"D", Di}}};
            if (E) {
                const int w[3] = {1, 1, int(d)};
                st.metrics.emplace_back("weighted_degree", std::int64_t(E->A.weighted_degree(w)));
                st.metrics.emplace_back("d_z", std::int64_t(E->d_z));
                st.metrics.emplace_back("terms", to_i64(E->A.size()));
            }
            res.stages.push_back(std::move(st));
        }
        if (!E) continue;

        // Center ranking: Disc_z(A)(b) != 0, then the number of lines whose
        // oracle polynomial is a root of A on the line. B(t) = A(b + t u, P(t))
        // has degree <= D, so D + 1 zeros certify B = 0 when D < q.
        const Terms3 T(E->A);
        const std::uint64_t nd = S.num_dirs();
        std::vector<std::int64_t> score(lp.size(), -1);
        parallel_for(lp.size(), [&](std::size_t ci) {
            const Point& b = lp[ci].x;
            if (E->disc.eval(F, b.coords()) == 0) return;
            std::vector<Elem> scratch;
            std::int64_t cnt = 0;
            for (std::uint64_t u = 0; u < nd; ++u) {
                const Point dir = S.dir_at(u);
                auto P = oracle_along(S, O, b, dir);
                if (!P) continue;
                bool zero = true;
                if (D + 1 <= q) {
                    for (Elem t = 0; t <= D && zero; ++t) {
                        Point x = S.axpy(b, t, dir);
                        zero = T.eval(F, x[0], x[1], P->eval(F, t), scratch) == 0;
                    }
                } else {
                    zero = line_substitution(F, E->A, b, dir, *P).is_zero();
                }
                cnt += zero;
            }
            score[ci] = cnt;
        });
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < lp.size(); ++i)
            if (score[i] > 0) order.push_back(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        if (order.size() > params.max_centers) order.resize(params.max_centers);
        res.stages.push_back({"centers",
                              order.empty() ? "empty" : "ok",
                              {{"D", Di},
                               {"candidates", to_i64(lp.size())},
                               {"ranked", to_i64(order.size())},
                               {"best_lines", order.empty() ? std::int64_t(0) : score[order[0]]}}});

        std::int64_t decoded = 0, verified_lines = 0;
        bool hypothesis = false;
        for (std::size_t ci : order) {
            const Point& b = lp[ci].x;
            PencilInstance pencil;
            try {
                pencil = make_pencil(F, *E, b);
            } catch (const PreconditionError&) {
                continue;
            }
            for (std::uint64_t u = 0; u < nd; ++u) {
                const Point dir = S.dir_at(u);
                if (auto P = oracle_along(S, O, b, dir)) add_local_root(F, *E, pencil, dir, *P);
            }
            verified_lines += to_i64(pencil.local_roots.size());
            for (auto& pd : pencil_decode_all(F, *E, pencil)) {
                ++decoded;
                hypothesis = hypothesis || pd.lemma_hypothesis_met;
                auto key = coeff_vector(pd.P, mons);
                if (found.count(key)) continue;
                const auto agree = to_i64(agreement_count(S, f, pd.P));
                if (ratio_lt(agree, n, res.min_agreement)) continue;
                found.emplace(std::move(key), DecodedPoly{pd.P, Rational(agree, n)});
            }
        }
        res.stages.push_back({"pencil",
                              found.empty() ? "empty" : "ok",
                              {{"D", Di},
                               {"verified_lines", verified_lines},
                               {"decoded", decoded},
                               {"lemma_hypothesis_met", hypothesis},
                               {"reported", to_i64(found.size())}}});
    }

    std::vector<std::pair<std::vector<Elem>, DecodedPoly>> list(found.begin(), found.end());
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        return a.second.agreement > b.second.agreement;
    });
    for (auto& [k, v] : list) res.results.push_back(std::move(v));
    return res;
}

ListHighAgreement list_and_highagreement_forms(const Space& S, const PointsTable& f,
                                               const Rational& eps0, const Rational& eps,
                                               std::optional<Rational> h1, const Rational& low_error_max,
                                               std::uint64_t budget) {
    check_bivariate(S, f);
    const unsigned d = f.d;
    const auto n = to_i64(S.num_points());

    ListHighAgreement out;
    out.h1 = h1 ? *h1 : std::max(pow_upper(eps, 8), 2 * sqrt_upper(Rational(d, S.q())));
    out.list = brute_force_list(S, f, d, out.h1, budget);

    auto O = canonical_oracle(S, f);
    auto pa = point_agreements(S, f, O);
    std::vector<PointsTable> tabs;
    for (const auto& e : out.list) tabs.push_back(table_of(S, e.Q, d));
    const auto nd = to_i64(S.num_dirs());
    for (std::uint64_t i = 0; i < S.num_points(); ++i) {
        if (!ratio_ge(pa[i], nd, eps)) continue;
        ++out.good_points;
        bool expl = false;
        for (const auto& t : tabs) expl = expl || t.values[i] == f.values[i];
        out.unexplained_good += !expl;
    }
    out.unexplained_fraction = Rational(to_i64(out.unexplained_good), n);
    out.list_form_met = out.unexplained_fraction <= eps0;

    const Rational delta = 1 - accept_prob_exact(S, f, O);
    if (delta <= low_error_max) {
        LowErrorWitness w;
        w.delta = delta;
        w.hypothesis_met = delta < Rational(1, 100);
        auto fc = plurality_correct(S, f, O);
        w.corr_agreement = 1 - distance(f, fc.table);
        MultiPoly Q = interpolate_table(S, fc.table);
        if (Q.total_degree() <= static_cast<int>(d)) {
            w.q_agreement = Rational(to_i64(agreement_count(S, f, Q)), n);
            w.Q = std::move(Q);
        }
        w.bound = 1 - 2 * delta;
        w.bound_met = w.Q && w.q_agreement >= w.bound;
        out.low_error = std::move(w);
    }
    return out;
}

} // namespace ldtlab
