#include "ldtlab/ldt.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/kernels.hpp"
#include "ldtlab/parallel.hpp"
#include "ldtlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>

namespace ldtlab {

namespace {

void check_table(const Space& S, const PointsTable& f) {
    if (f.q != S.q() || f.m != S.m() || f.values.size() != S.num_points())
        throw DimensionMismatch("points table does not match the space");
}

void check_oracle(const Space& S, const LinesOracle& O) {
    if (O.q() != S.q() || O.m() != S.m() || O.size() != S.num_lines())
        throw DimensionMismatch("lines oracle does not match the space");
}

} // namespace

PointsTable make_table(const Space& S, unsigned d, std::vector<Elem> values) {
    if (values.size() != S.num_points()) throw DimensionMismatch("make_table: need q^m values");
    if (d >= S.q()) throw PreconditionError("make_table: need d < q");
    for (Elem v : values)
        if (v != kBot && v >= S.q()) throw PreconditionError("make_table: value out of range");
    return {S.q(), S.m(), d, std::move(values)};
}

PointsTable table_of(const Space& S, const MultiPoly& Q, unsigned d) {
    if (Q.nvars() != S.m()) throw DimensionMismatch("table_of: arity mismatch");
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::size_t m = S.m();
    // Power tables per variable avoid repeated exponentiation.
    int deg = std::max(0, Q.total_degree());
    std::vector<Elem> pw(static_cast<std::size_t>(q) * (deg + 1));
    for (Elem a = 0; a < q; ++a) {
        Elem x = 1;
        for (int k = 0; k <= deg; ++k) {
            pw[a * (deg + 1) + k] = x;
            x = F.mul(x, a);
        }
    }
    std::vector<Elem> vals(S.num_points());
    parallel_for(vals.size(), [&](std::size_t idx) {
        Point x = S.point_at(idx);
        Elem acc = 0;
        for (const auto& [e, c] : Q.terms()) {
            Elem t = c;
            for (std::size_t i = 0; i < m; ++i)
                if (e[i]) t = F.mul(t, pw[x[i] * (deg + 1) + e[i]]);
            acc = F.add(acc, t);
        }
        vals[idx] = acc;
    });
    return {q, m, d, std::move(vals)};
}

LineValues line_values(const Space& S, const PointsTable& f, const Line& l) {
    std::vector<std::uint32_t> idx(S.q());
    S.line_point_indices(l, idx);
    LineValues v(S.q());
    for (std::uint32_t t = 0; t < S.q(); ++t) v[t] = f.values[idx[t]];
    return v;
}

UniPoly restrict_to_line(const Space& S, const MultiPoly& Q, const Line& l) {
    const auto& F = S.field();
    std::vector<MultiPoly> images;
    for (std::size_t i = 0; i < S.m(); ++i) {
        MultiPoly img = MultiPoly::constant(1, l.base[i]);
        img.add_term(F, Exponent{1}, l.dir[i]);
        images.push_back(std::move(img));
    }
    return to_uni(compose(F, Q, images), 0);
}

Rational distance(const PointsTable& f, const PointsTable& g) {
    if (f.values.size() != g.values.size()) throw DimensionMismatch("distance: size mismatch");
    std::size_t eq = kernels::count_equal(f.values, g.values);
    return Rational(static_cast<std::int64_t>(f.values.size() - eq), static_cast<std::int64_t>(f.values.size()));
}

std::uint64_t agreement_count(const Space& S, const PointsTable& f, const MultiPoly& Q) {
    check_table(S, f);
    auto g = table_of(S, Q, f.d);
    return kernels::count_equal(f.values, g.values);
}

Rational distance(const Space& S, const PointsTable& f, const MultiPoly& Q) {
    std::uint64_t a = agreement_count(S, f, Q);
    return Rational(static_cast<std::int64_t>(S.num_points() - a), static_cast<std::int64_t>(S.num_points()));
}

const char* framing_name(OracleFraming f) noexcept {
    return f == OracleFraming::canonical ? "canonical" : "supplied";
}

LinesOracle::LinesOracle(const Space& S, unsigned d, OracleFraming framing)
    : q_(S.q()), m_(S.m()), d_(d), framing_(framing), c_(S.num_lines() * (d + 1), 0), bot_(S.num_lines(), 0) {
    if (d >= S.q()) throw PreconditionError("LinesOracle: need d < q");
}

UniPoly LinesOracle::poly(std::uint64_t id) const {
    auto c = coeffs(id);
    return UniPoly(std::vector<Elem>(c.begin(), c.end()));
}

std::optional<UniPoly> LinesOracle::entry(std::uint64_t id) const {
    if (is_bot(id)) return std::nullopt;
    return poly(id);
}

void LinesOracle::set(std::uint64_t id, const UniPoly& P) {
    if (P.degree() > static_cast<int>(d_)) throw PreconditionError("LinesOracle::set: degree exceeds d");
    for (unsigned k = 0; k <= d_; ++k) c_[id * (d_ + 1) + k] = P.coeff(k);
    bot_[id] = 0;
}

void LinesOracle::set_bot(std::uint64_t id) {
    for (unsigned k = 0; k <= d_; ++k) c_[id * (d_ + 1) + k] = 0;
    bot_[id] = 1;
}

std::uint64_t LinesOracle::bot_count() const {
    return static_cast<std::uint64_t>(std::count(bot_.begin(), bot_.end(), 1));
}

void require_profile_feasible(const Space& S) {
    bool ok = (S.m() <= 3 && S.q() <= 31) || (S.m() == 2 && S.q() <= 101) || S.m() == 1;
    if (!ok)
        throw BudgetExceeded("delta profile needs m <= 3 with q <= 31, or m = 2 with q <= 101 (got q=" +
                             std::to_string(S.q()) + ", m=" + std::to_string(S.m()) + ")");
}

LinesOracle canonical_oracle(const Space& S, const PointsTable& f, std::vector<std::uint32_t>* agree) {
    check_table(S, f);
    S.require_enumerable();
    LinesOracle O(S, f.d, OracleFraming::canonical);
    const auto& F = S.field();
    const std::uint64_t n = S.num_lines();
    if (agree) agree->assign(n, 0);
    parallel_for(n, [&](std::size_t id) {
        auto v = line_values(S, f, S.line_at(id));
        auto e = best_fit_entry(F, v, f.d);
        O.set(id, e.poly);
        if (agree) (*agree)[id] = e.agree;
    });
    return O;
}

std::vector<std::uint32_t> line_agreements(const Space& S, const PointsTable& f, const LinesOracle& O) {
    check_table(S, f);
    check_oracle(S, O);
    const auto& F = S.field();
    std::vector<std::uint32_t> out(O.size(), 0);
    parallel_for(O.size(), [&](std::size_t id) {
        if (O.is_bot(id)) return;
        auto v = line_values(S, f, S.line_at(id));
        out[id] = agreement_count(F, O.poly(id), v);
    });
    return out;
}

std::vector<std::uint32_t> point_agreements(const Space& S, const PointsTable& f, const LinesOracle& O) {
    check_table(S, f);
    check_oracle(S, O);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::uint64_t n = O.size();
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count(), n));
    std::vector<std::vector<std::uint32_t>> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        auto& cnt = partial[c];
        cnt.assign(S.num_points(), 0);
        std::vector<std::uint32_t> idx(q);
        std::vector<Elem> ev(q);
        for (std::uint64_t id = c * n / chunks; id < (c + 1) * n / chunks; ++id) {
            if (O.is_bot(id)) continue;
            S.line_point_indices(S.line_at(id), idx);
            eval_all_into(F, O.poly(id), ev);
            for (std::uint32_t t = 0; t < q; ++t)
                if (f.values[idx[t]] == ev[t]) ++cnt[idx[t]];
        }
    });
    std::vector<std::uint32_t> out(S.num_points(), 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
    return out;
}

Rational accept_prob_exact(const Space& S, const PointsTable& f, const LinesOracle& O) {
    auto a = line_agreements(S, f, O);
    std::int64_t sum = std::accumulate(a.begin(), a.end(), std::int64_t{0});
    return Rational(sum, static_cast<std::int64_t>(O.size()) * S.q());
}

SampledAcceptance accept_prob_sampled(const Space& S, const PointsTable& f, const LinesOracle& O,
                                      std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw PreconditionError("accept_prob_sampled: need at least one trial");
    check_table(S, f);
    check_oracle(S, O);
    const auto& F = S.field();
    CounterRng rng(seed, Stream::sampler);
    SampledAcceptance r;
    r.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        std::uint64_t xi = rng.below(S.num_points());
        std::uint64_t u = rng.below(S.num_dirs());
        Point x = S.point_at(xi);
        Line l = S.line_through(x, u);
        std::uint64_t id = S.line_id(l);
        if (O.is_bot(id)) continue;
        Elem t = *S.param_of(l, x);
        if (O.poly(id).eval(F, t) == f.values[xi]) ++r.accepts;
    }
    double p = static_cast<double>(r.accepts) / static_cast<double>(trials);
    r.estimate = p;
    r.half_width = 1.959963984540054 * std::sqrt(p * (1 - p) / static_cast<double>(trials));
    return r;
}

DeltaProfile delta_profile(const Space& S, const PointsTable& f, bool with_planes) {
    require_profile_feasible(S);
    DeltaProfile P;
    P.q = S.q();
    canonical_oracle(S, f, &P.line_agree);
    std::int64_t sum = std::accumulate(P.line_agree.begin(), P.line_agree.end(), std::int64_t{0});
    const std::int64_t nl = static_cast<std::int64_t>(S.num_lines());
    P.global = 1 - Rational(sum, nl * S.q());
    if (with_planes && S.m() >= 2) {
        const std::uint64_t np = S.num_planes();
        P.per_plane.resize(np);
        const std::int64_t lines_per_plane = static_cast<std::int64_t>(S.q()) * (S.q() + 1);
        parallel_for(np, [&](std::size_t pid) {
            std::int64_t s = 0;
            for (const auto& l : S.lines_in_plane(S.plane_at(pid))) s += P.line_agree[S.line_id(l)];
            P.per_plane[pid] = 1 - Rational(s, lines_per_plane * S.q());
        });
    }
    return P;
}

Rational delta_global(const Space& S, const PointsTable& f) {
    std::vector<std::uint32_t> a;
    canonical_oracle(S, f, &a);
    std::int64_t sum = std::accumulate(a.begin(), a.end(), std::int64_t{0});
    return 1 - Rational(sum, static_cast<std::int64_t>(S.num_lines()) * S.q());
}

std::vector<std::uint64_t> epsilon_good(const Space& S, const PointsTable& f, const LinesOracle& O,
                                        const Rational& eps) {
    auto cnt = point_agreements(S, f, O);
    std::vector<std::uint64_t> out;
    const auto nd = static_cast<std::int64_t>(S.num_dirs());
    for (std::uint64_t i = 0; i < cnt.size(); ++i)
        if (ratio_ge(cnt[i], nd, eps)) out.push_back(i);
    return out;
}

LinesOracle make_well_behaved(const Space& S, const PointsTable& f, const LinesOracle& O,
                              const Rational& eps) {
    auto a = line_agreements(S, f, O);
    LinesOracle W = O;
    for (std::uint64_t id = 0; id < O.size(); ++id)
        if (!O.is_bot(id) && ratio_lt(a[id], S.q(), eps)) W.set_bot(id);
    return W;
}

std::vector<Exponent> monomials_up_to(std::size_t n, unsigned d) {
    std::vector<Exponent> out;
    Exponent e(n, 0);
    // Exponent vectors of each total degree in lexicographically descending order.
    for (unsigned k = 0; k <= d; ++k) {
        std::vector<Exponent> level;
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
            if (i + 1 == n) {
                e[i] = static_cast<std::uint16_t>(left);
                level.push_back(e);
                return;
            }
            for (unsigned a = left + 1; a-- > 0;) {
                e[i] = static_cast<std::uint16_t>(a);
                rec(i + 1, left - a);
            }
        };
        if (n == 0) {
            if (k == 0) out.push_back({});
            continue;
        }
        rec(0, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<PolyAgreement> brute_force_list(const Space& S, const PointsTable& f, unsigned d,
                                            const Rational& threshold, std::uint64_t budget) {
    check_table(S, f);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::uint64_t N = S.num_points();
    auto mons = monomials_up_to(S.m(), d);
    const std::size_t M = mons.size();
    // Work is q^(M-1) candidate families times N points each.
    long double work = std::pow(static_cast<long double>(q), static_cast<long double>(M - 1)) * N;
    if (work > static_cast<long double>(budget))
        throw BudgetExceeded("brute_force_list: q^(M-1) q^m = " + std::to_string(static_cast<double>(work)) +
                             " point evaluations exceed budget " + std::to_string(budget));
    std::vector<std::vector<Elem>> ev(M);
    for (std::size_t j = 1; j < M; ++j) {
        ev[j].resize(N);
        for (std::uint64_t idx = 0; idx < N; ++idx) {
            Point x = S.point_at(idx);
            Elem v = 1;
            for (std::size_t i = 0; i < S.m(); ++i) v = F.mul(v, F.pow(x[i], mons[j][i]));
            ev[j][idx] = v;
        }
    }
    const auto need = static_cast<std::uint64_t>(std::max<std::int64_t>(0, ceil_count(threshold, N)));
    struct Hit {
        std::vector<Elem> c;
        std::uint64_t agree;
    };
    std::vector<Hit> hits;
    std::vector<Elem> digits(M, 0), e(N, 0), r(N);
    std::vector<std::uint64_t> hist(q);
    for (;;) {
        kernels::sub_mod(r, f.values, e, q);
        std::fill(hist.begin(), hist.end(), 0);
        for (Elem x : r)
            if (x != kBot) ++hist[x];
        for (Elem c0 = 0; c0 < q; ++c0) {
            if (hist[c0] < need) continue;
            std::vector<Elem> c(digits);
            c[0] = c0;
            hits.push_back({std::move(c), hist[c0]});
        }
        std::size_t j = 1;
        for (; j < M; ++j) {
            kernels::add_mod(e, ev[j], q);
            if (++digits[j] < q) break;
            digits[j] = 0;
        }
        if (j >= M) break;
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.agree != b.agree) return a.agree > b.agree;
        return a.c < b.c;
    });
    std::vector<PolyAgreement> out;
    for (auto& h : hits) {
        MultiPoly Q(S.m());
        for (std::size_t j = 0; j < M; ++j)
            if (h.c[j]) Q.set_term(mons[j], h.c[j]);
        out.push_back({std::move(Q), h.agree});
    }
    return out;
}

PlaneDiagnostics plane_diagnostics(const Space& S, const PointsTable& f, const LinesOracle& canonical,
                                   const Plane& pl, const Rational& eps,
                                   std::optional<Rational> explain_threshold, std::uint64_t budget) {
    if (S.m() < 3) throw PreconditionError("plane_diagnostics: need m >= 3");
    check_table(S, f);
    check_oracle(S, canonical);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    PlaneDiagnostics D;
    D.plane = pl;
    D.explain_threshold = explain_threshold.value_or(eps);

    auto pts = S.points_on(pl);
    std::unordered_map<std::uint64_t, std::uint32_t> pos;
    std::vector<Elem> g(pts.size());
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        std::uint64_t idx = S.point_index(pts[i]);
        pos[idx] = i;
        g[i] = f.values[idx];
    }
    // delta_f(pi) and local goodness from the lines inside the plane.
    std::vector<std::uint32_t> local(pts.size(), 0);
    std::vector<std::uint32_t> idx(q);
    std::vector<Elem> ev(q);
    std::int64_t agree_sum = 0;
    auto lines = S.lines_in_plane(pl);
    for (const auto& l : lines) {
        std::uint64_t id = S.line_id(l);
        if (canonical.is_bot(id)) continue;
        S.line_point_indices(l, idx);
        eval_all_into(F, canonical.poly(id), ev);
        for (std::uint32_t t = 0; t < q; ++t) {
            if (f.values[idx[t]] != ev[t]) continue;
            ++agree_sum;
            ++local[pos.at(idx[t])];
        }
    }
    D.delta = 1 - Rational(agree_sum, static_cast<std::int64_t>(lines.size()) * q);
    for (auto c : local)
        if (ratio_ge(c, q + 1, eps)) ++D.locally_good;

    Space P2(q, 2);
    PointsTable gp{q, 2, f.d, g};
    D.explaining = brute_force_list(P2, gp, f.d, D.explain_threshold, budget);
    D.explained.assign(pts.size(), 0);
    for (const auto& c : D.explaining) {
        auto tab = table_of(P2, c.Q, f.d);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (tab.values[i] == g[i]) D.explained[i] = 1;
    }
    D.explained_count = static_cast<std::uint64_t>(std::count(D.explained.begin(), D.explained.end(), 1));
    return D;
}

MultiPoly interpolate_table(const Space& S, const PointsTable& f) {
    check_table(S, f);
    for (Elem v : f.values)
        if (v == kBot) throw PreconditionError("interpolate_table: table has undefined entries");
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::size_t m = S.m();
    const std::uint64_t N = S.num_points();
    std::vector<Elem> a = f.values;
    // Interpolate along each axis in turn; the layout becomes exponent-indexed.
    std::uint64_t stride = 1;
    for (std::size_t axis = m; axis-- > 0;) {
        const std::uint64_t block = stride * q;
        const std::uint64_t fibers = N / q;
        parallel_for(fibers, [&](std::size_t k) {
            std::uint64_t outer = k / stride, inner = k % stride;
            std::uint64_t base = outer * block + inner;
            std::vector<Elem> v(q);
            for (std::uint32_t t = 0; t < q; ++t) v[t] = a[base + t * stride];
            auto c = interpolate_full(F, v).padded(q);
            for (std::uint32_t t = 0; t < q; ++t) a[base + t * stride] = c[t];
        });
        stride = block;
    }
    MultiPoly Q(m);
    for (std::uint64_t idx = 0; idx < N; ++idx) {
        if (!a[idx]) continue;
        Point e = S.point_at(idx);
        Exponent ex(m);
        for (std::size_t i = 0; i < m; ++i) ex[i] = static_cast<std::uint16_t>(e[i]);
        Q.set_term(ex, a[idx]);
    }
    return Q;
}

} // namespace ldtlab
