#include "ldtlab/corrector.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/parallel.hpp"
#include "ldtlab/rsline.hpp"

#include <algorithm>
#include <map>

namespace ldtlab {

namespace {

void check_table(const Space& S, const PointsTable& f) {
    if (f.q != S.q() || f.m != S.m() || f.values.size() != S.num_points())
        throw DimensionMismatch("points table does not match the space");
    if (f.d >= S.q()) throw PreconditionError("corrector: need d < q");
}

std::int64_t to_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

std::vector<Elem> coeff_vector(const MultiPoly& Q, const std::vector<Exponent>& mons) {
    std::vector<Elem> v;
    for (const auto& e : mons) v.push_back(Q.coeff(e));
    return v;
}

} // namespace

CorrectedTable plurality_correct(const Space& S, const PointsTable& f) {
    check_table(S, f);
    return plurality_correct(S, f, canonical_oracle(S, f));
}

CorrectedTable plurality_correct(const Space& S, const PointsTable& f, const LinesOracle& O) {
    check_table(S, f);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::uint64_t nd = S.num_dirs();
    std::vector<Elem> out(S.num_points());
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count() * 4, out.size()));
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<std::uint32_t> hist(q);
        for (std::uint64_t i = c * out.size() / chunks; i < (c + 1) * out.size() / chunks; ++i) {
            std::fill(hist.begin(), hist.end(), 0);
            const Point x = S.point_at(i);
            std::uint32_t votes = 0;
            for (std::uint64_t u = 0; u < nd; ++u) {
                const Line l = S.line_through(x, u);
                const std::uint64_t id = S.line_id(l);
                if (O.is_bot(id)) continue;
                ++hist[O.poly(id).eval(F, *S.param_of(l, x))];
                ++votes;
            }
            if (votes == 0) {
                out[i] = f.values[i];
                continue;
            }
            // max_element returns the first maximum, the smallest value.
            out[i] = static_cast<Elem>(std::max_element(hist.begin(), hist.end()) - hist.begin());
        }
    });
    CorrectedTable t;
    t.table = {q, S.m(), f.d, std::move(out)};
    t.mode = CorrectionMode::plurality;
    t.delta = 1 - accept_prob_exact(S, f, O);
    return t;
}

std::optional<IterateResult> iterate_correct(const Space& S, const PointsTable& f, unsigned max_iters) {
    check_table(S, f);
    IterateResult res;
    PointsTable cur = f;
    for (unsigned it = 0;; ++it) {
        auto O = canonical_oracle(S, cur);
        const Rational delta = 1 - accept_prob_exact(S, cur, O);
        res.deltas.push_back(delta);
        if (delta == 0) {
            if (std::find(cur.values.begin(), cur.values.end(), kBot) != cur.values.end()) return std::nullopt;
            MultiPoly Q = interpolate_table(S, cur);
            if (Q.total_degree() > static_cast<int>(f.d)) return std::nullopt;
            res.Q = std::move(Q);
            res.iters = it;
            return res;
        }
        if (it == max_iters) return std::nullopt;
        auto next = plurality_correct(S, cur, O).table;
        if (next == cur) return std::nullopt; // fixed point with delta > 0
        cur = std::move(next);
    }
}

CorrectedTable advice_correct(const Space& S, const PointsTable& f, const Point& x, Elem sigma,
                              const Rational& delta, std::uint64_t budget) {
    check_table(S, f);
    if (x.dim() != S.m()) throw DimensionMismatch("advice_correct: point arity");
    if (sigma >= S.q()) throw PreconditionError("advice_correct: sigma out of range");
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const std::uint64_t nd = S.num_dirs();
    // Lists are decoded before the parallel pass so a budget error surfaces here.
    if (S.q() > 1) {
        std::uint64_t work = 1;
        for (unsigned i = 0; i <= f.d; ++i) {
            work *= q;
            if (work > budget) throw BudgetExceeded("advice_correct: list decoding exceeds budget");
        }
    }
    std::vector<Elem> out(S.num_points(), kBot);
    parallel_for(nd, [&](std::size_t u) {
        const Line l = S.line_through(x, u);
        std::vector<std::uint32_t> idx(q);
        S.line_point_indices(l, idx);
        LineValues v(q);
        for (std::uint32_t t = 0; t < q; ++t) v[t] = f.values[idx[t]];
        const Elem tx = *S.param_of(l, x);
        auto L = list_decode(F, v, f.d, delta, budget);
        const UniPoly* pick = nullptr;
        std::size_t hits = 0;
        for (const auto& e : L.entries)
            if (e.poly.eval(F, tx) == sigma) {
                ++hits;
                pick = &e.poly;
            }
        if (hits != 1) return;
        for (std::uint32_t t = 0; t < q; ++t)
            if (t != tx) out[idx[t]] = pick->eval(F, t);
    });
    out[S.point_index(x)] = sigma;
    CorrectedTable t;
    t.table = {q, S.m(), f.d, std::move(out)};
    t.mode = CorrectionMode::advice;
    t.advice_point = x;
    t.advice_value = sigma;
    t.delta = delta;
    return t;
}

MultiDecodeResult decode_multivariate(const Space& S, const PointsTable& f, const Rational& eps,
                                      const MultiDecodeParams& params) {
    check_table(S, f);
    const auto& F = S.field();
    const std::uint32_t q = S.q();
    const unsigned d = f.d;
    const std::uint64_t n = S.num_points();
    const std::uint64_t nd = S.num_dirs();

    MultiDecodeResult res;
    res.eps = eps;
    res.list_threshold = params.list_threshold
                             ? *params.list_threshold
                             : std::max(pow_upper(eps, 8) / 2, sqrt_upper(Rational(d, q)));
    res.gamma = params.gamma ? *params.gamma : eps * eps / 12;
    res.mu = params.mu ? *params.mu : eps;
    res.min_agreement = params.min_agreement ? *params.min_agreement : eps * eps;

    auto O = canonical_oracle(S, f);
    res.accept = accept_prob_exact(S, f, O);
    res.hypothesis_met = res.accept >= 5 * eps;
    if (!res.hypothesis_met && !params.best_effort)
        throw PreconditionError("decode_multivariate: acceptance below 5 eps");
    res.stages.push_back({"accept", "ok", {{"accept", res.accept}, {"hypothesis_met", res.hypothesis_met}}});

    auto W = make_well_behaved(S, f, O, eps);
    res.stages.push_back({"well_behaved", "ok", {{"bot_lines", to_i64(W.bot_count())}}});

    // Per point: lines through x with W(l)(x) = f(x) and x unique in the
    // list of f on l.
    std::vector<std::uint32_t> cnt(n, 0);
    {
        const std::uint64_t nl = S.num_lines();
        const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count(), nl));
        std::vector<std::vector<std::uint32_t>> part(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            auto& pc = part[c];
            pc.assign(n, 0);
            std::vector<std::uint32_t> idx(q);
            LineValues v(q);
            std::vector<Elem> ev(q);
            std::vector<std::uint8_t> nonuniq(q);
            for (std::uint64_t id = c * nl / chunks; id < (c + 1) * nl / chunks; ++id) {
                if (W.is_bot(id)) continue;
                S.line_point_indices(S.line_at(id), idx);
                for (std::uint32_t t = 0; t < q; ++t) v[t] = f.values[idx[t]];
                eval_all_into(F, W.poly(id), ev);
                auto L = list_decode(F, v, d, res.list_threshold, params.budget);
                std::fill(nonuniq.begin(), nonuniq.end(), 0);
                for (Elem t : non_unique_params(F, L)) nonuniq[t] = 1;
                for (std::uint32_t t = 0; t < q; ++t)
                    if (ev[t] == v[t] && !nonuniq[t]) ++pc[idx[t]];
            }
        });
        for (const auto& pc : part)
            for (std::uint64_t i = 0; i < n; ++i) cnt[i] += pc[i];
    }
    std::vector<std::uint64_t> cand;
    for (std::uint64_t i = 0; i < n; ++i)
        if (ratio_ge(cnt[i], to_i64(nd), 2 * eps)) cand.push_back(i);
    res.candidates = cand.size();
    res.density_met = ratio_ge(to_i64(cand.size()), to_i64(n), res.mu);
    std::stable_sort(cand.begin(), cand.end(), [&](auto a, auto b) { return cnt[a] > cnt[b]; });
    res.stages.push_back({"candidates",
                          cand.empty() ? "empty" : "ok",
                          {{"count", to_i64(cand.size())},
                           {"density_met", res.density_met},
                           {"list_threshold", res.list_threshold}}});

    const auto mons = monomials_up_to(S.m(), d);
    std::map<std::vector<Elem>, DecodedPoly> found;
    std::vector<PointsTable> found_tables;
    const std::size_t cap = std::min<std::size_t>(cand.size(), params.advice_cap);
    for (std::size_t r = 0; r < cap; ++r) {
        AdviceDiagnostics diag;
        diag.x = S.point_at(cand[r]);
        diag.sigma = f.values[cand[r]];
        diag.rank = r;
        bool covered = false;
        for (const auto& t : found_tables) covered = covered || t.values[cand[r]] == diag.sigma;
        if (params.skip_covered && covered) {
            diag.outcome = "covered";
            res.advice.push_back(std::move(diag));
            continue;
        }
        auto fc = advice_correct(S, f, diag.x, diag.sigma, res.list_threshold, params.budget);
        diag.bot_count = to_i64(std::count(fc.table.values.begin(), fc.table.values.end(), kBot));
        const Rational dlt = delta_global(S, fc.table);
        diag.corrected_delta = dlt;
        if (dlt > params.trigger_delta) {
            diag.outcome = "not_low_error";
            res.advice.push_back(std::move(diag));
            continue;
        }
        auto it = iterate_correct(S, fc.table, params.max_iters);
        if (!it) {
            diag.outcome = "iterate_failed";
            res.advice.push_back(std::move(diag));
            continue;
        }
        diag.Q = it->Q;
        const auto agree = to_i64(agreement_count(S, f, it->Q));
        if (ratio_lt(agree, to_i64(n), res.min_agreement)) {
            diag.outcome = "below_floor";
            res.advice.push_back(std::move(diag));
            continue;
        }
        diag.outcome = "recovered";
        auto key = coeff_vector(it->Q, mons);
        if (!found.count(key)) {
            found_tables.push_back(table_of(S, it->Q, d));
            found.emplace(std::move(key), DecodedPoly{it->Q, Rational(agree, to_i64(n))});
        }
        res.advice.push_back(std::move(diag));
    }
    std::int64_t tried = 0, covered = 0;
    for (const auto& a : res.advice) (a.outcome == "covered" ? covered : tried) += 1;
    res.stages.push_back({"advice",
                          found.empty() ? "empty" : "ok",
                          {{"tried", tried}, {"covered", covered}, {"recovered", to_i64(found.size())}}});

    std::vector<std::pair<std::vector<Elem>, DecodedPoly>> list(found.begin(), found.end());
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.second.agreement > b.second.agreement; });
    for (auto& [k, v] : list) res.results.push_back(std::move(v));
    return res;
}

} // namespace ldtlab
