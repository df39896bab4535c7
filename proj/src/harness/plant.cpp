#include "ldtlab/harness/plant.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/rng.hpp"

#include <numeric>

namespace ldtlab::harness {

namespace {

// First k entries of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::uint64_t> shuffled_prefix(std::uint64_t n, std::uint64_t k, CounterRng& r) {
    std::vector<std::uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint64_t i = 0; i < k && i + 1 < n; ++i) std::swap(idx[i], idx[i + r.below(n - i)]);
    idx.resize(k);
    return idx;
}

std::uint64_t ceil_share(const Rational& w, std::uint64_t n) {
    return static_cast<std::uint64_t>(ceil_count(w, static_cast<std::int64_t>(n)));
}

} // namespace

MultiPoly random_polynomial(std::uint32_t q, std::size_t m, unsigned d, std::uint64_t seed,
                            std::uint64_t substream) {
    CounterRng r(seed, Stream::plant_poly, substream);
    MultiPoly Q(m);
    for (const auto& e : monomials_up_to(m, d)) Q.set_term(e, static_cast<Elem>(r.below(q)));
    return Q;
}

PlantedInstance plant_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    if (cfg.pipeline == Pipeline::spectra || cfg.pipeline == Pipeline::count)
        throw ConfigError("pipeline has no planted instance");
    Space S(cfg.q, cfg.m);
    const std::uint32_t q = cfg.q;
    const std::uint64_t n = S.num_points();
    CounterRng pts(seed, Stream::plant_points);
    CounterRng vals(seed, Stream::plant_values);
    PlantedInstance inst;

    switch (cfg.noise.kind) {
    case NoiseKind::exact: {
        inst.truth.push_back(random_polynomial(q, cfg.m, cfg.d, seed, 0));
        inst.f = table_of(S, inst.truth[0], cfg.d);
        break;
    }
    case NoiseKind::random_corrupt: {
        inst.truth.push_back(random_polynomial(q, cfg.m, cfg.d, seed, 0));
        inst.f = table_of(S, inst.truth[0], cfg.d);
        const std::uint64_t k = ceil_share(cfg.noise.delta, n);
        if (k > 0 && q < 2) throw ConfigError("random_corrupt needs q >= 2");
        for (auto i : shuffled_prefix(n, k, pts))
            inst.f.values[i] = S.field().add(inst.f.values[i], 1 + static_cast<Elem>(vals.below(q - 1)));
        inst.changed = k;
        break;
    }
    case NoiseKind::planted_agreement: {
        inst.truth.push_back(random_polynomial(q, cfg.m, cfg.d, seed, 0));
        auto g = table_of(S, inst.truth[0], cfg.d);
        const std::uint64_t k = ceil_share(cfg.noise.eps, n);
        std::vector<std::uint8_t> keep(n, 0);
        for (auto i : shuffled_prefix(n, k, pts)) keep[i] = 1;
        inst.f = g;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (keep[i]) continue;
            Elem v;
            do v = static_cast<Elem>(vals.below(q));
            while (v == g.values[i]);
            inst.f.values[i] = v;
        }
        inst.changed = n - k;
        break;
    }
    case NoiseKind::mixture: {
        std::vector<PointsTable> tabs;
        for (std::size_t i = 0; i < cfg.noise.weights.size(); ++i) {
            inst.truth.push_back(random_polynomial(q, cfg.m, cfg.d, seed, i));
            tabs.push_back(table_of(S, inst.truth.back(), cfg.d));
        }
        auto order = shuffled_prefix(n, n, pts);
        std::vector<Elem> v(n);
        for (auto& x : v) x = static_cast<Elem>(vals.below(q));
        std::uint64_t pos = 0;
        for (std::size_t i = 0; i < tabs.size(); ++i) {
            const std::uint64_t end = std::min(n, pos + ceil_share(cfg.noise.weights[i], n));
            for (; pos < end; ++pos) v[order[pos]] = tabs[i].values[order[pos]];
        }
        inst.changed = n - pos;
        inst.f = make_table(S, cfg.d, std::move(v));
        break;
    }
    case NoiseKind::structured_rows: {
        inst.truth.push_back(random_polynomial(q, cfg.m, cfg.d, seed, 0));
        auto g = table_of(S, inst.truth[0], cfg.d);
        const std::uint64_t k = ceil_share(cfg.noise.eps, q);
        std::vector<std::uint8_t> keep(q, 0);
        for (auto c : shuffled_prefix(q, k, pts)) keep[c] = 1;
        std::vector<Elem> v(n);
        const std::uint64_t block = n / q; // points with a fixed first coordinate
        for (std::uint32_t c = 0; c < q; ++c) {
            if (keep[c]) {
                for (std::uint64_t i = c * block; i < (c + 1) * block; ++i) v[i] = g.values[i];
                continue;
            }
            auto R = random_polynomial(q, cfg.m, cfg.d, seed, 1 + c);
            for (std::uint64_t i = c * block; i < (c + 1) * block; ++i) {
                Point x = S.point_at(i);
                v[i] = R.eval(S.field(), x.coords());
            }
        }
        inst.f = make_table(S, cfg.d, std::move(v));
        inst.changed = n - agreement_count(S, inst.f, inst.truth[0]);
        break;
    }
    }
    return inst;
}

} // namespace ldtlab::harness
