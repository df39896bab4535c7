#include "ldtlab/rsline.hpp"

#include "ldtlab/errors.hpp"
#include "ldtlab/kernels.hpp"
#include "ldtlab/linalg.hpp"

#include <algorithm>
#include <string>

namespace ldtlab {

void eval_all_into(const PrimeField& F, const UniPoly& P, std::span<Elem> out) {
    const auto& c = P.coeffs();
    const Elem q = F.p();
    if (out.size() != q) throw DimensionMismatch("eval_all_into: need q slots");
    if (c.size() <= 1) {
        std::fill(out.begin(), out.end(), c.empty() ? 0 : c[0]);
        return;
    }
    if (c.size() == 2) {
        Elem acc = c[0];
        for (Elem t = 0; t < q; ++t) {
            out[t] = acc;
            acc = F.add(acc, c[1]);
        }
        return;
    }
    for (Elem t = 0; t < q; ++t) {
        Elem r = c.back();
        for (std::size_t i = c.size() - 1; i-- > 0;) r = F.add(F.mul(r, t), c[i]);
        out[t] = r;
    }
}

std::uint32_t agreement_count(const PrimeField& F, const UniPoly& P, std::span<const Elem> v) {
    if (v.size() != F.p()) throw DimensionMismatch("agreement_count: need q values");
    std::vector<Elem> e(F.p());
    eval_all_into(F, P, e);
    return static_cast<std::uint32_t>(kernels::count_equal(e, v));
}

namespace {

void check_line(const PrimeField& F, std::span<const Elem> v, unsigned d, const char* who) {
    if (v.size() != F.p()) throw DimensionMismatch(std::string(who) + ": need q values");
    if (d >= F.p()) throw PreconditionError(std::string(who) + ": need d < q");
}

// Lex-smallest polynomial of degree <= d through the given points
// (fewer than d+1 of them, so the solution space is an affine subspace).
UniPoly lex_min_interpolant(const PrimeField& F, const std::vector<Elem>& ts,
                            const std::vector<Elem>& vs, unsigned d) {
    std::vector<Elem> fixed; // values chosen for c_0..c_{i-1}
    for (unsigned i = 0; i <= d; ++i) {
        // Constraints: Vandermonde rows plus c_k = fixed[k] for k < i, and try c_i = 0.
        std::size_t rows = ts.size() + i + 1;
        Matrix M(rows, d + 1);
        std::vector<Elem> b(rows, 0);
        for (std::size_t r = 0; r < ts.size(); ++r) {
            Elem x = 1;
            for (unsigned k = 0; k <= d; ++k) {
                M.at(r, k) = x;
                x = F.mul(x, ts[r]);
            }
            b[r] = vs[r];
        }
        for (unsigned k = 0; k <= i; ++k) {
            M.at(ts.size() + k, k) = 1;
            b[ts.size() + k] = k < i ? fixed[k] : 0;
        }
        if (solve(F, M, b)) {
            fixed.push_back(0);
            continue;
        }
        // c_i is forced; read it off any solution of the reduced system.
        Matrix M2(rows - 1, d + 1);
        std::copy(M.a.begin(), M.a.begin() + static_cast<std::ptrdiff_t>((rows - 1) * (d + 1)), M2.a.begin());
        b.pop_back();
        auto sol = solve(F, M2, b);
        if (!sol) throw InconsistencyError("lex_min_interpolant: inconsistent system");
        fixed.push_back((*sol)[i]);
    }
    return UniPoly(std::move(fixed));
}

// Exact search over the first d agreeing positions of every candidate.
// P = v_1 + (t - t_1)(w_2 + (t - t_2)(... + (t - t_d) c)), where the w's are
// the transformed values along the path; the leaf picks c by histogram.
class SubsetSearch {
public:
    SubsetSearch(const PrimeField& F, unsigned d) : F_(F), d_(d), q_(F.p()) {
        inv_.assign(q_, 0);
        if (!F.inv_table().empty()) {
            inv_ = F.inv_table();
        } else {
            for (Elem a = 1; a < q_; ++a) inv_[a] = F.inv(a);
        }
        lt_.assign(d + 1, std::vector<Elem>(q_));
        lv_.assign(d + 1, std::vector<Elem>(q_));
        ln_.assign(d + 1, 0);
        path_t_.resize(d);
        path_v_.resize(d);
        stamp_.assign(q_, 0);
        count_.assign(q_, 0);
    }

    bool matches(const PrimeField& F, unsigned d) const noexcept { return F_.p() == F.p() && d_ == d; }

    // seed: a known candidate; the search only explores totals >= its agreement.
    DecodeEntry run(std::span<const Elem> v, const DecodeEntry* seed) {
        std::size_t n = 0;
        for (Elem t = 0; t < q_; ++t) {
            if (v[t] == kBot) continue;
            lt_[0][n] = t;
            lv_[0][n++] = v[t];
        }
        ln_[0] = n;
        best_ = static_cast<std::uint32_t>(d_ + 1);
        found_ = false;
        if (seed && seed->agree >= best_) {
            best_ = seed->agree;
            best_poly_ = seed->poly.coeffs();
            found_ = true;
        }
        recurse(0);
        if (!found_) throw InconsistencyError("best_fit: subset search found nothing");
        return {UniPoly(best_poly_), best_};
    }

private:
    void recurse(unsigned j) {
        const Elem* ts = lt_[j].data();
        const Elem* vs = lv_[j].data();
        const std::size_t n = ln_[j];
        if (j == d_) {
            leaf(vs, n);
            return;
        }
        Elem* nt = lt_[j + 1].data();
        Elem* nv = lv_[j + 1].data();
        for (std::size_t a = 0; a < n; ++a) {
            if (j + 1 + (n - a - 1) < best_) break;
            const Elem ti = ts[a], vi = vs[a];
            path_t_[j] = ti;
            path_v_[j] = vi;
            std::size_t k = 0;
            for (std::size_t b = a + 1; b < n; ++b, ++k) {
                nt[k] = ts[b];
                nv[k] = F_.mul(F_.sub(vs[b], vi), inv_[ts[b] - ti]);
            }
            ln_[j + 1] = k;
            recurse(j + 1);
        }
    }

    void leaf(const Elem* vs, std::size_t n) {
        if (n == 0 || d_ + n < best_) return;
        ++gen_;
        std::uint32_t top = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Elem c = vs[i];
            if (stamp_[c] != gen_) {
                stamp_[c] = gen_;
                count_[c] = 0;
            }
            top = std::max(top, ++count_[c]);
        }
        const std::uint32_t total = static_cast<std::uint32_t>(d_) + top;
        if (total < best_) return;
        for (std::size_t i = 0; i < n; ++i) {
            const Elem c = vs[i];
            if (stamp_[c] != gen_ || count_[c] != top) continue;
            stamp_[c] = gen_ - 1; // visit each value once
            auto poly = rebuild(c);
            if (!found_ || total > best_ || poly < best_poly_) {
                best_poly_ = std::move(poly);
                found_ = true;
            }
            best_ = total;
        }
    }

    std::vector<Elem> rebuild(Elem c) const {
        // Expand from the innermost factor outward.
        std::vector<Elem> p{c};
        for (unsigned l = d_; l-- > 0;) {
            std::vector<Elem> n(p.size() + 1, 0);
            const Elem nt = F_.neg(path_t_[l]);
            for (std::size_t k = 0; k < p.size(); ++k) {
                n[k] = F_.add(n[k], F_.mul(p[k], nt));
                n[k + 1] = F_.add(n[k + 1], p[k]);
            }
            n[0] = F_.add(n[0], path_v_[l]);
            p = std::move(n);
        }
        while (!p.empty() && p.back() == 0) p.pop_back();
        return p;
    }

    PrimeField F_;
    unsigned d_;
    Elem q_;
    std::vector<Elem> inv_;
    std::vector<std::vector<Elem>> lt_, lv_;
    std::vector<std::size_t> ln_;
    std::vector<Elem> path_t_, path_v_;
    std::vector<std::uint32_t> stamp_, count_;
    std::uint32_t gen_ = 0;
    std::uint32_t best_ = 0;
    bool found_ = false;
    std::vector<Elem> best_poly_;
};

// Gao's decoder over the defined positions. Returns the candidate only;
// the caller checks the distance.
std::optional<UniPoly> gao_decode(const PrimeField& F, std::span<const Elem> v, unsigned d) {
    const Elem q = F.p();
    std::vector<Elem> ts, vs;
    for (Elem t = 0; t < q; ++t) {
        if (v[t] == kBot) continue;
        ts.push_back(t);
        vs.push_back(v[t]);
    }
    const std::size_t n = ts.size();
    if (n <= d) return std::nullopt;
    UniPoly g0, g1;
    if (n == q) {
        std::vector<Elem> c(q + 1, 0);
        c[q] = 1;
        if (q > 1) c[1] = F.neg(1);
        else c[0] = 0;
        g0 = UniPoly(std::move(c));
        g1 = interpolate_full(F, v);
    } else {
        g0 = UniPoly::constant(1);
        for (Elem t : ts) g0 = mul(F, g0, UniPoly(std::vector<Elem>{F.neg(t), 1}));
        g1 = interpolate(F, ts, vs);
    }
    // Partial extended Euclid on (g0, g1) tracking the g1 cofactor.
    const int stop = static_cast<int>((n + d + 1 + 1) / 2); // ceil((n+d+1)/2)
    UniPoly r0 = g0, r1 = g1, s0, s1 = UniPoly::constant(1);
    while (r1.degree() >= stop) {
        auto [qq, rr] = divmod(F, r0, r1);
        UniPoly s2 = sub(F, s0, mul(F, qq, s1));
        r0 = std::move(r1);
        r1 = std::move(rr);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (s1.is_zero()) return std::nullopt;
    auto [f, rem] = divmod(F, r1, s1);
    if (!rem.is_zero() || f.degree() > static_cast<int>(d)) return std::nullopt;
    return f;
}

// Interpolates disjoint windows of d+1 consecutive defined positions and
// keeps the best candidate (lex-smallest among equal agreement).
std::optional<DecodeEntry> window_candidate(const PrimeField& F, std::span<const Elem> v,
                                            const std::vector<Elem>& ts, const std::vector<Elem>& vs,
                                            unsigned d) {
    std::optional<DecodeEntry> best;
    std::vector<Elem> dd(d + 1), ev(F.p());
    for (std::size_t w = 0; (w + 1) * (d + 1) <= ts.size(); ++w) {
        const Elem* x = &ts[w * (d + 1)];
        // Newton divided differences, then expand to the monomial basis.
        for (unsigned i = 0; i <= d; ++i) dd[i] = vs[w * (d + 1) + i];
        for (unsigned k = 1; k <= d; ++k)
            for (unsigned i = d; i >= k; --i)
                dd[i] = F.div(F.sub(dd[i], dd[i - 1]), F.sub(x[i], x[i - k]));
        std::vector<Elem> c{dd[d]};
        for (unsigned l = d; l-- > 0;) {
            std::vector<Elem> n(c.size() + 1, 0);
            const Elem nx = F.neg(x[l]);
            for (std::size_t k = 0; k < c.size(); ++k) {
                n[k] = F.add(n[k], F.mul(c[k], nx));
                n[k + 1] = F.add(n[k + 1], c[k]);
            }
            n[0] = F.add(n[0], dd[l]);
            c = std::move(n);
        }
        UniPoly P(std::move(c));
        eval_all_into(F, P, ev);
        auto a = static_cast<std::uint32_t>(kernels::count_equal(ev, v));
        if (!best || a > best->agree || (a == best->agree && P < best->poly)) best = DecodeEntry{std::move(P), a};
    }
    return best;
}

bool within_unique_radius(std::uint32_t agree, std::uint32_t q, unsigned d) {
    // distance < (q-d)/2  <=>  2(q - agree) < q - d
    return 2 * static_cast<std::int64_t>(q - agree) < static_cast<std::int64_t>(q) - d;
}

} // namespace

std::optional<UniPoly> unique_decode(const PrimeField& F, std::span<const Elem> v, unsigned d) {
    check_line(F, v, d, "unique_decode");
    auto f = gao_decode(F, v, d);
    if (!f) return std::nullopt;
    if (!within_unique_radius(agreement_count(F, *f, v), F.p(), d)) return std::nullopt;
    return f;
}

DecodeEntry best_fit_entry(const PrimeField& F, std::span<const Elem> v, unsigned d) {
    check_line(F, v, d, "best_fit");
    const Elem q = F.p();
    std::vector<Elem> ts, vs;
    for (Elem t = 0; t < q; ++t) {
        if (v[t] == kBot) continue;
        ts.push_back(t);
        vs.push_back(v[t]);
    }
    if (ts.size() <= d) {
        auto P = lex_min_interpolant(F, ts, vs, d);
        return {P, static_cast<std::uint32_t>(ts.size())};
    }
    if (d == 0) {
        // Plurality value, smallest on ties.
        std::vector<std::uint32_t> cnt(q, 0);
        for (Elem x : vs) ++cnt[x];
        Elem c = static_cast<Elem>(std::max_element(cnt.begin(), cnt.end()) - cnt.begin());
        return {UniPoly::constant(c), cnt[c]};
    }
    // A candidate inside the unique radius beats every other polynomial strictly.
    std::optional<DecodeEntry> seed;
    if (d >= 2) seed = window_candidate(F, v, ts, vs, d);
    if (seed && within_unique_radius(seed->agree, q, d)) return *seed;
    if (d >= 2) {
        if (auto f = gao_decode(F, v, d)) {
            std::uint32_t a = agreement_count(F, *f, v);
            if (within_unique_radius(a, q, d)) return {*f, a};
        }
    }
    thread_local std::optional<SubsetSearch> search;
    if (!search || !search->matches(F, d)) search.emplace(F, d);
    return search->run(v, seed ? &*seed : nullptr);
}

UniPoly best_fit(const PrimeField& F, std::span<const Elem> v, unsigned d) {
    return best_fit_entry(F, v, d).poly;
}

DecodeList list_decode(const PrimeField& F, std::span<const Elem> v, unsigned d, const Rational& eps,
                       std::uint64_t budget) {
    check_line(F, v, d, "list_decode");
    const Elem q = F.p();
    std::uint64_t work = 1;
    for (unsigned i = 0; i <= d; ++i) {
        work *= q;
        if (work > budget)
            throw BudgetExceeded("list_decode: q^(d+1) = " + std::to_string(q) + "^" + std::to_string(d + 1) +
                                 " exceeds budget " + std::to_string(budget));
    }
    DecodeList out;
    out.q = q;
    out.d = d;
    out.threshold = eps;
    const auto need = static_cast<std::uint32_t>(std::max<std::int64_t>(0, ceil_count(eps, q)));

    // Odometer over (c_1..c_d); e holds sum_j c_j t^j, updated by adding t^j.
    std::vector<std::vector<Elem>> pw(d + 1, std::vector<Elem>(q));
    for (unsigned j = 1; j <= d; ++j)
        for (Elem t = 0; t < q; ++t) pw[j][t] = F.pow(t, j);
    std::vector<Elem> digits(d + 1, 0), e(q, 0), r(q);
    std::vector<std::uint32_t> hist(q);
    for (;;) {
        kernels::sub_mod(r, v, e, q);
        std::fill(hist.begin(), hist.end(), 0);
        for (Elem x : r)
            if (x != kBot) ++hist[x];
        for (Elem c0 = 0; c0 < q; ++c0) {
            if (hist[c0] < need) continue;
            std::vector<Elem> c(digits);
            c[0] = c0;
            out.entries.push_back({UniPoly(std::move(c)), hist[c0]});
        }
        unsigned j = 1;
        for (; j <= d; ++j) {
            kernels::add_mod(e, pw[j], q);
            if (++digits[j] < q) break;
            digits[j] = 0;
        }
        if (j > d) break;
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const DecodeEntry& a, const DecodeEntry& b) {
        if (a.agree != b.agree) return a.agree > b.agree;
        return a.poly < b.poly;
    });
    return out;
}

std::vector<Elem> non_unique_params(const PrimeField& F, const DecodeList& L) {
    const Elem q = F.p();
    std::vector<std::vector<Elem>> ev;
    ev.reserve(L.size());
    for (const auto& e : L.entries) {
        std::vector<Elem> x(q);
        eval_all_into(F, e.poly, x);
        ev.push_back(std::move(x));
    }
    std::vector<Elem> out;
    for (Elem t = 0; t < q; ++t) {
        bool hit = false;
        for (std::size_t i = 0; i < ev.size() && !hit; ++i)
            for (std::size_t j = i + 1; j < ev.size() && !hit; ++j) hit = ev[i][t] == ev[j][t];
        if (hit) out.push_back(t);
    }
    return out;
}

std::vector<Point> non_unique_points(const Space& S, const DecodeList& L, const Line& line) {
    std::vector<Point> out;
    for (Elem t : non_unique_params(S.field(), L)) out.push_back(S.axpy(line.base, t, line.dir));
    return out;
}

} // namespace ldtlab
