#include "ldtlab/multipoly.hpp"

#include "ldtlab/errors.hpp"

#include <algorithm>

namespace ldtlab {

MultiPoly MultiPoly::constant(std::size_t nvars, Elem c) {
    MultiPoly r(nvars);
    if (c != 0) r.t_[Exponent(nvars, 0)] = c;
    return r;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw DimensionMismatch("variable index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    MultiPoly r(nvars);
    r.t_[e] = 1;
    return r;
}

MultiPoly MultiPoly::monomial(Exponent e, Elem c) {
    MultiPoly r(e.size());
    if (c != 0) r.t_[std::move(e)] = c;
    return r;
}

MultiPoly MultiPoly::from_uni(std::size_t nvars, std::size_t var, const UniPoly& u) {
    MultiPoly r(nvars);
    for (std::size_t k = 0; k < u.coeffs().size(); ++k) {
        if (u.coeff(k) == 0) continue;
        Exponent e(nvars, 0);
        e[var] = static_cast<std::uint16_t>(k);
        r.t_[e] = u.coeff(k);
    }
    return r;
}

Elem MultiPoly::coeff(const Exponent& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? 0 : it->second;
}

void MultiPoly::add_term(const PrimeField& F, const Exponent& e, Elem c) {
    if (c == 0) return;
    if (e.size() != n_) throw DimensionMismatch("exponent arity mismatch");
    auto [it, inserted] = t_.try_emplace(e, c);
    if (!inserted) {
        it->second = F.add(it->second, c);
        if (it->second == 0) t_.erase(it);
    }
}

void MultiPoly::set_term(const Exponent& e, Elem c) {
    if (e.size() != n_) throw DimensionMismatch("exponent arity mismatch");
    if (c == 0)
        t_.erase(e);
    else
        t_[e] = c;
}

int MultiPoly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : t_) {
        int s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

int MultiPoly::degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : t_) d = std::max<int>(d, e[var]);
    return d;
}

int MultiPoly::weighted_degree(std::span<const int> w) const {
    if (w.size() != n_) throw DimensionMismatch("weight arity mismatch");
    int d = -1;
    for (const auto& [e, c] : t_) {
        int s = 0;
        for (std::size_t i = 0; i < n_; ++i) s += w[i] * e[i];
        d = std::max(d, s);
    }
    return d;
}

Elem MultiPoly::eval(const PrimeField& F, std::span<const Elem> x) const {
    if (x.size() != n_) throw DimensionMismatch("evaluation point arity mismatch");
    Elem r = 0;
    for (const auto& [e, c] : t_) {
        Elem m = c;
        for (std::size_t i = 0; i < n_; ++i)
            if (e[i]) m = F.mul(m, F.pow(x[i], e[i]));
        r = F.add(r, m);
    }
    return r;
}

namespace {
void check_arity(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars() != b.nvars()) throw DimensionMismatch("polynomial arity mismatch");
}
} // namespace

MultiPoly add(const PrimeField& F, const MultiPoly& a, const MultiPoly& b) {
    check_arity(a, b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(F, e, c);
    return r;
}

MultiPoly sub(const PrimeField& F, const MultiPoly& a, const MultiPoly& b) {
    check_arity(a, b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(F, e, F.neg(c));
    return r;
}

MultiPoly mul(const PrimeField& F, const MultiPoly& a, const MultiPoly& b) {
    check_arity(a, b);
    MultiPoly r(a.nvars());
    Exponent e(a.nvars());
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            r.add_term(F, e, F.mul(ca, cb));
        }
    return r;
}

MultiPoly scale(const PrimeField& F, const MultiPoly& a, Elem s) {
    MultiPoly r(a.nvars());
    if (s == 0) return r;
    for (const auto& [e, c] : a.terms()) r.set_term(e, F.mul(c, s));
    return r;
}

MultiPoly pow(const PrimeField& F, const MultiPoly& a, unsigned e) {
    MultiPoly r = MultiPoly::constant(a.nvars(), 1);
    MultiPoly b = a;
    while (e) {
        if (e & 1) r = mul(F, r, b);
        e >>= 1;
        if (e) b = mul(F, b, b);
    }
    return r;
}

std::vector<MultiPoly> coeffs_in(const MultiPoly& a, std::size_t var) {
    if (var >= a.nvars()) throw DimensionMismatch("variable index out of range");
    int d = a.degree_in(var);
    std::vector<MultiPoly> out(d < 0 ? 0 : d + 1, MultiPoly(a.nvars()));
    for (const auto& [e, c] : a.terms()) {
        Exponent f = e;
        f[var] = 0;
        out[e[var]].set_term(f, c);
    }
    return out;
}

MultiPoly compose(const PrimeField& F, const MultiPoly& a, std::span<const MultiPoly> images) {
    if (images.size() != a.nvars()) throw DimensionMismatch("compose: wrong number of images");
    std::size_t n = images.empty() ? 0 : images[0].nvars();
    for (const auto& g : images)
        if (g.nvars() != n) throw DimensionMismatch("compose: images of mixed arity");
    // Powers of each image, built lazily.
    std::vector<std::vector<MultiPoly>> pw(images.size());
    auto power = [&](std::size_t i, unsigned k) -> const MultiPoly& {
        auto& v = pw[i];
        if (v.empty()) v.push_back(MultiPoly::constant(n, 1));
        while (v.size() <= k) v.push_back(mul(F, v.back(), images[i]));
        return v[k];
    };
    MultiPoly r(n);
    for (const auto& [e, c] : a.terms()) {
        MultiPoly t = MultiPoly::constant(n, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = mul(F, t, power(i, e[i]));
        r = add(F, r, t);
    }
    return r;
}

MultiPoly substitute(const PrimeField& F, const MultiPoly& a, std::size_t var, const MultiPoly& g) {
    std::vector<MultiPoly> images;
    for (std::size_t i = 0; i < a.nvars(); ++i)
        images.push_back(i == var ? g : MultiPoly::variable(a.nvars(), i));
    return compose(F, a, images);
}

UniPoly restrict_to_var(const PrimeField& F, const MultiPoly& a, std::size_t keep,
                        std::span<const Elem> point) {
    if (point.size() != a.nvars()) throw DimensionMismatch("restrict: arity mismatch");
    int d = a.degree_in(keep);
    std::vector<Elem> c(d < 0 ? 0 : d + 1, 0);
    for (const auto& [e, v] : a.terms()) {
        Elem m = v;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != keep && e[i]) m = F.mul(m, F.pow(point[i], e[i]));
        c[e[keep]] = F.add(c[e[keep]], m);
    }
    return UniPoly(std::move(c));
}

UniPoly to_uni(const MultiPoly& a, std::size_t var) {
    int d = a.degree_in(var);
    std::vector<Elem> c(d < 0 ? 0 : d + 1, 0);
    for (const auto& [e, v] : a.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != var && e[i]) throw PreconditionError("to_uni: other variables present");
        c[e[var]] = v;
    }
    return UniPoly(std::move(c));
}

MultiPoly divide_exact(const PrimeField& F, const MultiPoly& a, const MultiPoly& b) {
    check_arity(a, b);
    if (b.is_zero()) throw PreconditionError("division by zero polynomial");
    const auto& [lb, cb] = *b.terms().rbegin();
    Elem icb = F.inv(cb);
    MultiPoly q(a.nvars()), r = a;
    Exponent e(a.nvars());
    while (!r.is_zero()) {
        const auto& [lr, cr] = *r.terms().rbegin();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (lr[i] < lb[i]) throw InconsistencyError("divide_exact: not divisible");
            e[i] = static_cast<std::uint16_t>(lr[i] - lb[i]);
        }
        Elem c = F.mul(cr, icb);
        q.add_term(F, e, c);
        MultiPoly t = MultiPoly::monomial(e, c);
        r = sub(F, r, mul(F, t, b));
    }
    return q;
}

} // namespace ldtlab
