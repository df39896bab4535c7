#include "ldtlab/unipoly.hpp"

#include "ldtlab/errors.hpp"

#include <algorithm>

namespace ldtlab {

UniPoly::UniPoly(std::vector<Elem> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::constant(Elem c) { return UniPoly(std::vector<Elem>{c}); }

UniPoly UniPoly::monomial(Elem c, std::size_t deg) {
    std::vector<Elem> v(deg + 1, 0);
    v[deg] = c;
    return UniPoly(std::move(v));
}

void UniPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::vector<Elem> UniPoly::padded(std::size_t n) const {
    std::vector<Elem> v = c_;
    if (v.size() < n) v.resize(n, 0);
    return v;
}

Elem UniPoly::eval(const PrimeField& F, Elem t) const noexcept {
    Elem r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = F.add(F.mul(r, t), *it);
    return r;
}

std::vector<Elem> UniPoly::eval_all(const PrimeField& F) const {
    std::vector<Elem> out(F.p());
    for (Elem t = 0; t < F.p(); ++t) out[t] = eval(F, t);
    return out;
}

std::strong_ordering UniPoly::operator<=>(const UniPoly& o) const {
    std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = coeff(i) <=> o.coeff(i); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

UniPoly add(const PrimeField& F, const UniPoly& a, const UniPoly& b) {
    std::vector<Elem> r(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(i), b.coeff(i));
    return UniPoly(std::move(r));
}

UniPoly sub(const PrimeField& F, const UniPoly& a, const UniPoly& b) {
    std::vector<Elem> r(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a.coeff(i), b.coeff(i));
    return UniPoly(std::move(r));
}

UniPoly mul(const PrimeField& F, const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<Elem> r(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(x[i], y[j]));
    }
    return UniPoly(std::move(r));
}

UniPoly scale(const PrimeField& F, const UniPoly& a, Elem s) {
    std::vector<Elem> r = a.coeffs();
    for (auto& c : r) c = F.mul(c, s);
    return UniPoly(std::move(r));
}

std::pair<UniPoly, UniPoly> divmod(const PrimeField& F, const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    std::vector<Elem> r = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) return {UniPoly{}, a};
    std::vector<Elem> q(a.degree() - db + 1, 0);
    Elem li = F.inv(b.lead());
    for (int i = a.degree(); i >= db; --i) {
        Elem c = F.mul(r[i], li);
        if (c == 0) continue;
        q[i - db] = c;
        for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b.coeff(j)));
    }
    return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly gcd(const PrimeField& F, UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        auto r = divmod(F, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return scale(F, a, F.inv(a.lead()));
}

UniPoly derivative(const PrimeField& F, const UniPoly& a) {
    if (a.degree() < 1) return {};
    std::vector<Elem> r(a.degree());
    for (int i = 1; i <= a.degree(); ++i) r[i - 1] = F.mul(a.coeff(i), F.reduce(i));
    return UniPoly(std::move(r));
}

UniPoly compose_affine(const PrimeField& F, const UniPoly& a, Elem s, Elem lambda) {
    // Horner in the ring: r = r*(s + lambda t) + c_i.
    std::vector<Elem> r;
    for (int i = a.degree(); i >= 0; --i) {
        std::vector<Elem> n(r.size() + 1, 0);
        for (std::size_t k = 0; k < r.size(); ++k) {
            n[k] = F.add(n[k], F.mul(r[k], s));
            n[k + 1] = F.add(n[k + 1], F.mul(r[k], lambda));
        }
        n[0] = F.add(n[0], a.coeff(i));
        r = std::move(n);
    }
    return UniPoly(std::move(r));
}

UniPoly interpolate(const PrimeField& F, std::span<const Elem> xs, std::span<const Elem> ys) {
    if (xs.size() != ys.size()) throw DimensionMismatch("interpolate: size mismatch");
    UniPoly result;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        UniPoly basis = UniPoly::constant(1);
        Elem den = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            basis = mul(F, basis, UniPoly(std::vector<Elem>{F.neg(xs[j]), 1}));
            Elem diff = F.sub(xs[i], xs[j]);
            if (diff == 0) throw PreconditionError("interpolate: repeated abscissa");
            den = F.mul(den, diff);
        }
        result = add(F, result, scale(F, basis, F.div(ys[i], den)));
    }
    return result;
}

UniPoly interpolate_full(const PrimeField& F, std::span<const Elem> v) {
    const Elem q = F.p();
    if (v.size() != q) throw DimensionMismatch("interpolate_full: need q values");
    // c_0 = v_0; c_j = -sum_a v_a a^{q-1-j} for 1 <= j <= q-1.
    std::vector<Elem> c(q, 0);
    c[0] = v[0];
    if (q > 1) c[q - 1] = F.neg(v[0]); // 0^0 term
    for (Elem a = 1; a < q; ++a) {
        if (v[a] == 0) continue;
        // a^{q-1-j} for j = q-1 down to 1
        Elem x = 1;
        for (Elem j = q - 1; j >= 1; --j) {
            c[j] = F.sub(c[j], F.mul(v[a], x));
            x = F.mul(x, a);
        }
    }
    return UniPoly(std::move(c));
}

} // namespace ldtlab
