#include "ldtlab/geometry.hpp"

#include "ldtlab/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace ldtlab {

Point::Point(std::initializer_list<Elem> xs) : m(static_cast<std::uint8_t>(xs.size())) {
    if (xs.size() > kMaxDim) throw DimensionMismatch("point dimension exceeds kMaxDim");
    std::copy(xs.begin(), xs.end(), c.begin());
}

bool Point::is_zero() const noexcept {
    for (std::size_t i = 0; i < m; ++i)
        if (c[i]) return false;
    return true;
}

std::strong_ordering Point::operator<=>(const Point& o) const noexcept {
    if (auto r = m <=> o.m; r != 0) return r;
    for (std::size_t i = 0; i < m; ++i)
        if (auto r = c[i] <=> o.c[i]; r != 0) return r;
    return std::strong_ordering::equal;
}

Space::Space(std::uint32_t q, std::size_t m) : F_(q), q_(q), m_(m) {
    if (m < 1 || m > kMaxDim) throw PreconditionError("dimension must be in [1, 8]");
    pow_.assign(m + 1, 1);
    for (std::size_t i = 1; i <= m; ++i) {
        if (pow_[i - 1] > (std::uint64_t(1) << 40)) throw PreconditionError("q^m too large");
        pow_[i] = pow_[i - 1] * q;
    }
    dir_offset_.assign(m, 0);
    std::uint64_t off = 0;
    for (std::size_t k = m; k-- > 0;) {
        dir_offset_[k] = off;
        off += pow_[m - 1 - k];
    }
    ndirs_ = off;
    off = 0;
    for (std::size_t k1 = 0; k1 < m; ++k1)
        for (std::size_t k2 = k1 + 1; k2 < m; ++k2) {
            std::uint64_t sz = pow_[m - 2 - k1] * pow_[m - 1 - k2];
            plane_groups_.push_back({k1, k2, off, sz});
            off += sz;
        }
}

void Space::require_enumerable() const {
    if (m_ > 4 || q_ > 101)
        throw BudgetExceeded("full enumeration requires m <= 4 and q <= 101 (got q=" +
                             std::to_string(q_) + ", m=" + std::to_string(m_) + ")");
}

std::uint64_t Space::num_planes() const {
    if (m_ < 2) return 0;
    std::uint64_t pairs = 0;
    for (const auto& g : plane_groups_) pairs += g.size;
    return pairs * pow_[m_ - 2];
}

std::uint64_t Space::planes_per_line() const noexcept {
    // (q^{m-1} - 1)/(q - 1)
    return m_ < 2 ? 0 : (pow_[m_ - 1] - 1) / (q_ - 1);
}

std::uint64_t Space::point_index(const Point& x) const {
    if (x.dim() != m_) throw DimensionMismatch("point dimension");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (x[i] >= q_) throw PreconditionError("coordinate out of range");
        idx = idx * q_ + x[i];
    }
    return idx;
}

Point Space::point_at(std::uint64_t idx) const {
    Point x(m_);
    for (std::size_t i = m_; i-- > 0;) {
        x[i] = static_cast<Elem>(idx % q_);
        idx /= q_;
    }
    return x;
}

Point Space::add(const Point& a, const Point& b) const {
    Point r(m_);
    for (std::size_t i = 0; i < m_; ++i) r[i] = F_.add(a[i], b[i]);
    return r;
}

Point Space::sub(const Point& a, const Point& b) const {
    Point r(m_);
    for (std::size_t i = 0; i < m_; ++i) r[i] = F_.sub(a[i], b[i]);
    return r;
}

Point Space::scale(const Point& a, Elem s) const {
    Point r(m_);
    for (std::size_t i = 0; i < m_; ++i) r[i] = F_.mul(a[i], s);
    return r;
}

Point Space::axpy(const Point& a, Elem t, const Point& b) const {
    Point r(m_);
    for (std::size_t i = 0; i < m_; ++i) r[i] = F_.add(a[i], F_.mul(t, b[i]));
    return r;
}

std::size_t Space::pivot(const Point& u) const {
    for (std::size_t i = 0; i < m_; ++i)
        if (u[i]) return i;
    throw PreconditionError("zero direction");
}

Line Space::canonical_line(const Point& p, const Point& u) const {
    if (p.dim() != m_ || u.dim() != m_) throw DimensionMismatch("line dimension");
    std::size_t k = pivot(u);
    Point d = scale(u, F_.inv(u[k]));
    return Line{axpy(p, F_.neg(p[k]), d), d};
}

Plane Space::canonical_plane(const Point& p, const Point& u, const Point& v) const {
    if (p.dim() != m_ || u.dim() != m_ || v.dim() != m_) throw DimensionMismatch("plane dimension");
    Point a = u, b = v;
    if (a.is_zero()) std::swap(a, b);
    if (a.is_zero()) throw PreconditionError("plane directions are dependent");
    if (!b.is_zero() && pivot(b) < pivot(a)) std::swap(a, b);
    std::size_t k1 = pivot(a);
    a = scale(a, F_.inv(a[k1]));
    b = axpy(b, F_.neg(b[k1]), a);
    if (b.is_zero()) throw PreconditionError("plane directions are dependent");
    std::size_t k2 = pivot(b);
    b = scale(b, F_.inv(b[k2]));
    a = axpy(a, F_.neg(a[k2]), b);
    Point base = axpy(p, F_.neg(p[k1]), a);
    base = axpy(base, F_.neg(base[k2]), b);
    return Plane{base, a, b};
}

std::uint64_t Space::dir_index(const Point& u) const {
    std::size_t k = pivot(u);
    if (u[k] != 1) throw PreconditionError("direction not canonical");
    std::uint64_t idx = 0;
    for (std::size_t i = k + 1; i < m_; ++i) idx = idx * q_ + u[i];
    return dir_offset_[k] + idx;
}

Point Space::dir_at(std::uint64_t idx) const {
    if (idx >= ndirs_) throw PreconditionError("direction index out of range");
    std::size_t k = m_ - 1;
    while (k > 0 && idx >= dir_offset_[k] + pow_[m_ - 1 - k]) --k;
    std::uint64_t rest = idx - dir_offset_[k];
    Point u(m_);
    u[k] = 1;
    for (std::size_t i = m_; i-- > k + 1;) {
        u[i] = static_cast<Elem>(rest % q_);
        rest /= q_;
    }
    return u;
}

std::uint64_t Space::line_id(const Line& l) const {
    std::size_t k = pivot(l.dir);
    std::uint64_t b = 0;
    for (std::size_t i = 0; i < m_; ++i)
        if (i != k) b = b * q_ + l.base[i];
    return dir_index(l.dir) * pow_[m_ - 1] + b;
}

Line Space::line_at(std::uint64_t id) const {
    Point d = dir_at(id / pow_[m_ - 1]);
    std::uint64_t b = id % pow_[m_ - 1];
    std::size_t k = pivot(d);
    Point base(m_);
    for (std::size_t i = m_; i-- > 0;) {
        if (i == k) continue;
        base[i] = static_cast<Elem>(b % q_);
        b /= q_;
    }
    return Line{base, d};
}

std::vector<Line> Space::all_lines() const {
    require_enumerable();
    std::vector<Line> out;
    out.reserve(num_lines());
    for (std::uint64_t id = 0; id < num_lines(); ++id) out.push_back(line_at(id));
    return out;
}

Line Space::line_through(const Point& x, std::uint64_t dir_idx) const {
    return canonical_line(x, dir_at(dir_idx));
}

std::vector<Line> Space::lines_through(const Point& x) const {
    std::vector<Line> out;
    out.reserve(ndirs_);
    for (std::uint64_t u = 0; u < ndirs_; ++u) out.push_back(line_through(x, u));
    return out;
}

std::vector<Point> Space::points_on(const Line& l) const {
    std::vector<Point> out;
    out.reserve(q_);
    Point x = l.base;
    for (std::uint32_t t = 0; t < q_; ++t) {
        out.push_back(x);
        x = add(x, l.dir);
    }
    return out;
}

void Space::line_point_indices(const Line& l, std::span<std::uint32_t> out) const {
    if (out.size() != q_) throw DimensionMismatch("line_point_indices: need q slots");
    // idx(base + t dir) coordinate-wise; track each coordinate incrementally.
    std::array<Elem, kMaxDim> x{};
    for (std::size_t i = 0; i < m_; ++i) x[i] = l.base[i];
    for (std::uint32_t t = 0; t < q_; ++t) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < m_; ++i) idx = idx * q_ + x[i];
        out[t] = static_cast<std::uint32_t>(idx);
        for (std::size_t i = 0; i < m_; ++i) {
            Elem s = x[i] + l.dir[i];
            x[i] = s >= q_ ? s - q_ : s;
        }
    }
}

std::optional<Elem> Space::param_of(const Line& l, const Point& x) const {
    std::size_t k = pivot(l.dir);
    Elem t = F_.sub(x[k], l.base[k]);
    if (axpy(l.base, t, l.dir) != x) return std::nullopt;
    return t;
}

std::uint64_t Space::plane_id(const Plane& pl) const {
    std::size_t k1 = pivot(pl.dir1), k2 = pivot(pl.dir2);
    const PlaneGroup* g = nullptr;
    for (const auto& gg : plane_groups_)
        if (gg.k1 == k1 && gg.k2 == k2) g = &gg;
    if (!g) throw PreconditionError("plane not canonical");
    std::uint64_t idx = 0;
    for (std::size_t i = k1 + 1; i < m_; ++i)
        if (i != k2) idx = idx * q_ + pl.dir1[i];
    for (std::size_t i = k2 + 1; i < m_; ++i) idx = idx * q_ + pl.dir2[i];
    std::uint64_t b = 0;
    for (std::size_t i = 0; i < m_; ++i)
        if (i != k1 && i != k2) b = b * q_ + pl.base[i];
    return (g->offset + idx) * pow_[m_ - 2] + b;
}

Plane Space::plane_at(std::uint64_t id) const {
    if (m_ < 2) throw PreconditionError("no planes in dimension 1");
    std::uint64_t pair = id / pow_[m_ - 2], b = id % pow_[m_ - 2];
    const PlaneGroup* g = nullptr;
    for (const auto& gg : plane_groups_)
        if (pair >= gg.offset && pair < gg.offset + gg.size) g = &gg;
    if (!g) throw PreconditionError("plane id out of range");
    std::uint64_t idx = pair - g->offset;
    Plane pl{Point(m_), Point(m_), Point(m_)};
    pl.dir1[g->k1] = 1;
    pl.dir2[g->k2] = 1;
    for (std::size_t i = m_; i-- > g->k2 + 1;) {
        pl.dir2[i] = static_cast<Elem>(idx % q_);
        idx /= q_;
    }
    for (std::size_t i = m_; i-- > g->k1 + 1;) {
        if (i == g->k2) continue;
        pl.dir1[i] = static_cast<Elem>(idx % q_);
        idx /= q_;
    }
    for (std::size_t i = m_; i-- > 0;) {
        if (i == g->k1 || i == g->k2) continue;
        pl.base[i] = static_cast<Elem>(b % q_);
        b /= q_;
    }
    return pl;
}

std::vector<Plane> Space::all_planes() const {
    require_enumerable();
    std::vector<Plane> out;
    std::uint64_t n = num_planes();
    out.reserve(n);
    for (std::uint64_t id = 0; id < n; ++id) out.push_back(plane_at(id));
    return out;
}

std::vector<Plane> Space::planes_containing(const Line& l) const {
    std::set<std::uint64_t> ids;
    for (std::uint64_t u = 0; u < ndirs_; ++u) {
        Point v = dir_at(u);
        if (v == l.dir) continue;
        ids.insert(plane_id(canonical_plane(l.base, l.dir, v)));
    }
    std::vector<Plane> out;
    for (auto id : ids) out.push_back(plane_at(id));
    return out;
}

std::optional<Plane> Space::plane_through(const Point& x, const Line& l) const {
    if (contains(l, x)) return std::nullopt;
    return canonical_plane(l.base, l.dir, sub(x, l.base));
}

std::vector<Line> Space::lines_in_plane(const Plane& pl) const {
    std::vector<Line> out;
    out.reserve(static_cast<std::size_t>(q_) * (q_ + 1));
    for (Elem b = 0; b < q_; ++b) {
        Point w = axpy(pl.dir1, b, pl.dir2);
        for (Elem t = 0; t < q_; ++t) out.push_back(canonical_line(axpy(pl.base, t, pl.dir2), w));
    }
    for (Elem s = 0; s < q_; ++s) out.push_back(canonical_line(axpy(pl.base, s, pl.dir1), pl.dir2));
    return out;
}

std::vector<Point> Space::points_on(const Plane& pl) const {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(q_) * q_);
    for (Elem s = 0; s < q_; ++s) {
        Point row = axpy(pl.base, s, pl.dir1);
        for (Elem t = 0; t < q_; ++t) out.push_back(axpy(row, t, pl.dir2));
    }
    return out;
}

bool Space::contains(const Plane& pl, const Point& x) const {
    std::size_t k1 = pivot(pl.dir1), k2 = pivot(pl.dir2);
    Point y = axpy(pl.base, x[k1], pl.dir1);
    y = axpy(y, F_.sub(x[k2], y[k2]), pl.dir2);
    return y == x;
}

} // namespace ldtlab
