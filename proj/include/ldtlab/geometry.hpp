#pragma once

#include "ldtlab/field.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ldtlab {

inline constexpr std::size_t kMaxDim = 8;

struct Point {
    std::array<Elem, kMaxDim> c{};
    std::uint8_t m = 0;

    Point() = default;
    explicit Point(std::size_t dim) : m(static_cast<std::uint8_t>(dim)) {}
    Point(std::initializer_list<Elem> xs);

    std::size_t dim() const noexcept { return m; }
    Elem& operator[](std::size_t i) noexcept { return c[i]; }
    Elem operator[](std::size_t i) const noexcept { return c[i]; }
    std::span<const Elem> coords() const noexcept { return {c.data(), m}; }
    bool is_zero() const noexcept;

    bool operator==(const Point& o) const noexcept = default;
    std::strong_ordering operator<=>(const Point& o) const noexcept;
};

// Canonical line: dir has first nonzero coordinate 1 and base is the
// lexicographically smallest point, i.e. base is 0 at dir's pivot.
struct Line {
    Point base, dir;
    bool operator==(const Line&) const noexcept = default;
    auto operator<=>(const Line&) const noexcept = default;
};

// Canonical plane: (dir1, dir2) in reduced row-echelon form, base zero at
// both pivots (the lexicographically smallest point).
struct Plane {
    Point base, dir1, dir2;
    bool operator==(const Plane&) const noexcept = default;
    auto operator<=>(const Plane&) const noexcept = default;
};

// F_q^m with index arithmetic. Points are indexed lexicographically with
// the last coordinate fastest. Line ids order lines by direction, then base.
class Space {
public:
    Space(std::uint32_t q, std::size_t m);

    const PrimeField& field() const noexcept { return F_; }
    std::uint32_t q() const noexcept { return q_; }
    std::size_t m() const noexcept { return m_; }

    std::uint64_t num_points() const noexcept { return pow_[m_]; }
    std::uint64_t num_dirs() const noexcept { return ndirs_; }
    std::uint64_t num_lines() const noexcept { return ndirs_ * pow_[m_ - 1]; }
    std::uint64_t num_planes() const;
    // Lines through a point and planes through a line.
    std::uint64_t lines_per_point() const noexcept { return ndirs_; }
    std::uint64_t planes_per_line() const noexcept;

    std::uint64_t point_index(const Point& x) const;
    Point point_at(std::uint64_t idx) const;

    Point add(const Point& a, const Point& b) const;
    Point sub(const Point& a, const Point& b) const;
    Point scale(const Point& a, Elem s) const;
    // a + t*b
    Point axpy(const Point& a, Elem t, const Point& b) const;

    Line canonical_line(const Point& p, const Point& u) const;
    Plane canonical_plane(const Point& p, const Point& u, const Point& v) const; // throws if dependent

    std::uint64_t dir_index(const Point& canonical_dir) const;
    Point dir_at(std::uint64_t idx) const;
    std::uint64_t line_id(const Line& l) const;
    Line line_at(std::uint64_t id) const;

    std::vector<Line> all_lines() const;
    std::vector<Line> lines_through(const Point& x) const;
    Line line_through(const Point& x, std::uint64_t dir_idx) const;
    std::vector<Point> points_on(const Line& l) const;
    // Point indices of base + t*dir for t = 0..q-1.
    void line_point_indices(const Line& l, std::span<std::uint32_t> out) const;
    std::optional<Elem> param_of(const Line& l, const Point& x) const;
    bool contains(const Line& l, const Point& x) const { return param_of(l, x).has_value(); }

    std::uint64_t plane_id(const Plane& pl) const;
    Plane plane_at(std::uint64_t id) const;
    std::vector<Plane> all_planes() const;
    std::vector<Plane> planes_containing(const Line& l) const;
    std::optional<Plane> plane_through(const Point& x, const Line& l) const;
    std::vector<Line> lines_in_plane(const Plane& pl) const;
    // base + s*dir1 + t*dir2, (s, t) lexicographic.
    std::vector<Point> points_on(const Plane& pl) const;
    bool contains(const Plane& pl, const Point& x) const;

    // Full enumeration is limited to m <= 4 and q <= 101.
    void require_enumerable() const;

private:
    struct PlaneGroup {
        std::size_t k1, k2;
        std::uint64_t offset, size;
    };
    std::size_t pivot(const Point& u) const;

    PrimeField F_;
    std::uint32_t q_;
    std::size_t m_;
    std::vector<std::uint64_t> pow_;
    std::uint64_t ndirs_;
    std::vector<std::uint64_t> dir_offset_; // by pivot position
    std::vector<PlaneGroup> plane_groups_;
};

} // namespace ldtlab
