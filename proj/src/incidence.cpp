#include "ldtlab/incidence.hpp"

#include "ldtlab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace ldtlab {

const char* graph_kind_name(GraphKind k) noexcept {
    switch (k) {
    case GraphKind::points_lines: return "points-lines";
    case GraphKind::points_planes: return "points-planes";
    case GraphKind::lines_planes: return "lines-planes";
    case GraphKind::lines_planes_through_x: return "lines-planes-through-x";
    }
    return "?";
}

GraphKind parse_graph_kind(const std::string& s) {
    for (auto k : {GraphKind::points_lines, GraphKind::points_planes, GraphKind::lines_planes,
                   GraphKind::lines_planes_through_x})
        if (s == graph_kind_name(k)) return k;
    throw PreconditionError("unknown graph kind '" + s + "'");
}

namespace {

void finish(IncidenceGraph& G) {
    G.adj_right.assign(G.right.size(), {});
    for (std::uint32_t a = 0; a < G.left.size(); ++a)
        for (auto b : G.adj_left[a]) G.adj_right[b].push_back(a);
    if (G.left.empty() || G.right.empty()) throw InconsistencyError("empty incidence graph");
    G.deg_left = G.adj_left[0].size();
    G.deg_right = G.adj_right[0].size();
    for (const auto& v : G.adj_left)
        if (v.size() != G.deg_left) throw InconsistencyError("incidence graph not left-regular");
    for (const auto& v : G.adj_right)
        if (v.size() != G.deg_right) throw InconsistencyError("incidence graph not right-regular");
}

// Maps sorted vertex ids to positions.
std::unordered_map<std::uint64_t, std::uint32_t> positions(const std::vector<std::uint64_t>& ids) {
    std::unordered_map<std::uint64_t, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
    return pos;
}

} // namespace

IncidenceGraph incidence_graph(GraphKind kind, std::uint32_t q, std::size_t m,
                               const std::optional<Point>& x) {
    if (m < 2) throw PreconditionError("incidence graphs need m >= 2");
    if ((kind == GraphKind::lines_planes_through_x) != x.has_value())
        throw PreconditionError("a base point is required exactly for lines-planes-through-x");
    Space S(q, m);
    S.require_enumerable();
    IncidenceGraph G{kind, q, m, {}, {}, {}, {}, 0, 0};
    switch (kind) {
    case GraphKind::points_lines: {
        for (std::uint64_t i = 0; i < S.num_points(); ++i) G.left.push_back(i);
        for (std::uint64_t i = 0; i < S.num_lines(); ++i) G.right.push_back(i);
        G.adj_left.assign(G.left.size(), {});
        std::vector<std::uint32_t> pts(q);
        for (std::uint64_t id = 0; id < S.num_lines(); ++id) {
            S.line_point_indices(S.line_at(id), pts);
            for (auto p : pts) G.adj_left[p].push_back(static_cast<std::uint32_t>(id));
        }
        break;
    }
    case GraphKind::points_planes: {
        for (std::uint64_t i = 0; i < S.num_points(); ++i) G.left.push_back(i);
        for (std::uint64_t i = 0; i < S.num_planes(); ++i) G.right.push_back(i);
        G.adj_left.assign(G.left.size(), {});
        for (std::uint64_t id = 0; id < S.num_planes(); ++id)
            for (const auto& p : S.points_on(S.plane_at(id)))
                G.adj_left[S.point_index(p)].push_back(static_cast<std::uint32_t>(id));
        break;
    }
    case GraphKind::lines_planes: {
        for (std::uint64_t i = 0; i < S.num_lines(); ++i) G.left.push_back(i);
        for (std::uint64_t i = 0; i < S.num_planes(); ++i) G.right.push_back(i);
        G.adj_left.assign(G.left.size(), {});
        for (std::uint64_t id = 0; id < S.num_planes(); ++id)
            for (const auto& l : S.lines_in_plane(S.plane_at(id)))
                G.adj_left[S.line_id(l)].push_back(static_cast<std::uint32_t>(id));
        break;
    }
    case GraphKind::lines_planes_through_x: {
        if (x->dim() != m) throw DimensionMismatch("base point dimension");
        for (const auto& l : S.lines_through(*x)) G.left.push_back(S.line_id(l));
        std::sort(G.left.begin(), G.left.end());
        std::vector<std::uint64_t> planes;
        for (const auto& l : S.lines_through(*x))
            for (const auto& pl : S.planes_containing(l)) planes.push_back(S.plane_id(pl));
        std::sort(planes.begin(), planes.end());
        planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
        G.right = planes;
        auto lpos = positions(G.left);
        G.adj_left.assign(G.left.size(), {});
        for (std::uint32_t b = 0; b < G.right.size(); ++b)
            for (const auto& l : S.lines_in_plane(S.plane_at(G.right[b]))) {
                auto it = lpos.find(S.line_id(l));
                if (it != lpos.end()) G.adj_left[it->second].push_back(b);
            }
        break;
    }
    }
    finish(G);
    return G;
}

namespace {

constexpr std::size_t kDenseLimit = 20000;

// Gram matrix of the smaller side, not yet normalised.
Eigen::MatrixXd gram(const IncidenceGraph& G, bool use_left) {
    const auto& side = use_left ? G.adj_right : G.adj_left; // hubs joining pairs
    std::size_t n = use_left ? G.left.size() : G.right.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& nb : side)
        for (auto a : nb)
            for (auto b : nb) M(a, b) += 1.0;
    return M;
}

double power_iteration(const IncidenceGraph& G) {
    // Iterate v <- A^T A v on the right side orthogonal to constants.
    const std::size_t nl = G.left.size(), nr = G.right.size();
    std::vector<double> v(nr), u(nl), w(nr);
    for (std::size_t i = 0; i < nr; ++i) v[i] = std::sin(1.0 + static_cast<double>(i) * 0.7713);
    const double norm = static_cast<double>(G.deg_left * G.deg_right);
    double prev = 0, est = 0;
    for (int it = 0; it < 5000; ++it) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(nr);
        double nv = 0;
        for (auto& x : v) {
            x -= mean;
            nv += x * x;
        }
        nv = std::sqrt(nv);
        if (nv == 0) return 0;
        for (auto& x : v) x /= nv;
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t a = 0; a < nl; ++a)
            for (auto b : G.adj_left[a]) u[a] += v[b];
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t a = 0; a < nl; ++a)
            for (auto b : G.adj_left[a]) w[b] += u[a];
        double rq = 0;
        for (std::size_t i = 0; i < nr; ++i) rq += v[i] * w[i];
        est = rq / norm;
        v.swap(w);
        if (it > 10 && std::abs(est - prev) < 1e-15) break;
        prev = est;
    }
    return std::sqrt(std::max(0.0, est));
}

} // namespace

double second_eigenvalue(const IncidenceGraph& G) {
    bool use_left = G.left.size() <= G.right.size();
    std::size_t n = use_left ? G.left.size() : G.right.size();
    if (n <= 1) return 0.0;
    if (n > kDenseLimit) return power_iteration(G);
    Eigen::MatrixXd M = gram(G, use_left);
    M /= static_cast<double>(G.deg_left * G.deg_right);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues(); // ascending
    double second = ev(static_cast<Eigen::Index>(n) - 2);
    return std::sqrt(std::max(0.0, second));
}

double std_dev(const std::vector<double>& v) {
    if (v.empty()) return 0;
    double mu = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double mixing_defect(const IncidenceGraph& G, const std::vector<double>& g,
                     const std::vector<double>& h) {
    if (g.size() != G.left.size() || h.size() != G.right.size())
        throw DimensionMismatch("mixing_defect: function sizes");
    double e = 0;
    for (std::size_t a = 0; a < G.left.size(); ++a)
        for (auto b : G.adj_left[a]) e += g[a] * h[b];
    e /= static_cast<double>(G.num_edges());
    double mg = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double mh = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
    return std::abs(e - mg * mh);
}

CorollaryCheck mixing_corollary(const IncidenceGraph& G, double lambda,
                                const std::vector<bool>& in_A,
                                const std::vector<std::vector<bool>>& in_E) {
    if (in_A.size() != G.left.size() || in_E.size() != G.left.size())
        throw DimensionMismatch("mixing_corollary: sizes");
    std::size_t na = 0;
    double p1 = 0;
    for (std::size_t a = 0; a < G.left.size(); ++a) {
        if (!in_A[a]) continue;
        ++na;
        std::size_t hit = 0;
        for (std::size_t k = 0; k < G.adj_left[a].size(); ++k) hit += in_E[a][k];
        p1 += static_cast<double>(hit) / static_cast<double>(G.deg_left);
    }
    if (na == 0) throw PreconditionError("mixing_corollary: empty subset");
    p1 /= static_cast<double>(na);
    // Position of b within adj_left[a], for edge lookup from the right.
    double p2 = 0;
    for (std::size_t b = 0; b < G.right.size(); ++b) {
        std::size_t cnt = 0, hit = 0;
        for (auto a : G.adj_right[b]) {
            if (!in_A[a]) continue;
            ++cnt;
            const auto& nb = G.adj_left[a];
            auto k = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), b) - nb.begin());
            hit += in_E[a][k];
        }
        if (cnt) p2 += static_cast<double>(hit) / static_cast<double>(cnt);
    }
    p2 /= static_cast<double>(G.right.size());
    double mu = static_cast<double>(na) / static_cast<double>(G.left.size());
    return {std::abs(p1 - p2), lambda / std::sqrt(mu), mu};
}

double expected_lambda(GraphKind kind, std::uint32_t q, std::size_t) {
    const double qq = q;
    switch (kind) {
    case GraphKind::points_lines: return 1.0 / std::sqrt(qq);
    case GraphKind::points_planes: return 1.0 / qq;
    case GraphKind::lines_planes: return 1.0 / std::sqrt(qq);
    case GraphKind::lines_planes_through_x: return 1.0 / std::sqrt(qq + 1);
    }
    return 0;
}

double closed_form_lambda(GraphKind kind, std::uint32_t q, std::size_t m) {
    const double qq = q;
    auto gauss1 = [&](std::size_t n) { return (std::pow(qq, static_cast<double>(n)) - 1) / (qq - 1); };
    switch (kind) {
    case GraphKind::points_lines: {
        // Gram on points: (L - 1) I + J with L lines per point.
        double L = gauss1(m);
        return std::sqrt((L - 1) / (L * qq));
    }
    case GraphKind::points_planes: {
        // P planes per point, c planes through two distinct points.
        double P = gauss1(m) * gauss1(m - 1) / (qq + 1);
        double c = gauss1(m - 1);
        return m < 3 ? 0.0 : std::sqrt((P - c) / (P * qq * qq));
    }
    case GraphKind::lines_planes:
        if (m == 2) return 0.0;
        if (m == 3) return 1.0 / std::sqrt(qq + 1);
        return std::numeric_limits<double>::quiet_NaN();
    case GraphKind::lines_planes_through_x: {
        // Points and lines of the projective space of directions.
        if (m < 3) return 0.0;
        double r = gauss1(m - 1);
        return std::sqrt((r - 1) / (r * (qq + 1)));
    }
    }
    return 0;
}

SpectrumRow spectrum_row(GraphKind kind, std::uint32_t q, std::size_t m) {
    std::optional<Point> x;
    if (kind == GraphKind::lines_planes_through_x) x = Point(m);
    double lambda = second_eigenvalue(incidence_graph(kind, q, m, x));
    double expected = expected_lambda(kind, q, m);
    return {kind, q, m, lambda, expected, closed_form_lambda(kind, q, m), std::abs(lambda - expected)};
}

} // namespace ldtlab
