#pragma once

#include "ldtlab/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ldtlab {

enum class GraphKind { points_lines, points_planes, lines_planes, lines_planes_through_x };

const char* graph_kind_name(GraphKind k) noexcept;
GraphKind parse_graph_kind(const std::string& s);

// Biregular bipartite incidence structure. Vertices are ids in the
// underlying Space (point index, line id, plane id); adjacency by position.
struct IncidenceGraph {
    GraphKind kind;
    std::uint32_t q;
    std::size_t m;
    std::vector<std::uint64_t> left, right;
    std::vector<std::vector<std::uint32_t>> adj_left;  // positions in `right`
    std::vector<std::vector<std::uint32_t>> adj_right; // positions in `left`
    std::size_t deg_left = 0, deg_right = 0;

    std::size_t num_edges() const noexcept { return left.size() * deg_left; }
};

// Throws InconsistencyError if the construction is not biregular.
IncidenceGraph incidence_graph(GraphKind kind, std::uint32_t q, std::size_t m,
                               const std::optional<Point>& x = std::nullopt);

// Second singular value of A / sqrt(dL dR). Zero when one side has a single
// vertex (the operator has rank one).
double second_eigenvalue(const IncidenceGraph& G);

// |E_{(a,b) in E}[g(a) h(b)] - mu_g mu_h|
double mixing_defect(const IncidenceGraph& G, const std::vector<double>& g,
                     const std::vector<double>& h);
double std_dev(const std::vector<double>& v);

// Corollary of the mixing lemma. For a left subset A' (measure mu) and an
// edge subset E' (indexed like adj_left), lhs is
//   |Pr[a ~ A', b ~ N(a) : (a,b) in E'] - Pr[b ~ B, a ~ N(b) cap A' : (a,b) in E']|
// (a b with no neighbour in A' counts as outside E'), rhs = lambda/sqrt(mu).
struct CorollaryCheck {
    double lhs, rhs, mu;
};
CorollaryCheck mixing_corollary(const IncidenceGraph& G, double lambda,
                                const std::vector<bool>& in_A,
                                const std::vector<std::vector<bool>>& in_E);

// Values recorded by the spectra report.
struct SpectrumRow {
    GraphKind kind;
    std::uint32_t q;
    std::size_t m;
    double lambda;
    double expected;    // textbook value (limit form)
    double closed_form; // exact finite-(q, m) value
    double abs_err;     // |lambda - expected|
};
double expected_lambda(GraphKind kind, std::uint32_t q, std::size_t m);
double closed_form_lambda(GraphKind kind, std::uint32_t q, std::size_t m);
SpectrumRow spectrum_row(GraphKind kind, std::uint32_t q, std::size_t m);

} // namespace ldtlab
