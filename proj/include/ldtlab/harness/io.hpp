#pragma once

#include "ldtlab/ldt.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

// Table and oracle files, polynomial JSON.
namespace ldtlab::harness {

// Header "q m d", then q^m integers in lexicographic point order.
void write_table(std::ostream& os, const PointsTable& f);
PointsTable read_table(std::istream& is);
PointsTable load_table(const std::string& path);
void save_table(const std::string& path, const PointsTable& f);

// One line per canonical line in id order: "b0,..,bm-1;u0,..,um-1;c0,..,cd"
// or "...;BOT". Reading accepts any order and any representative of a line,
// and requires every line exactly once.
void write_oracle(std::ostream& os, const Space& S, const LinesOracle& O);
LinesOracle read_oracle(std::istream& is, const Space& S, unsigned d);
LinesOracle load_oracle(const std::string& path, const Space& S, unsigned d);
void save_oracle(const std::string& path, const Space& S, const LinesOracle& O);

// Dense coefficients over monomials_up_to(n, d).
std::vector<Elem> dense_coeffs(const MultiPoly& Q, std::size_t n, unsigned d);
MultiPoly from_dense(const std::vector<Elem>& c, std::size_t n, unsigned d);

} // namespace ldtlab::harness
