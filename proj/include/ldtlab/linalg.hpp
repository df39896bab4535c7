#pragma once

#include "ldtlab/field.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ldtlab {

// Dense row-major matrix over F_p.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Elem at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// In-place reduced row echelon form. Returns pivot columns.
std::vector<std::size_t> rref(const PrimeField& F, Matrix& m);
std::size_t rank(const PrimeField& F, Matrix m);
// Basis of {x : m x = 0}, one vector per free column in increasing order;
// the vector for free column f has a 1 at f and is zero at other free columns.
std::vector<std::vector<Elem>> kernel(const PrimeField& F, Matrix m);
Elem determinant(const PrimeField& F, Matrix m);
// A solution of m x = b, or nullopt when inconsistent.
std::optional<std::vector<Elem>> solve(const PrimeField& F, Matrix m, const std::vector<Elem>& b);

// Row reduction fed one row at a time; keeps the reduced rows so the span
// and rank can be queried without refactoring.
class IncrementalRowSpace {
public:
    IncrementalRowSpace(const PrimeField& F, std::size_t cols) : F_(&F), cols_(cols) {}
    // Returns true if the row increased the rank.
    bool add_row(std::vector<Elem> row);
    std::size_t rank() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    // Kernel of the accumulated rows, same convention as kernel().
    std::vector<std::vector<Elem>> kernel() const;

private:
    const PrimeField* F_;
    std::size_t cols_;
    std::vector<std::vector<Elem>> rows_; // each row normalised at pivot
    std::vector<std::size_t> piv_;
};

} // namespace ldtlab
