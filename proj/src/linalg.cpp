#include "ldtlab/linalg.hpp"

#include "ldtlab/errors.hpp"

#include <algorithm>

namespace ldtlab {

std::vector<std::size_t> rref(const PrimeField& F, Matrix& m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t s = r;
        while (s < m.rows && m.at(s, c) == 0) ++s;
        if (s == m.rows) continue;
        if (s != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(s, j), m.at(r, j));
        Elem iv = F.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            Elem f = m.at(i, c);
            if (f == 0) continue;
            for (std::size_t j = c; j < m.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

std::size_t rank(const PrimeField& F, Matrix m) { return rref(F, m).size(); }

std::vector<std::vector<Elem>> kernel(const PrimeField& F, Matrix m) {
    auto piv = rref(F, m);
    std::vector<char> is_piv(m.cols, 0);
    for (auto c : piv) is_piv[c] = 1;
    std::vector<std::vector<Elem>> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Elem> v(m.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(m.at(i, f));
        basis.push_back(std::move(v));
    }
    return basis;
}

Elem determinant(const PrimeField& F, Matrix m) {
    if (m.rows != m.cols) throw DimensionMismatch("determinant of non-square matrix");
    Elem det = 1;
    const std::size_t n = m.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t s = c;
        while (s < n && m.at(s, c) == 0) ++s;
        if (s == n) return 0;
        if (s != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(s, j), m.at(c, j));
            det = F.neg(det);
        }
        det = F.mul(det, m.at(c, c));
        Elem iv = F.inv(m.at(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            Elem f = F.mul(m.at(i, c), iv);
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(c, j)));
        }
    }
    return det;
}

std::optional<std::vector<Elem>> solve(const PrimeField& F, Matrix m, const std::vector<Elem>& b) {
    if (b.size() != m.rows) throw DimensionMismatch("solve: rhs size");
    Matrix aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    auto piv = rref(F, aug);
    if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
    std::vector<Elem> x(m.cols, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(i, m.cols);
    return x;
}

bool IncrementalRowSpace::add_row(std::vector<Elem> row) {
    if (row.size() != cols_) throw DimensionMismatch("row length");
    const PrimeField& F = *F_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Elem f = row[piv_[i]];
        if (f == 0) continue;
        const auto& r = rows_[i];
        for (std::size_t j = piv_[i]; j < cols_; ++j)
            if (r[j]) row[j] = F.sub(row[j], F.mul(f, r[j]));
    }
    std::size_t p = 0;
    while (p < cols_ && row[p] == 0) ++p;
    if (p == cols_) return false;
    Elem iv = F.inv(row[p]);
    for (std::size_t j = p; j < cols_; ++j) row[j] = F.mul(row[j], iv);
    // Keep earlier rows reduced at the new pivot.
    for (auto& r : rows_) {
        Elem f = r[p];
        if (f == 0) continue;
        for (std::size_t j = p; j < cols_; ++j)
            if (row[j]) r[j] = F.sub(r[j], F.mul(f, row[j]));
    }
    rows_.push_back(std::move(row));
    piv_.push_back(p);
    return true;
}

std::vector<std::vector<Elem>> IncrementalRowSpace::kernel() const {
    const PrimeField& F = *F_;
    std::vector<long> row_of(cols_, -1);
    for (std::size_t i = 0; i < piv_.size(); ++i) row_of[piv_[i]] = static_cast<long>(i);
    std::vector<std::vector<Elem>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (row_of[f] >= 0) continue;
        std::vector<Elem> v(cols_, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv_.size(); ++i) v[piv_[i]] = F.neg(rows_[i][f]);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace ldtlab
