#pragma once

#include "effho/ints.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace effho {

// Dense integer matrix with exact arbitrary-precision entries.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(size_t rows, size_t cols, std::initializer_list<Int> entries);

    static IntMatrix identity(size_t n);
    static IntMatrix diag(const std::vector<Int>& d);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Int& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Int& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    bool operator==(const IntMatrix& o) const = default;

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator-() const;
    IntMatrix transpose() const;
    bool is_zero() const;

    std::vector<Int> apply(const std::vector<Int>& v) const;  // matrix * column

    void swap_rows(size_t i, size_t j);
    void swap_cols(size_t i, size_t j);
    void scale_row(size_t i, const Int& c);
    void scale_col(size_t j, const Int& c);
    void add_row(size_t dst, size_t src, const Int& c);  // row dst += c * row src
    void add_col(size_t dst, size_t src, const Int& c);

    // Exact determinant (square only), fraction-free Gauss (Bareiss).
    Int det() const;

    std::string to_string() const;

private:
    size_t rows_, cols_;
    std::vector<Int> a_;
};

// U * M * V = S with S diagonal, diagonal entries >= 0 and d1 | d2 | ... ;
// U, V unimodular. Uinv and Vinv are maintained alongside so subgroup
// calculations never need a separate inversion pass.
struct SmithResult {
    IntMatrix s;
    IntMatrix u, uinv;
    IntMatrix v, vinv;
    size_t rank = 0;  // number of nonzero diagonal entries
    std::vector<Int> diagonal() const;
};

SmithResult smith_normal_form(const IntMatrix& m);

// Basis of the integer kernel lattice {x : m x = 0}, as columns.
IntMatrix kernel_basis(const IntMatrix& m);

// One solution of m x = b over the integers, if any.
bool solve(const IntMatrix& m, const std::vector<Int>& b, std::vector<Int>& x_out);

// Column span of m as a lattice: basis matrix whose columns are independent
// and generate the same subgroup of Z^rows.
IntMatrix column_lattice_basis(const IntMatrix& m);

}  // namespace effho
