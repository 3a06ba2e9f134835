#include "effho/matrix.hpp"

#include "effho/errors.hpp"

#include <sstream>

namespace effho {

IntMatrix::IntMatrix(size_t rows, size_t cols, std::initializer_list<Int> entries)
    : rows_(rows), cols_(cols), a_(entries) {
    if (a_.size() != rows * cols)
        throw IllFormedError("matrix initializer size mismatch");
}

IntMatrix IntMatrix::identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diag(const std::vector<Int>& d) {
    IntMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw IllFormedError("matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                const Int& bkj = o.at(k, j);
                if (bkj != 0) r.at(i, j) += aik * bkj;
            }
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw IllFormedError("matrix sum shape mismatch");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw IllFormedError("matrix diff shape mismatch");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool IntMatrix::is_zero() const {
    for (const Int& x : a_)
        if (x != 0) return false;
    return true;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw IllFormedError("matrix apply shape mismatch");
    std::vector<Int> r(rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
    return r;
}

void IntMatrix::swap_rows(size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void IntMatrix::swap_cols(size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void IntMatrix::scale_row(size_t i, const Int& c) {
    for (size_t k = 0; k < cols_; ++k) at(i, k) *= c;
}

void IntMatrix::scale_col(size_t j, const Int& c) {
    for (size_t r = 0; r < rows_; ++r) at(r, j) *= c;
}

void IntMatrix::add_row(size_t dst, size_t src, const Int& c) {
    if (c == 0) return;
    for (size_t k = 0; k < cols_; ++k) at(dst, k) += c * at(src, k);
}

void IntMatrix::add_col(size_t dst, size_t src, const Int& c) {
    if (c == 0) return;
    for (size_t r = 0; r < rows_; ++r) at(r, dst) += c * at(r, src);
}

Int IntMatrix::det() const {
    if (rows_ != cols_) throw IllFormedError("det of non-square matrix");
    size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            size_t p = k + 1;
            while (p < n && m.at(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
            m.at(i, k) = 0;
        }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < rows_; ++i) {
        if (i) os << "; ";
        for (size_t j = 0; j < cols_; ++j) {
            if (j) os << " ";
            os << at(i, j).str();
        }
    }
    os << "]";
    return os.str();
}

std::vector<Int> SmithResult::diagonal() const {
    std::vector<Int> d;
    size_t n = std::min(s.rows(), s.cols());
    for (size_t i = 0; i < n; ++i) d.push_back(s.at(i, i));
    return d;
}

namespace {

// g = u*a + v*b with g = gcd(a,b) >= 0 and the near-minimal Bezout pair.
Int extgcd(const Int& a, const Int& b, Int& u, Int& v) {
    Int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        r0 -= q * r1;
        s0 -= q * s1;
        t0 -= q * t1;
        std::swap(r0, r1);
        std::swap(s0, s1);
        std::swap(t0, t1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    u = s0;
    v = t0;
    return r0;
}

// All row ops on S are mirrored on U (and inverted on Uinv), col ops on V.
struct SnfWork {
    IntMatrix s, u, uinv, v, vinv;

    void row_swap(size_t i, size_t j) {
        s.swap_rows(i, j);
        u.swap_rows(i, j);
        uinv.swap_cols(i, j);
    }
    void col_swap(size_t i, size_t j) {
        s.swap_cols(i, j);
        v.swap_cols(i, j);
        vinv.swap_rows(i, j);
    }
    // row i += c * row j
    void row_add(size_t i, size_t j, const Int& c) {
        s.add_row(i, j, c);
        u.add_row(i, j, c);
        uinv.add_col(j, i, -c);
    }
    // col i += c * col j
    void col_add(size_t i, size_t j, const Int& c) {
        s.add_col(i, j, c);
        v.add_col(i, j, c);
        vinv.add_row(j, i, -c);
    }
    void row_negate(size_t i) {
        s.scale_row(i, -1);
        u.scale_row(i, -1);
        uinv.scale_col(i, -1);
    }

    // Left-multiply rows (t,i) by the unimodular [[cu, cv], [m1, m2]]; the
    // caller picks coefficients with cu*m2 - cv*m1 = 1.
    void row_mix(size_t t, size_t i, const Int& cu, const Int& cv, const Int& m1,
                 const Int& m2) {
        mix_rows(s, t, i, cu, cv, m1, m2);
        mix_rows(u, t, i, cu, cv, m1, m2);
        // Uinv picks up the inverse [[m2, -cv], [-m1, cu]] on columns (t,i).
        mix_cols(uinv, t, i, m2, -m1, -cv, cu);
    }
    // Right-multiply cols (t,j) by the unimodular with first col (cu, cv),
    // second col (m1, m2).
    void col_mix(size_t t, size_t j, const Int& cu, const Int& cv, const Int& m1,
                 const Int& m2) {
        mix_cols(s, t, j, cu, cv, m1, m2);
        mix_cols(v, t, j, cu, cv, m1, m2);
        mix_rows(vinv, t, j, m2, -m1, -cv, cu);
    }

  private:
    // rows: (row_a, row_b) <- (cu*row_a + cv*row_b, m1*row_a + m2*row_b)
    static void mix_rows(IntMatrix& m, size_t a, size_t b, const Int& cu, const Int& cv,
                         const Int& m1, const Int& m2) {
        for (size_t k = 0; k < m.cols(); ++k) {
            Int xa = m.at(a, k), xb = m.at(b, k);
            m.at(a, k) = cu * xa + cv * xb;
            m.at(b, k) = m1 * xa + m2 * xb;
        }
    }
    static void mix_cols(IntMatrix& m, size_t a, size_t b, const Int& cu, const Int& cv,
                         const Int& m1, const Int& m2) {
        for (size_t k = 0; k < m.rows(); ++k) {
            Int xa = m.at(k, a), xb = m.at(k, b);
            m.at(k, a) = cu * xa + cv * xb;
            m.at(k, b) = m1 * xa + m2 * xb;
        }
    }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    SnfWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.rows()),
              IntMatrix::identity(m.cols()), IntMatrix::identity(m.cols())};
    size_t rows = m.rows(), cols = m.cols();
    size_t n = std::min(rows, cols);

    bool exhausted = false;
    for (size_t t = 0; t < n && !exhausted; ++t) {
        for (;;) {
            // Select the remaining entry of minimal nonzero absolute value.
            // Re-run the scan every round: clearing can expose smaller entries,
            // and pivoting on the global minimum keeps coefficient growth tame.
            size_t pr = t, pc = t;
            bool found = false;
            Int best = 0;
            for (size_t i = t; i < rows; ++i)
                for (size_t j = t; j < cols; ++j) {
                    const Int& x = w.s.at(i, j);
                    if (x == 0) continue;
                    Int ax = abs(x);
                    if (!found || ax < best) {
                        found = true;
                        best = ax;
                        pr = i;
                        pc = j;
                    }
                }
            if (!found) {
                exhausted = true;
                break;
            }
            w.row_swap(t, pr);
            w.col_swap(t, pc);

            // Clear the pivot column and row. A divisible entry dies by one
            // exact division; anything else takes a single unimodular 2x2 that
            // lands gcd(pivot, entry) on the diagonal. One mix per entry: no
            // remainder ping-pong, which is what kept entry sizes from
            // exploding on dense inputs.
            bool mixed = false;
            for (size_t i = t + 1; i < rows; ++i) {
                Int x = w.s.at(i, t);
                if (x == 0) continue;
                const Int p = w.s.at(t, t);
                if (x % p == 0) {
                    w.row_add(i, t, -(x / p));
                } else {
                    Int bu, bv;
                    Int g = extgcd(p, x, bu, bv);
                    w.row_mix(t, i, bu, bv, -(x / g), p / g);
                    mixed = true;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                Int x = w.s.at(t, j);
                if (x == 0) continue;
                const Int p = w.s.at(t, t);
                if (x % p == 0) {
                    w.col_add(j, t, -(x / p));
                } else {
                    Int bu, bv;
                    Int g = extgcd(p, x, bu, bv);
                    w.col_mix(t, j, bu, bv, -(x / g), p / g);
                    mixed = true;
                }
            }
            // Column mixes refill the pivot column below t; go again. The
            // pivot shrank to a proper divisor on every mix, so this loops at
            // most log(pivot) times.
            if (mixed) continue;

            // Pivot divides its whole row and column (both now zero); make it
            // divide the rest of the submatrix too. Pulling the offending row
            // up forces a gcd mix on the next round.
            bool divides = true;
            for (size_t i = t + 1; i < rows && divides; ++i)
                for (size_t j = t + 1; j < cols; ++j)
                    if (w.s.at(i, j) % w.s.at(t, t) != 0) {
                        w.row_add(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (!exhausted && w.s.at(t, t) < 0) w.row_negate(t);
    }

    SmithResult r{std::move(w.s), std::move(w.u), std::move(w.uinv),
                  std::move(w.v), std::move(w.vinv), 0};
    for (size_t i = 0; i < n; ++i)
        if (r.s.at(i, i) != 0) ++r.rank;
    return r;
}

IntMatrix kernel_basis(const IntMatrix& m) {
    SmithResult r = smith_normal_form(m);
    size_t k = m.cols() - r.rank;
    IntMatrix out(m.cols(), k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < m.cols(); ++i) out.at(i, j) = r.v.at(i, r.rank + j);
    return out;
}

bool solve(const IntMatrix& m, const std::vector<Int>& b, std::vector<Int>& x_out) {
    if (b.size() != m.rows()) throw IllFormedError("solve: rhs size mismatch");
    SmithResult r = smith_normal_form(m);
    std::vector<Int> c = r.u.apply(b);
    std::vector<Int> y(m.cols());
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < r.rank) {
            const Int& d = r.s.at(i, i);
            if (c[i] % d != 0) return false;
            y[i] = c[i] / d;
        } else if (c[i] != 0) {
            return false;
        }
    }
    x_out = r.v.apply(y);
    return true;
}

IntMatrix column_lattice_basis(const IntMatrix& m) {
    SmithResult r = smith_normal_form(m);
    // M = Uinv S Vinv; column span = span of Uinv * S = first `rank` columns
    // of Uinv scaled by the diagonal.
    IntMatrix out(m.rows(), r.rank);
    for (size_t j = 0; j < r.rank; ++j) {
        const Int& d = r.s.at(j, j);
        for (size_t i = 0; i < m.rows(); ++i) out.at(i, j) = r.uinv.at(i, j) * d;
    }
    return out;
}

}  // namespace effho
