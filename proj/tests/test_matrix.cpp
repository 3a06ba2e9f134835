#include "checkers.hpp"
#include "doctest.h"
#include "effho/matrix.hpp"

#include <random>

using namespace effho;

namespace {

bool is_diagonal(const IntMatrix& m) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (i != j && m.at(i, j) != 0) return false;
    return true;
}

void check_smith(const IntMatrix& a) {
    SmithResult r = smith_normal_form(a);
    CHECK(is_diagonal(r.s));
    CHECK(r.u * a * r.v == r.s);
    CHECK(r.u * r.uinv == IntMatrix::identity(a.rows()));
    CHECK(r.uinv * r.u == IntMatrix::identity(a.rows()));
    CHECK(r.v * r.vinv == IntMatrix::identity(a.cols()));
    CHECK(r.vinv * r.v == IntMatrix::identity(a.cols()));
    size_t n = std::min(a.rows(), a.cols());
    for (size_t i = 0; i < n; ++i) {
        CHECK(r.s.at(i, i) >= 0);
        if (i + 1 < n && r.s.at(i + 1, i + 1) != 0) {
            if (r.s.at(i, i) == 0) {
                CHECK(r.s.at(i + 1, i + 1) == 0);
            } else {
                CHECK(r.s.at(i + 1, i + 1) % r.s.at(i, i) == 0);
            }
        }
    }
    for (size_t i = 0; i < n; ++i) {
        bool nonzero = r.s.at(i, i) != 0;
        CHECK(nonzero == (i < r.rank));
    }
}

}  // namespace

TEST_CASE("smith normal form on fixed examples") {
    IntMatrix a(2, 2, {2, 0, 0, 3});
    SmithResult r = smith_normal_form(a);
    CHECK(r.s == IntMatrix::diag({1, 6}));
    CHECK(r.rank == 2);

    IntMatrix b(2, 3, {2, 4, 4, -6, 6, 12});
    SmithResult rb = smith_normal_form(b);
    CHECK(rb.s.at(0, 0) == 2);
    CHECK(rb.s.at(1, 1) == 6);

    check_smith(IntMatrix(0, 0));
    check_smith(IntMatrix(0, 3));
    check_smith(IntMatrix(3, 0));
    check_smith(IntMatrix(2, 2, {0, 0, 0, 0}));
}

TEST_CASE("smith normal form randomized") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 500; ++trial) {
        size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        IntMatrix a = testutil::random_matrix(rng, rows, cols);
        check_smith(a);
        SmithResult r = smith_normal_form(a);
        CHECK(static_cast<int>(r.rank) == oracle::rank(testutil::to_oracle(a)));
    }
}

TEST_CASE("kernel basis") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
        IntMatrix a = testutil::random_matrix(rng, rows, cols);
        IntMatrix k = kernel_basis(a);
        CHECK((a * k).is_zero());
        CHECK(k.cols() == cols - smith_normal_form(a).rank);
        if (k.cols() > 0) {
            // columns are independent: the kernel of the kernel is trivial
            CHECK(kernel_basis(k).cols() == 0);
        }
    }
}

TEST_CASE("integer solve") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
        IntMatrix a = testutil::random_matrix(rng, rows, cols);
        std::vector<Int> x(cols);
        std::uniform_int_distribution<int> d(-5, 5);
        for (auto& v : x) v = d(rng);
        std::vector<Int> b = a.apply(x);
        std::vector<Int> y;
        REQUIRE(solve(a, b, y));
        CHECK(a.apply(y) == b);
    }
    // 2x = 3 has no integer solution
    IntMatrix two(1, 1, {2});
    std::vector<Int> y;
    CHECK_FALSE(solve(two, {Int(3)}, y));
}

TEST_CASE("column lattice basis spans the same lattice") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        size_t rows = 1 + rng() % 5, cols = 1 + rng() % 7;
        IntMatrix a = testutil::random_matrix(rng, rows, cols);
        IntMatrix l = column_lattice_basis(a);
        CHECK(l.cols() == smith_normal_form(a).rank);
        // every original column solves in l, every l column solves in a
        for (size_t j = 0; j < a.cols(); ++j) {
            std::vector<Int> b(rows), x;
            for (size_t i = 0; i < rows; ++i) b[i] = a.at(i, j);
            CHECK(solve(l, b, x));
        }
        for (size_t j = 0; j < l.cols(); ++j) {
            std::vector<Int> b(rows), x;
            for (size_t i = 0; i < rows; ++i) b[i] = l.at(i, j);
            CHECK(solve(a, b, x));
        }
    }
}

TEST_CASE("determinant") {
    CHECK(IntMatrix::identity(4).det() == 1);
    CHECK(IntMatrix(2, 2, {1, 2, 3, 4}).det() == -2);
    CHECK(IntMatrix(3, 3, {2, 0, 0, 0, 3, 0, 0, 0, 5}).det() == 30);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix a = testutil::random_matrix(rng, 4, 4);
        IntMatrix b = testutil::random_matrix(rng, 4, 4);
        CHECK((a * b).det() == a.det() * b.det());
    }
}
