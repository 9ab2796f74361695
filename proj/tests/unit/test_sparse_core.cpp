#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "auase/error.hpp"
#include "auase/matrix.hpp"
#include "oracles.hpp"

using namespace auase;

TEST_CASE("spmv on identity and zero") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spmv(SparseMatrix::identity(3), x) == x);
  CHECK(spmv(SparseMatrix::zero(2, 2), std::vector<double>{5, 7}) == std::vector<double>{0, 0});
}

TEST_CASE("spmv matches dense matvec on random 4x4") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ts = oracle::random_triplets(4, 4, 0.5, seed);
    const auto m = SparseMatrix::from_triplets(4, 4, ts);
    const auto x = oracle::random_vector(4, seed + 100);
    CHECK(oracle::max_abs_diff(spmv(m, x), oracle::matvec(oracle::dense_from_triplets(4, 4, ts), x)) <= 1e-12);
  }
}

TEST_CASE("spmv_t examples") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spmv_t(SparseMatrix::identity(3), x) == x);
  const std::vector<Triplet> ts{{0, 0, 2.0}, {0, 1, 3.0}};
  CHECK(spmv_t(SparseMatrix::from_triplets(1, 2, ts), std::vector<double>{4}) == std::vector<double>{8, 12});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = oracle::random_triplets(5, 3, 0.5, seed);
    const auto y = oracle::random_vector(5, seed);
    CHECK(oracle::max_abs_diff(spmv_t(SparseMatrix::from_triplets(5, 3, r), y),
                               oracle::matvec_t(oracle::dense_from_triplets(5, 3, r), y)) <= 1e-12);
  }
}

TEST_CASE("spmv dimension mismatch throws") {
  CHECK_THROWS_AS(spmv(SparseMatrix::identity(3), std::vector<double>{1, 2}), ValidationError);
  CHECK_THROWS_AS(spmv_t(SparseMatrix::zero(2, 3), std::vector<double>{1, 2, 3}), ValidationError);
}

TEST_CASE("spmv_t equals spmv of the transpose") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auase::Rng rng(seed);
    const std::size_t r = 1 + rng.index(50);
    const std::size_t c = 1 + rng.index(50);
    const auto m = SparseMatrix::from_triplets(r, c, oracle::random_triplets(r, c, 0.2, seed));
    const auto x = oracle::random_vector(r, seed * 7);
    CHECK(oracle::max_abs_diff(spmv_t(m, x), spmv(m.transpose(), x)) <= 1e-12);
  }
}

TEST_CASE("hconcat examples") {
  const SparseMatrix eye = SparseMatrix::identity(2);
  const std::vector<SparseMatrix> two{eye, eye};
  const SparseMatrix h = hconcat(two);
  CHECK(h.rows() == 2);
  CHECK(h.cols() == 4);
  const std::vector<Triplet> expected{{0, 0, 1.0}, {0, 2, 1.0}, {1, 1, 1.0}, {1, 3, 1.0}};
  CHECK(h.to_triplets() == expected);

  const std::vector<SparseMatrix> one{eye};
  CHECK(hconcat(one) == eye);

  const auto a = oracle::random_triplets(3, 2, 0.6, 11);
  const auto b = oracle::random_triplets(3, 2, 0.6, 12);
  const std::vector<SparseMatrix> ab{SparseMatrix::from_triplets(3, 2, a), SparseMatrix::from_triplets(3, 2, b)};
  const SparseMatrix joined = hconcat(ab);
  const auto da = oracle::dense_from_triplets(3, 2, a);
  const auto db = oracle::dense_from_triplets(3, 2, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(joined.at(i, j) == (j < 2 ? da[i][j] : db[i][j - 2]));
  CHECK(joined.nnz() == ab[0].nnz() + ab[1].nnz());
}

TEST_CASE("hconcat errors") {
  CHECK_THROWS_AS(hconcat(std::vector<SparseMatrix>{}), ValidationError);
  const std::vector<SparseMatrix> bad{SparseMatrix::identity(2), SparseMatrix::identity(3)};
  CHECK_THROWS_AS(hconcat(bad), ValidationError);
}

TEST_CASE("frobenius_diff") {
  const DenseMatrix a(2, 2, std::vector<double>{1, 0, 0, 0});
  CHECK(frobenius_diff(a, a) == 0.0);
  CHECK(frobenius_diff(a, DenseMatrix(2, 2)) == 1.0);
  const auto x = oracle::random_dense(3, 3, 1);
  const auto y = oracle::random_dense(3, 3, 2);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += (x(i, j) - y(i, j)) * (x(i, j) - y(i, j));
  CHECK(frobenius_diff(x, y) == doctest::Approx(std::sqrt(s)).epsilon(1e-15));
  CHECK_THROWS_AS(frobenius_diff(a, DenseMatrix(2, 3)), ValidationError);
}

TEST_CASE("triplet construction is canonical") {
  const std::vector<Triplet> ts{{1, 2, 1.0}, {0, 1, 2.0}, {1, 2, 0.5}, {0, 0, 0.0}, {1, 0, 3.0}, {1, 0, -3.0}};
  const auto m = SparseMatrix::from_triplets(2, 3, ts);
  const std::vector<Triplet> expected{{0, 1, 2.0}, {1, 2, 1.5}};
  CHECK(m.to_triplets() == expected);
  CHECK(SparseMatrix::from_triplets(2, 3, m.to_triplets()) == m);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = oracle::random_triplets(6, 7, 0.4, seed);
    std::reverse(r.begin(), r.end());
    const auto once = SparseMatrix::from_triplets(6, 7, r);
    CHECK(SparseMatrix::from_triplets(6, 7, once.to_triplets()) == once);
    for (std::size_t i = 0; i < once.rows(); ++i) {
      const auto row = once.row(i);
      for (std::size_t k = 1; k < row.cols.size(); ++k) CHECK(row.cols[k - 1] < row.cols[k]);
    }
  }
}

TEST_CASE("construction rejects out-of-range and unsorted input") {
  const std::vector<Triplet> bad{{2, 0, 1.0}};
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, bad), ValidationError);
  CHECK_THROWS_AS(SparseMatrix::from_csr(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}), ValidationError);
  const auto m = SparseMatrix::from_csr(1, 3, {0, 2}, {0, 2}, {0.0, 4.0});
  CHECK(m.nnz() == 1);
}

TEST_CASE("triplet text round trip") {
  std::istringstream in("# header\n0 1 2.5\n\n1 0 -1 # trailing\n");
  const auto m = read_triplets(in, 2, 2);
  CHECK(m.at(0, 1) == 2.5);
  CHECK(m.at(1, 0) == -1.0);
  std::ostringstream out;
  write_triplets(out, m);
  std::istringstream back(out.str());
  CHECK(read_triplets(back, 2, 2) == m);

  std::istringstream broken("0 1 1\n0 x 1\n");
  try {
    read_triplets(broken, 2, 2);
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("dense helpers") {
  const DenseMatrix a(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
  CHECK(a.transpose() == DenseMatrix(3, 2, std::vector<double>{1, 4, 2, 5, 3, 6}));
  CHECK(a.row_block(1, 1) == DenseMatrix(1, 3, std::vector<double>{4, 5, 6}));
  CHECK(a.col_block(1, 2) == DenseMatrix(2, 2, std::vector<double>{2, 3, 5, 6}));
  CHECK(matmul(a, a.transpose()) == oracle::product(a, a.transpose()));
  CHECK(matmul_tn(a, a) == oracle::product(a.transpose(), a));
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), ValidationError);
  const auto sparse = SparseMatrix::from_dense(a);
  const auto x = oracle::random_dense(3, 2, 5);
  CHECK(oracle::frobenius_gap(multiply(sparse, x), oracle::product(a, x)) <= 1e-14);
  CHECK(sparse.to_dense() == a);
  CHECK(sparse.scaled(2.0).at(1, 2) == 12.0);
}

TEST_CASE("symmetry check") {
  const std::vector<Triplet> sym{{0, 1, 1.0}, {1, 0, 1.0}};
  CHECK(SparseMatrix::from_triplets(2, 2, sym).is_symmetric());
  const std::vector<Triplet> asym{{0, 1, 1.0}};
  CHECK_FALSE(SparseMatrix::from_triplets(2, 2, asym).is_symmetric());
}
