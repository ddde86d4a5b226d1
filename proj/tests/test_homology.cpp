#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sd/homology.hpp"

using namespace sd;

namespace {

// Oracle: rank over Q by fraction-free Gaussian elimination on a dense
// copy, independent of the SNF code path.
int64_t bareiss_rank(const SparseIntMatrix& m) {
  std::vector<std::vector<Int>> a(m.rows, std::vector<Int>(m.cols, Int(0)));
  for (const auto& t : m.triplets) a[t[0]][t[1]] += t[2];
  int64_t rank = 0;
  Int prev(1);
  for (int64_t col = 0; col < m.cols && rank < m.rows; ++col) {
    int64_t pivot = -1;
    for (int64_t r = rank; r < m.rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int64_t r = rank + 1; r < m.rows; ++r) {
      for (int64_t c = col + 1; c < m.cols; ++c)
        a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

SparseIntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int bound) {
  SparseIntMatrix m(rows, cols);
  std::uniform_int_distribution<int> val(-bound, bound);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int v = val(rng);
      if (v != 0) m.add(r, c, v);
    }
  return m;
}

void check_recomposition(const SparseIntMatrix& m, const SnfResult& snf) {
  // U * M * V must equal diag(snf.diagonal).
  std::vector<std::vector<Int>> a(m.rows, std::vector<Int>(m.cols, Int(0)));
  for (const auto& t : m.triplets) a[t[0]][t[1]] += t[2];
  std::vector<std::vector<Int>> um(m.rows, std::vector<Int>(m.cols, Int(0)));
  for (int64_t i = 0; i < m.rows; ++i)
    for (int64_t k = 0; k < m.rows; ++k)
      if (snf.left[i][k] != 0)
        for (int64_t j = 0; j < m.cols; ++j) um[i][j] += snf.left[i][k] * a[k][j];
  for (int64_t i = 0; i < m.rows; ++i)
    for (int64_t j = 0; j < m.cols; ++j) {
      Int s(0);
      for (int64_t k = 0; k < m.cols; ++k)
        if (snf.right[k][j] != 0) s += um[i][k] * snf.right[k][j];
      Int expect = (i == j && i < static_cast<int64_t>(snf.diagonal.size())) ? snf.diagonal[i]
                                                                             : Int(0);
      REQUIRE(s == expect);
    }
  for (size_t i = 0; i + 1 < snf.diagonal.size(); ++i) {
    if (snf.diagonal[i + 1] == 0) continue;
    REQUIRE(snf.diagonal[i] != 0);
    REQUIRE(snf.diagonal[i + 1] % snf.diagonal[i] == 0);
  }
}

}  // namespace

TEST_CASE("snf of the identity") {
  SparseIntMatrix m(3, 3);
  for (int i = 0; i < 3; ++i) m.add(i, i, 1);
  auto snf = smith_normal_form(m);
  CHECK(snf.diagonal == std::vector<Int>{1, 1, 1});
  check_recomposition(m, snf);
}

TEST_CASE("snf of diag(2,0)") {
  SparseIntMatrix m(2, 2);
  m.add(0, 0, 2);
  auto snf = smith_normal_form(m);
  CHECK(snf.diagonal == std::vector<Int>{2, 0});
  check_recomposition(m, snf);
}

TEST_CASE("random snf recomposition and divisibility") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_matrix(rng, 6, 6, 3);
    auto snf = smith_normal_form(m);
    check_recomposition(m, snf);
    auto div = elementary_divisors(m);
    int64_t nonzero = 0;
    for (const auto& d : snf.diagonal)
      if (d != 0) ++nonzero;
    CHECK(div.rank == nonzero);
    CHECK(div.rank == bareiss_rank(m));
    std::vector<Int> nontrivial;
    for (const auto& d : snf.diagonal)
      if (abs(d) >= 2) nontrivial.push_back(abs(d));
    CHECK(div.nontrivial == nontrivial);
  }
}

TEST_CASE("rank over Q agrees with rank mod p away from torsion") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 7, 5, 2);
    auto div = elementary_divisors(m);
    bool has2 = false, has3 = false;
    for (const auto& d : div.nontrivial) {
      if (d % 2 == 0) has2 = true;
      if (d % 3 == 0) has3 = true;
    }
    if (!has2) CHECK(rank_mod_p(m, 2) == div.rank);
    if (!has3) CHECK(rank_mod_p(m, 3) == div.rank);
    CHECK(rank_mod_p(m, 1000003) == bareiss_rank(m));
  }
}

TEST_CASE("homology of the circle") {
  ChainComplexData cx;
  cx.fvector = {1, 1};
  cx.boundary.resize(2);
  cx.boundary[0] = SparseIntMatrix(0, 1);
  cx.boundary[1] = SparseIntMatrix(1, 1);  // zero map
  auto h = homology_summary(cx, Coeff::Z);
  CHECK(h.betti_vector() == std::vector<int64_t>{1, 1});
  CHECK(h.torsion_free());
}

TEST_CASE("homology of RP^2 over Z, Q and F2") {
  // Minimal CW structure: one cell in each dimension 0,1,2, d1 = 0, d2 = 2.
  ChainComplexData cx;
  cx.fvector = {1, 1, 1};
  cx.boundary.resize(3);
  cx.boundary[0] = SparseIntMatrix(0, 1);
  cx.boundary[1] = SparseIntMatrix(1, 1);
  cx.boundary[2] = SparseIntMatrix(1, 1);
  cx.boundary[2].add(0, 0, 2);
  auto hz = homology_summary(cx, Coeff::Z);
  CHECK(hz.betti_vector() == std::vector<int64_t>{1, 0, 0});
  REQUIRE(hz.degrees[1].torsion.size() == 1);
  CHECK(hz.degrees[1].torsion[0] == 2);
  auto hq = homology_summary(cx, Coeff::Q);
  CHECK(hq.betti_vector() == std::vector<int64_t>{1, 0, 0});
  auto h2 = homology_summary(cx, Coeff::Fp, 2);
  CHECK(h2.betti_vector() == std::vector<int64_t>{1, 1, 1});
}

TEST_CASE("dd != 0 is rejected") {
  ChainComplexData cx;
  cx.fvector = {1, 1, 1};
  cx.boundary.resize(3);
  cx.boundary[0] = SparseIntMatrix(0, 1);
  cx.boundary[1] = SparseIntMatrix(1, 1);
  cx.boundary[1].add(0, 0, 1);
  cx.boundary[2] = SparseIntMatrix(1, 1);
  cx.boundary[2].add(0, 0, 1);
  CHECK_THROWS_AS(cx.check(), InternalError);
}

TEST_CASE("non-composable matrices are rejected") {
  ChainComplexData cx;
  cx.fvector = {2, 1};
  cx.boundary.resize(2);
  cx.boundary[0] = SparseIntMatrix(0, 2);
  cx.boundary[1] = SparseIntMatrix(1, 1);  // should be 2 x 1
  CHECK_THROWS_AS(cx.check(), InternalError);
}

TEST_CASE("Fp requires a prime") {
  ChainComplexData cx;
  cx.fvector = {1};
  cx.boundary.resize(1);
  cx.boundary[0] = SparseIntMatrix(0, 1);
  CHECK_THROWS_AS(homology_summary(cx, Coeff::Fp, 6), DomainError);
}

TEST_CASE("matrix json round trip") {
  std::mt19937 rng(5);
  auto m = random_matrix(rng, 4, 6, 2);
  auto back = SparseIntMatrix::from_json(m.to_json());
  CHECK(back.rows == m.rows);
  CHECK(back.cols == m.cols);
  CHECK(back.triplets == m.triplets);
}
