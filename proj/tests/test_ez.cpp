#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sd/ez.hpp"

using namespace sd;

namespace {

long long multinomial(const std::vector<int>& shape) {
  long long total = 0;
  for (int j : shape) total += j;
  long long r = 1;
  long long k = 1;
  // total! / prod j!  computed as a product of binomials
  long long rem = total;
  for (int j : shape) {
    for (int i = 1; i <= j; ++i) {
      r = r * rem / k;
      // keep exact: r*(rem)/k with k incrementing stays integral when done
      // in the binomial order below
      --rem;
      ++k;
    }
  }
  // The loop above is fragile; recompute directly with a table.
  std::vector<long long> fact(total + 1, 1);
  for (long long i = 1; i <= total; ++i) fact[i] = fact[i - 1] * i;
  long long denom = 1;
  for (int j : shape) denom *= fact[j];
  return fact[total] / denom;
}

}  // namespace

TEST_CASE("shape (1,1): two simplices with opposite signs") {
  auto ch = ez_fundamental_chain({1, 1});
  REQUIRE(ch.size() == 2);
  GridSimplex first{{{0, 0}, {1, 0}, {1, 1}}};
  GridSimplex second{{{0, 0}, {0, 1}, {1, 1}}};
  REQUIRE(ch.terms().count(first) == 1);
  REQUIRE(ch.terms().count(second) == 1);
  CHECK(ch.terms().at(first) == 1);
  CHECK(ch.terms().at(second) == -1);
}

TEST_CASE("shape (n): the identity simplex") {
  for (int n = 0; n <= 4; ++n) {
    auto ch = ez_fundamental_chain({n});
    REQUIRE(ch.size() == 1);
    const auto& [s, c] = *ch.terms().begin();
    CHECK(c == 1);
    REQUIRE(s.dim() == n);
    for (int i = 0; i <= n; ++i) CHECK(s.verts[i] == std::vector<int>{i});
  }
}

TEST_CASE("term counts are multinomials") {
  for (const auto& shape : std::vector<std::vector<int>>{
           {2, 1}, {2, 2}, {3, 1}, {1, 1, 1}, {2, 1, 1}, {0, 3}, {4}}) {
    auto ch = ez_fundamental_chain(shape);
    CHECK(static_cast<long long>(ch.size()) == multinomial(shape));
  }
}

TEST_CASE("boundary of the square chain is the four edges") {
  auto bd = boundary_of_chain(ez_fundamental_chain({1, 1}));
  FormalChain expect;
  expect.add(GridSimplex{{{1, 0}, {1, 1}}}, 1);
  expect.add(GridSimplex{{{0, 0}, {1, 0}}}, 1);
  expect.add(GridSimplex{{{0, 1}, {1, 1}}}, -1);
  expect.add(GridSimplex{{{0, 0}, {0, 1}}}, -1);
  CHECK(bd == expect);
}

TEST_CASE("dd = 0 on random shapes") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dim(0, 3);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<int> shape;
    int total = 0;
    const int parts = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < parts; ++i) {
      int j = dim(rng);
      if (total + j > 6) j = 0;
      total += j;
      shape.push_back(j);
    }
    auto dd = boundary_of_chain(boundary_of_chain(ez_fundamental_chain(shape)));
    CHECK(dd.empty());
  }
}

TEST_CASE("EZ is associative: multi-shuffle equals iterated pairwise product") {
  for (const auto& shape : std::vector<std::vector<int>>{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}}) {
    FormalChain chain = ez_fundamental_chain({shape[0]});
    for (size_t r = 1; r < shape.size(); ++r)
      chain = ez_product(chain, ez_fundamental_chain({shape[r]}));
    CHECK(chain == ez_fundamental_chain(shape));
  }
}

TEST_CASE("boundary identity for the fundamental chain, all shapes up to total 6") {
  // Enumerate shapes (j_1..j_p) and the extra simplex dimension n with
  // sum + n <= 6, p <= 3.
  int checked = 0;
  for (int p = 1; p <= 3; ++p) {
    std::vector<int> shape(p, 0);
    auto rec = [&](auto&& self, int idx, int rem) -> void {
      if (idx == p) {
        for (int n = 0; n <= rem; ++n) {
          auto id = ez_boundary_identity(shape, n);
          CHECK(id.holds());
          ++checked;
        }
        return;
      }
      for (int j = 0; j <= rem; ++j) {
        shape[idx] = j;
        self(self, idx + 1, rem - j);
      }
    };
    rec(rec, 0, 6);
  }
  CHECK(checked > 100);
}

TEST_CASE("shape (2,1) has three staircases and satisfies the identity") {
  auto ch = ez_fundamental_chain({2, 1});
  CHECK(ch.size() == 3);
  auto id = ez_boundary_identity({2}, 1);
  CHECK(id.holds());
}

TEST_CASE("EZ naturality under face pushforward") {
  // Pushing the fundamental chain of a face shape into a bigger simplex
  // factor lands exactly on the face-restricted staircases.
  auto face = face_pushforward(ez_fundamental_chain({1, 1}), 0, 1);
  for (const auto& [s, c] : face.terms()) {
    (void)c;
    for (const auto& v : s.verts) CHECK((v[0] == 0 || v[0] == 2));
  }
  CHECK(face.size() == 2);
}
