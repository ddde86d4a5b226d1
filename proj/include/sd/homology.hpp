#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "sd/common.hpp"

namespace sd {

// Sparse integer matrix in coordinate form.  Duplicate (row, col) entries
// accumulate.
struct SparseIntMatrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<std::array<int64_t, 3>> triplets;

  SparseIntMatrix() = default;
  SparseIntMatrix(int64_t r, int64_t c) : rows(r), cols(c) {}

  void add(int64_t r, int64_t c, int64_t v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw DomainError("matrix entry index out of range");
    if (v != 0) triplets.push_back({r, c, v});
  }

  nlohmann::json to_json() const;
  static SparseIntMatrix from_json(const nlohmann::json& j);
};

// Dense Smith normal form with unimodular transforms: U * M * V = D where
// D is diagonal with d1 | d2 | ... .  Intended for modest sizes; the
// homology pipeline uses elementary_divisors below instead.
struct SnfResult {
  std::vector<Int> diagonal;            // min(rows, cols) entries
  std::vector<std::vector<Int>> left;   // rows x rows
  std::vector<std::vector<Int>> right;  // cols x cols
};
SnfResult smith_normal_form(const SparseIntMatrix& m);

// Rank plus the nontrivial (>= 2) invariant factors, computed by a sparse
// unit-pivot reduction followed by a dense completion of the remainder.
struct ElementaryDivisors {
  int64_t rank = 0;
  std::vector<Int> nontrivial;
};
ElementaryDivisors elementary_divisors(const SparseIntMatrix& m);

int64_t rank_over_q(const SparseIntMatrix& m);
int64_t rank_mod_p(const SparseIntMatrix& m, int64_t p);

// A cellular chain complex, boundary[m]: C_m -> C_{m-1} (boundary[0] is the
// empty map out of C_0).
struct ChainComplexData {
  std::vector<int64_t> fvector;
  std::vector<SparseIntMatrix> boundary;

  int top_dim() const { return static_cast<int>(fvector.size()) - 1; }
  int64_t euler_characteristic() const;
  void check() const;  // shape compatibility and dd = 0
};

enum class Coeff { Z, Q, Fp };

struct DegreeSummary {
  int64_t betti = 0;
  std::vector<Int> torsion;
};

struct HomologySummary {
  Coeff coeff = Coeff::Z;
  int64_t p = 0;
  std::vector<DegreeSummary> degrees;

  int64_t betti(int m) const {
    return m >= 0 && m < static_cast<int>(degrees.size()) ? degrees[m].betti : 0;
  }
  bool torsion_free() const;
  std::vector<int64_t> betti_vector() const;
  nlohmann::json to_json() const;
};

// Throws InternalError when the matrices do not compose or dd != 0,
// DomainError for Fp with non-prime p.
HomologySummary homology_summary(const ChainComplexData& cx, Coeff coeff, int64_t p = 0);

}  // namespace sd
