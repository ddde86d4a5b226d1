#pragma once

#include <map>
#include <vector>

#include "sd/common.hpp"

namespace sd {

// A singular simplex of a product of standard simplices, recorded by its
// ordered vertex tuples: verts[i][r] is the factor-r coordinate of the i-th
// vertex.  Normalized chains keep only nondegenerate simplices (no two
// consecutive vertices equal).
struct GridSimplex {
  std::vector<std::vector<int>> verts;

  int dim() const { return static_cast<int>(verts.size()) - 1; }
  bool degenerate() const;
  auto operator<=>(const GridSimplex&) const = default;
};

// Formal integer combination of nondegenerate grid simplices.
class FormalChain {
 public:
  void add(const GridSimplex& s, long long coeff);
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::map<GridSimplex, long long>& terms() const { return terms_; }

  FormalChain& operator+=(const FormalChain& other);
  FormalChain& operator*=(long long c);
  friend bool operator==(const FormalChain&, const FormalChain&) = default;

 private:
  std::map<GridSimplex, long long> terms_;
};

// The shuffle (Eilenberg-Zilber) fundamental chain of
// Delta^{j_1} x ... x Delta^{j_p}: the signed sum over all monotone
// staircase paths through the vertex grid.  Term count is the multinomial
// (sum j)! / prod(j!).
FormalChain ez_fundamental_chain(const std::vector<int>& shape);

// Alternating-sign face sum, degenerate faces dropped.
FormalChain boundary_of_chain(const FormalChain& chain);

// Pushforward along the face inclusion that omits vertex s of factor r:
// coordinates v >= s in factor r shift up by one.  The input chain lives on
// the shape with factor r shrunk by one.
FormalChain face_pushforward(const FormalChain& chain, int factor, int s);

// Pairwise shuffle product: chains on two disjoint factor blocks combined
// into a chain on the concatenated block.  Used to check EZ associativity.
FormalChain ez_product(const FormalChain& a, const FormalChain& b);

// Both sides of the boundary identity for the fundamental chain of
// c x Delta^n, c of the given shape: the boundary must equal the signed sum
// of face-pushforward fundamental chains with signs
// (-1)^{eps(r,s)}, eps(r,s) = s + j_1 + ... + j_{r-1}, the Delta^n faces
// weighted by an extra (-1)^m.
struct BoundaryIdentity {
  FormalChain lhs;
  FormalChain rhs;
  bool holds() const { return lhs == rhs; }
};
BoundaryIdentity ez_boundary_identity(const std::vector<int>& cell_shape, int n);

}  // namespace sd
