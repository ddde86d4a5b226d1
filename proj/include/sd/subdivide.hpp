#pragma once

#include "sd/moduli.hpp"

namespace sd {

// Factor-wise barycentric subdivision of a built complex.  Cells of the
// subdivision are indexed by (carrier cell, one chain of vertex subsets per
// polytope factor, ending at the full set); cells whose chains end below
// the full set are identified with cells of proper faces by pushing through
// the attaching maps.
//
// `validate_samples` metric points (subdivision-cell interiors and pushed
// boundary representatives) are cross-checked against locate_cell; any
// disagreement throws InternalError("subdivision vertex identification").

// Full subdivided chain complex.  Memory grows with the subdivision; use
// subdivided_betti for the large ones.
struct SubdividedComplex {
  ChainComplexData chain;
  int64_t cell_count = 0;
  bool regular = true;
};
SubdividedComplex subdivide(const CellComplex& cx, int64_t validate_samples = 64);

// Betti numbers of the subdivision over Q, streaming one boundary matrix at
// a time.
struct SubdividedBetti {
  std::vector<int64_t> fvector;
  std::vector<int64_t> betti;
  int64_t cell_count = 0;
  bool regular = true;
};
SubdividedBetti subdivided_betti(const CellComplex& cx, int64_t validate_samples = 64);

}  // namespace sd
