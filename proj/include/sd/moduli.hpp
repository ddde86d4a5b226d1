#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sd/diagram.hpp"
#include "sd/homology.hpp"

namespace sd {

// Shape of the cell c_G = Delta^{n_1} x ... x Delta^{n_k} x [0,1]^N.
// Factors are ordered circles first, then one interval per in-edge output
// mark in output order; intervals are treated as Delta^1 with vertex 0 at
// p = 0.
struct CellShape {
  std::vector<int> simplex_dims;
  int intervals = 0;

  int factor_count() const { return static_cast<int>(simplex_dims.size()) + intervals; }
  int factor_dim(int f) const {
    return f < static_cast<int>(simplex_dims.size()) ? simplex_dims[f] : 1;
  }
  int dim() const;
  int offset(int f) const;  // total dimension of the earlier factors
  friend bool operator==(const CellShape&, const CellShape&) = default;
};

CellShape cell_shape(const StringDiagramType& g);

// Raw codim-1 face: omit vertex s of factor `factor`.  The target is not
// canonicalized; simplex coordinates of the factor relabel by dropping
// index s, every other coordinate is carried across unchanged.  When a
// t-face contracts an arc holding an in-edge mark, that mark pins to a
// corner and its interval factor disappears: `collapsed_interval` reports
// which one (index among the source cell's interval factors).
struct RawFace {
  StringDiagramType target;
  std::optional<int> collapsed_interval;
};
RawFace apply_face(const StringDiagramType& g, int factor, int s);

struct FaceEntry {
  int factor = 0;
  int s = 0;
  int degree = 0;  // 0 when the face collapses an interval direction
  std::optional<int> collapsed_interval;
  std::string target_key;
};

// All codim-1 faces of c_G with incidence degrees (-1)^{s + offset(factor)},
// or 0 for collapsing faces.
std::vector<FaceEntry> faces(const StringDiagramType& g);

// ---------------------------------------------------------------------------

struct CellComplex {
  struct Cell {
    StringDiagramType type;
    std::string key;
    int dim = 0;
    CellShape shape;
    bool in_sd = false;
    bool top = false;
    struct Face {
      int factor, s, target, degree;
      int collapsed_interval;  // -1 when none
    };
    std::vector<Face> faces;
  };

  Signature sig;
  std::vector<Cell> cells;  // sorted by (dim, key)
  std::unordered_map<std::string, int> index;
  std::vector<int64_t> fvector;
  int top_dim = 0;
  bool regular = false;

  const Cell* find(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? nullptr : &cells[it->second];
  }
  // Position of a cell among the cells of its dimension.
  std::vector<int64_t> per_dim_index;

  SparseIntMatrix boundary_matrix(int m) const;
  ChainComplexData chain() const;
};

// All isomorphism classes of top-dimensional combinatorial types: every
// chord endpoint at its own vertex, none at a marked point, all output
// marks in edge interiors.  Throws DomainError unless g >= 0, k, l >= 1 and
// 2g - 2 + k + l >= 1.
std::vector<StringDiagramType> enumerate_top_cells(int g, int k, int l);

// Closure of the top cells under faces, with boundary matrices; checks
// dd = 0 (InternalError on failure).
CellComplex build_complex(int g, int k, int l);

// Renormalizes a metric point with boundary coordinates to the open cell
// containing it: repeatedly applies the face degeneration matching a zero
// t-coordinate or an extremal p-coordinate.  The returned type is
// canonical; idempotent.
MetricStringDiagram locate_cell(const MetricStringDiagram& x);

}  // namespace sd
