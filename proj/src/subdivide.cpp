#include "sd/subdivide.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sd {

namespace {

using Mask = uint32_t;
using Chain = std::vector<Mask>;  // strictly increasing subsets, last = full

Mask full_mask(int dim) { return (Mask(1) << (dim + 1)) - 1; }

// All chains of nonempty subsets of {0..dim} under strict inclusion whose
// largest element is the full set, in a fixed deterministic order.
std::vector<Chain> chains_ending_full(int dim) {
  std::vector<Chain> out;
  const Mask full = full_mask(dim);
  Chain cur{full};
  auto rec = [&](auto&& self) -> void {
    out.push_back(Chain(cur.rbegin(), cur.rend()));  // ascending order
    const Mask top = cur.back();
    for (Mask sub = (top - 1) & top; sub != 0; sub = (sub - 1) & top) {
      cur.push_back(sub);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

// Remove bit s from a mask, shifting the higher bits down.
Mask compress_mask(Mask m, int s) {
  const Mask low = m & ((Mask(1) << s) - 1);
  return low | ((m >> (s + 1)) << s);
}

int lowest_missing(Mask m, int dim) {
  for (int v = 0; v <= dim; ++v)
    if (!(m & (Mask(1) << v))) return v;
  return -1;
}

struct Scheme {
  const CellComplex* cx = nullptr;
  std::map<int, std::vector<Chain>> chains;         // by factor dim
  std::map<int, std::map<Chain, int>> chain_index;  // by factor dim
  std::map<int, std::vector<int>> chain_dim;        // by factor dim: len - 1
  // by factor dim: chain x deleted element u (u < len-1) -> reduced chain id
  std::map<int, std::vector<std::vector<int>>> interior_face;
  std::vector<std::vector<int64_t>> stride;         // per cell, per factor
  std::vector<int64_t> base;                        // per cell
  int64_t total = 0;

  void build(const CellComplex& complex) {
    cx = &complex;
    for (const auto& cell : complex.cells) {
      for (int f = 0; f < cell.shape.factor_count(); ++f) {
        int d = cell.shape.factor_dim(f);
        if (chains.count(d)) continue;
        auto list = chains_ending_full(d);
        for (size_t i = 0; i < list.size(); ++i) chain_index[d].emplace(list[i], i);
        auto& dims = chain_dim[d];
        auto& faces = interior_face[d];
        dims.resize(list.size());
        faces.resize(list.size());
        for (size_t i = 0; i < list.size(); ++i) {
          const int m = static_cast<int>(list[i].size());
          dims[i] = m - 1;
          faces[i].resize(std::max(0, m - 1));
          for (int u = 0; u + 1 < m; ++u) {
            Chain reduced = list[i];
            reduced.erase(reduced.begin() + u);
            faces[i][u] = chain_index.at(d).at(reduced);
          }
        }
        chains.emplace(d, std::move(list));
      }
    }
    stride.resize(complex.cells.size());
    base.resize(complex.cells.size());
    for (size_t c = 0; c < complex.cells.size(); ++c) {
      const auto& shape = complex.cells[c].shape;
      const int q = shape.factor_count();
      stride[c].resize(q);
      int64_t acc = 1;
      for (int f = q - 1; f >= 0; --f) {
        stride[c][f] = acc;
        acc *= static_cast<int64_t>(chains.at(shape.factor_dim(f)).size());
      }
      base[c] = total;
      total += acc;
    }
  }

  int64_t id_of(int cell, const std::vector<Chain>& combo) const {
    int64_t idx = base[cell];
    const auto& shape = cx->cells[cell].shape;
    for (int f = 0; f < shape.factor_count(); ++f)
      idx += chain_index.at(shape.factor_dim(f)).at(combo[f]) * stride[cell][f];
    return idx;
  }

  const CellComplex::Cell::Face& face_entry(int cell, int factor, int s) const {
    for (const auto& f : cx->cells[cell].faces)
      if (f.factor == factor && f.s == s) return f;
    throw InternalError("missing face entry during subdivision push");
  }

  // Push a subdivision cell whose chains may end below the full sets to its
  // carrier.  Returns false when a collapsed interval direction kills the
  // dimension (the face has degree 0); the carrier is still produced.
  bool push(int& cell, std::vector<Chain>& ch) const {
    bool nondegenerate = true;
    for (;;) {
      const auto& shape = cx->cells[cell].shape;
      const int k = static_cast<int>(shape.simplex_dims.size());
      int f = -1;
      for (int u = 0; u < shape.factor_count(); ++u)
        if (ch[u].back() != full_mask(shape.factor_dim(u))) {
          f = u;
          break;
        }
      if (f < 0) return nondegenerate;
      if (f < k) {
        const int s = lowest_missing(ch[f].back(), shape.factor_dim(f));
        const auto& fe = face_entry(cell, f, s);
        for (Mask& m : ch[f]) m = compress_mask(m, s);
        if (fe.collapsed_interval >= 0) {
          const int pos = k + fe.collapsed_interval;
          if (ch[pos].size() > 1) nondegenerate = false;
          ch.erase(ch.begin() + pos);
        }
        cell = fe.target;
      } else {
        // Interval factor pinned at one endpoint: chains below the full set
        // {0,1} are single vertices.
        if (ch[f].size() != 1) throw InternalError("interval chain not a vertex");
        const int s = ch[f][0] == 0b10 ? 0 : 1;  // vertex 1 <-> p=1 <-> face s=0
        const auto& fe = face_entry(cell, f, s);
        if (fe.collapsed_interval >= 0)
          throw InternalError("interval face cannot collapse another interval");
        ch.erase(ch.begin() + f);
        cell = fe.target;
      }
    }
  }

  // Interior representative of a subdivision cell: positive weights on the
  // chain barycenters.
  MetricStringDiagram interior_point(int cell, const std::vector<Chain>& ch) const {
    const auto& c = cx->cells[cell];
    MetricStringDiagram x;
    x.type = c.type;
    const int k = static_cast<int>(c.shape.simplex_dims.size());
    for (int f = 0; f < c.shape.factor_count(); ++f) {
      const int d = c.shape.factor_dim(f);
      const int m = static_cast<int>(ch[f].size());
      std::vector<Rational> bary(d + 1, Rational(0));
      Rational denom(0);
      for (int u = 0; u < m; ++u) {
        Rational w(Int(1) << (m - 1 - u));  // decreasing positive weights
        denom += w;
        const Mask mask = ch[f][u];
        int bits = __builtin_popcount(mask);
        for (int v = 0; v <= d; ++v)
          if (mask & (Mask(1) << v)) bary[v] += w / bits;
      }
      for (auto& b : bary) b /= denom;
      if (f < k) {
        x.t.push_back(std::move(bary));
      } else {
        x.p.push_back(bary[1]);  // weight of vertex 1 is the p coordinate
      }
    }
    return x;
  }
};

struct LeanTriplets {
  std::vector<int32_t> rows, cols;
  std::vector<int8_t> vals;
  void add(int64_t r, int64_t c, int v) {
    rows.push_back(static_cast<int32_t>(r));
    cols.push_back(static_cast<int32_t>(c));
    vals.push_back(static_cast<int8_t>(v));
  }
  SparseIntMatrix matrix(int64_t nrows, int64_t ncols) const {
    SparseIntMatrix m(nrows, ncols);
    m.triplets.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) m.triplets.push_back({rows[i], cols[i], vals[i]});
    return m;
  }
};

struct Walk {
  Scheme scheme;
  std::vector<int32_t> perdim;  // global id -> index within its dimension
  std::vector<int8_t> dim_of;
  std::vector<int64_t> fvector;
  bool regular = true;

  template <typename Fn>
  void combos(int cell, Fn&& fn) {
    const auto& shape = scheme.cx->cells[cell].shape;
    const int q = shape.factor_count();
    std::vector<const std::vector<Chain>*> lists(q);
    for (int f = 0; f < q; ++f) lists[f] = &scheme.chains.at(shape.factor_dim(f));
    std::vector<int> idx(q, 0);
    for (;;) {
      fn(idx);
      int f = q - 1;
      while (f >= 0 && ++idx[f] == static_cast<int>(lists[f]->size())) idx[f--] = 0;
      if (f < 0) break;
    }
  }

  std::vector<Chain> materialize(int cell, const std::vector<int>& idx) const {
    const auto& shape = scheme.cx->cells[cell].shape;
    std::vector<Chain> combo(idx.size());
    for (size_t f = 0; f < idx.size(); ++f)
      combo[f] = scheme.chains.at(shape.factor_dim(static_cast<int>(f)))[idx[f]];
    return combo;
  }

  void index_pass(int top_dim) {
    perdim.assign(scheme.total, 0);
    dim_of.assign(scheme.total, 0);
    fvector.assign(top_dim + 1, 0);
    for (size_t cell = 0; cell < scheme.cx->cells.size(); ++cell) {
      const auto& shape = scheme.cx->cells[cell].shape;
      const int q = shape.factor_count();
      std::vector<const std::vector<int>*> dims(q);
      for (int f = 0; f < q; ++f) dims[f] = &scheme.chain_dim.at(shape.factor_dim(f));
      int64_t id = scheme.base[cell];
      combos(static_cast<int>(cell), [&](const std::vector<int>& idx) {
        int d = 0;
        for (int f = 0; f < q; ++f) d += (*dims[f])[idx[f]];
        dim_of[id] = static_cast<int8_t>(d);
        perdim[id] = static_cast<int32_t>(fvector[d]++);
        ++id;
      });
    }
  }

  template <typename Emit>
  void cell_faces(int cell, const std::vector<int>& idx, int64_t source_id, Emit&& emit) {
    const auto& shape = scheme.cx->cells[cell].shape;
    const int q = static_cast<int>(idx.size());
    int offset = 0;
    for (int f = 0; f < q; ++f) {
      const int d = shape.factor_dim(f);
      const int m = scheme.chain_dim.at(d)[idx[f]] + 1;
      for (int u = 0; u < m && m >= 2; ++u) {
        const int sign = (offset + u) % 2 == 0 ? 1 : -1;
        if (u < m - 1) {
          // Same carrier: only factor f's chain index changes.
          const int reduced = scheme.interior_face.at(d)[idx[f]][u];
          const int64_t target = source_id + (reduced - idx[f]) * scheme.stride[cell][f];
          emit(target, source_id, sign);
          continue;
        }
        int tcell = cell;
        std::vector<Chain> ch = materialize(cell, idx);
        ch[f].pop_back();
        if (!scheme.push(tcell, ch)) {
          regular = false;
          continue;
        }
        emit(scheme.id_of(tcell, ch), source_id, sign);
      }
      offset += m - 1;
    }
  }

  template <typename Consume>
  void face_pass(Consume&& consume) {
    for (size_t cell = 0; cell < scheme.cx->cells.size(); ++cell) {
      int64_t id = scheme.base[cell];
      combos(static_cast<int>(cell), [&](const std::vector<int>& idx) {
        const int d = dim_of[id];
        cell_faces(static_cast<int>(cell), idx, id,
                   [&](int64_t row_g, int64_t col_g, int sign) {
                     consume(d, perdim[row_g], perdim[col_g], sign);
                   });
        ++id;
      });
    }
  }

  void validate(int64_t samples) {
    // Interior representatives must locate to their own carrier cell with
    // unchanged coordinates; boundary representatives (max element of one
    // factor dropped) must locate to the pushed carrier and coordinates.
    int64_t done = 0;
    for (size_t cell = 0; cell < scheme.cx->cells.size() && done < samples; ++cell) {
      combos(static_cast<int>(cell), [&](const std::vector<int>& idx) {
        if (done >= samples) return;
        ++done;
        const auto& c = scheme.cx->cells[cell];
        std::vector<Chain> combo = materialize(static_cast<int>(cell), idx);
        auto x = scheme.interior_point(static_cast<int>(cell), combo);
        auto located = locate_cell(x);
        if (canonical_key(located.type) != c.key || located.t != x.t || located.p != x.p)
          throw InternalError("subdivision vertex identification (interior)");
        for (size_t f = 0; f < combo.size(); ++f) {
          if (combo[f].size() < 2) continue;
          std::vector<Chain> bch = combo;
          bch[f].pop_back();
          auto boundary_x = scheme.interior_point(static_cast<int>(cell), bch);
          int tcell = static_cast<int>(cell);
          if (scheme.push(tcell, bch)) {
            auto blocated = locate_cell(boundary_x);
            auto expect = scheme.interior_point(tcell, bch);
            if (canonical_key(blocated.type) != scheme.cx->cells[tcell].key ||
                blocated.t != expect.t || blocated.p != expect.p)
              throw InternalError("subdivision vertex identification (boundary)");
          }
          break;
        }
      });
    }
  }
};

}  // namespace

SubdividedComplex subdivide(const CellComplex& cx, int64_t validate_samples) {
  Walk walk;
  walk.scheme.build(cx);
  walk.index_pass(cx.top_dim);
  walk.validate(validate_samples);

  const int top = cx.top_dim;
  std::vector<LeanTriplets> tri(top + 1);
  walk.face_pass([&](int d, int64_t row, int64_t col, int sign) { tri[d].add(row, col, sign); });

  SubdividedComplex out;
  out.cell_count = walk.scheme.total;
  out.chain.fvector = walk.fvector;
  out.chain.boundary.resize(top + 1);
  out.chain.boundary[0] = SparseIntMatrix(0, walk.fvector[0]);
  for (int m = 1; m <= top; ++m)
    out.chain.boundary[m] = tri[m].matrix(walk.fvector[m - 1], walk.fvector[m]);
  out.chain.check();
  out.regular = walk.regular;
  // Regularity also requires distinct face targets per cell.
  for (int m = 1; m <= top && out.regular; ++m) {
    std::set<std::pair<int32_t, int32_t>> seen;
    for (size_t i = 0; i < tri[m].rows.size(); ++i)
      if (!seen.insert({tri[m].rows[i], tri[m].cols[i]}).second) {
        out.regular = false;
        break;
      }
  }
  return out;
}

SubdividedBetti subdivided_betti(const CellComplex& cx, int64_t validate_samples) {
  Walk walk;
  walk.scheme.build(cx);
  walk.index_pass(cx.top_dim);
  walk.validate(validate_samples);

  const int top = cx.top_dim;
  std::vector<LeanTriplets> tri(top + 1);
  walk.face_pass([&](int d, int64_t row, int64_t col, int sign) { tri[d].add(row, col, sign); });
  walk.perdim = {};
  walk.dim_of = {};

  SubdividedBetti out;
  out.cell_count = walk.scheme.total;
  out.regular = walk.regular;
  out.fvector = walk.fvector;
  std::vector<int64_t> rank(top + 2, 0);
  for (int m = 1; m <= top; ++m) {
    SparseIntMatrix mat = tri[m].matrix(walk.fvector[m - 1], walk.fvector[m]);
    tri[m] = LeanTriplets{};
    rank[m] = rank_over_q(mat);
  }
  out.betti.resize(top + 1);
  for (int m = 0; m <= top; ++m)
    out.betti[m] = walk.fvector[m] - rank[m] - (m + 1 <= top ? rank[m + 1] : 0);
  return out;
}

}  // namespace sd
