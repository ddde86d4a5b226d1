#include "sd/moduli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace sd {

int CellShape::dim() const {
  int d = intervals;
  for (int n : simplex_dims) d += n;
  return d;
}

int CellShape::offset(int f) const {
  int off = 0;
  for (int u = 0; u < f; ++u) off += factor_dim(u);
  return off;
}

CellShape cell_shape(const StringDiagramType& g) {
  CellShape s;
  for (const auto& c : g.circles) s.simplex_dims.push_back(c.n_free());
  for (const auto& m : g.marks) s.intervals += m.in_edge ? 1 : 0;
  return s;
}

namespace {

// A contracted backward arc is followed on its cycle by the chord edge of
// the first half-chord at the arc's source site: the corner it pins to.
DirEdge corner_after_contraction(const StringDiagramType& g, int circle, int arc) {
  return DirEdge::on_chord(g.circles[circle].sites[arc].front());
}

// Next directed edge after `d` on its boundary cycle.
DirEdge sigma_dir_edge(const StringDiagramType& g, const DirEdge& d) {
  FatgraphBridge b = underlying_fatgraph(g);
  int h = b.dir_edge_halfedge(d);
  return b.halfedge_dir_edge(b.graph.next[b.graph.pairing[h]]);
}

int interval_index_of_output(const StringDiagramType& g, int output) {
  int idx = 0;
  for (int j = 0; j < output; ++j) idx += g.marks[j].in_edge ? 1 : 0;
  return idx;
}

}  // namespace

RawFace apply_face(const StringDiagramType& g, int factor, int s) {
  RawFace out;
  out.target = g;
  StringDiagramType& t = out.target;

  if (factor < g.k) {
    const int i = factor;
    Circle& c = t.circles[i];
    const int n = c.n_free();
    const int r = static_cast<int>(c.sites.size());
    if (n < 1 || s < 0 || s > n) throw DomainError("bad simplex face");

    // Contract the matching arc (or move a vertex onto the marked point for
    // the outer faces of an unmarked circle).  A contracted arc between
    // consecutive vertices merges them, the later vertex's chords first.
    int contracted = -1;  // source arc index
    std::vector<int> arc_map(r);
    if (c.marked_vertex) {
      contracted = s;  // arc s joins site s to site (s+1) mod r
      const int a = s;
      const int b = (s + 1) % r;
      std::vector<int> merged = c.sites[b];
      merged.insert(merged.end(), c.sites[a].begin(), c.sites[a].end());
      if (b == 0) {
        c.sites[0] = std::move(merged);
        c.sites.pop_back();  // a == r-1
      } else {
        c.sites[a] = std::move(merged);
        c.sites.erase(c.sites.begin() + b);
      }
      for (int j = 0; j < r; ++j) arc_map[j] = j < s ? j : (j == s ? -1 : j - 1);
    } else if (s == 0) {
      c.marked_vertex = true;
      for (int j = 0; j < r; ++j) arc_map[j] = j;
    } else if (s == n) {
      std::rotate(c.sites.begin(), c.sites.end() - 1, c.sites.end());
      c.marked_vertex = true;
      for (int j = 0; j < r; ++j) arc_map[j] = j == r - 1 ? 0 : j + 1;
    } else {
      contracted = s - 1;  // arc s-1 joins sites s-1 and s
      std::vector<int> merged = c.sites[s];
      merged.insert(merged.end(), c.sites[s - 1].begin(), c.sites[s - 1].end());
      c.sites[s - 1] = std::move(merged);
      c.sites.erase(c.sites.begin() + s);
      for (int j = 0; j < r; ++j) arc_map[j] = j < s - 1 ? j : (j == s - 1 ? -1 : j - 1);
    }

    for (int j = 0; j < t.l; ++j) {
      OutputMark& m = t.marks[j];
      if (m.at.kind != DirEdge::Kind::arc_back || m.at.circle != i) continue;
      if (m.at.arc == contracted) {
        if (m.in_edge) out.collapsed_interval = interval_index_of_output(g, j);
        m.in_edge = false;
        m.at = corner_after_contraction(g, i, contracted);
      } else {
        m.at.arc = arc_map[m.at.arc];
      }
    }
    return out;
  }

  // Interval face: the q-th in-edge mark moves to the source (p = 0, vertex
  // 1 omitted) or target (p = 1, vertex 0 omitted) corner of its edge.
  const int q = factor - g.k;
  int output = -1;
  int count = 0;
  for (int j = 0; j < g.l; ++j) {
    if (!g.marks[j].in_edge) continue;
    if (count++ == q) {
      output = j;
      break;
    }
  }
  if (output < 0 || s < 0 || s > 1) throw DomainError("bad interval face");
  OutputMark& m = t.marks[output];
  m.in_edge = false;
  if (s == 0) m.at = sigma_dir_edge(g, m.at);  // p = 1: corner before the next edge
  return out;
}

std::vector<FaceEntry> faces(const StringDiagramType& g) {
  CellShape shape = cell_shape(g);
  std::vector<FaceEntry> out;
  for (int f = 0; f < shape.factor_count(); ++f) {
    const int d = shape.factor_dim(f);
    if (d == 0) continue;
    for (int s = 0; s <= d; ++s) {
      RawFace raw = apply_face(g, f, s);
      FaceEntry e;
      e.factor = f;
      e.s = s;
      e.collapsed_interval = raw.collapsed_interval;
      e.degree = raw.collapsed_interval ? 0 : ((shape.offset(f) + s) % 2 == 0 ? 1 : -1);
      e.target_key = canonical_key(raw.target);
      out.push_back(std::move(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void for_each_involution(int n, std::vector<int>& mate, std::vector<char>& used,
                         const std::function<void(const std::vector<int>&)>& emit) {
  int first = -1;
  for (int i = 0; i < n; ++i)
    if (!used[i]) {
      first = i;
      break;
    }
  if (first < 0) {
    emit(mate);
    return;
  }
  used[first] = 1;
  for (int j = first + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    mate[first] = j;
    mate[j] = first;
    for_each_involution(n, mate, used, emit);
    used[j] = 0;
  }
  used[first] = 0;
}

void for_each_composition(int total, int parts, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      emit(cur);
      cur.pop_back();
    }
    return;
  }
  for (int first = 1; first <= total - (parts - 1); ++first) {
    cur.push_back(first);
    for_each_composition(total - first, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

std::vector<StringDiagramType> enumerate_top_cells(int g, int k, int l) {
  if (g < 0 || k < 1 || l < 1 || 2 * g - 2 + k + l < 1)
    throw DomainError("signature must satisfy g >= 0, k,l >= 1, 2g-2+k+l >= 1");
  const int chords = 2 * g - 2 + k + l;
  const int halves = 2 * chords;

  std::map<std::string, StringDiagramType> found;

  std::vector<int> comp;
  for_each_composition(halves, k, comp, [&](const std::vector<int>& n) {
    // Circle i carries n[i] single-chord vertices; half-chord ids run in
    // flattened order.
    StringDiagramType base;
    base.k = k;
    base.l = l;
    base.circles.resize(k);
    int id = 0;
    for (int i = 0; i < k; ++i)
      for (int v = 0; v < n[i]; ++v) base.circles[i].sites.push_back({id++});
    base.mate.assign(halves, -1);

    std::vector<int> mate(halves, -1);
    std::vector<char> used(halves, 0);
    for_each_involution(halves, mate, used, [&](const std::vector<int>& m) {
      base.mate = m;
      FatgraphBridge b = underlying_fatgraph(base);
      if (!is_connected(b.graph)) return;
      auto cycles = boundary_cycles(b.graph);
      std::set<int> input_heads;
      for (int i = 0; i < k; ++i) input_heads.insert(b.arc_out(i, 0));
      std::vector<std::vector<int>> outputs;
      for (auto& cyc : cycles) {
        bool is_input = false;
        for (int h : cyc)
          if (input_heads.count(h)) {
            is_input = true;
            break;
          }
        if (!is_input) outputs.push_back(std::move(cyc));
      }
      if (static_cast<int>(outputs.size()) != l) return;  // wrong genus or l

      // All output orderings, all in-edge mark placements.
      std::vector<int> perm(l);
      for (int i = 0; i < l; ++i) perm[i] = i;
      std::sort(perm.begin(), perm.end());
      do {
        std::vector<StringDiagramType> partial{base};
        for (int j = 0; j < l; ++j) {
          const auto& cyc = outputs[perm[j]];
          std::vector<StringDiagramType> next;
          for (int h : cyc) {
            DirEdge d = b.halfedge_dir_edge(h);
            for (const auto& pt : partial) {
              StringDiagramType cand = pt;
              cand.marks.push_back(OutputMark{true, d});
              next.push_back(std::move(cand));
            }
          }
          partial = std::move(next);
        }
        for (auto& cand : partial) {
          auto canon = canonicalize(cand);
          found.emplace(canonical_key(canon), std::move(canon));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  });

  std::vector<StringDiagramType> out;
  const int want_dim = 4 * g - 4 + 2 * k + 3 * l;
  for (auto& [key, type] : found) {
    require_valid(type);
    if (cell_shape(type).dim() != want_dim)
      throw InternalError("top cell with wrong dimension enumerated");
    out.push_back(std::move(type));
  }
  return out;
}

CellComplex build_complex(int g, int k, int l) {
  auto tops = enumerate_top_cells(g, k, l);
  const Signature sig = diagram_signature(tops.at(0));

  struct Pending {
    StringDiagramType type;
    bool top;
  };
  std::map<std::string, Pending> known;
  std::vector<std::string> queue;
  for (auto& t : tops) {
    std::string key = canonical_key(t);
    known.insert({key, {std::move(t), true}});
    queue.push_back(std::move(key));
  }

  std::map<std::string, std::vector<FaceEntry>> face_lists;
  while (!queue.empty()) {
    std::string key = std::move(queue.back());
    queue.pop_back();
    const StringDiagramType& type = known.at(key).type;
    auto fl = cell_shape(type).dim() == 0 ? std::vector<FaceEntry>{} : faces(type);
    for (const auto& e : fl) {
      if (known.count(e.target_key)) continue;
      RawFace raw = apply_face(type, e.factor, e.s);
      StringDiagramType canon = canonicalize(raw.target);
      require_valid(canon);
      known.insert({e.target_key, {std::move(canon), false}});
      queue.push_back(e.target_key);
    }
    face_lists[key] = std::move(fl);
  }

  CellComplex cx;
  cx.sig = sig;
  cx.top_dim = 4 * g - 4 + 2 * k + 3 * l;

  std::vector<std::pair<int, std::string>> order;
  for (const auto& [key, pending] : known)
    order.emplace_back(cell_shape(pending.type).dim(), key);
  std::sort(order.begin(), order.end());

  for (const auto& [dim, key] : order) {
    CellComplex::Cell cell;
    cell.type = known.at(key).type;
    cell.key = key;
    cell.dim = dim;
    cell.shape = cell_shape(cell.type);
    cell.in_sd = is_in_sd(cell.type);
    cell.top = known.at(key).top;
    cx.index.emplace(key, static_cast<int>(cx.cells.size()));
    cx.cells.push_back(std::move(cell));
  }
  cx.fvector.assign(cx.top_dim + 1, 0);
  cx.per_dim_index.resize(cx.cells.size());
  for (size_t i = 0; i < cx.cells.size(); ++i)
    cx.per_dim_index[i] = cx.fvector[cx.cells[i].dim]++;

  cx.regular = true;
  for (auto& cell : cx.cells) {
    std::set<int> seen_targets;
    for (const auto& e : face_lists.at(cell.key)) {
      CellComplex::Cell::Face f;
      f.factor = e.factor;
      f.s = e.s;
      f.target = cx.index.at(e.target_key);
      f.degree = e.degree;
      f.collapsed_interval = e.collapsed_interval.value_or(-1);
      if (f.degree != 0 && cx.cells[f.target].dim != cell.dim - 1)
        throw InternalError("non-collapsing face with wrong target dimension");
      if (f.degree == 0 || !seen_targets.insert(f.target).second) cx.regular = false;
      cell.faces.push_back(f);
    }
  }

  cx.chain().check();  // dd = 0, hard failure otherwise
  return cx;
}

SparseIntMatrix CellComplex::boundary_matrix(int m) const {
  if (m < 0 || m > top_dim) throw DomainError("boundary degree out of range");
  SparseIntMatrix mat(m == 0 ? 0 : fvector[m - 1], fvector[m]);
  if (m == 0) return mat;
  for (size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].dim != m) continue;
    std::map<int64_t, int64_t> acc;  // several faces may share one target
    for (const auto& f : cells[c].faces) {
      if (f.degree == 0) continue;
      acc[per_dim_index[f.target]] += f.degree;
    }
    for (const auto& [row, v] : acc)
      if (v != 0) mat.add(row, per_dim_index[c], v);
  }
  return mat;
}

ChainComplexData CellComplex::chain() const {
  ChainComplexData data;
  data.fvector = fvector;
  for (int m = 0; m <= top_dim; ++m) data.boundary.push_back(boundary_matrix(m));
  return data;
}

MetricStringDiagram locate_cell(const MetricStringDiagram& input) {
  check_metric(input);
  MetricStringDiagram x = input;
  for (;;) {
    int factor = -1, s = -1;
    for (size_t i = 0; i < x.t.size() && factor < 0; ++i) {
      if (x.type.circles[i].n_free() == 0) continue;
      for (size_t u = 0; u < x.t[i].size(); ++u)
        if (x.t[i][u] == 0) {
          factor = static_cast<int>(i);
          s = static_cast<int>(u);
          break;
        }
    }
    if (factor < 0) {
      for (size_t q = 0; q < x.p.size(); ++q)
        if (x.p[q] == 0 || x.p[q] == 1) {
          factor = x.type.k + static_cast<int>(q);
          s = x.p[q] == 1 ? 0 : 1;
          break;
        }
    }
    if (factor < 0) break;

    RawFace raw = apply_face(x.type, factor, s);
    if (factor < x.type.k) {
      x.t[factor].erase(x.t[factor].begin() + s);
      if (raw.collapsed_interval) x.p.erase(x.p.begin() + *raw.collapsed_interval);
    } else {
      x.p.erase(x.p.begin() + (factor - x.type.k));
    }
    x.type = std::move(raw.target);
  }
  x.type = canonicalize(x.type);
  check_metric(x);
  return x;
}

}  // namespace sd
