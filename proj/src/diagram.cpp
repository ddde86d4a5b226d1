#include "sd/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace sd {

std::tuple<int, int, bool> FatgraphBridge::arc_of(int h) const {
  if (h >= chord_base) throw InternalError("arc_of called on a chord half-edge");
  int circle = 0;
  while (circle + 1 < static_cast<int>(arc_base.size()) && arc_base[circle + 1] <= h) ++circle;
  int off = h - arc_base[circle];
  return {circle, off / 2, off % 2 == 0};
}

int FatgraphBridge::dir_edge_halfedge(const DirEdge& d) const {
  if (d.kind == DirEdge::Kind::chord) return chord_halfedge(d.half);
  // Backward traversal of an arc starts at its target site, i.e. rides the
  // in-half.
  return arc_in(d.circle, d.arc);
}

DirEdge FatgraphBridge::halfedge_dir_edge(int h) const {
  if (is_chord_halfedge(h)) return DirEdge::on_chord(chord_half(h));
  auto [circle, arc, out] = arc_of(h);
  if (out) throw InternalError("forward arc traversal cannot appear in an output cycle");
  return DirEdge::on_arc(circle, arc);
}

FatgraphBridge underlying_fatgraph(const StringDiagramType& g) {
  FatgraphBridge b;
  int total_arcs = 0;
  b.arc_base.resize(g.circles.size());
  for (size_t i = 0; i < g.circles.size(); ++i) {
    b.arc_base[i] = 2 * total_arcs;
    total_arcs += static_cast<int>(g.circles[i].sites.size());
  }
  b.chord_base = 2 * total_arcs;
  const int n_half = b.chord_base + static_cast<int>(g.mate.size());

  b.graph.pairing.assign(n_half, -1);
  b.graph.next.assign(n_half, -1);
  b.site_of.assign(n_half, {-1, -1});

  for (size_t i = 0; i < g.circles.size(); ++i) {
    const auto& sites = g.circles[i].sites;
    const int r = static_cast<int>(sites.size());
    if (r == 0) throw MalformedError("circle without sites");
    for (int j = 0; j < r; ++j) {
      b.graph.pairing[b.arc_out(i, j)] = b.arc_in(i, j);
      b.graph.pairing[b.arc_in(i, j)] = b.arc_out(i, j);
      b.site_of[b.arc_out(i, j)] = {static_cast<int>(i), j};
      b.site_of[b.arc_in(i, j)] = {static_cast<int>(i), (j + 1) % r};
    }
    for (int s = 0; s < r; ++s) {
      // Cyclic order at the vertex: [incoming arc, outgoing arc, chords...].
      const int in_half = b.arc_in(i, (s - 1 + r) % r);
      const int out_half = b.arc_out(i, s);
      std::vector<int> cycle{in_half, out_half};
      for (int h : sites[s]) {
        cycle.push_back(b.chord_halfedge(h));
        b.site_of[b.chord_halfedge(h)] = {static_cast<int>(i), s};
      }
      for (size_t q = 0; q < cycle.size(); ++q)
        b.graph.next[cycle[q]] = cycle[(q + 1) % cycle.size()];
    }
  }
  for (size_t h = 0; h < g.mate.size(); ++h) {
    int hh = b.chord_halfedge(static_cast<int>(h));
    int mm = g.mate[h];
    if (mm < 0 || mm >= static_cast<int>(g.mate.size()))
      throw MalformedError("chord matching index out of range");
    b.graph.pairing[hh] = b.chord_halfedge(mm);
  }
  for (int h = 0; h < n_half; ++h)
    if (b.graph.pairing[h] < 0 || b.graph.next[h] < 0)
      throw MalformedError("half-chord missing from the site lists");
  return b;
}

namespace {

std::vector<int> sigma_of(const Fatgraph& fg) {
  std::vector<int> sigma(fg.size());
  for (int i = 0; i < fg.size(); ++i) sigma[i] = fg.next[fg.pairing[i]];
  return sigma;
}

// Orbit representative (least element) per half-edge, for cycle membership.
std::vector<int> orbit_rep(const std::vector<int>& perm) {
  std::vector<int> rep(perm.size(), -1);
  for (int start = 0; start < static_cast<int>(perm.size()); ++start) {
    if (rep[start] >= 0) continue;
    int cur = start;
    do {
      rep[cur] = start;
      cur = perm[cur];
    } while (cur != start);
  }
  return rep;
}

}  // namespace

std::vector<std::string> validate_type(const StringDiagramType& g) {
  std::vector<std::string> bad;
  auto flag = [&](const char* name) {
    if (std::find(bad.begin(), bad.end(), name) == bad.end()) bad.emplace_back(name);
  };

  if (g.k < 1 || g.k != static_cast<int>(g.circles.size())) flag("inputs");
  if (g.l < 1 || g.l != static_cast<int>(g.marks.size())) flag("outputs");

  const int n_half = static_cast<int>(g.mate.size());
  if (n_half == 0 || n_half % 2 != 0) flag("chi");
  for (int h = 0; h < n_half; ++h) {
    int m = g.mate[h];
    if (m < 0 || m >= n_half || m == h || g.mate[m] != h) {
      flag("matching");
      break;
    }
  }

  // Sites: nonempty, and together a partition of the half-chords.
  std::vector<int> seen(n_half, 0);
  bool sites_ok = true;
  for (const auto& c : g.circles) {
    if (c.sites.empty()) sites_ok = false;
    for (const auto& s : c.sites) {
      if (s.empty()) sites_ok = false;
      for (int h : s) {
        if (h < 0 || h >= n_half || seen[h]++) sites_ok = false;
      }
    }
  }
  for (int h = 0; h < n_half && sites_ok; ++h)
    if (!seen[h]) sites_ok = false;
  if (!sites_ok) flag("sites");
  if (!bad.empty()) return bad;  // structure too broken for graph checks

  FatgraphBridge b = underlying_fatgraph(g);
  if (!is_connected(b.graph)) {
    flag("connected");
    return bad;
  }

  SurfaceType st;
  try {
    st = surface_type(b.graph);
  } catch (const Error&) {
    flag("genus");
    return bad;
  }
  if (st.boundary_count != g.k + g.l) flag("boundary");
  if (st.genus < 0) flag("genus");
  // chi = -(2g - 2 + k + l) is then automatic: chi = 2 - 2g - (k + l).

  // Marks: valid references, one per output cycle, covering all of them.
  auto sigma = sigma_of(b.graph);
  auto rep = orbit_rep(sigma);
  std::set<int> input_reps;
  for (size_t i = 0; i < g.circles.size(); ++i) input_reps.insert(rep[b.arc_out(i, 0)]);
  std::set<int> marked_reps;
  bool marks_ok = static_cast<int>(g.marks.size()) == g.l;
  for (const auto& m : g.marks) {
    const DirEdge& d = m.at;
    if (d.kind == DirEdge::Kind::chord) {
      if (d.half < 0 || d.half >= n_half) {
        marks_ok = false;
        continue;
      }
    } else {
      if (d.circle < 0 || d.circle >= g.k ||
          d.arc < 0 || d.arc >= static_cast<int>(g.circles[d.circle].sites.size())) {
        marks_ok = false;
        continue;
      }
    }
    int r = rep[b.dir_edge_halfedge(d)];
    if (input_reps.count(r) || !marked_reps.insert(r).second) marks_ok = false;
  }
  if (marks_ok && static_cast<int>(marked_reps.size()) + static_cast<int>(input_reps.size()) !=
                      st.boundary_count)
    marks_ok = false;
  if (!marks_ok) flag("marks");
  return bad;
}

void require_valid(const StringDiagramType& g) {
  auto bad = validate_type(g);
  if (!bad.empty()) {
    std::string msg = "invalid string diagram type:";
    for (const auto& s : bad) msg += " " + s;
    throw MalformedError(msg);
  }
}

Signature diagram_signature(const StringDiagramType& g) {
  require_valid(g);
  SurfaceType st = surface_type(underlying_fatgraph(g).graph);
  Signature sig{st.genus, g.k, g.l};
  if (g.chord_count() != 2 * sig.g - 2 + sig.k + sig.l)
    throw MalformedError("chord count inconsistent with surface type");
  return sig;
}

std::vector<std::pair<int, int>> canonical_chord_order(const StringDiagramType& g) {
  std::vector<std::pair<int, int>> chords;
  std::vector<char> placed(g.mate.size(), 0);
  for (const auto& c : g.circles)
    for (const auto& site : c.sites)
      for (int h : site) {
        if (placed[h]) continue;
        placed[h] = placed[g.mate[h]] = 1;
        chords.emplace_back(h, g.mate[h]);  // first occurrence is phi_e(0)
      }
  return chords;
}

StringDiagramType canonicalize(const StringDiagramType& g) {
  std::vector<int> rename(g.mate.size(), -1);
  int counter = 0;
  for (const auto& c : g.circles)
    for (const auto& site : c.sites)
      for (int h : site) rename[h] = counter++;

  StringDiagramType out = g;
  for (auto& c : out.circles)
    for (auto& site : c.sites)
      for (auto& h : site) h = rename[h];
  for (size_t h = 0; h < g.mate.size(); ++h) out.mate[rename[h]] = rename[g.mate[h]];
  for (auto& m : out.marks)
    if (m.at.kind == DirEdge::Kind::chord) m.at.half = rename[m.at.half];
  return out;
}

std::string canonical_key(const StringDiagramType& g) {
  return type_to_json(canonicalize(g)).dump();
}

bool is_in_sd(const StringDiagramType& g) {
  // Union-find over sites; a chord closing a cycle breaks the forest.
  std::vector<int> site_id(g.mate.size(), -1);
  int n_sites = 0;
  for (const auto& c : g.circles)
    for (const auto& site : c.sites) {
      for (int h : site) site_id[h] = n_sites;
      ++n_sites;
    }
  std::vector<int> parent(n_sites);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int h = 0; h < static_cast<int>(g.mate.size()); ++h) {
    if (h > g.mate[h]) continue;
    int a = find(site_id[h]);
    int bb = find(site_id[g.mate[h]]);
    if (a == bb) return false;
    parent[a] = bb;
  }
  return true;
}

Rational arc_length(const StringDiagramType& g, const std::vector<std::vector<Rational>>& t,
                    int circle, int arc) {
  const Circle& c = g.circles[circle];
  const int r = static_cast<int>(c.sites.size());
  const auto& ti = t[circle];
  if (c.marked_vertex) return ti[arc];
  if (arc < r - 1) return ti[arc + 1];
  return ti[r] + ti[0];  // through the marked point
}

Rational site_position(const StringDiagramType& g, const std::vector<std::vector<Rational>>& t,
                       int circle, int site) {
  const Circle& c = g.circles[circle];
  const auto& ti = t[circle];
  Rational pos = 0;
  const int upto = c.marked_vertex ? site : site + 1;
  for (int u = 0; u < upto; ++u) pos += ti[u];
  return pos;
}

std::vector<CycleStep> output_cycle_word(const StringDiagramType& g, int j) {
  std::vector<std::vector<Rational>> t(g.circles.size());
  for (size_t i = 0; i < g.circles.size(); ++i) {
    int n = g.circles[i].n_free();
    t[i].assign(n + 1, Rational(1, n + 1));
  }
  return output_cycle_word(g, j, t);
}

std::vector<CycleStep> output_cycle_word(const StringDiagramType& g, int j,
                                         const std::vector<std::vector<Rational>>& t) {
  require_valid(g);
  if (j < 0 || j >= g.l) throw DomainError("output index out of range");
  FatgraphBridge b = underlying_fatgraph(g);
  auto sigma = sigma_of(b.graph);
  const int start = b.dir_edge_halfedge(g.marks[j].at);
  std::vector<CycleStep> word;
  int cur = start;
  do {
    CycleStep step;
    step.edge = b.halfedge_dir_edge(cur);
    step.is_chord = step.edge.kind == DirEdge::Kind::chord;
    step.length = step.is_chord ? Rational(1) : arc_length(g, t, step.edge.circle, step.edge.arc);
    word.push_back(std::move(step));
    cur = sigma[cur];
  } while (cur != start);
  return word;
}

void check_metric(const MetricStringDiagram& x) {
  const StringDiagramType& g = x.type;
  require_valid(g);
  if (x.t.size() != g.circles.size()) throw DomainError("t arity mismatch");
  for (size_t i = 0; i < g.circles.size(); ++i) {
    if (static_cast<int>(x.t[i].size()) != g.circles[i].n_free() + 1)
      throw DomainError("t arity mismatch on circle " + std::to_string(i));
    Rational sum = 0;
    for (const auto& v : x.t[i]) {
      if (v < 0) throw DomainError("negative circle coordinate");
      sum += v;
    }
    if (sum != 1) throw DomainError("circle coordinates do not sum to 1");
  }
  int n_edge_marks = 0;
  for (const auto& m : g.marks) n_edge_marks += m.in_edge ? 1 : 0;
  if (static_cast<int>(x.p.size()) != n_edge_marks) throw DomainError("p arity mismatch");
  for (const auto& v : x.p)
    if (v < 0 || v > 1) throw DomainError("interval coordinate out of [0,1]");
}

RealizedDiagram realize(const MetricStringDiagram& x) {
  check_metric(x);
  const StringDiagramType& g = x.type;

  // Merge coincident sites.  Groups at position 0 collect the pos==1 suffix
  // first, then the pos==0 prefix; within one group the cyclic order of the
  // merged vertex lists the sites in reverse circle order (the later vertex
  // of a vanishing arc contributes its chords first).
  RealizedDiagram out;
  out.circles.resize(g.circles.size());
  // Per circle: merged position of each original site, and new arc index of
  // each original arc (vanished arcs get -1).
  std::vector<std::vector<Rational>> site_pos(g.circles.size());
  std::vector<std::vector<int>> new_arc(g.circles.size());
  for (size_t i = 0; i < g.circles.size(); ++i) {
    const int r = static_cast<int>(g.circles[i].sites.size());
    std::vector<Rational> pos(r);
    for (int s = 0; s < r; ++s) pos[s] = site_position(g, x.t, static_cast<int>(i), s);
    // Normalize the wrap: a site at cumulative position 1 sits at the
    // marked point.
    std::vector<Rational> norm(r);
    for (int s = 0; s < r; ++s) norm[s] = pos[s] == 1 ? Rational(0) : pos[s];
    site_pos[i] = norm;

    std::map<Rational, std::vector<int>> groups;  // position -> sites, circle order
    for (int s = 0; s < r; ++s) groups[norm[s]].push_back(s);
    // In the zero-position group the pos==1 sites come before the pos==0
    // sites around the circle.
    if (auto it = groups.find(Rational(0)); it != groups.end()) {
      std::vector<int> before, after;
      for (int s : it->second) (pos[s] == 1 ? before : after).push_back(s);
      before.insert(before.end(), after.begin(), after.end());
      it->second = std::move(before);
    }
    for (const auto& [position, members] : groups) {
      std::vector<int> merged;
      for (auto mit = members.rbegin(); mit != members.rend(); ++mit)
        for (int h : g.circles[i].sites[*mit]) merged.push_back(h);
      out.circles[i].points.emplace_back(position, std::move(merged));
    }
    // Post-merge arc indices: arc j survives iff its endpoints' merged
    // positions differ; surviving arcs are indexed by their start point's
    // rank among merged points.
    new_arc[i].assign(r, -1);
    auto rank_of = [&](const Rational& q) {
      int rank = 0;
      for (const auto& pt : out.circles[i].points) {
        if (pt.first == q) return rank;
        ++rank;
      }
      throw InternalError("merged point lookup failed");
    };
    for (int j = 0; j < r; ++j) {
      const Rational a = norm[j];
      const Rational bpos = norm[(j + 1) % r];
      if (a == bpos && arc_length(g, x.t, static_cast<int>(i), j) == 0) continue;
      new_arc[i][j] = rank_of(a);
    }
  }

  // Rename half-chords along the merged flattened order.
  std::vector<int> rename(g.mate.size(), -1);
  int counter = 0;
  for (auto& rc : out.circles)
    for (auto& pt : rc.points)
      for (int h : pt.second) rename[h] = counter++;
  for (auto& rc : out.circles)
    for (auto& pt : rc.points)
      for (auto& h : pt.second) h = rename[h];
  out.mate.assign(g.mate.size(), -1);
  for (size_t h = 0; h < g.mate.size(); ++h) out.mate[rename[h]] = rename[g.mate[h]];

  // Marks.
  int p_idx = 0;
  for (const auto& m : g.marks) {
    RealizedDiagram::Mark rm;
    const DirEdge& d = m.at;
    if (m.in_edge) {
      Rational p = x.p[p_idx++];
      if (d.kind == DirEdge::Kind::chord) {
        rm.in_edge = true;
        rm.d = DirEdge::on_chord(rename[d.half]);
        rm.offset = p;
      } else {
        Rational len = arc_length(g, x.t, d.circle, d.arc);
        Rational off = p * len;
        if (len == 0 || off == 0 || off == len) {
          // Pinned to an endpoint of the (possibly vanished) arc: a corner.
          rm.in_edge = false;
          if (off == 0 && len != 0) {
            rm.d = DirEdge::on_arc(d.circle, new_arc[d.circle][d.arc]);
          } else {
            // Corner at the arc's source site: the cycle continues with the
            // first chord attached there.
            int src_site = d.arc;
            int h0 = g.circles[d.circle].sites[src_site].front();
            rm.d = DirEdge::on_chord(rename[h0]);
          }
        } else {
          rm.in_edge = true;
          rm.d = DirEdge::on_arc(d.circle, new_arc[d.circle][d.arc]);
          rm.offset = off;
        }
      }
    } else {
      rm.in_edge = false;
      if (d.kind == DirEdge::Kind::chord) {
        rm.d = DirEdge::on_chord(rename[d.half]);
      } else if (new_arc[d.circle][d.arc] >= 0) {
        rm.d = DirEdge::on_arc(d.circle, new_arc[d.circle][d.arc]);
      } else {
        // Corner before a vanished backward arc: same corner as before the
        // first chord at the arc's source site.
        int h0 = g.circles[d.circle].sites[d.arc].front();
        rm.d = DirEdge::on_chord(rename[h0]);
      }
    }
    out.marks.push_back(std::move(rm));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json dir_edge_to_json(const DirEdge& d) {
  if (d.kind == DirEdge::Kind::chord) return nlohmann::json{{"chord", d.half}};
  return nlohmann::json{{"arc", {d.circle, d.arc}}};
}

DirEdge dir_edge_from_json(const nlohmann::json& j) {
  if (j.contains("chord")) return DirEdge::on_chord(j.at("chord").get<int>());
  auto arr = j.at("arc");
  return DirEdge::on_arc(arr.at(0).get<int>(), arr.at(1).get<int>());
}

}  // namespace

nlohmann::json type_to_json(const StringDiagramType& g) {
  nlohmann::json circles = nlohmann::json::array();
  for (const auto& c : g.circles)
    circles.push_back({{"marked", c.marked_vertex}, {"sites", c.sites}});
  nlohmann::json marks = nlohmann::json::array();
  for (const auto& m : g.marks) {
    nlohmann::json jm = dir_edge_to_json(m.at);
    jm["kind"] = m.in_edge ? "edge" : "corner";
    marks.push_back(std::move(jm));
  }
  int genus = (g.chord_count() - g.k - g.l + 2) / 2;
  return nlohmann::json{{"schema", "diagram.v1"}, {"g", genus},      {"k", g.k},
                        {"l", g.l},               {"circles", circles}, {"mate", g.mate},
                        {"marks", marks}};
}

StringDiagramType type_from_json(const nlohmann::json& j) {
  StringDiagramType g;
  g.k = j.at("k").get<int>();
  g.l = j.at("l").get<int>();
  for (const auto& jc : j.at("circles")) {
    Circle c;
    c.marked_vertex = jc.at("marked").get<bool>();
    c.sites = jc.at("sites").get<std::vector<std::vector<int>>>();
    g.circles.push_back(std::move(c));
  }
  g.mate = j.at("mate").get<std::vector<int>>();
  for (const auto& jm : j.at("marks")) {
    OutputMark m;
    m.in_edge = jm.at("kind").get<std::string>() == "edge";
    m.at = dir_edge_from_json(jm);
    g.marks.push_back(m);
  }
  require_valid(g);
  return g;
}

nlohmann::json metric_to_json(const MetricStringDiagram& x) {
  nlohmann::json j = type_to_json(x.type);
  nlohmann::json t = nlohmann::json::array();
  for (const auto& ti : x.t) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& v : ti) row.push_back(rational_to_string(v));
    t.push_back(std::move(row));
  }
  nlohmann::json p = nlohmann::json::array();
  for (const auto& v : x.p) p.push_back(rational_to_string(v));
  j["coords"] = nlohmann::json{{"t", t}, {"p", p}};
  return j;
}

MetricStringDiagram metric_from_json(const nlohmann::json& j) {
  MetricStringDiagram x;
  x.type = type_from_json(j);
  const auto& coords = j.at("coords");
  for (const auto& row : coords.at("t")) {
    std::vector<Rational> ti;
    for (const auto& v : row) ti.push_back(rational_from_string(v.get<std::string>()));
    x.t.push_back(std::move(ti));
  }
  for (const auto& v : coords.at("p")) x.p.push_back(rational_from_string(v.get<std::string>()));
  check_metric(x);
  return x;
}

}  // namespace sd
