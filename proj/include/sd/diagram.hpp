#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "sd/common.hpp"
#include "sd/fatgraph.hpp"

namespace sd {

// A reference to a directed edge of the underlying fatgraph of a string
// diagram that stays meaningful across canonical renaming:
//   - chord: the chord traversed away from the endpoint carrying half-chord
//     `half`;
//   - arc_back: the arc `arc` of circle `circle`, traversed against the
//     circle orientation.  (Forward arc traversals make up the input
//     boundary cycles, so output-cycle data only ever needs arc_back.)
struct DirEdge {
  enum class Kind : uint8_t { chord, arc_back };
  Kind kind = Kind::chord;
  int half = -1;    // chord only
  int circle = -1;  // arc_back only
  int arc = -1;     // arc_back only

  static DirEdge on_chord(int half) { return {Kind::chord, half, -1, -1}; }
  static DirEdge on_arc(int circle, int arc) { return {Kind::arc_back, -1, circle, arc}; }
  friend bool operator==(const DirEdge&, const DirEdge&) = default;
};

// Marked point of one output boundary cycle.  `in_edge` true: the point lies
// in the interior of directed edge `at`; false: it sits at the corner of the
// cycle immediately before `at`.  A directed edge lies on exactly one
// boundary cycle, so `at` also tells which cycle carries the mark.
struct OutputMark {
  bool in_edge = false;
  DirEdge at;
  friend bool operator==(const OutputMark&, const OutputMark&) = default;
};

// One input circle.  `sites` lists the vertices in circle order; every site
// carries the half-chords attached there, ordered so that the full cyclic
// order at the vertex is [incoming arc, outgoing arc, sites[s][0], ...].
// If `marked_vertex` is true, site 0 sits exactly at the input marked point;
// otherwise site 0 is the first vertex strictly after the marked point and
// the last arc runs through the marked point.
//
// Arc j of the circle joins site j to site (j+1) mod r, r = sites.size().
struct Circle {
  bool marked_vertex = false;
  std::vector<std::vector<int>> sites;

  int n_free() const {  // vertices not at the marked point (simplex dim)
    return static_cast<int>(sites.size()) - (marked_vertex ? 1 : 0);
  }
  friend bool operator==(const Circle&, const Circle&) = default;
};

// Combinatorial type of a string diagram: k ordered input circles carrying
// all 2C half-chords, the chord matching, and one mark per ordered output.
struct StringDiagramType {
  int k = 0;
  int l = 0;
  std::vector<Circle> circles;
  std::vector<int> mate;  // involution on half-chords 0..2C-1
  std::vector<OutputMark> marks;

  int chord_count() const { return static_cast<int>(mate.size()) / 2; }
  friend bool operator==(const StringDiagramType&, const StringDiagramType&) = default;
};

// A point of the moduli space: a type plus exact cell coordinates.
// t[i] has circles[i].n_free() + 1 entries (arc gaps from the marked point,
// nonnegative, summing to 1); p has one entry in [0,1] per in-edge mark, in
// output order.
struct MetricStringDiagram {
  StringDiagramType type;
  std::vector<std::vector<Rational>> t;
  std::vector<Rational> p;
};

// ---------------------------------------------------------------------------
// Underlying fatgraph bridge.
//
// Half-edge layout: for circle i and arc j, the out-half (at site j) and the
// in-half (at site j+1) come first, circle by circle; the 2C chord halves
// follow, in half-chord id order.
struct FatgraphBridge {
  Fatgraph graph;
  int chord_base = 0;                      // first chord half-edge id
  std::vector<int> arc_base;               // per circle: first arc half-edge id
  std::vector<std::pair<int, int>> site_of; // per half-edge: (circle, site)

  int arc_out(int circle, int arc) const { return arc_base[circle] + 2 * arc; }
  int arc_in(int circle, int arc) const { return arc_base[circle] + 2 * arc + 1; }
  int chord_halfedge(int half) const { return chord_base + half; }

  bool is_chord_halfedge(int h) const { return h >= chord_base; }
  int chord_half(int h) const { return h - chord_base; }
  // For an arc half-edge: (circle, arc, is_out).
  std::tuple<int, int, bool> arc_of(int h) const;

  int dir_edge_halfedge(const DirEdge& d) const;
  DirEdge halfedge_dir_edge(int h) const;
};

FatgraphBridge underlying_fatgraph(const StringDiagramType& g);

// ---------------------------------------------------------------------------

// Checks every invariant; returns the list of violated invariant names
// (empty means valid).  Never throws on bad data.
std::vector<std::string> validate_type(const StringDiagramType& g);

// Convenience: throw MalformedError if validate_type is nonempty.
void require_valid(const StringDiagramType& g);

struct Signature {
  int g = 0;
  int k = 0;
  int l = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature diagram_signature(const StringDiagramType& g);

// Total order on half-chords by (circle, site, position at site); chords
// ordered by first occurrence.  Entry r is the pair (half at phi_e(0),
// half at phi_e(1)) of the r-th chord.
std::vector<std::pair<int, int>> canonical_chord_order(const StringDiagramType& g);

// Renames half-chords along canonical_chord_order so the flattened site
// lists read 0,1,2,...,2C-1.  Isomorphic types canonicalize identically.
StringDiagramType canonicalize(const StringDiagramType& g);

// UTF-8 canonical JSON of the canonicalized record (no coordinates).
std::string canonical_key(const StringDiagramType& g);

// True iff the chord subgraph (sites as vertices, chords as edges) is a
// forest.
bool is_in_sd(const StringDiagramType& g);

// One directed edge of an output cycle word, with geometry attached.
struct CycleStep {
  DirEdge edge;
  bool is_chord = false;
  Rational length;  // chord: 1; arc: its metric length under given t
};

// The j-th output cycle (0-based), rotated to start at the directed edge
// carrying / following the mark.  Lengths use unit arcs unless t given.
std::vector<CycleStep> output_cycle_word(const StringDiagramType& g, int j);
std::vector<CycleStep> output_cycle_word(const StringDiagramType& g, int j,
                                         const std::vector<std::vector<Rational>>& t);

// ---------------------------------------------------------------------------
// Realized metric graph: the concrete geometry of a metric string diagram
// after merging zero-length arcs.  This is computed by an independent
// geometric normalization (sorting exact positions), not by cell bookkeeping,
// so it can serve as an oracle for locate_cell.  Half-chord ids are renamed
// to the flattened order of the merged geometry, so two diagrams realize
// equal iff they are the same marked metric graph.
struct RealizedCircle {
  // Vertices in circle order: position in [0,1) from the marked point and
  // the attached half-chords in cyclic-order convention.
  std::vector<std::pair<Rational, std::vector<int>>> points;
  friend bool operator==(const RealizedCircle&, const RealizedCircle&) = default;
};

struct RealizedDiagram {
  std::vector<RealizedCircle> circles;
  std::vector<int> mate;
  // Output marks: at the corner before directed edge `d`, or inside `d` at
  // geometric distance `offset` from its traversal start.  `d` uses renamed
  // half-chord ids and post-merge arc indices.
  struct Mark {
    bool in_edge = false;
    DirEdge d;
    Rational offset;
    friend bool operator==(const Mark&, const Mark&) = default;
  };
  std::vector<Mark> marks;

  friend bool operator==(const RealizedDiagram&, const RealizedDiagram&) = default;
};

// Throws DomainError on coordinate arity mismatch.
RealizedDiagram realize(const MetricStringDiagram& x);

Rational arc_length(const StringDiagramType& g, const std::vector<std::vector<Rational>>& t,
                    int circle, int arc);

// Position of a site in [0,1) measured from the marked point.
Rational site_position(const StringDiagramType& g, const std::vector<std::vector<Rational>>& t,
                       int circle, int site);

// ---------------------------------------------------------------------------
// JSON (schema diagram.v1)

nlohmann::json type_to_json(const StringDiagramType& g);
StringDiagramType type_from_json(const nlohmann::json& j);
nlohmann::json metric_to_json(const MetricStringDiagram& x);
MetricStringDiagram metric_from_json(const nlohmann::json& j);

void check_metric(const MetricStringDiagram& x);  // arity + range checks

}  // namespace sd
