#pragma once

#include <vector>

#include "sd/diagram.hpp"

// Shared fixtures for the test suites.
namespace fixtures {

// The (0,2,1) type with one chord between the two circles and a generic
// output mark on the given directed edge of the output cycle.
inline sd::StringDiagramType type_021(sd::OutputMark mark) {
  sd::StringDiagramType g;
  g.k = 2;
  g.l = 1;
  g.circles.resize(2);
  g.circles[0].marked_vertex = false;
  g.circles[0].sites = {{0}};
  g.circles[1].marked_vertex = false;
  g.circles[1].sites = {{1}};
  g.mate = {1, 0};
  g.marks = {mark};
  return g;
}

// Mark in the interior of the chord, traversed from the circle-0 endpoint.
inline sd::StringDiagramType type_021_chord_marked() {
  return type_021(sd::OutputMark{true, sd::DirEdge::on_chord(0)});
}

// Mark in the interior of circle 1's arc (traversed backward).
inline sd::StringDiagramType type_021_arc_marked() {
  return type_021(sd::OutputMark{true, sd::DirEdge::on_arc(1, 0)});
}

// One circle, two chords with endpoints interleaved (a b a' b'): the genus-1
// single-output type underlying the (1,1,1) top cells.
inline sd::StringDiagramType type_111(sd::OutputMark mark) {
  sd::StringDiagramType g;
  g.k = 1;
  g.l = 1;
  g.circles.resize(1);
  g.circles[0].sites = {{0}, {1}, {2}, {3}};
  g.mate = {2, 3, 0, 1};
  g.marks = {mark};
  return g;
}

inline sd::MetricStringDiagram uniform_point(const sd::StringDiagramType& g) {
  sd::MetricStringDiagram x;
  x.type = g;
  x.t.resize(g.circles.size());
  for (size_t i = 0; i < g.circles.size(); ++i) {
    int n = g.circles[i].n_free();
    x.t[i].assign(n + 1, sd::Rational(1, n + 1));
  }
  for (const auto& m : g.marks)
    if (m.in_edge) x.p.emplace_back(1, 2);
  return x;
}

}  // namespace fixtures
