#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "sd/common.hpp"

namespace sd {

// Half-edge representation of a fatgraph.  Half-edges are dense integers
// 0..H-1.  `pairing` is the fixed-point-free involution whose orbits are the
// edges; `next` is the permutation whose orbits are the vertices, giving the
// cyclic order of half-edges around each vertex.
//
// An oriented edge is identified with the half-edge at its initial vertex.
struct Fatgraph {
  std::vector<int> pairing;
  std::vector<int> next;

  int size() const { return static_cast<int>(pairing.size()); }

  nlohmann::json to_json() const;
  static Fatgraph from_json(const nlohmann::json& j);
};

struct SurfaceType {
  int genus = 0;
  int boundary_count = 0;
  int euler_characteristic = 0;
};

// Throws MalformedError if the involution/permutation structure is broken.
void check_fatgraph(const Fatgraph& fg);

// Orbits of sigma = next . pairing.  Each orbit appears once, rotated so its
// least half-edge comes first; orbits sorted by that least element.
std::vector<std::vector<int>> boundary_cycles(const Fatgraph& fg);

// Connectivity of the underlying graph (vertices = next-orbits, edges =
// pairing-orbits).  The empty graph counts as connected.
bool is_connected(const Fatgraph& fg);

// chi = V - E, n = #boundary cycles, g from 2 - 2g - n = chi.
// Throws DomainError on disconnected input, MalformedError if the genus
// comes out negative or non-integral.
SurfaceType surface_type(const Fatgraph& fg);

// Vertices as next-orbits, in canonical order (least half-edge first).
std::vector<std::vector<int>> vertex_orbits(const Fatgraph& fg);

}  // namespace sd
