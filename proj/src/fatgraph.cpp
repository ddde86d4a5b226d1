#include "sd/fatgraph.hpp"

#include <algorithm>
#include <numeric>

namespace sd {

std::string rational_to_string(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw MalformedError("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw MalformedError("cannot parse rational '" + s + "': " + e.what());
  }
}

nlohmann::json Fatgraph::to_json() const {
  return nlohmann::json{{"pairing", pairing}, {"next", next}};
}

Fatgraph Fatgraph::from_json(const nlohmann::json& j) {
  Fatgraph fg;
  fg.pairing = j.at("pairing").get<std::vector<int>>();
  fg.next = j.at("next").get<std::vector<int>>();
  check_fatgraph(fg);
  return fg;
}

void check_fatgraph(const Fatgraph& fg) {
  const int h = fg.size();
  if (static_cast<int>(fg.next.size()) != h)
    throw MalformedError("pairing and next have different sizes");
  std::vector<char> seen(h, 0);
  for (int i = 0; i < h; ++i) {
    int p = fg.pairing[i];
    if (p < 0 || p >= h) throw MalformedError("pairing index out of range");
    if (p == i) throw MalformedError("pairing has a fixed point");
    if (fg.pairing[p] != i) throw MalformedError("pairing is not an involution");
    int n = fg.next[i];
    if (n < 0 || n >= h) throw MalformedError("next index out of range");
    if (seen[n]) throw MalformedError("next is not a permutation");
    seen[n] = 1;
  }
}

namespace {

// Orbits of an arbitrary permutation, canonically rotated and ordered.
std::vector<std::vector<int>> orbits_of(const std::vector<int>& perm) {
  const int h = static_cast<int>(perm.size());
  std::vector<char> visited(h, 0);
  std::vector<std::vector<int>> out;
  for (int start = 0; start < h; ++start) {
    if (visited[start]) continue;
    std::vector<int> cyc;
    int cur = start;
    do {
      visited[cur] = 1;
      cyc.push_back(cur);
      cur = perm[cur];
    } while (cur != start);
    out.push_back(std::move(cyc));
  }
  return out;  // least element first by construction; starts increase
}

}  // namespace

std::vector<std::vector<int>> boundary_cycles(const Fatgraph& fg) {
  check_fatgraph(fg);
  std::vector<int> sigma(fg.size());
  for (int i = 0; i < fg.size(); ++i) sigma[i] = fg.next[fg.pairing[i]];
  return orbits_of(sigma);
}

std::vector<std::vector<int>> vertex_orbits(const Fatgraph& fg) {
  return orbits_of(fg.next);
}

bool is_connected(const Fatgraph& fg) {
  const int h = fg.size();
  if (h == 0) return true;
  // Union half-edges along both permutations; one component iff connected.
  std::vector<int> parent(h);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int i = 0; i < h; ++i) {
    unite(i, fg.pairing[i]);
    unite(i, fg.next[i]);
  }
  int root = find(0);
  for (int i = 1; i < h; ++i)
    if (find(i) != root) return false;
  return true;
}

SurfaceType surface_type(const Fatgraph& fg) {
  check_fatgraph(fg);
  if (!is_connected(fg)) throw DomainError("surface_type requires a connected fatgraph");
  const int vertices = static_cast<int>(vertex_orbits(fg).size());
  const int edges = fg.size() / 2;
  SurfaceType st;
  st.euler_characteristic = vertices - edges;
  st.boundary_count = static_cast<int>(boundary_cycles(fg).size());
  const int twice_genus = 2 - st.euler_characteristic - st.boundary_count;
  if (twice_genus % 2 != 0 || twice_genus < 0)
    throw MalformedError("fatgraph has invalid genus");
  st.genus = twice_genus / 2;
  return st;
}

}  // namespace sd
