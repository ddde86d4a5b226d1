#include "sd/ez.hpp"

namespace sd {

bool GridSimplex::degenerate() const {
  for (size_t i = 0; i + 1 < verts.size(); ++i)
    if (verts[i] == verts[i + 1]) return true;
  return false;
}

void FormalChain::add(const GridSimplex& s, long long coeff) {
  if (coeff == 0 || s.degenerate()) return;
  auto [it, inserted] = terms_.try_emplace(s, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

FormalChain& FormalChain::operator+=(const FormalChain& other) {
  for (const auto& [s, c] : other.terms_) add(s, c);
  return *this;
}

FormalChain& FormalChain::operator*=(long long c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, v] : terms_) v *= c;
  return *this;
}

FormalChain ez_fundamental_chain(const std::vector<int>& shape) {
  const int p = static_cast<int>(shape.size());
  if (p < 1) throw DomainError("ez_fundamental_chain needs at least one factor");
  for (int j : shape)
    if (j < 0) throw DomainError("negative simplex dimension");

  FormalChain out;
  std::vector<int> pos(p, 0);
  std::vector<std::vector<int>> path{pos};
  std::vector<int> word;  // factor incremented at each step

  // Depth-first over staircase words; the sign is the parity of inversions
  // of the word (pairs of steps in decreasing factor order).
  auto rec = [&](auto&& self) -> void {
    bool complete = true;
    for (int r = 0; r < p; ++r)
      if (pos[r] < shape[r]) complete = false;
    if (complete) {
      long long inv = 0;
      for (size_t a = 0; a < word.size(); ++a)
        for (size_t b = a + 1; b < word.size(); ++b)
          if (word[a] > word[b]) ++inv;
      out.add(GridSimplex{path}, inv % 2 == 0 ? 1 : -1);
      return;
    }
    for (int r = 0; r < p; ++r) {
      if (pos[r] >= shape[r]) continue;
      ++pos[r];
      path.push_back(pos);
      word.push_back(r);
      self(self);
      word.pop_back();
      path.pop_back();
      --pos[r];
    }
  };
  rec(rec);
  return out;
}

FormalChain boundary_of_chain(const FormalChain& chain) {
  FormalChain out;
  for (const auto& [s, c] : chain.terms()) {
    if (s.verts.size() <= 1) continue;  // 0-simplices have no boundary
    for (size_t i = 0; i < s.verts.size(); ++i) {
      GridSimplex face;
      face.verts.reserve(s.verts.size() - 1);
      for (size_t q = 0; q < s.verts.size(); ++q)
        if (q != i) face.verts.push_back(s.verts[q]);
      out.add(face, i % 2 == 0 ? c : -c);
    }
  }
  return out;
}

FormalChain face_pushforward(const FormalChain& chain, int factor, int s) {
  FormalChain out;
  for (const auto& [sim, c] : chain.terms()) {
    GridSimplex img = sim;
    for (auto& v : img.verts) {
      if (factor >= static_cast<int>(v.size())) throw DomainError("factor out of range");
      if (v[factor] >= s) ++v[factor];
    }
    out.add(img, c);
  }
  return out;
}

FormalChain ez_product(const FormalChain& a, const FormalChain& b) {
  FormalChain out;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      const int qa = sa.dim();
      const int qb = sb.dim();
      // Interleave the two vertex sequences by all (qa, qb)-shuffles.
      std::vector<int> word;
      auto rec = [&](auto&& self, int ia, int ib) -> void {
        if (ia == qa && ib == qb) {
          GridSimplex prod;
          int xa = 0;
          int xb = 0;
          auto append = [&]() {
            std::vector<int> v = sa.verts[xa];
            v.insert(v.end(), sb.verts[xb].begin(), sb.verts[xb].end());
            prod.verts.push_back(std::move(v));
          };
          append();
          long long inv = 0;
          for (size_t u = 0; u < word.size(); ++u)
            for (size_t w = u + 1; w < word.size(); ++w)
              if (word[u] > word[w]) ++inv;
          for (int step : word) {
            if (step == 0) ++xa; else ++xb;
            append();
          }
          out.add(prod, inv % 2 == 0 ? ca * cb : -ca * cb);
          return;
        }
        if (ia < qa) {
          word.push_back(0);
          self(self, ia + 1, ib);
          word.pop_back();
        }
        if (ib < qb) {
          word.push_back(1);
          self(self, ia, ib + 1);
          word.pop_back();
        }
      };
      rec(rec, 0, 0);
    }
  }
  return out;
}

BoundaryIdentity ez_boundary_identity(const std::vector<int>& cell_shape, int n) {
  std::vector<int> full = cell_shape;
  full.push_back(n);
  const int p = static_cast<int>(cell_shape.size());
  int m = 0;
  for (int j : cell_shape) m += j;

  BoundaryIdentity id;
  id.lhs = boundary_of_chain(ez_fundamental_chain(full));

  // Simplex-factor faces, full range s = 0..j_r.
  int offset = 0;
  for (int r = 0; r < p; ++r) {
    const int jr = cell_shape[r];
    for (int s = 0; s <= jr && jr >= 1; ++s) {
      std::vector<int> face_shape = full;
      --face_shape[r];
      FormalChain term = face_pushforward(ez_fundamental_chain(face_shape), r, s);
      term *= ((offset + s) % 2 == 0) ? 1 : -1;
      id.rhs += term;
    }
    offset += jr;
  }
  // Delta^n faces with the extra (-1)^m.
  for (int i = 0; i <= n && n >= 1; ++i) {
    std::vector<int> face_shape = full;
    --face_shape[p];
    FormalChain term = face_pushforward(ez_fundamental_chain(face_shape), p, i);
    term *= ((m + i) % 2 == 0) ? 1 : -1;
    id.rhs += term;
  }
  return id;
}

}  // namespace sd
