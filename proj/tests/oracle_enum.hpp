#pragma once

// Independent enumeration oracle: generates ALL valid combinatorial types of
// a signature directly (site shapes x matchings x orderings x markings),
// without going through top cells and faces.  Used to check that the face
// closure of the top cells is exactly the whole complex.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sd/diagram.hpp"
#include "sd/fatgraph.hpp"

namespace oracle {

inline void compositions(int total, std::vector<std::vector<int>>& out) {
  // all ordered compositions of `total` into parts >= 1
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int rem) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = 1; part <= rem; ++part) {
      cur.push_back(part);
      rec(rem - part);
      cur.pop_back();
    }
  };
  rec(total);
}

inline std::set<std::string> all_type_keys(int g, int k, int l) {
  const int chords = 2 * g - 2 + k + l;
  const int halves = 2 * chords;
  std::set<std::string> keys;

  // Distribute half counts over circles, each >= 1.
  std::vector<std::vector<int>> per_circle_counts;
  {
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int parts) {
      if (parts == 1) {
        if (rem >= 1) {
          cur.push_back(rem);
          per_circle_counts.push_back(cur);
          cur.pop_back();
        }
        return;
      }
      for (int first = 1; first <= rem - (parts - 1); ++first) {
        cur.push_back(first);
        rec(rem - first, parts - 1);
        cur.pop_back();
      }
    };
    rec(halves, k);
  }

  for (const auto& counts : per_circle_counts) {
    // Per circle: a composition into site sizes and a marked flag.
    std::vector<std::vector<std::vector<int>>> site_comps(k);
    for (int i = 0; i < k; ++i) compositions(counts[i], site_comps[i]);

    std::vector<int> choice(k, 0);
    std::vector<int> marked(k, 0);
    std::function<void(int)> circle_rec = [&](int i) {
      if (i == k) {
        // Build the skeleton with flattened ids.
        sd::StringDiagramType base;
        base.k = k;
        base.l = l;
        base.circles.resize(k);
        int id = 0;
        for (int c = 0; c < k; ++c) {
          base.circles[c].marked_vertex = marked[c] != 0;
          for (int size : site_comps[c][choice[c]]) {
            std::vector<int> site;
            for (int u = 0; u < size; ++u) site.push_back(id++);
            base.circles[c].sites.push_back(std::move(site));
          }
        }
        base.mate.assign(halves, -1);

        std::vector<int> mate(halves, -1);
        std::vector<char> used(halves, 0);
        std::function<void()> match_rec = [&]() {
          int first = -1;
          for (int x = 0; x < halves; ++x)
            if (!used[x]) {
              first = x;
              break;
            }
          if (first < 0) {
            base.mate = mate;
            auto bridge = sd::underlying_fatgraph(base);
            if (!sd::is_connected(bridge.graph)) return;
            sd::SurfaceType st;
            try {
              st = sd::surface_type(bridge.graph);
            } catch (const sd::Error&) {
              return;
            }
            if (st.genus != g || st.boundary_count != k + l) return;
            auto cycles = sd::boundary_cycles(bridge.graph);
            std::set<int> input_heads;
            for (int c = 0; c < k; ++c) input_heads.insert(bridge.arc_out(c, 0));
            std::vector<std::vector<int>> outputs;
            for (auto& cyc : cycles) {
              bool input = false;
              for (int h : cyc)
                if (input_heads.count(h)) input = true;
              if (!input) outputs.push_back(cyc);
            }
            // All output orders x all markings (corner or edge on any
            // directed edge of the cycle).
            std::vector<int> perm(l);
            for (int x = 0; x < l; ++x) perm[x] = x;
            do {
              std::vector<sd::StringDiagramType> partial{base};
              for (int j = 0; j < l; ++j) {
                std::vector<sd::StringDiagramType> next;
                for (int h : outputs[perm[j]]) {
                  sd::DirEdge d = bridge.halfedge_dir_edge(h);
                  for (int edge = 0; edge < 2; ++edge)
                    for (const auto& pt : partial) {
                      sd::StringDiagramType cand = pt;
                      cand.marks.push_back(sd::OutputMark{edge == 1, d});
                      next.push_back(std::move(cand));
                    }
                }
                partial = std::move(next);
              }
              for (auto& cand : partial)
                if (sd::validate_type(cand).empty()) keys.insert(sd::canonical_key(cand));
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
          }
          used[first] = 1;
          for (int j = first + 1; j < halves; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            mate[first] = j;
            mate[j] = first;
            match_rec();
            used[j] = 0;
          }
          used[first] = 0;
        };
        match_rec();
        return;
      }
      for (size_t v = 0; v < site_comps[i].size(); ++v) {
        choice[i] = static_cast<int>(v);
        for (int f = 0; f < 2; ++f) {
          marked[i] = f;
          circle_rec(i + 1);
        }
      }
    };
    circle_rec(0);
  }
  return keys;
}

}  // namespace oracle
