#include "sd/homology.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

namespace sd {

nlohmann::json SparseIntMatrix::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& t : triplets) entries.push_back({t[0], t[1], t[2]});
  return nlohmann::json{{"rows", rows}, {"cols", cols}, {"entries", entries}};
}

SparseIntMatrix SparseIntMatrix::from_json(const nlohmann::json& j) {
  SparseIntMatrix m(j.at("rows").get<int64_t>(), j.at("cols").get<int64_t>());
  for (const auto& e : j.at("entries")) m.add(e.at(0), e.at(1), e.at(2));
  return m;
}

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InternalError("overflow in sparse reduction");
  return r;
}

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InternalError("overflow in sparse reduction");
  return r;
}

int64_t mod_inverse(int64_t a, int64_t p) {
  int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw DomainError("p is not prime");
  return ((t % p) + p) % p;
}

// Sparse elimination workspace shared by the integer unit-pivot phase and
// the mod-p rank computation (modulus == 0 means integers).  Columns are
// kept sorted by row so an elimination step is a family of sorted merges.
class SparseReducer {
 public:
  SparseReducer(const SparseIntMatrix& m, int64_t modulus) : modulus_(modulus) {
    n_rows_ = m.rows;
    n_cols_ = m.cols;
    std::vector<std::array<int64_t, 3>> sorted = m.triplets;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return std::tie(a[1], a[0]) < std::tie(b[1], b[0]);
    });
    cols_.resize(n_cols_);
    row_cols_.resize(n_rows_);
    row_count_.assign(n_rows_, 0);
    col_alive_.assign(n_cols_, 1);
    row_alive_.assign(n_rows_, 1);
    for (size_t i = 0; i < sorted.size();) {
      const int64_t c = sorted[i][1];
      const int64_t r = sorted[i][0];
      int64_t v = 0;
      for (; i < sorted.size() && sorted[i][1] == c && sorted[i][0] == r; ++i)
        v = modulus_ ? (v + sorted[i][2]) % modulus_ : checked_add(v, sorted[i][2]);
      if (modulus_) v = ((v % modulus_) + modulus_) % modulus_;
      if (v == 0) continue;
      cols_[c].emplace_back(r, v);
      row_cols_[r].push_back(c);
      ++row_count_[r];
    }
  }

  // Eliminate pivots until none qualify; returns the rank contributed.
  // Coreduction first: singleton rows and columns eliminate with little or
  // no fill; the leftovers fall back to minimum-Markowitz scans.
  int64_t run() {
    for (int64_t c = 0; c < n_cols_; ++c)
      if (cols_[c].size() == 1) qcol_.push_back(c);
    for (int64_t r = 0; r < n_rows_; ++r)
      if (row_count_[r] == 1) qrow_.push_back(r);
    int64_t rank = 0;
    drain_queues(rank);
    // Cursor scan with a small look-ahead window; every elimination is
    // followed by a coreduction cascade, so pivot quality matters little.
    int64_t cursor = 0;
    int64_t idle = 0;  // columns inspected since the last elimination
    while (n_cols_ > 0 && idle < n_cols_) {
      int64_t best_score = -1, br = -1, bc = -1;
      int64_t seen = 0;
      for (; idle < n_cols_ && seen < 16; ++cursor, ++idle) {
        const int64_t c = cursor % n_cols_;
        if (!col_alive_[c]) continue;
        for (const auto& [r, v] : cols_[c]) {
          if (!qualifies(v)) continue;
          const int64_t score = score_of(r, c);
          if (best_score < 0 || score < best_score) {
            best_score = score;
            br = r;
            bc = c;
          }
          ++seen;
        }
      }
      if (best_score < 0) continue;
      eliminate(br, bc, get(bc, br));
      ++rank;
      drain_queues(rank);
      idle = 0;
    }
    return rank;
  }

  // Remaining nonzero entries with rows/cols compacted.
  SparseIntMatrix residual() const {
    std::vector<int64_t> row_map(n_rows_, -1), col_map(n_cols_, -1);
    int64_t nr = 0, nc = 0;
    std::vector<std::array<int64_t, 3>> out;
    for (int64_t c = 0; c < n_cols_; ++c) {
      if (!col_alive_[c]) continue;
      for (const auto& [r, v] : cols_[c]) {
        if (v == 0 || !row_alive_[r]) continue;
        if (row_map[r] < 0) row_map[r] = nr++;
        if (col_map[c] < 0) col_map[c] = nc++;
        out.push_back({row_map[r], col_map[c], v});
      }
    }
    SparseIntMatrix m(nr, nc);
    m.triplets = std::move(out);
    return m;
  }

 private:
  using Entry = std::pair<int64_t, int64_t>;  // (row, value), rows sorted

  bool qualifies(int64_t v) const {
    if (v == 0) return false;
    return modulus_ ? true : (v == 1 || v == -1);
  }

  int64_t score_of(int64_t r, int64_t c) const {
    return (row_count_[r] - 1) * (static_cast<int64_t>(cols_[c].size()) - 1);
  }

  void note_row(int64_t r) {
    if (row_alive_[r] && row_count_[r] == 1) qrow_.push_back(r);
  }
  void note_col(int64_t c) {
    if (col_alive_[c] && cols_[c].size() == 1) qcol_.push_back(c);
  }

  // Returns true if any queued elimination happened.
  bool drain_queues(int64_t& rank) {
    bool any = false;
    while (!qcol_.empty() || !qrow_.empty()) {
      if (!qcol_.empty()) {
        int64_t c = qcol_.back();
        qcol_.pop_back();
        if (!col_alive_[c] || cols_[c].size() != 1) continue;
        auto [r, v] = cols_[c][0];
        if (!row_alive_[r] || !qualifies(v)) continue;
        eliminate(r, c, v);
        ++rank;
        any = true;
        continue;
      }
      int64_t r = qrow_.back();
      qrow_.pop_back();
      if (!row_alive_[r] || row_count_[r] != 1) continue;
      int64_t found = -1;
      for (int64_t c : row_cols_[r])
        if (col_alive_[c] && get(c, r) != 0) {
          found = c;
          break;
        }
      if (found < 0) continue;
      int64_t v = get(found, r);
      if (!qualifies(v)) continue;
      eliminate(r, found, v);
      ++rank;
      any = true;
    }
    return any;
  }

  int64_t get(int64_t c, int64_t r) const {
    const auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, int64_t row) { return e.first < row; });
    return it != col.end() && it->first == r ? it->second : 0;
  }

  // dst += factor * src over alive rows; returns whether dst still holds
  // a nonzero entry.  Updates row occupancy and candidate queue.
  void col_axpy(int64_t dst, int64_t factor, int64_t src) {
    const auto& a = cols_[dst];
    const auto& b = cols_[src];
    std::vector<Entry> merged;
    merged.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    auto push_result = [&](int64_t r, int64_t v, bool existed) {
      if (modulus_) v = ((v % modulus_) + modulus_) % modulus_;
      if (v == 0) {
        if (existed) {
          --row_count_[r];
          note_row(r);
        }
        return;
      }
      merged.emplace_back(r, v);
      if (!existed) {
        ++row_count_[r];
        row_cols_[r].push_back(dst);
      } else if (row_count_[r] == 1) {
        qrow_.push_back(r);
      }
    };
    while (i < a.size() || j < b.size()) {
      if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
        // untouched entry of dst
        merged.push_back(a[i]);
        ++i;
        continue;
      }
      if (!row_alive_[b[j].first]) {  // dead rows in src are stale zeros
        ++j;
        continue;
      }
      if (i >= a.size() || a[i].first > b[j].first) {
        push_result(b[j].first, modulus_ ? (factor * b[j].second) % modulus_
                                         : checked_mul(factor, b[j].second),
                    false);
        ++j;
        continue;
      }
      int64_t add = modulus_ ? (factor * b[j].second) % modulus_
                             : checked_mul(factor, b[j].second);
      push_result(a[i].first, modulus_ ? a[i].second + add : checked_add(a[i].second, add),
                  true);
      ++i;
      ++j;
    }
    cols_[dst] = std::move(merged);
  }

  void eliminate(int64_t r0, int64_t c0, int64_t v) {
    const int64_t inv = modulus_ ? mod_inverse(v, modulus_) : v;  // v = +-1 over Z
    std::vector<int64_t> targets;
    for (int64_t c : row_cols_[r0]) {
      if (c == c0 || !col_alive_[c]) continue;
      if (get(c, r0) != 0) targets.push_back(c);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int64_t c : targets) {
      const int64_t w = get(c, r0);
      const int64_t factor = modulus_ ? ((-w % modulus_ + modulus_) * inv) % modulus_
                                      : -w * inv;
      col_axpy(c, factor, c0);  // cancels the (r0, c) entry exactly
      note_col(c);
    }
    for (const auto& [r, vv] : cols_[c0]) {
      (void)vv;
      if (r != r0 && row_alive_[r]) {
        --row_count_[r];
        note_row(r);
      }
    }
    row_alive_[r0] = 0;
    col_alive_[c0] = 0;
    cols_[c0] = {};
    row_cols_[r0] = {};
  }

  int64_t modulus_;
  int64_t n_rows_ = 0, n_cols_ = 0;
  std::vector<std::vector<Entry>> cols_;
  std::vector<std::vector<int64_t>> row_cols_;
  std::vector<int64_t> row_count_;
  std::vector<char> col_alive_, row_alive_;
  std::vector<int64_t> qcol_, qrow_;
};

using DenseInt = std::vector<std::vector<Int>>;

DenseInt to_dense(const SparseIntMatrix& m) {
  DenseInt a(m.rows, std::vector<Int>(m.cols, Int(0)));
  for (const auto& t : m.triplets) a[t[0]][t[1]] += t[2];
  return a;
}

DenseInt identity(int64_t n) {
  DenseInt u(n, std::vector<Int>(n, Int(0)));
  for (int64_t i = 0; i < n; ++i) u[i][i] = 1;
  return u;
}

// Dense Smith normal form; transforms maintained when provided.
void dense_snf(DenseInt& a, DenseInt* u, DenseInt* v) {
  const int64_t m = static_cast<int64_t>(a.size());
  const int64_t n = m ? static_cast<int64_t>(a[0].size()) : 0;

  auto row_op = [&](int64_t dst, int64_t src, const Int& q) {  // row dst -= q*row src
    for (int64_t j = 0; j < n; ++j) a[dst][j] -= q * a[src][j];
    if (u)
      for (int64_t j = 0; j < m; ++j) (*u)[dst][j] -= q * (*u)[src][j];
  };
  auto col_op = [&](int64_t dst, int64_t src, const Int& q) {
    for (int64_t i = 0; i < m; ++i) a[i][dst] -= q * a[i][src];
    if (v)
      for (int64_t i = 0; i < n; ++i) (*v)[i][dst] -= q * (*v)[i][src];
  };
  auto row_swap = [&](int64_t i, int64_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    if (u) std::swap((*u)[i], (*u)[j]);
  };
  auto col_swap = [&](int64_t i, int64_t j) {
    if (i == j) return;
    for (int64_t r = 0; r < m; ++r) std::swap(a[r][i], a[r][j]);
    if (v)
      for (int64_t r = 0; r < n; ++r) std::swap((*v)[r][i], (*v)[r][j]);
  };
  auto row_negate = [&](int64_t i) {
    for (int64_t j = 0; j < n; ++j) a[i][j] = -a[i][j];
    if (u)
      for (int64_t j = 0; j < m; ++j) (*u)[i][j] = -(*u)[i][j];
  };

  for (int64_t t = 0; t < std::min(m, n); ++t) {
    // Locate a minimal nonzero pivot in the remaining block.
    int64_t pi = -1, pj = -1;
    for (int64_t i = t; i < m; ++i)
      for (int64_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (int64_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        row_op(i, t, q);
        if (a[i][t] != 0) {
          row_swap(t, i);
          clean = false;
        }
      }
      for (int64_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        col_op(j, t, q);
        if (a[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility of the rest of the block by the pivot.
      bool divides = true;
      for (int64_t i = t + 1; i < m && divides; ++i)
        for (int64_t j = t + 1; j < n && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_op(t, i, Int(-1));  // pull the offending row up and retry
            divides = false;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) row_negate(t);
  }
}

std::vector<Int> dense_divisors(const SparseIntMatrix& m) {
  DenseInt a = to_dense(m);
  dense_snf(a, nullptr, nullptr);
  std::vector<Int> d;
  for (int64_t t = 0; t < std::min(m.rows, m.cols); ++t) {
    if (a[t][t] == 0) break;
    d.push_back(a[t][t]);
  }
  return d;
}

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

SnfResult smith_normal_form(const SparseIntMatrix& m) {
  DenseInt a = to_dense(m);
  DenseInt u = identity(m.rows);
  DenseInt v = identity(m.cols);
  dense_snf(a, &u, &v);
  SnfResult out;
  out.left = std::move(u);
  out.right = std::move(v);
  for (int64_t t = 0; t < std::min(m.rows, m.cols); ++t) out.diagonal.push_back(a[t][t]);
  return out;
}

ElementaryDivisors elementary_divisors(const SparseIntMatrix& m) {
  SparseReducer red(m, 0);
  ElementaryDivisors out;
  out.rank = red.run();
  SparseIntMatrix rest = red.residual();
  if (!rest.triplets.empty()) {
    for (const Int& d : dense_divisors(rest)) {
      ++out.rank;
      if (abs(d) >= 2) out.nontrivial.push_back(abs(d));
    }
  }
  std::sort(out.nontrivial.begin(), out.nontrivial.end());
  return out;
}

int64_t rank_over_q(const SparseIntMatrix& m) { return elementary_divisors(m).rank; }

int64_t rank_mod_p(const SparseIntMatrix& m, int64_t p) {
  if (!is_prime(p)) throw DomainError("modulus must be prime");
  if (p > (int64_t(1) << 30)) throw DomainError("modulus too large");
  SparseReducer red(m, p);
  int64_t rank = red.run();
  if (!red.residual().triplets.empty())
    throw InternalError("mod-p reduction left a nonzero residual");
  return rank;
}

int64_t ChainComplexData::euler_characteristic() const {
  int64_t chi = 0;
  for (size_t mdim = 0; mdim < fvector.size(); ++mdim)
    chi += (mdim % 2 == 0 ? 1 : -1) * fvector[mdim];
  return chi;
}

void ChainComplexData::check() const {
  if (boundary.size() != fvector.size())
    throw InternalError("boundary list and f-vector lengths differ");
  for (size_t mdim = 0; mdim < fvector.size(); ++mdim) {
    const auto& b = boundary[mdim];
    if (b.cols != fvector[mdim] || (mdim > 0 && b.rows != fvector[mdim - 1]) ||
        (mdim == 0 && b.rows != 0))
      throw InternalError("boundary matrix shape mismatch");
  }
  // dd = 0, column by column.
  for (size_t mdim = 1; mdim + 1 < fvector.size() + 1 && mdim < fvector.size(); ++mdim) {
    if (mdim + 1 >= fvector.size()) break;
    const auto& b1 = boundary[mdim];      // C_m -> C_{m-1}
    const auto& b2 = boundary[mdim + 1];  // C_{m+1} -> C_m
    std::vector<std::vector<std::pair<int64_t, int64_t>>> b1cols(b1.cols);
    for (const auto& t : b1.triplets) b1cols[t[1]].emplace_back(t[0], t[2]);
    std::vector<std::vector<std::pair<int64_t, int64_t>>> b2cols(b2.cols);
    for (const auto& t : b2.triplets) b2cols[t[1]].emplace_back(t[0], t[2]);
    for (int64_t c = 0; c < b2.cols; ++c) {
      std::map<int64_t, int64_t> acc;
      for (const auto& [mid, v] : b2cols[c])
        for (const auto& [r, w] : b1cols[mid]) acc[r] = checked_add(acc[r], checked_mul(v, w));
      for (const auto& [r, v] : acc)
        if (v != 0)
          throw InternalError("dd != 0 at degree " + std::to_string(mdim + 1) + ", cell " +
                              std::to_string(c));
    }
  }
}

bool HomologySummary::torsion_free() const {
  for (const auto& d : degrees)
    if (!d.torsion.empty()) return false;
  return true;
}

std::vector<int64_t> HomologySummary::betti_vector() const {
  std::vector<int64_t> b;
  for (const auto& d : degrees) b.push_back(d.betti);
  return b;
}

nlohmann::json HomologySummary::to_json() const {
  nlohmann::json degs = nlohmann::json::array();
  for (size_t m = 0; m < degrees.size(); ++m) {
    nlohmann::json torsion = nlohmann::json::array();
    for (const auto& t : degrees[m].torsion) torsion.push_back(t.str());
    degs.push_back({{"dim", m}, {"betti", degrees[m].betti}, {"torsion", torsion}});
  }
  std::string coeff = this->coeff == Coeff::Z ? "Z" : this->coeff == Coeff::Q ? "Q" : "Fp";
  nlohmann::json j{{"schema", "homology.v1"}, {"coeffs", coeff}, {"degrees", degs}};
  if (this->coeff == Coeff::Fp) j["p"] = p;
  return j;
}

HomologySummary homology_summary(const ChainComplexData& cx, Coeff coeff, int64_t p) {
  cx.check();
  if (coeff == Coeff::Fp && !is_prime(p)) throw DomainError("Fp requires a prime p");
  const int top = cx.top_dim();
  HomologySummary out;
  out.coeff = coeff;
  out.p = coeff == Coeff::Fp ? p : 0;

  std::vector<int64_t> rank(top + 2, 0);
  std::vector<ElementaryDivisors> divs(top + 2);
  for (int m = 1; m <= top; ++m) {
    if (coeff == Coeff::Fp) {
      rank[m] = rank_mod_p(cx.boundary[m], p);
    } else {
      divs[m] = elementary_divisors(cx.boundary[m]);
      rank[m] = divs[m].rank;
    }
  }
  for (int m = 0; m <= top; ++m) {
    DegreeSummary d;
    d.betti = cx.fvector[m] - rank[m] - (m + 1 <= top ? rank[m + 1] : 0);
    if (coeff == Coeff::Z && m + 1 <= top) d.torsion = divs[m + 1].nontrivial;
    out.degrees.push_back(std::move(d));
  }
  return out;
}

}  // namespace sd
