#include "khv/sparse.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "khv/errors.hpp"

namespace khv {
namespace exactla {

size_t SparseMat::nnz() const {
  size_t n = 0;
  for (auto& c : col_) n += c.size();
  return n;
}

void SparseMat::add(int r, int c, const Rat& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw InternalError("sparse index out of range");
  if (v == 0) return;
  auto& col = col_[c];
  auto it = col.find(r);
  if (it == col.end()) {
    col[r] = v;
  } else {
    it->second += v;
    if (it->second == 0) col.erase(it);
  }
}

Rat SparseMat::at(int r, int c) const {
  auto& col = col_[c];
  auto it = col.find(r);
  return it == col.end() ? Rat(0) : it->second;
}

SparseMat SparseMat::transposed() const {
  SparseMat out(cols_, rows_);
  for (int c = 0; c < cols_; ++c)
    for (auto& [r, v] : col_[c]) out.col_[r][c] = v;
  return out;
}

std::string SparseMat::dump() const {
  std::ostringstream os;
  os << rows_ << " " << cols_ << "\n";
  for (int c = 0; c < cols_; ++c)
    for (auto& [r, v] : col_[c]) os << r << " " << c << " " << v << "\n";
  return os.str();
}

namespace {

// Row-major working copy with column occupancy, for Markowitz pivoting.
struct Elim {
  std::vector<SparseVec> row;              // active rows
  std::vector<std::set<int>> col_rows;     // col -> rows with nonzero
  std::vector<bool> row_done, col_done;

  explicit Elim(const SparseMat& m)
      : row(m.rows()),
        col_rows(m.cols()),
        row_done(m.rows(), false),
        col_done(m.cols(), false) {
    for (int c = 0; c < m.cols(); ++c)
      for (auto& [r, v] : m.column(c)) {
        row[r][c] = v;
        col_rows[c].insert(r);
      }
  }

  // Markowitz score (nnz(row)-1)*(nnz(col)-1); ties by smallest row then col
  bool pick(int& pr, int& pc) const {
    long best = -1;
    for (int r = 0; r < static_cast<int>(row.size()); ++r) {
      if (row_done[r] || row[r].empty()) continue;
      long rw = static_cast<long>(row[r].size()) - 1;
      for (auto& [c, v] : row[r]) {
        if (col_done[c]) continue;
        long score = rw * (static_cast<long>(col_rows[c].size()) - 1);
        if (best < 0 || score < best) {
          best = score;
          pr = r;
          pc = c;
        }
      }
    }
    return best >= 0;
  }

  void eliminate(int pr, int pc) {
    Rat piv = row[pr].at(pc);
    std::vector<int> targets(col_rows[pc].begin(), col_rows[pc].end());
    for (int r : targets) {
      if (r == pr || row_done[r]) continue;
      auto it = row[r].find(pc);
      if (it == row[r].end()) continue;
      Rat f = it->second / piv;
      for (auto& [c, v] : row[pr]) {
        auto jt = row[r].find(c);
        if (jt == row[r].end()) {
          Rat nv = -f * v;
          if (nv != 0) {
            row[r][c] = nv;
            col_rows[c].insert(r);
          }
        } else {
          jt->second -= f * v;
          if (jt->second == 0) {
            row[r].erase(jt);
            col_rows[c].erase(r);
          }
        }
      }
    }
    for (auto& [c, v] : row[pr]) col_rows[c].erase(pr);
    row_done[pr] = true;
    col_done[pc] = true;
  }
};

}  // namespace

int SparseMat::rank() const {
  Elim e(*this);
  int rank = 0;
  int pr, pc;
  while (e.pick(pr, pc)) {
    e.eliminate(pr, pc);
    ++rank;
  }
  return rank;
}

int SparseMat::rank_fraction_free() const {
  // clear denominators column by column, then single-step Bareiss on a
  // dense integer copy (adequate at oracle sizes; the rational path is
  // the production route)
  int n = rows_, m = cols_;
  if (n == 0 || m == 0) return 0;
  std::vector<std::vector<Int>> M(n, std::vector<Int>(m, 0));
  for (int c = 0; c < m; ++c) {
    Int lcm = 1;
    for (auto& [r, v] : col_[c])
      lcm = boost::multiprecision::lcm(lcm, den(v));
    for (auto& [r, v] : col_[c]) M[r][c] = num(v) * (lcm / den(v));
  }
  Int prev = 1;
  int rank = 0;
  int row = 0;
  for (int c = 0; c < m && row < n; ++c) {
    int piv = -1;
    for (int r = row; r < n; ++r)
      if (M[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[piv], M[row]);
    for (int r = row + 1; r < n; ++r) {
      for (int cc = c + 1; cc < m; ++cc)
        M[r][cc] = (M[r][cc] * M[row][c] - M[r][c] * M[row][cc]) / prev;
      M[r][c] = 0;
    }
    prev = M[row][c];
    ++row;
    ++rank;
  }
  return rank;
}

std::vector<SparseVec> SparseMat::kernel_basis() const {
  // row echelon with recorded pivot column per pivot row
  std::vector<SparseVec> rows(rows_);
  for (int c = 0; c < cols_; ++c)
    for (auto& [r, v] : col_[c]) rows[r][c] = v;
  std::vector<std::pair<int, SparseVec>> echelon;  // (pivot col, row)
  for (auto& rv : rows) {
    SparseVec cur = rv;
    for (auto& [pc, prow] : echelon) {
      auto it = cur.find(pc);
      if (it == cur.end()) continue;
      Rat f = it->second / prow.at(pc);
      for (auto& [c, v] : prow) {
        auto jt = cur.find(c);
        if (jt == cur.end()) {
          Rat nv = -f * v;
          if (nv != 0) cur[c] = nv;
        } else {
          jt->second -= f * v;
          if (jt->second == 0) cur.erase(jt);
        }
      }
    }
    if (!cur.empty()) echelon.push_back({cur.begin()->first, cur});
  }
  std::sort(echelon.begin(), echelon.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  std::set<int> pivots;
  for (auto& [pc, prow] : echelon) pivots.insert(pc);
  std::vector<SparseVec> basis;
  for (int free = 0; free < cols_; ++free) {
    if (pivots.count(free)) continue;
    SparseVec v;
    v[free] = 1;
    // back-substitute from the bottom of the echelon upward
    for (auto it = echelon.rbegin(); it != echelon.rend(); ++it) {
      auto& [pc, prow] = *it;
      Rat s = 0;
      for (auto& [c, coef] : prow) {
        auto jt = v.find(c);
        if (jt != v.end()) s += coef * jt->second;
      }
      if (s != 0) v[pc] = -s / prow.at(pc);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Pivot> staircase_pivots(const std::vector<SparseVec>& columns) {
  std::vector<Pivot> out;
  std::map<int, SparseVec> claimed;  // low row -> reduced column
  for (int ci = 0; ci < static_cast<int>(columns.size()); ++ci) {
    SparseVec cur = columns[ci];
    while (!cur.empty()) {
      int low = cur.rbegin()->first;
      auto it = claimed.find(low);
      if (it == claimed.end()) {
        claimed[low] = cur;
        out.push_back({ci, low});
        break;
      }
      const SparseVec& other = it->second;
      Rat f = cur.rbegin()->second / other.rbegin()->second;
      for (auto& [r, v] : other) {
        auto jt = cur.find(r);
        if (jt == cur.end()) {
          Rat nv = -f * v;
          if (nv != 0) cur[r] = nv;
        } else {
          jt->second -= f * v;
          if (jt->second == 0) cur.erase(jt);
        }
      }
    }
  }
  return out;
}

}  // namespace exactla
}  // namespace khv
