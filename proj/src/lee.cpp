#include "khv/lee.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "khv/errors.hpp"

namespace khv {
namespace lee {

namespace {

// Pivot of the filtered reduction of D_i, recorded by quantum gradings.
struct JPivot {
  int jcol = 0;
  int jrow = 0;
  int jump() const { return jrow - jcol; }
};

}  // namespace

int PageSet::last_nonzero_diff() const {
  int best = 0;
  for (auto& p : pages)
    if (p.total_rank() > 0) best = std::max(best, p.n);
  return best;
}

PageSet compute_pages(const khcomplex::FilteredComplex& c) {
  if (c.theory != khcomplex::Theory::Lee)
    throw ValidationError("page computation requires the deformed complex");

  // One exact filtered reduction per homological degree: columns deepest
  // quantum grading first, pivot rows shallowest-last. The pivot pairs
  // carry the ranks of every restriction F_a C^i -> C^{i+1}/F_b, which is
  // exactly the subquotient data the pages are made of.
  std::map<int, std::vector<JPivot>> pivots;  // per source degree i
  for (auto& [i, m] : c.diff) {
    auto& src = c.gens.at(i);
    auto& tgt = c.gens.at(i + 1);
    std::vector<int> colorder(src.size()), roworder(tgt.size());
    for (size_t k = 0; k < colorder.size(); ++k) colorder[k] = (int)k;
    for (size_t k = 0; k < roworder.size(); ++k) roworder[k] = (int)k;
    std::stable_sort(colorder.begin(), colorder.end(),
                     [&](int a, int b) { return src[a].j > src[b].j; });
    std::stable_sort(roworder.begin(), roworder.end(),
                     [&](int a, int b) { return tgt[a].j > tgt[b].j; });
    std::vector<int> rowpos(tgt.size());
    for (size_t k = 0; k < roworder.size(); ++k) rowpos[roworder[k]] = (int)k;
    std::vector<exactla::SparseVec> cols;
    cols.reserve(src.size());
    for (int cidx : colorder) {
      exactla::SparseVec v;
      for (auto& [r, val] : m.column(cidx)) v[rowpos[r]] = val;
      cols.push_back(std::move(v));
    }
    auto pv = exactla::staircase_pivots(cols);
    auto& list = pivots[i];
    for (auto& p : pv) {
      int jc = src[colorder[p.col]].j;
      int jr = tgt[roworder[p.row]].j;
      if ((jr - jc) % 4 != 0 || jr < jc)
        throw InternalError("differential pairing off the (1,4n) lattice");
      list.push_back({jc, jr});
    }
  }

  std::map<std::pair<int, int>, int> gens;
  for (auto& [i, gs] : c.gens)
    for (auto& g : gs) gens[{i, g.j}]++;

  auto count_col = [&](int i, int j, int jump_lo, int jump_hi) {
    auto it = pivots.find(i);
    if (it == pivots.end()) return 0;
    int s = 0;
    for (auto& p : it->second)
      if (p.jcol == j && p.jump() >= jump_lo && p.jump() < jump_hi) ++s;
    return s;
  };
  auto count_row = [&](int i, int j, int jump_lo, int jump_hi) {
    auto it = pivots.find(i);
    if (it == pivots.end()) return 0;
    int s = 0;
    for (auto& p : it->second)
      if (p.jrow == j && p.jump() >= jump_lo && p.jump() < jump_hi) ++s;
    return s;
  };
  const int INF = 1 << 20;

  auto page_dims = [&](int n) {
    grading::DimTable t;
    for (auto& [key, cnt] : gens) {
      auto [i, j] = key;
      int d = cnt - count_col(i, j, 0, 4 * n) - count_row(i - 1, j, 0, 4 * n);
      if (d < 0) throw InternalError("negative page dimension");
      if (d) t.set(i, j, d);
    }
    return t;
  };

  PageSet out;
  for (auto& [key, cnt] : gens) {
    auto [i, j] = key;
    int d = cnt - count_col(i, j, 0, INF) - count_row(i - 1, j, 0, INF);
    if (d) out.einf.set(i, j, d);
  }

  int maxjump = 0;
  for (auto& [i, list] : pivots)
    for (auto& p : list) maxjump = std::max(maxjump, p.jump());

  for (int n = 1;; ++n) {
    Page pg;
    pg.n = n;
    pg.dims = page_dims(n);
    for (auto& [key, cnt] : gens) {
      auto [i, j] = key;
      int r = count_col(i, j, 4 * n, 4 * n + 1);
      if (r) pg.diff_ranks[{i, j}] = r;
    }
    out.pages.push_back(pg);
    // stop once no differential can still act: none recorded at >= 4n and
    // the current support leaves no room for any (1, 4m) arrow, m >= n
    bool pivots_left = maxjump >= 4 * n;
    bool room = false;
    for (auto& [key, d] : pg.dims.entries()) {
      auto [i, j] = key;
      for (auto& [key2, d2] : pg.dims.entries()) {
        auto [i2, j2] = key2;
        if (i2 == i + 1 && j2 >= j + 4 * n && (j2 - j) % 4 == 0) room = true;
      }
    }
    if (!pivots_left && !room) break;
    if (n > 64) throw InternalError("page iteration failed to stabilize");
  }

  // bookkeeping invariants
  for (size_t k = 0; k + 1 < out.pages.size(); ++k) {
    if (out.pages[k + 1].dims.total() !=
        out.pages[k].dims.total() - 2 * out.pages[k].total_rank())
      throw InternalError("page totals do not drop by twice the rank");
  }
  if (out.pages.back().dims != out.einf)
    throw InternalError("final page does not match E-infinity");
  if (out.einf.total() != 2)
    throw InternalError(
        "E-infinity total is not 2 (bug or non-knot input): total = " +
        std::to_string(out.einf.total()));
  for (auto& [key, d] : out.einf.entries())
    if (key.first != 0)
      throw InternalError("E-infinity survivor off homological degree 0");
  return out;
}

int s_invariant(const PageSet& p) {
  if (p.einf.total() != 2) throw InternalError("malformed E-infinity");
  std::vector<int> js;
  for (auto& [key, d] : p.einf.entries()) {
    if (key.first != 0) throw InternalError("survivor not at i = 0");
    for (int k = 0; k < d; ++k) js.push_back(key.second);
  }
  if (js.size() != 2 || js[1] - js[0] != 2)
    throw InternalError("survivors not at s -+ 1");
  return (js[0] + js[1]) / 2;
}

DecompositionFamily decomposition_from_pages(const PageSet& p,
                                             const grading::Laurent2& kh) {
  DecompositionFamily out;
  out.s = s_invariant(p);
  for (auto& pg : p.pages) {
    grading::Laurent2 f;
    for (auto& [key, r] : pg.diff_ranks) f.add(key.first, key.second, r);
    if (!f.is_zero()) out.f[pg.n] = f;
  }
  // verify: kh == q^s (q + 1/q) + sum f_{2l} (1 + t q^{4l})
  grading::Laurent2 rhs;
  rhs.add(0, out.s + 1, 1);
  rhs.add(0, out.s - 1, 1);
  for (auto& [l, f] : out.f) {
    grading::Laurent2 knight;
    knight.add(0, 0, 1);
    knight.add(1, 4 * l, 1);
    rhs = rhs + f * knight;
  }
  if (rhs != kh)
    throw InternalError("decomposition identity failed");
  for (auto& [l, f] : out.f)
    if (!f.nonnegative()) throw InternalError("negative pairing multiplicity");
  return out;
}

std::string report_json(const LeeResult& r, const DecompositionFamily& dec) {
  nlohmann::json j;
  j["s"] = r.s;
  j["pages"] = nlohmann::json::array();
  for (auto& pg : r.pages.pages) {
    nlohmann::json pj;
    pj["n"] = pg.n;
    pj["dims"] = nlohmann::json::parse(pg.dims.to_json());
    pj["diffRanks"] = nlohmann::json::array();
    for (auto& [key, rank] : pg.diff_ranks)
      pj["diffRanks"].push_back(
          {{"i", key.first}, {"j", key.second}, {"rank", rank}});
    j["pages"].push_back(pj);
  }
  j["einf"] = nlohmann::json::parse(r.pages.einf.to_json());
  j["decomposition"] = nlohmann::json::array();
  for (auto& [l, f] : dec.f) {
    nlohmann::json fj;
    fj["l"] = l;
    fj["terms"] = nlohmann::json::array();
    for (auto& [key, c] : f.terms())
      fj["terms"].push_back(
          {{"t", key.first}, {"q", key.second}, {"coeff", c.str()}});
    j["decomposition"].push_back(fj);
  }
  return j.dump(2);
}

std::string report_text(const LeeResult& r, const DecompositionFamily& dec) {
  std::ostringstream os;
  os << "s = " << r.s << "\n";
  for (auto& pg : r.pages.pages) {
    os << "E_" << pg.n << " (total " << pg.dims.total() << "):\n"
       << pg.dims.render_grid();
    if (!pg.diff_ranks.empty()) {
      os << "d_" << pg.n << " cancellations:\n";
      for (auto& [key, rank] : pg.diff_ranks)
        os << "  (" << key.first << "," << key.second << ") -> ("
           << key.first + 1 << "," << key.second + 4 * pg.n << ")  rank "
           << rank << "\n";
    }
  }
  os << "E_inf:\n" << r.pages.einf.render_grid();
  if (dec.f.empty()) {
    os << "decomposition: pawn pair only\n";
  } else {
    os << "decomposition families:\n";
    for (auto& [l, f] : dec.f)
      os << "  f_" << 2 * l << " = " << f.str() << "\n";
  }
  return os.str();
}

}  // namespace lee
}  // namespace khv
