#include "khv/cube.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "khv/errors.hpp"

namespace khv {
namespace khcomplex {

namespace {

struct MiniUF {
  std::map<int, int> p;
  int find(int a) {
    if (!p.count(a)) p[a] = a;
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Resolution resolve(const knotio::Diagram& d, uint64_t vertex) {
  if (d.size() < 64 && vertex >> d.size())
    throw ValidationError("resolution bitstring length mismatch");
  MiniUF uf;
  for (size_t ci = 0; ci < d.size(); ++ci) {
    auto& t = d.crossings()[ci].e;
    if ((vertex >> ci) & 1) {
      uf.unite(t[0], t[3]);
      uf.unite(t[1], t[2]);
    } else {
      uf.unite(t[0], t[1]);
      uf.unite(t[2], t[3]);
    }
  }
  Resolution res;
  std::map<int, int> index;
  for (auto& [e, ends] : d.incidences()) {
    int r = uf.find(e);
    auto it = index.find(r);
    if (it == index.end()) {
      index[r] = res.circle_count++;
      it = index.find(r);
    }
    res.circle_of_edge[e] = it->second;
  }
  return res;
}

void FilteredComplex::check_d_squared() const {
  for (auto& [i, m] : diff) {
    auto it = diff.find(i + 1);
    if (it == diff.end()) continue;
    const exactla::SparseMat& a = m;
    const exactla::SparseMat& b = it->second;
    // (b*a) column by column, exact
    for (int c = 0; c < a.cols(); ++c) {
      std::map<int, Rat> acc;
      for (auto& [mid, va] : a.column(c))
        for (auto& [r, vb] : b.column(mid)) {
          acc[r] += vb * va;
        }
      for (auto& [r, v] : acc)
        if (v != 0) throw InternalError("D^2 != 0");
    }
  }
}

void FilteredComplex::check_gradings() const {
  for (auto& [i, m] : diff) {
    auto& src = gens.at(i);
    auto& tgt = gens.at(i + 1);
    for (int c = 0; c < m.cols(); ++c)
      for (auto& [r, v] : m.column(c)) {
        int dj = tgt[r].j - src[c].j;
        if (dj != 0 && dj != 4)
          throw InternalError("differential jump must be 0 or 4");
        if (theory == Theory::Plain && dj != 0)
          throw InternalError("plain theory must have phi = 0");
      }
  }
}

bool FilteredComplex::has_phi() const {
  for (auto& [i, m] : diff) {
    auto& src = gens.at(i);
    auto& tgt = gens.at(i + 1);
    for (int c = 0; c < m.cols(); ++c)
      for (auto& [r, v] : m.column(c))
        if (tgt[r].j - src[c].j == 4) return true;
  }
  return false;
}

std::string FilteredComplex::debug_dump() const {
  std::ostringstream os;
  for (auto& [i, gs] : gens) {
    os << "degree " << i << ": " << gs.size() << " generators\n";
    for (auto& g : gs)
      os << "  v=" << g.vertex << " labels=" << g.labels << " j=" << g.j
         << "\n";
  }
  for (auto& [i, m] : diff) {
    os << "d_" << i << " (" << m.rows() << "x" << m.cols() << "):\n"
       << m.dump();
  }
  return os.str();
}

FilteredComplex build_complex(const knotio::Diagram& d, Theory theory,
                              int budget) {
  if (!d.is_knot())
    throw ValidationError("complex construction requires a knot diagram");
  int n = static_cast<int>(d.size());
  if (n > budget)
    throw BudgetError("direct cube budget exceeded (" + std::to_string(n) +
                      " > " + std::to_string(budget) +
                      "); use the scanning route");
  FilteredComplex c;
  c.theory = theory;
  c.nplus = d.n_plus();
  c.nminus = d.n_minus();
  if (n == 0) {
    Gen a{0, 0, 1}, b{0, 1, -1};
    c.gens[0] = {a, b};
    return c;
  }
  uint32_t nv = 1u << n;
  std::vector<Resolution> res(nv);
  for (uint32_t v = 0; v < nv; ++v) res[v] = resolve(d, v);

  // canonical generator order: vertex ascending, labels ascending
  std::vector<int> offset(nv, 0);
  for (uint32_t v = 0; v < nv; ++v) {
    int i = std::popcount(v) - c.nminus;
    auto& gs = c.gens[i];
    offset[v] = static_cast<int>(gs.size());
    int circles = res[v].circle_count;
    int base_j = std::popcount(v) + c.nplus - 2 * c.nminus;
    for (uint32_t lab = 0; lab < (1u << circles); ++lab) {
      int x = std::popcount(lab);
      gs.push_back(Gen{v, lab, base_j + (circles - 2 * x)});
    }
  }
  for (auto& [i, gs] : c.gens) {
    int lo = c.dim(i);
    int hi = c.dim(i + 1);
    if (hi > 0 && lo > 0) c.diff.emplace(i, exactla::SparseMat(hi, lo));
  }
  bool lee = theory == Theory::Lee;
  for (uint32_t v = 0; v < nv; ++v) {
    int i = std::popcount(v) - c.nminus;
    auto dit = c.diff.find(i);
    if (dit == c.diff.end()) continue;
    exactla::SparseMat& D = dit->second;
    const Resolution& rv = res[v];
    int kv = rv.circle_count;
    for (int ci = 0; ci < n; ++ci) {
      if ((v >> ci) & 1) continue;
      uint32_t w = v | (1u << ci);
      int sgn = std::popcount(v & ((1u << ci) - 1)) % 2 ? -1 : 1;
      const Resolution& rw = res[w];
      auto& t = d.crossings()[ci].e;
      std::set<int> vs, ws;
      for (int s = 0; s < 4; ++s) {
        vs.insert(rv.circle_of_edge.at(t[s]));
        ws.insert(rw.circle_of_edge.at(t[s]));
      }
      std::map<int, int> corr;
      for (auto& [e, cv] : rv.circle_of_edge)
        if (!vs.count(cv)) corr[cv] = rw.circle_of_edge.at(e);
      bool merge = vs.size() == 2;
      if (!merge && ws.size() != 2)
        throw InternalError("cube edge neither merge nor split");
      int s1 = *vs.begin(), s2 = merge ? *vs.rbegin() : -1;
      int t1 = *ws.begin(), t2 = merge ? -1 : *ws.rbegin();
      for (uint32_t lab = 0; lab < (1u << kv); ++lab) {
        uint32_t tbase = 0;
        for (auto& [cv, cw] : corr)
          if ((lab >> cv) & 1) tbase |= 1u << cw;
        int colidx = offset[v] + static_cast<int>(lab);
        auto emit = [&](uint32_t extra, int coeff) {
          int rowidx = offset[w] + static_cast<int>(tbase | extra);
          D.add(rowidx, colidx, Rat(sgn * coeff));
        };
        if (merge) {
          bool x1 = (lab >> s1) & 1, x2 = (lab >> s2) & 1;
          if (x1 && x2) {
            if (lee) emit(0, 1);  // X*X = 1 in the deformation
          } else if (x1 || x2) {
            emit(1u << t1, 1);
          } else {
            emit(0, 1);
          }
        } else {
          bool x = (lab >> s1) & 1;
          if (x) {
            emit((1u << t1) | (1u << t2), 1);
            if (lee) emit(0, 1);  // Delta(X) also hits 1 (x) 1
          } else {
            emit(1u << t1, 1);
            emit(1u << t2, 1);
          }
        }
      }
    }
  }
  return c;
}

grading::DimTable khovanov_homology(const knotio::Diagram& d, int budget) {
  FilteredComplex c = build_complex(d, Theory::Plain, budget);
  return exactla::homology_dims(c);
}

}  // namespace khcomplex

namespace exactla {

grading::DimTable homology_dims(const khcomplex::FilteredComplex& c) {
  using khcomplex::Gen;
  std::map<std::pair<int, int>, int> ranks;  // rank of d0 block at (i, j)
  std::map<std::pair<int, int>, int> dims;
  for (auto& [i, gs] : c.gens)
    for (auto& g : gs) dims[{i, g.j}]++;
  for (auto& [i, m] : c.diff) {
    auto& src = c.gens.at(i);
    auto& tgt = c.gens.at(i + 1);
    // split the j-preserving part into blocks by quantum grading
    std::map<int, std::vector<int>> scol, trow;
    for (int k = 0; k < static_cast<int>(src.size()); ++k)
      scol[src[k].j].push_back(k);
    for (int k = 0; k < static_cast<int>(tgt.size()); ++k)
      trow[tgt[k].j].push_back(k);
    for (auto& [j, colids] : scol) {
      auto it = trow.find(j);
      if (it == trow.end()) continue;
      std::map<int, int> rowpos;
      for (int k = 0; k < static_cast<int>(it->second.size()); ++k)
        rowpos[it->second[k]] = k;
      SparseMat block(static_cast<int>(it->second.size()),
                      static_cast<int>(colids.size()));
      for (int k = 0; k < static_cast<int>(colids.size()); ++k)
        for (auto& [r, v] : m.column(colids[k])) {
          auto rp = rowpos.find(r);
          if (rp != rowpos.end()) block.add(rp->second, k, v);
        }
      ranks[{i, j}] = block.rank();
    }
  }
  grading::DimTable out;
  for (auto& [key, dim] : dims) {
    auto [i, j] = key;
    int d = dim;
    auto r1 = ranks.find({i, j});
    if (r1 != ranks.end()) d -= r1->second;
    auto r0 = ranks.find({i - 1, j});
    if (r0 != ranks.end()) d -= r0->second;
    if (d < 0) throw InternalError("negative homology dimension");
    if (d) out.set(i, j, d);
  }
  return out;
}

}  // namespace exactla
}  // namespace khv
