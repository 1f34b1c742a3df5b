#include "khv/audit.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "khv/errors.hpp"

namespace khv {
namespace audit {

using grading::DimTable;
using grading::Laurent1;
using grading::Laurent2;

// --------------------------------------------------------- knight move

KnightMoveReport knight_move_solve(const Laurent2& kh, int s) {
  for (auto& [k, c] : kh.terms()) {
    if (c < 0) throw ValidationError("input series has negative coefficients");
    if (k.second % 2 == 0)
      throw ValidationError("input series has even quantum support");
  }
  if (s % 2 != 0) throw ValidationError("s must be even");
  Laurent2 R = kh;
  R.add(0, s + 1, -1);
  R.add(0, s - 1, -1);
  KnightMoveReport rep;
  if (R.is_zero()) {
    rep.holds = true;
    return rep;
  }
  int imin = 0, imax = 0;
  bool first = true;
  for (auto& [k, c] : R.terms()) {
    if (first) {
      imin = imax = k.first;
      first = false;
    }
    imin = std::min(imin, k.first);
    imax = std::max(imax, k.first);
  }
  std::map<std::pair<int, int>, Int> f;
  for (int i = imin; i <= imax + 1; ++i) {
    std::set<int> js;
    for (auto& [k, c] : R.terms())
      if (k.first == i) js.insert(k.second);
    for (auto& [k, c] : f)
      if (k.first == i - 1) js.insert(k.second + 4);
    for (int j : js) {
      Int below = 0;
      auto it = f.find({i - 1, j - 4});
      if (it != f.end()) below = it->second;
      Int val = R.coeff(i, j) - below;
      if (val < 0) {
        rep.holds = false;
        if (below > 0) {
          rep.witness = {i - 1, j - 4};
          rep.reason = "unit at (" + std::to_string(i - 1) + "," +
                       std::to_string(j - 4) +
                       ") has no partner at (i+1, j+4)";
        } else {
          rep.witness = {i, j};
          rep.reason = "pawn pair absent at (" + std::to_string(i) + "," +
                       std::to_string(j) + ")";
        }
        return rep;
      }
      if (val != 0) f[{i, j}] = val;
    }
  }
  for (auto& [k, c] : f) {
    if (k.first > imax || (k.first == imax + 1 && c != 0)) {
      rep.holds = false;
      rep.witness = k;
      rep.reason = "pairing does not terminate";
      return rep;
    }
  }
  rep.holds = true;
  for (auto& [k, c] : f) rep.f2.add(k.first, k.second, c);
  return rep;
}

// ------------------------------------------------- max-flow matching

namespace {

struct FlowNet {
  struct Edge {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Edge>> adj;
  explicit FlowNet(int n) : adj(n) {}
  void add(int a, int b, int cap) {
    adj[a].push_back({b, cap, static_cast<int>(adj[b].size())});
    adj[b].push_back({a, 0, static_cast<int>(adj[a].size()) - 1});
  }
  int maxflow(int s, int t) {
    int total = 0;
    for (;;) {
      std::vector<int> pre(adj.size(), -1), pedge(adj.size(), -1);
      std::deque<int> q{s};
      pre[s] = s;
      while (!q.empty() && pre[t] < 0) {
        int u = q.front();
        q.pop_front();
        for (size_t k = 0; k < adj[u].size(); ++k) {
          auto& e = adj[u][k];
          if (e.cap > 0 && pre[e.to] < 0) {
            pre[e.to] = u;
            pedge[e.to] = static_cast<int>(k);
            q.push_back(e.to);
          }
        }
      }
      if (pre[t] < 0) break;
      int aug = INT32_MAX;
      for (int v = t; v != s; v = pre[v])
        aug = std::min(aug, adj[pre[v]][pedge[v]].cap);
      for (int v = t; v != s; v = pre[v]) {
        auto& e = adj[pre[v]][pedge[v]];
        e.cap -= aug;
        adj[v][e.rev].cap += aug;
      }
      total += aug;
    }
    return total;
  }
};

}  // namespace

DimTable max_knight_matching(const DimTable& kh, int s) {
  DimTable t = kh;
  if (t.dim(0, s - 1) < 1 || t.dim(0, s + 1) < 1)
    throw ValidationError("pawn pair absent from the table");
  t.add(0, s - 1, -1);
  t.add(0, s + 1, -1);

  std::vector<std::pair<int, int>> cells;
  std::map<std::pair<int, int>, int> id;
  for (auto& [k, d] : t.entries()) {
    id[k] = static_cast<int>(cells.size());
    cells.push_back(k);
  }
  int n = static_cast<int>(cells.size());
  FlowNet net(n + 2);
  int S = n, T = n + 1;
  // knight edges go between cells of opposite i-parity, so the shift
  // graph is bipartite and the b-matching is an exact max-flow
  for (int k = 0; k < n; ++k) {
    auto [i, j] = cells[k];
    bool even = ((i % 2) + 2) % 2 == 0;
    if (even)
      net.add(S, k, t.dim(i, j));
    else
      net.add(k, T, t.dim(i, j));
  }
  for (int k = 0; k < n; ++k) {
    auto [i, j] = cells[k];
    bool even = ((i % 2) + 2) % 2 == 0;
    for (auto [i2, j2] : {std::pair<int, int>{i + 1, j + 4},
                          std::pair<int, int>{i - 1, j - 4}}) {
      auto it = id.find({i2, j2});
      if (it == id.end()) continue;
      if (even)
        net.add(k, it->second, INT32_MAX / 2);
    }
  }
  // read per-cell matched units from the source/sink edge flows
  std::vector<int> matched(n, 0);
  net.maxflow(S, T);
  for (auto& e : net.adj[S]) {
    if (e.to < n) {
      // residual: original cap - remaining
      auto [i, j] = cells[e.to];
      matched[e.to] = t.dim(i, j) - e.cap;
    }
  }
  for (int k = 0; k < n; ++k) {
    auto [i, j] = cells[k];
    bool even = ((i % 2) + 2) % 2 == 0;
    if (!even) {
      for (auto& e : net.adj[k])
        if (e.to == T) matched[k] = t.dim(i, j) - e.cap;
    }
  }
  DimTable leftover;
  for (int k = 0; k < n; ++k) {
    auto [i, j] = cells[k];
    int rem = t.dim(i, j) - matched[k];
    if (rem < 0) throw InternalError("matching exceeded capacity");
    if (rem) leftover.set(i, j, rem);
  }
  return leftover;
}

std::vector<Certificate> higher_diff_certificate(const DimTable& kh, int s) {
  DimTable leftover = max_knight_matching(kh, s);
  std::vector<Certificate> out;
  std::set<std::pair<int, int>> done;
  for (auto& [cell, d] : leftover.entries()) {
    auto [i, j] = cell;
    if (done.count(cell)) continue;
    std::vector<Certificate> options;
    for (int n = 2; n <= 64; ++n) {
      if (kh.dim(i + 1, j + 4 * n) > 0)
        options.push_back({n, {i, j}, {i + 1, j + 4 * n}});
      if (kh.dim(i - 1, j - 4 * n) > 0)
        options.push_back({n, {i - 1, j - 4 * n}, {i, j}});
    }
    if (options.size() == 1) {
      out.push_back(options[0]);
      done.insert(options[0].source);
      done.insert(options[0].target);
    }
  }
  return out;
}

// --------------------------------------------------------- Alexander

namespace {

// exact polynomial division, used by the fraction-free elimination
Laurent1 poly_divide_exact(const Laurent1& a, const Laurent1& b) {
  if (b.is_zero()) throw InternalError("polynomial division by zero");
  Laurent1 rem = a, quot;
  while (!rem.is_zero() && rem.max_exp() >= b.max_exp()) {
    int e = rem.max_exp() - b.max_exp();
    Int lead = rem.coeff(rem.max_exp());
    Int blead = b.coeff(b.max_exp());
    if (lead % blead != 0)
      throw InternalError("polynomial division is not exact");
    Int q = lead / blead;
    quot.add(e, q);
    for (auto& [be, bc] : b.terms()) rem.add(be + e, -q * bc);
  }
  if (!rem.is_zero()) throw InternalError("polynomial division left remainder");
  return quot;
}

Laurent1 bareiss_det(std::vector<std::vector<Laurent1>> M) {
  size_t n = M.size();
  if (n == 0) {
    Laurent1 one;
    one.set(0, 1);
    return one;
  }
  Laurent1 prev;
  prev.set(0, 1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && M[piv][k].is_zero()) ++piv;
      if (piv == n) return Laurent1();
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        M[i][j] = poly_divide_exact(M[k][k] * M[i][j] - M[i][k] * M[k][j],
                                    prev);
    prev = M[k][k];
  }
  Laurent1 det = M[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

Laurent1 normalize_alexander(Laurent1 det) {
  if (det.is_zero())
    throw ValidationError("vanishing Alexander determinant (not a knot?)");
  det = det.shifted(-det.min_exp());
  int deg = det.max_exp();
  for (auto& [e, c] : det.terms())
    if (det.coeff(deg - e) != c)
      throw InternalError("Alexander polynomial not symmetric");
  if (deg % 2 != 0) throw InternalError("odd Alexander span");
  det = det.shifted(-deg / 2);
  Int at1 = det.eval_int(1);
  if (at1 != 1 && at1 != -1)
    throw InternalError("Alexander(1) != +-1: " + at1.str());
  if (at1 < 0) det = -det;
  return det;
}

}  // namespace

AlexanderResult alexander(const knotio::Diagram& d, int fm_span_bound) {
  AlexanderResult out;
  if (!d.is_knot())
    throw ValidationError("Alexander polynomial requires a knot diagram");
  if (d.size() == 0) {
    out.delta.set(0, 1);
    out.fox_milnor = fox_milnor(out.delta, fm_span_bound);
    return out;
  }
  // arcs: edges joined through over-strands
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int a) {
    if (!parent.count(a)) parent[a] = a;
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (auto& c : d.crossings()) {
    int a = find(c.e[1]), b = find(c.e[3]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> arc_index;
  for (auto& [e, ends] : d.incidences()) {
    int r = find(e);
    if (!arc_index.count(r)) {
      int k = static_cast<int>(arc_index.size());
      arc_index[r] = k;
    }
  }
  int narcs = static_cast<int>(arc_index.size());
  auto arc = [&](int e) { return arc_index.at(find(e)); };
  int drop = narcs - 1;  // delete the highest-numbered generator column
  int size = narcs - 1;
  if (size == 0) {
    out.delta.set(0, 1);
    out.fox_milnor = fox_milnor(out.delta, fm_span_bound);
    return out;
  }
  std::vector<std::vector<Laurent1>> M(
      size, std::vector<Laurent1>(size));
  int row = 0;
  for (auto& c : d.crossings()) {
    if (row == size) break;  // square submatrix of the n relations
    int o = arc(c.e[1]), u = arc(c.e[0]), w = arc(c.e[2]);
    Laurent1 ro, ru, rw;
    if (c.sign > 0) {
      ro.set(0, 1);
      ro.add(1, -1);  // 1 - t
      ru.set(1, 1);   // t
      rw.set(0, -1);  // -1
    } else {
      ro.set(1, 1);
      ro.add(0, -1);  // t - 1   (row scaled by t)
      ru.set(0, 1);   // 1
      rw.set(1, -1);  // -t
    }
    auto put = [&](int col, const Laurent1& v) {
      if (col != drop) M[row][col] = M[row][col] + v;
    };
    put(o, ro);
    put(u, ru);
    put(w, rw);
    ++row;
  }
  out.delta = normalize_alexander(bareiss_det(std::move(M)));
  out.fox_milnor = fox_milnor(out.delta, fm_span_bound);
  return out;
}

FoxMilnorResult fox_milnor(const Laurent1& delta, int span_bound) {
  FoxMilnorResult out;
  out.span_bound = span_bound;
  if (delta.is_zero()) throw ValidationError("zero Alexander polynomial");
  int span = delta.span();
  if (span % 2 != 0) throw ValidationError("Alexander span must be even");
  if (span > span_bound) {
    out.verdict = FoxMilnorResult::Verdict::Undecided;
    return out;
  }
  int g = span / 2;
  Int norm = 0;
  for (auto& [e, c] : delta.terms()) norm += c < 0 ? Int(-c) : c;
  long long B = norm.convert_to<long long>();
  if (g == 0) {
    if (delta.coeff(0) == 1) {
      out.verdict = FoxMilnorResult::Verdict::Passes;
      out.factor.set(0, 1);
    } else {
      out.verdict = FoxMilnorResult::Verdict::Fails;
    }
    return out;
  }
  std::vector<long long> coef(g + 1, -B);
  // leading coefficient positive (f is determined up to sign and units)
  for (;;) {
    if (coef[g] > 0) {
      Laurent1 f;
      for (int k = 0; k <= g; ++k)
        if (coef[k]) f.set(k, coef[k]);
      if (!f.is_zero() && f.max_exp() == g) {
        Laurent1 prod = f * f.reversed();
        if (prod == delta) {
          out.verdict = FoxMilnorResult::Verdict::Passes;
          out.factor = f;
          return out;
        }
      }
    }
    int k = 0;
    while (k <= g && coef[k] == B) coef[k++] = -B;
    if (k > g) break;
    ++coef[k];
  }
  out.verdict = FoxMilnorResult::Verdict::Fails;
  return out;
}

int unknotting_lower_bound(const lee::PageSet& p) {
  int N = p.last_nonzero_diff();
  return N >= 1 ? 2 * N - 1 : 0;
}

int unknotting_lower_bound(const std::vector<Certificate>& forced) {
  int N = 0;
  for (auto& c : forced) N = std::max(N, c.n);
  return N >= 1 ? 2 * N - 1 : 0;
}

// --------------------------------------------------------- reports

std::string report_json(const AuditReport& r) {
  nlohmann::json j;
  j["s"] = r.s;
  j["verdict"] = r.km.holds ? "holds" : "fails";
  if (r.km.holds) {
    j["f2"] = nlohmann::json::array();
    for (auto& [k, c] : r.km.f2.terms())
      j["f2"].push_back({{"t", k.first}, {"q", k.second}, {"coeff", c.str()}});
  } else {
    j["witness"] = {{"i", r.km.witness.first}, {"j", r.km.witness.second}};
    j["reason"] = r.km.reason;
  }
  j["certificates"] = nlohmann::json::array();
  for (auto& c : r.certificates)
    j["certificates"].push_back(
        {{"n", c.n},
         {"source", {{"i", c.source.first}, {"j", c.source.second}}},
         {"target", {{"i", c.target.first}, {"j", c.target.second}}}});
  if (r.alex) {
    nlohmann::json aj;
    aj["delta"] = nlohmann::json::array();
    for (auto& [e, c] : r.alex->delta.terms())
      aj["delta"].push_back({{"exp", e}, {"coeff", c.str()}});
    switch (r.alex->fox_milnor.verdict) {
      case FoxMilnorResult::Verdict::Passes:
        aj["foxMilnor"] = {{"verdict", "passes"},
                           {"factor", r.alex->fox_milnor.factor.str("t")}};
        break;
      case FoxMilnorResult::Verdict::Fails:
        aj["foxMilnor"] = {{"verdict", "fails"}};
        break;
      case FoxMilnorResult::Verdict::Undecided:
        aj["foxMilnor"] = {{"verdict", "undecided"},
                           {"spanBound", r.alex->fox_milnor.span_bound}};
        break;
    }
    j["alexander"] = aj;
  }
  j["unknottingBound"] = r.unknotting_bound;
  return j.dump(2);
}

std::string report_text(const AuditReport& r) {
  std::ostringstream os;
  os << "knight move decomposition: " << (r.km.holds ? "holds" : "FAILS")
     << " (s = " << r.s << ")\n";
  if (r.km.holds) {
    os << "  f2 = " << r.km.f2.str() << "\n";
  } else {
    os << "  witness cell (" << r.km.witness.first << ","
       << r.km.witness.second << "): " << r.km.reason << "\n";
  }
  for (auto& c : r.certificates)
    os << "  forced d_" << c.n << " != 0: (" << c.source.first << ","
       << c.source.second << ") -> (" << c.target.first << ","
       << c.target.second << ")\n";
  if (r.alex) {
    os << "  Alexander: " << r.alex->delta.str("t") << "; Fox-Milnor ";
    switch (r.alex->fox_milnor.verdict) {
      case FoxMilnorResult::Verdict::Passes:
        os << "passes with f = " << r.alex->fox_milnor.factor.str("t");
        break;
      case FoxMilnorResult::Verdict::Fails:
        os << "fails";
        break;
      case FoxMilnorResult::Verdict::Undecided:
        os << "undecided (span bound " << r.alex->fox_milnor.span_bound << ")";
        break;
    }
    os << "\n";
  }
  os << "  unknotting number >= " << r.unknotting_bound << "\n";
  return os.str();
}

}  // namespace audit
}  // namespace khv
