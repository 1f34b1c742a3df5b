#include "khv/jones.hpp"

#include <map>
#include <vector>

#include "khv/errors.hpp"

namespace khv {
namespace grading {

namespace {

using Matching = std::map<int, int>;  // open endpoint -> partner

// Fuse one smoothing arc into the partial matching; counts closed circles.
int add_arc(Matching& m, int u, int v) {
  if (u == v) return 1;
  auto iu = m.find(u);
  auto iv = m.find(v);
  int pu = iu == m.end() ? -1 : iu->second;
  int pv = iv == m.end() ? -1 : iv->second;
  if (iu != m.end()) m.erase(iu);
  if (iv != m.end()) m.erase(v);
  if (pu == v) return 1;
  int a = pu < 0 ? u : pu;
  int b = pv < 0 ? v : pv;
  if (pu >= 0) m.erase(pu);
  if (pv >= 0) m.erase(pv);
  m[a] = b;
  m[b] = a;
  return 0;
}

}  // namespace

Laurent1 kauffman_jones(const knotio::Diagram& d, int crossing_budget) {
  Laurent1 circ;
  circ.set(1, 1);
  circ.set(-1, 1);
  if (d.size() == 0) return circ;
  if (static_cast<int>(d.size()) > crossing_budget)
    throw BudgetError("bracket budget exceeded: " + std::to_string(d.size()) +
                      " crossings");
  std::map<std::vector<std::pair<int, int>>, Laurent1> states;
  states[{}] = Laurent1::monomial(1, 0);
  for (int ci : knotio::girth_order(d)) {
    auto& t = d.crossings()[ci].e;
    int sign = d.crossings()[ci].sign;
    Laurent1 w0, w1;
    if (sign > 0) {
      w0.set(1, 1);    // q
      w1.set(2, -1);   // -q^2
    } else {
      w0.set(-2, -1);  // -q^-2
      w1.set(-1, 1);   // q^-1
    }
    std::map<std::vector<std::pair<int, int>>, Laurent1> next;
    for (auto& [mt, poly] : states) {
      for (int r = 0; r < 2; ++r) {
        Matching m(mt.begin(), mt.end());
        int circles = 0;
        if (r == 0) {
          circles += add_arc(m, t[0], t[1]);
          circles += add_arc(m, t[2], t[3]);
        } else {
          circles += add_arc(m, t[0], t[3]);
          circles += add_arc(m, t[1], t[2]);
        }
        Laurent1 p = poly * (r == 0 ? w0 : w1);
        for (int k = 0; k < circles; ++k) p = p * circ;
        std::vector<std::pair<int, int>> key(m.begin(), m.end());
        auto it = next.find(key);
        if (it == next.end())
          next[key] = p;
        else
          it->second = it->second + p;
      }
    }
    states.clear();
    for (auto& [k, v] : next)
      if (!v.is_zero()) states[k] = v;
  }
  if (states.size() > 1 || (states.size() == 1 && !states.begin()->first.empty()))
    throw InternalError("bracket contraction left open endpoints");
  return states.empty() ? Laurent1() : states.begin()->second;
}

}  // namespace grading
}  // namespace khv
