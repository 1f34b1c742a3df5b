#include "khv/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "khv/errors.hpp"

namespace khv {
namespace knotio {

namespace {

using IncMap = std::map<int, std::array<EdgeEnd, 2>>;

IncMap build_incidences(const std::vector<Crossing>& xs) {
  std::map<int, std::vector<EdgeEnd>> inc;
  for (int ci = 0; ci < static_cast<int>(xs.size()); ++ci)
    for (int s = 0; s < 4; ++s) inc[xs[ci].e[s]].push_back({ci, s});
  IncMap out;
  for (auto& [e, occ] : inc) {
    if (occ.size() != 2)
      throw ValidationError("edge incidence: edge " + std::to_string(e) +
                            " occurs " + std::to_string(occ.size()) +
                            " times");
    out[e] = {occ[0], occ[1]};
  }
  return out;
}

// Orient each strand; direction forced by under slots where present,
// otherwise deterministic. Returns heads and the component count.
std::pair<std::map<int, EdgeEnd>, int> propagate(
    const std::vector<Crossing>& xs, const IncMap& inc) {
  std::map<int, EdgeEnd> heads;
  int comps = 0;
  auto other = [&](int e, EdgeEnd at) {
    auto& both = inc.at(e);
    return both[0] == at ? both[1] : both[0];
  };
  for (auto& [e0, ends] : inc) {
    if (heads.count(e0)) continue;
    ++comps;
    std::vector<std::pair<int, EdgeEnd>> strand;
    EdgeEnd h = std::max(ends[0], ends[1]);
    int e = e0;
    std::set<int> seen;
    while (!seen.count(e)) {
      seen.insert(e);
      strand.push_back({e, h});
      int s2 = (h.slot + 2) % 4;
      int e2 = xs[h.crossing].e[s2];
      h = other(e2, {h.crossing, s2});
      e = e2;
    }
    int bad = 0;
    for (auto& [ee, hh] : strand) {
      EdgeEnd tt = other(ee, hh);
      if (hh.slot == 2 || tt.slot == 0) ++bad;
    }
    for (auto& [ee, hh] : strand) heads[ee] = bad ? other(ee, hh) : hh;
  }
  return {heads, comps};
}

}  // namespace

Diagram::Diagram(std::vector<Crossing> crossings, bool rotate_fix)
    : x_(std::move(crossings)) {
  orient_and_validate(rotate_fix);
}

void Diagram::orient_and_validate(bool rotate_fix) {
  inc_ = build_incidences(x_);
  auto [heads, comps] = propagate(x_, inc_);

  if (rotate_fix) {
    bool changed = false;
    for (int ci = 0; ci < static_cast<int>(x_.size()); ++ci) {
      auto& t = x_[ci].e;
      if (heads[t[0]] == EdgeEnd{ci, 0}) continue;
      if (heads[t[2]] == EdgeEnd{ci, 2}) {
        t = {t[2], t[3], t[0], t[1]};
        changed = true;
      }
    }
    if (changed) {
      inc_ = build_incidences(x_);
      std::tie(heads, comps) = propagate(x_, inc_);
    }
  }

  heads_ = heads;
  components_ = comps;
  nplus_ = nminus_ = 0;
  for (int ci = 0; ci < static_cast<int>(x_.size()); ++ci) {
    auto& t = x_[ci].e;
    if (heads_[t[0]] != EdgeEnd{ci, 0})
      throw ValidationError("orientation: slot 0 must be the incoming under");
    if (heads_[t[2]] == EdgeEnd{ci, 2})
      throw ValidationError("orientation: under strand does not flow through");
    bool din = heads_[t[3]] == EdgeEnd{ci, 3};
    bool bin = heads_[t[1]] == EdgeEnd{ci, 1};
    if (din == bin)
      throw ValidationError("orientation: over strand flow inconsistent");
    x_[ci].sign = din ? +1 : -1;
    (din ? nplus_ : nminus_)++;
  }
}

EdgeEnd Diagram::head(int edge) const {
  auto it = heads_.find(edge);
  if (it == heads_.end()) throw InternalError("unknown edge");
  return it->second;
}

EdgeEnd Diagram::tail(int edge) const {
  auto h = head(edge);
  auto& both = inc_.at(edge);
  return both[0] == h ? both[1] : both[0];
}

int Diagram::next_edge(int edge) const {
  auto h = head(edge);
  return x_[h.crossing].e[(h.slot + 2) % 4];
}

Diagram Diagram::mirrored() const {
  std::vector<Crossing> out;
  out.reserve(x_.size());
  for (auto& c : x_) {
    auto& t = c.e;
    if (c.sign > 0)
      out.push_back({{t[3], t[0], t[1], t[2]}});
    else
      out.push_back({{t[1], t[2], t[3], t[0]}});
  }
  return Diagram(out);
}

Diagram Diagram::renumbered() const {
  if (x_.empty()) return *this;
  if (!is_knot()) throw ValidationError("renumbering requires a knot");
  std::map<int, int> lab;
  int e = inc_.begin()->first;
  while (!lab.count(e)) {
    int k = static_cast<int>(lab.size()) + 1;
    lab[e] = k;
    e = next_edge(e);
  }
  std::vector<Crossing> out;
  out.reserve(x_.size());
  for (auto& c : x_)
    out.push_back(
        {{lab.at(c.e[0]), lab.at(c.e[1]), lab.at(c.e[2]), lab.at(c.e[3])}});
  return Diagram(out);
}

std::string Diagram::pd_text() const {
  if (x_.empty()) return "UNKNOT";
  std::ostringstream os;
  for (size_t k = 0; k < x_.size(); ++k) {
    if (k) os << " ";
    os << "X[" << x_[k].e[0] << "," << x_[k].e[1] << "," << x_[k].e[2] << ","
       << x_[k].e[3] << "]";
  }
  return os.str();
}

bool Diagram::isomorphic(const Diagram& other) const {
  if (size() != other.size()) return false;
  if (x_.empty()) return true;
  if (!is_knot() || !other.is_knot())
    throw ValidationError("isomorphism check implemented for knots only");
  auto canon = [](const Diagram& d) {
    std::vector<std::vector<std::array<int, 4>>> all;
    for (auto& [start, ends] : d.inc_) {
      std::map<int, int> lab;
      int e = start;
      while (!lab.count(e)) {
        int k = static_cast<int>(lab.size()) + 1;
        lab[e] = k;
        e = d.next_edge(e);
      }
      std::vector<std::array<int, 4>> xs;
      for (auto& c : d.x_)
        xs.push_back(
            {lab.at(c.e[0]), lab.at(c.e[1]), lab.at(c.e[2]), lab.at(c.e[3])});
      std::sort(xs.begin(), xs.end());
      all.push_back(xs);
    }
    return *std::min_element(all.begin(), all.end());
  };
  return canon(*this) == canon(other);
}

// ------------------------------------------------------------ parsing

Diagram parse_pd(const std::string& text) {
  std::string clean;
  clean.reserve(text.size());
  for (size_t k = 0; k < text.size();) {
    if (text[k] == '#') {
      while (k < text.size() && text[k] != '\n') ++k;
    } else {
      clean.push_back(text[k]);
      ++k;
    }
  }
  std::istringstream is(clean);
  std::vector<Crossing> xs;
  std::string tok;
  bool unknot = false;
  while (is >> tok) {
    if (tok == "UNKNOT") {
      unknot = true;
      continue;
    }
    if (tok.rfind("X[", 0) != 0 || tok.back() != ']')
      throw ParseError("malformed token '" + tok + "'");
    std::string body = tok.substr(2, tok.size() - 3);
    std::array<int, 4> e{};
    size_t pos = 0;
    for (int k = 0; k < 4; ++k) {
      size_t comma = body.find(',', pos);
      if (k < 3 && comma == std::string::npos)
        throw ParseError("malformed tuple '" + tok + "'");
      std::string num =
          (k == 3) ? body.substr(pos) : body.substr(pos, comma - pos);
      size_t used = 0;
      try {
        e[k] = std::stoi(num, &used);
      } catch (...) {
        throw ParseError("malformed edge id '" + num + "'");
      }
      if (used != num.size())
        throw ParseError("malformed edge id '" + num + "'");
      pos = comma + 1;
    }
    xs.push_back({e});
  }
  if (unknot && !xs.empty())
    throw ParseError("UNKNOT keyword mixed with crossings");
  return Diagram(xs);
}

// ------------------------------------------------------------ braids

Diagram from_braid(const std::vector<int>& word, int strands) {
  if (strands < 1) throw ValidationError("strands must be positive");
  for (int w : word)
    if (w == 0 || std::abs(w) >= strands)
      throw ValidationError("braid generator index out of range");
  if (word.empty()) return Diagram();
  int next = strands;
  std::vector<int> cur(strands), top(strands);
  for (int k = 0; k < strands; ++k) cur[k] = top[k] = k + 1;
  std::vector<Crossing> xs;
  for (int w : word) {
    int i = std::abs(w) - 1;
    int nL = ++next, nR = ++next;
    if (w > 0)
      xs.push_back({{cur[i], nL, nR, cur[i + 1]}});
    else
      xs.push_back({{cur[i + 1], cur[i], nL, nR}});
    cur[i] = nL;
    cur[i + 1] = nR;
  }
  std::map<int, int> rename;
  for (int k = 0; k < strands; ++k) rename[cur[k]] = top[k];
  for (auto& c : xs)
    for (auto& e : c.e) {
      auto it = rename.find(e);
      if (it != rename.end()) e = it->second;
    }
  Diagram d(xs);
  return d.is_knot() ? d.renumbered() : d;
}

// ------------------------------------------------------------ full twist

static std::vector<int> full_twist_word(int k, int sign) {
  std::vector<int> w;
  for (int rep = 0; rep < k; ++rep)
    for (int g = 1; g < k; ++g) w.push_back(sign > 0 ? g : -(k - g));
  return w;
}

Diagram insert_full_twist(const Diagram& d, const TwistSpec& spec) {
  int k = spec.strand_count;
  if (k <= 0) throw ValidationError("twist strand count must be positive");
  if (spec.sign != 1 && spec.sign != -1)
    throw ValidationError("twist sign must be +1 or -1");
  if (k == 1) return d;  // adds 1*0 = 0 crossings

  if (d.size() == 0) {
    // split the round unknot into k parallel strands and twist; the
    // strands zigzag so consecutive ones run antiparallel
    std::vector<int> word = full_twist_word(k, spec.sign);
    int next = k;
    std::vector<int> cur(k), top(k);
    for (int i = 0; i < k; ++i) cur[i] = top[i] = i + 1;
    std::vector<Crossing> xs;
    for (int w : word) {
      int i = std::abs(w) - 1;
      int nL = ++next, nR = ++next;
      if (w > 0)
        xs.push_back({{cur[i], nL, nR, cur[i + 1]}});
      else
        xs.push_back({{cur[i + 1], cur[i], nL, nR}});
      cur[i] = nL;
      cur[i + 1] = nR;
    }
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int a) {
      if (!parent.count(a)) parent[a] = a;
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (int i = 0; i + 1 < k; i += 2) unite(cur[i], cur[i + 1]);
    for (int i = 1; i + 1 < k; i += 2) unite(top[i], top[i + 1]);
    if (k % 2 == 0)
      unite(top[0], top[k - 1]);
    else
      unite(cur[k - 1], top[0]);
    for (auto& c : xs)
      for (auto& e : c.e) e = find(e);
    Diagram out{xs};
    return out.is_knot() ? out.renumbered() : out;
  }

  if (static_cast<int>(spec.attachment.size()) != k)
    throw ValidationError("attachment list must have k edges");
  std::set<int> uniq(spec.attachment.begin(), spec.attachment.end());
  if (static_cast<int>(uniq.size()) != k)
    throw ValidationError("attachment edges must be pairwise distinct");
  int maxe = 0;
  for (auto& [e, ends] : d.incidences()) maxe = std::max(maxe, e);
  for (int e : spec.attachment)
    if (!d.incidences().count(e))
      throw ValidationError("attachment edge missing: " + std::to_string(e));

  int next = maxe;
  std::vector<Crossing> xs;
  for (auto& c : d.crossings()) xs.push_back({c.e});
  // cut each attachment edge: the tail side keeps the id and feeds the
  // braid top, the head side reconnects to the braid bottom
  std::vector<int> cur(k), bottom_target(k);
  for (int m = 0; m < k; ++m) {
    int e = spec.attachment[m];
    EdgeEnd h = d.head(e);
    int fresh = ++next;
    xs[h.crossing].e[h.slot] = fresh;
    cur[m] = e;
    bottom_target[m] = fresh;
  }
  for (int w : full_twist_word(k, spec.sign)) {
    int i = std::abs(w) - 1;
    int nL = ++next, nR = ++next;
    if (w > 0)
      xs.push_back({{cur[i], nL, nR, cur[i + 1]}});
    else
      xs.push_back({{cur[i + 1], cur[i], nL, nR}});
    cur[i] = nL;
    cur[i + 1] = nR;
  }
  std::map<int, int> rename;
  for (int m = 0; m < k; ++m) rename[cur[m]] = bottom_target[m];
  for (auto& c : xs)
    for (auto& e : c.e) {
      auto it = rename.find(e);
      if (it != rename.end()) e = it->second;
    }
  Diagram out{xs};
  return out.is_knot() ? out.renumbered() : out;
}


std::vector<int> girth_order(const Diagram& d) {
  int n = static_cast<int>(d.size());
  std::vector<int> order;
  std::set<int> remaining;
  for (int k = 0; k < n; ++k) remaining.insert(k);
  std::map<int, int> seen;
  int nopen = 0;
  while (!remaining.empty()) {
    int best_b = 0, best_c = -1;
    for (int ci : remaining) {
      std::map<int, int> cnt(seen);
      int b = nopen;
      for (int s = 0; s < 4; ++s) {
        int e = d.crossings()[ci].e[s];
        int c0 = cnt[e];
        b += (c0 % 2 == 1) ? -1 : 1;
        cnt[e] = c0 + 1;
      }
      if (best_c < 0 || b < best_b) {
        best_b = b;
        best_c = ci;
      }
    }
    order.push_back(best_c);
    remaining.erase(best_c);
    for (int s = 0; s < 4; ++s) seen[d.crossings()[best_c].e[s]]++;
    nopen = 0;
    for (auto& [e, c] : seen)
      if (c % 2 == 1) ++nopen;
  }
  return order;
}
}  // namespace knotio
}  // namespace khv
