#include "khv/scan.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "khv/errors.hpp"

namespace khv {
namespace scan {

namespace {

std::map<Point, Point> mdict(const Matching& m) {
  std::map<Point, Point> out;
  for (auto& [a, b] : m) {
    out[a] = b;
    out[b] = a;
  }
  return out;
}

std::vector<std::vector<Point>> circuits(const std::map<Point, Point>& P,
                                         const std::map<Point, Point>& Q) {
  std::vector<std::vector<Point>> out;
  std::set<Point> seen;
  for (auto& [x0, y0] : P) {
    if (seen.count(x0)) continue;
    std::set<Point> comp;
    Point x = x0;
    while (!comp.count(x)) {
      comp.insert(x);
      Point y = P.at(x);
      comp.insert(y);
      x = Q.at(y);
    }
    seen.insert(comp.begin(), comp.end());
    out.push_back(std::vector<Point>(comp.begin(), comp.end()));
  }
  return out;
}

CircuitKey pkey(std::vector<Point> pts) {
  CircuitKey k;
  k.circle = false;
  k.pts = std::move(pts);
  return k;
}

CircuitKey ckey(int id) {
  CircuitKey k;
  k.circle = true;
  k.id = id;
  return k;
}

TermKey id_key(const Matching& match) {
  TermKey k;
  for (auto& [a, b] : match) {
    Sheet s;
    s.circuits.push_back(pkey({std::min(a, b), std::max(a, b)}));
    k.push_back(std::move(s));
  }
  std::sort(k.begin(), k.end());
  return k;
}

// Normalizes one assembled component: genus to dots, closed evaluation.
// Returns false if the term dies; multiplies coeff; appends the sheet.
bool norm_sheet(std::vector<CircuitKey> circ, int dots, int chi, Rat& coeff,
                TermKey& sheets) {
  int b = static_cast<int>(circ.size());
  int g2 = 2 - b - chi;
  if (g2 < 0 || g2 % 2 != 0) throw InternalError("non-orientable gluing");
  int g = g2 / 2;
  if (g > 0) {
    coeff *= Rat(Int(1) << g);
    dots += g;
  }
  if (dots >= 2) return false;
  if (b == 0) {
    if (dots != 1) return false;  // undotted sphere evaluates to zero
    return true;
  }
  std::sort(circ.begin(), circ.end());
  Sheet s;
  s.circuits = std::move(circ);
  s.dots = dots;
  sheets.push_back(std::move(s));
  return true;
}

struct SmallUF {
  std::vector<int> p;
  explicit SmallUF(int n) : p(n) {
    for (int k = 0; k < n; ++k) p[k] = k;
  }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

Morphism compose(const Morphism& f, const Morphism& g, const Matching& P,
                 const Matching& Q, const Matching& R) {
  auto Pm = mdict(P), Qm = mdict(Q), Rm = mdict(R);
  auto cg = circuits(Pm, Qm);
  auto cf = circuits(Qm, Rm);
  auto ch = circuits(Pm, Rm);
  std::map<Point, int> pig, pif;
  for (int k = 0; k < static_cast<int>(cg.size()); ++k)
    for (Point p : cg[k]) pig[p] = k;
  for (int k = 0; k < static_cast<int>(cf.size()); ++k)
    for (Point p : cf[k]) pif[p] = k;
  std::vector<Point> qreps;
  for (auto& [a, b] : Q) qreps.push_back(a);

  Morphism out;
  for (auto& [kg, coefg] : g.t) {
    std::map<CircuitKey, int> sg;
    for (int si = 0; si < static_cast<int>(kg.size()); ++si)
      for (auto& ck : kg[si].circuits) sg[ck] = si;
    // circuit index -> sheet index, by representative point
    std::vector<int> gsheet_of_circ(cg.size(), -1);
    for (int k = 0; k < static_cast<int>(cg.size()); ++k) {
      auto it = sg.find(pkey(cg[k]));
      if (it == sg.end()) throw InternalError("source term misses a circuit");
      gsheet_of_circ[k] = it->second;
    }
    for (auto& [kf, coef0] : f.t) {
      Rat coeff = coef0 * coefg;
      std::map<CircuitKey, int> sf;
      for (int si = 0; si < static_cast<int>(kf.size()); ++si)
        for (auto& ck : kf[si].circuits) sf[ck] = si;
      std::vector<int> fsheet_of_circ(cf.size(), -1);
      for (int k = 0; k < static_cast<int>(cf.size()); ++k) {
        auto it = sf.find(pkey(cf[k]));
        if (it == sf.end())
          throw InternalError("target term misses a circuit");
        fsheet_of_circ[k] = it->second;
      }
      int ng = static_cast<int>(kg.size());
      int nf = static_cast<int>(kf.size());
      SmallUF uf(ng + nf);
      for (Point p : qreps)
        uf.unite(gsheet_of_circ[pig[p]], ng + fsheet_of_circ[pif[p]]);
      std::map<int, int> chi, dots;
      std::map<int, std::vector<CircuitKey>> circ;
      for (int si = 0; si < ng; ++si) {
        int r = uf.find(si);
        chi[r] += 2 - static_cast<int>(kg[si].circuits.size());
        dots[r] += kg[si].dots;
        for (auto& ck : kg[si].circuits)
          if (ck.circle) circ[r].push_back(ck);
      }
      for (int si = 0; si < nf; ++si) {
        int r = uf.find(ng + si);
        chi[r] += 2 - static_cast<int>(kf[si].circuits.size());
        dots[r] += kf[si].dots;
        for (auto& ck : kf[si].circuits)
          if (ck.circle) circ[r].push_back(ck);
      }
      for (Point p : qreps) chi[uf.find(gsheet_of_circ[pig[p]])] -= 1;
      for (auto& comp : ch) {
        Point p = comp.front();
        circ[uf.find(gsheet_of_circ[pig[p]])].push_back(pkey(comp));
      }
      TermKey sheets;
      bool dead = false;
      for (auto& [r, x] : chi) {
        if (!norm_sheet(circ[r], dots[r], x, coeff, sheets) || coeff == 0) {
          dead = true;
          break;
        }
      }
      if (dead) continue;
      std::sort(sheets.begin(), sheets.end());
      out.add(sheets, coeff);
    }
  }
  return out;
}

}  // namespace

void Morphism::add(const TermKey& k, const Rat& c) {
  if (c == 0) return;
  auto it = t.find(k);
  if (it == t.end()) {
    t[k] = c;
  } else {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

Morphism Morphism::plus(const Morphism& o) const {
  Morphism out = *this;
  for (auto& [k, c] : o.t) out.add(k, c);
  return out;
}

Morphism Morphism::scaled(const Rat& f) const {
  Morphism out;
  if (f == 0) return out;
  for (auto& [k, c] : t) out.t[k] = c * f;
  return out;
}

int PartialComplex::add_obj(Obj o) {
  int i = nextid++;
  obj.emplace(i, std::move(o));
  return i;
}

void PartialComplex::set_entry(int i, int j, Morphism m) {
  if (!m.zero()) {
    din[j][i] = m;
    dout[i][j] = std::move(m);
  } else {
    auto it = dout.find(i);
    if (it != dout.end()) it->second.erase(j);
    auto jt = din.find(j);
    if (jt != din.end()) jt->second.erase(i);
  }
}

void PartialComplex::remove_obj(int i) {
  obj.erase(i);
  auto it = dout.find(i);
  if (it != dout.end()) {
    for (auto& [j, m] : it->second) din[j].erase(i);
    dout.erase(it);
  }
  auto jt = din.find(i);
  if (jt != din.end()) {
    for (auto& [j, m] : jt->second) dout[j].erase(i);
    din.erase(jt);
  }
}

long PartialComplex::entry_count() const {
  long n = 0;
  for (auto& [i, row] : dout) n += static_cast<long>(row.size());
  return n;
}

long PartialComplex::term_count() const {
  long n = 0;
  for (auto& [i, row] : dout)
    for (auto& [j, m] : row) n += static_cast<long>(m.t.size());
  return n;
}

void PartialComplex::fuse(Point x, Point y) {
  std::map<int, Matching> oldm;
  for (auto& [i, o] : obj) oldm[i] = o.match;
  std::map<int, std::optional<int>> gamma;
  for (auto& [i, o] : obj) {
    auto m = mdict(o.match);
    if (!m.count(x) || !m.count(y))
      throw InternalError("fusing unmatched boundary point");
    if (m[x] == y) {
      int g = nextcirc++;
      gamma[i] = g;
      Matching mm;
      for (auto& pr : o.match)
        if (pr.first != x && pr.second != x && pr.first != y &&
            pr.second != y)
          mm.push_back(pr);
      std::sort(mm.begin(), mm.end());
      o.match = std::move(mm);
      o.circles.push_back(g);
    } else {
      Point a = m[x], b = m[y];
      Matching mm;
      for (auto& pr : o.match) {
        bool hasx = pr.first == x || pr.second == x;
        bool hasy = pr.first == y || pr.second == y;
        if (!hasx && !hasy) mm.push_back(pr);
      }
      mm.push_back({std::min(a, b), std::max(a, b)});
      std::sort(mm.begin(), mm.end());
      gamma[i] = std::nullopt;
      o.match = std::move(mm);
    }
  }
  for (auto& [i, row] : dout) {
    for (auto& [j, mo] : row) {
      auto oldc = circuits(mdict(oldm[i]), mdict(oldm[j]));
      auto newc = circuits(mdict(obj[i].match), mdict(obj[j].match));
      // circuits through x and y and their replacements
      std::vector<Point> cx, cy;
      for (auto& comp : oldc) {
        if (std::binary_search(comp.begin(), comp.end(), x)) cx = comp;
        if (std::binary_search(comp.begin(), comp.end(), y)) cy = comp;
      }
      std::set<Point> region;
      for (Point p : cx) region.insert(p);
      for (Point p : cy) region.insert(p);
      region.erase(x);
      region.erase(y);
      std::vector<CircuitKey> newkeys;
      for (auto& comp : newc)
        if (region.count(comp.front())) newkeys.push_back(pkey(comp));
      if (gamma[i]) newkeys.push_back(ckey(*gamma[i]));
      if (gamma[j]) newkeys.push_back(ckey(*gamma[j]));
      CircuitKey kx = pkey(cx), ky = pkey(cy);

      Morphism out;
      for (auto& [key, coef0] : mo.t) {
        Rat coeff = coef0;
        int sx = -1, sy = -1;
        for (int si = 0; si < static_cast<int>(key.size()); ++si) {
          for (auto& ck : key[si].circuits) {
            if (ck == kx) sx = si;
            if (ck == ky) sy = si;
          }
        }
        if (sx < 0 || sy < 0)
          throw InternalError("term misses the fused circuits");
        std::vector<CircuitKey> keep;
        int dots, chi;
        if (sx == sy) {
          auto& sh = key[sx];
          chi = (2 - static_cast<int>(sh.circuits.size())) - 1;
          dots = sh.dots;
          for (auto& ck : sh.circuits)
            if (!(ck == kx) && !(ck == ky)) keep.push_back(ck);
        } else {
          auto& s1 = key[sx];
          auto& s2 = key[sy];
          chi = (2 - static_cast<int>(s1.circuits.size())) +
                (2 - static_cast<int>(s2.circuits.size())) - 1;
          dots = s1.dots + s2.dots;
          for (auto& ck : s1.circuits)
            if (!(ck == kx)) keep.push_back(ck);
          for (auto& ck : s2.circuits)
            if (!(ck == ky)) keep.push_back(ck);
        }
        for (auto& ck : newkeys) keep.push_back(ck);
        TermKey sheets;
        for (int si = 0; si < static_cast<int>(key.size()); ++si)
          if (si != sx && si != sy) sheets.push_back(key[si]);
        if (!norm_sheet(std::move(keep), dots, chi, coeff, sheets) ||
            coeff == 0)
          continue;
        std::sort(sheets.begin(), sheets.end());
        out.add(sheets, coeff);
      }
      mo = std::move(out);
      din[j][i] = mo;
    }
  }
  // clear entries that became zero
  for (auto& [i, row] : dout)
    for (auto it = row.begin(); it != row.end();) {
      if (it->second.zero()) {
        din[it->first].erase(i);
        it = row.erase(it);
      } else {
        ++it;
      }
    }
}

namespace {

Morphism deloop_rewrite(const Morphism& m, const CircuitKey& g, bool dotted) {
  Morphism out;
  for (auto& [key, coef0] : m.t) {
    Rat coeff = coef0;
    int si = -1;
    for (int k = 0; k < static_cast<int>(key.size()); ++k)
      for (auto& ck : key[k].circuits)
        if (ck == g) si = k;
    if (si < 0) throw InternalError("term misses the delooped circle");
    auto& sh = key[si];
    int chi = (2 - static_cast<int>(sh.circuits.size())) + 1;
    std::vector<CircuitKey> keep;
    for (auto& ck : sh.circuits)
      if (!(ck == g)) keep.push_back(ck);
    TermKey sheets;
    for (int k = 0; k < static_cast<int>(key.size()); ++k)
      if (k != si) sheets.push_back(key[k]);
    if (!norm_sheet(std::move(keep), sh.dots + (dotted ? 1 : 0), chi, coeff,
                    sheets) ||
        coeff == 0)
      continue;
    std::sort(sheets.begin(), sheets.end());
    out.add(sheets, coeff);
  }
  return out;
}

}  // namespace

void PartialComplex::deloop_all() {
  for (;;) {
    int target = -1;
    for (auto& [i, o] : obj)
      if (!o.circles.empty()) {
        target = i;
        break;
      }
    if (target < 0) return;
    Obj o = obj[target];
    int g = o.circles.front();
    std::vector<int> rest(o.circles.begin() + 1, o.circles.end());
    int op = add_obj({o.h, o.q + 1, o.match, rest});
    int om = add_obj({o.h, o.q - 1, o.match, rest});
    CircuitKey gk = ckey(g);
    auto din_it = din.find(target);
    if (din_it != din.end())
      for (auto& [src, m] : din_it->second) {
        set_entry(src, op, deloop_rewrite(m, gk, true));
        set_entry(src, om, deloop_rewrite(m, gk, false));
      }
    auto dout_it = dout.find(target);
    if (dout_it != dout.end())
      for (auto& [tgt, m] : dout_it->second) {
        set_entry(op, tgt, deloop_rewrite(m, gk, false));
        set_entry(om, tgt, deloop_rewrite(m, gk, true));
      }
    remove_obj(target);
  }
}

namespace {

void eliminate(PartialComplex& C, int i, int j, const Morphism& phi) {
  const Matching P = C.obj[i].match;
  TermKey idk = id_key(P);
  Rat c = phi.t.at(idk);
  Morphism inv;
  if (phi.t.size() == 1) {
    inv.t[idk] = 1 / c;
  } else {
    Morphism N;
    for (auto& [k, v] : phi.t)
      if (!(k == idk)) N.t[k] = v;
    Morphism acc, term;
    acc.t[idk] = 1;
    term.t[idk] = 1;
    bool done = false;
    for (int it = 0; it < 16; ++it) {
      term = compose(N, term, P, P, P).scaled(-1 / c);
      if (term.zero()) {
        done = true;
        break;
      }
      acc = acc.plus(term);
    }
    if (!done) throw InternalError("nilpotency cap exceeded in elimination");
    inv = acc.scaled(1 / c);
  }
  std::vector<std::pair<int, Morphism>> ins, outs;
  auto din_it = C.din.find(j);
  if (din_it != C.din.end())
    for (auto& [s, m] : din_it->second)
      if (s != i) ins.push_back({s, m});
  auto dout_it = C.dout.find(i);
  if (dout_it != C.dout.end())
    for (auto& [t2, m] : dout_it->second)
      if (t2 != j) outs.push_back({t2, m});
  for (auto& [s, delta] : ins) {
    const Matching& Ms = C.obj[s].match;
    Morphism mid = compose(inv, delta, Ms, P, P);
    for (auto& [t2, gam] : outs) {
      Morphism corr = compose(gam, mid, Ms, P, C.obj[t2].match);
      Morphism cur;
      auto r = C.dout.find(s);
      if (r != C.dout.end()) {
        auto e = r->second.find(t2);
        if (e != r->second.end()) cur = e->second;
      }
      C.set_entry(s, t2, cur.plus(corr.scaled(-1)));
    }
  }
  C.remove_obj(i);
  C.remove_obj(j);
}

}  // namespace

void PartialComplex::eliminate_all() {
  for (;;) {
    int bi = -1, bj = -1;
    bool best_single = false;
    for (auto& [i, row] : dout) {
      if (!obj.count(i)) continue;
      const Obj& oi = obj[i];
      if (!oi.circles.empty()) continue;
      for (auto& [j, m] : row) {
        if (!obj.count(j)) continue;
        const Obj& oj = obj[j];
        if (!oj.circles.empty() || oi.match != oj.match) continue;
        auto it = m.t.find(id_key(oi.match));
        if (it == m.t.end() || it->second == 0) continue;
        bool single = m.t.size() == 1;
        if (bi < 0 || (single && !best_single)) {
          bi = i;
          bj = j;
          best_single = single;
          if (single) break;
        }
      }
      if (best_single) break;
    }
    if (bi < 0) return;
    eliminate(*this, bi, bj, dout[bi][bj]);
  }
}

void PartialComplex::check_composition_zero() const {
  for (auto& [i, row] : dout) {
    for (auto& [j, m1] : row) {
      auto it = dout.find(j);
      if (it == dout.end()) continue;
      for (auto& [k, m2] : it->second) {
        Morphism c = compose(m2, m1, obj.at(i).match, obj.at(j).match,
                             obj.at(k).match);
        Morphism cur;
        // sum over all middle objects with the same (i, k)
        for (auto& [j2, m1b] : row) {
          auto it2 = dout.find(j2);
          if (it2 == dout.end()) continue;
          auto e = it2->second.find(k);
          if (e == it2->second.end()) continue;
          cur = cur.plus(compose(e->second, m1b, obj.at(i).match,
                                 obj.at(j2).match, obj.at(k).match));
        }
        if (!cur.zero())
          throw InternalError("composition of consecutive matrices nonzero");
        break;  // (i, k) fully checked via the inner sum
      }
    }
  }
}

// ------------------------------------------------------------ serialization

std::string PartialComplex::serialize(const std::string& sig,
                                      int step) const {
  std::ostringstream os;
  os << "KHVSCAN 1\n" << sig << "\n" << step << "\n";
  os << nextid << " " << nextcirc << " " << peak << "\n";
  os << obj.size() << "\n";
  for (auto& [i, o] : obj) {
    os << i << " " << o.h << " " << o.q << " " << o.circles.size();
    for (int g : o.circles) os << " " << g;
    os << " " << o.match.size();
    for (auto& [a, b] : o.match) os << " " << a << " " << b;
    os << "\n";
  }
  os << entry_count() << "\n";
  for (auto& [i, row] : dout)
    for (auto& [j, m] : row) {
      os << i << " " << j << " " << m.t.size() << "\n";
      for (auto& [key, c] : m.t) {
        os << "  " << num(c) << "/" << den(c) << " " << key.size();
        for (auto& sh : key) {
          os << " s " << sh.dots << " " << sh.circuits.size();
          for (auto& ck : sh.circuits) {
            if (ck.circle) {
              os << " c " << ck.id;
            } else {
              os << " p " << ck.pts.size();
              for (Point p : ck.pts) os << " " << p;
            }
          }
        }
        os << "\n";
      }
    }
  return os.str();
}

PartialComplex PartialComplex::deserialize(const std::string& text,
                                           const std::string& sig,
                                           int* step) {
  std::istringstream is(text);
  std::string magic;
  int version;
  is >> magic >> version;
  if (magic != "KHVSCAN" || version != 1)
    throw ParseError("unrecognized checkpoint format");
  std::string fsig;
  is >> fsig;
  if (fsig != sig)
    throw ValidationError("checkpoint does not match this diagram/order");
  PartialComplex C;
  is >> *step >> C.nextid >> C.nextcirc >> C.peak;
  size_t nobj;
  is >> nobj;
  for (size_t k = 0; k < nobj; ++k) {
    int i;
    Obj o;
    size_t nc, np;
    is >> i >> o.h >> o.q >> nc;
    o.circles.resize(nc);
    for (auto& g : o.circles) is >> g;
    is >> np;
    o.match.resize(np);
    for (auto& [a, b] : o.match) is >> a >> b;
    C.obj[i] = std::move(o);
  }
  size_t nent;
  is >> nent;
  for (size_t k = 0; k < nent; ++k) {
    int i, j;
    size_t nterms;
    is >> i >> j >> nterms;
    Morphism m;
    for (size_t t = 0; t < nterms; ++t) {
      std::string frac;
      size_t nsheets;
      is >> frac >> nsheets;
      auto slash = frac.find('/');
      Rat c = Rat(Int(frac.substr(0, slash)), Int(frac.substr(slash + 1)));
      TermKey key;
      for (size_t s = 0; s < nsheets; ++s) {
        std::string tag;
        is >> tag;
        if (tag != "s") throw ParseError("bad checkpoint sheet");
        Sheet sh;
        size_t ncirc;
        is >> sh.dots >> ncirc;
        for (size_t cix = 0; cix < ncirc; ++cix) {
          std::string kind;
          is >> kind;
          if (kind == "c") {
            int id;
            is >> id;
            sh.circuits.push_back(ckey(id));
          } else if (kind == "p") {
            size_t npts;
            is >> npts;
            std::vector<Point> pts(npts);
            for (auto& p : pts) is >> p;
            sh.circuits.push_back(pkey(pts));
          } else {
            throw ParseError("bad checkpoint circuit");
          }
        }
        std::sort(sh.circuits.begin(), sh.circuits.end());
        key.push_back(std::move(sh));
      }
      std::sort(key.begin(), key.end());
      m.t[key] = c;
    }
    C.dout[i][j] = m;
    C.din[j][i] = std::move(m);
  }
  if (!is) throw ParseError("truncated checkpoint");
  return C;
}

// ------------------------------------------------------------ the scan

ScanOutcome reduced_kh_full(const knotio::Diagram& d,
                            const ScanOptions& opts) {
  if (!d.is_knot()) throw ValidationError("scanning requires a knot diagram");
  ScanOutcome out;
  if (d.size() == 0) {
    out.table.set(0, 1, 1);
    out.table.set(0, -1, 1);
    out.peak_objects = 1;
    return out;
  }
  std::vector<int> order =
      opts.order.empty() ? knotio::girth_order(d) : opts.order;
  if (order.size() != d.size())
    throw ValidationError("scan order must list every crossing once");

  std::ostringstream sigbuf;
  sigbuf << d.pd_text();
  for (int c : order) sigbuf << "|" << c;
  std::string sig = std::to_string(std::hash<std::string>{}(sigbuf.str()));

  PartialComplex C;
  int start_step = 0;
  std::map<int, Point> open_end;
  auto rebuild_open = [&](int upto) {
    open_end.clear();
    std::map<int, int> seen;
    for (int k = 0; k < upto; ++k) {
      int ci = order[k];
      for (int s = 0; s < 4; ++s) {
        int e = d.crossings()[ci].e[s];
        if (open_end.count(e))
          open_end.erase(e);
        else
          open_end[e] = 4 * ci + s;
      }
    }
  };

  bool resumed = false;
  if (!opts.checkpoint_path.empty()) {
    std::ifstream f(opts.checkpoint_path);
    if (f) {
      std::stringstream buf;
      buf << f.rdbuf();
      C = PartialComplex::deserialize(buf.str(), sig, &start_step);
      rebuild_open(start_step);
      resumed = true;
      if (opts.progress)
        *opts.progress << "resumed at step " << start_step << " with "
                       << C.obj.size() << " objects\n";
    }
  }
  if (!resumed) C.add_obj({0, 0, {}, {}});

  auto t0 = std::chrono::steady_clock::now();
  for (int step = start_step; step < static_cast<int>(order.size()); ++step) {
    if (opts.stop_after_steps > 0 && step >= opts.stop_after_steps) {
      if (!opts.checkpoint_path.empty()) {
        std::ofstream f(opts.checkpoint_path);
        f << C.serialize(sig, step);
      }
      out.finished = false;
      out.steps_done = step;
      out.peak_objects = C.peak;
      return out;
    }
    if (opts.time_budget_sec > 0) {
      double el = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      if (el > opts.time_budget_sec) {
        if (!opts.checkpoint_path.empty()) {
          std::ofstream f(opts.checkpoint_path);
          f << C.serialize(sig, step);
        }
        throw BudgetError("time budget exhausted at step " +
                          std::to_string(step) + "/" +
                          std::to_string(order.size()));
      }
    }
    int ci = order[step];
    auto& t = d.crossings()[ci].e;
    Point a = 4 * ci + 0, b = 4 * ci + 1, c2 = 4 * ci + 2, dd = 4 * ci + 3;
    Matching arcs0{{a, b}, {c2, dd}}, arcs1{{a, dd}, {b, c2}};
    int dh0, dq0, dh1, dq1;
    if (d.crossings()[ci].sign > 0) {
      dh0 = 0;
      dq0 = 1;
      dh1 = 1;
      dq1 = 2;
    } else {
      dh0 = -1;
      dq0 = -2;
      dh1 = 0;
      dq1 = -1;
    }
    std::vector<int> oldids;
    for (auto& [i, o] : C.obj) oldids.push_back(i);
    std::map<int, std::pair<int, int>> pairs;
    for (int i : oldids) {
      const Obj& o = C.obj[i];
      Matching m0 = o.match, m1 = o.match;
      m0.insert(m0.end(), arcs0.begin(), arcs0.end());
      m1.insert(m1.end(), arcs1.begin(), arcs1.end());
      std::sort(m0.begin(), m0.end());
      std::sort(m1.begin(), m1.end());
      int i0 = C.add_obj({o.h + dh0, o.q + dq0, std::move(m0), o.circles});
      int i1 = C.add_obj({o.h + dh1, o.q + dq1, std::move(m1), o.circles});
      if (!o.circles.empty())
        throw InternalError("tensoring with undelooped object");
      pairs[i] = {i0, i1};
    }
    TermKey ext0 = id_key(arcs0), ext1 = id_key(arcs1);
    for (int i : oldids) {
      auto it = C.dout.find(i);
      if (it == C.dout.end()) continue;
      std::vector<std::pair<int, Morphism>> row(it->second.begin(),
                                                it->second.end());
      for (auto& [j, m] : row) {
        if (!pairs.count(j)) continue;
        Morphism m0, m1;
        for (auto& [key, c] : m.t) {
          TermKey k0 = key, k1 = key;
          k0.insert(k0.end(), ext0.begin(), ext0.end());
          k1.insert(k1.end(), ext1.begin(), ext1.end());
          std::sort(k0.begin(), k0.end());
          std::sort(k1.begin(), k1.end());
          m0.t[k0] = c;
          m1.t[k1] = c;
        }
        C.set_entry(pairs[i].first, pairs[j].first, std::move(m0));
        C.set_entry(pairs[i].second, pairs[j].second, std::move(m1));
      }
    }
    for (int i : oldids) {
      const Obj& o = C.obj[i];
      Sheet saddle;
      saddle.circuits.push_back(pkey({a, b, c2, dd}));
      TermKey skey{saddle};
      for (auto& [pa, pb] : o.match) {
        Sheet s;
        s.circuits.push_back(pkey({pa, pb}));
        skey.push_back(std::move(s));
      }
      std::sort(skey.begin(), skey.end());
      Morphism sm;
      sm.t[skey] = (o.h % 2 == 0) ? Rat(1) : Rat(-1);
      C.set_entry(pairs[i].first, pairs[i].second, std::move(sm));
    }
    for (int i : oldids) C.remove_obj(i);
    for (int s = 0; s < 4; ++s) {
      int e = t[s];
      Point p = 4 * ci + s;
      auto it = open_end.find(e);
      if (it != open_end.end()) {
        Point q = it->second;
        open_end.erase(it);
        C.fuse(p, q);
      } else {
        open_end[e] = p;
      }
    }
    C.deloop_all();
    if (opts.paranoid) C.check_composition_zero();
    C.eliminate_all();
    if (opts.paranoid) C.check_composition_zero();
    C.peak = std::max(C.peak, static_cast<long>(C.obj.size()));
    if (opts.object_ceiling > 0 &&
        static_cast<long>(C.obj.size()) > opts.object_ceiling)
      throw BudgetError("object ceiling exceeded at step " +
                        std::to_string(step + 1));
    if (opts.mem_budget_mb > 0) {
      long est_mb = (C.term_count() * 200 + C.obj.size() * 100) / 1000000;
      if (est_mb > opts.mem_budget_mb) {
        if (!opts.checkpoint_path.empty()) {
          std::ofstream f(opts.checkpoint_path);
          f << C.serialize(sig, step + 1);
        }
        throw BudgetError("memory budget estimate exceeded");
      }
    }
    if (opts.progress)
      *opts.progress << "step " << step + 1 << "/" << order.size()
                     << " objects=" << C.obj.size()
                     << " entries=" << C.entry_count() << "\n";
    if (!opts.checkpoint_path.empty() &&
        (step + 1) % std::max(1, 1) == 0 &&
        step + 1 < static_cast<int>(order.size())) {
      std::ofstream f(opts.checkpoint_path);
      f << C.serialize(sig, step + 1);
    }
  }
  if (!open_end.empty()) throw InternalError("open endpoints after scan");
  for (auto& [i, o] : C.obj) {
    if (!o.match.empty() || !o.circles.empty())
      throw InternalError("non-trivial object survived the scan");
    if (C.dout.count(i) && !C.dout[i].empty())
      throw InternalError("differential survived full elimination");
    out.table.add(o.h, o.q, 1);
  }
  out.peak_objects = C.peak;
  out.steps_done = static_cast<int>(order.size());
  if (!opts.checkpoint_path.empty()) std::remove(opts.checkpoint_path.c_str());
  return out;
}

grading::DimTable reduced_kh(const knotio::Diagram& d,
                             const ScanOptions& opts) {
  ScanOutcome o = reduced_kh_full(d, opts);
  if (!o.finished) throw BudgetError("scan stopped before completion");
  return o.table;
}

}  // namespace scan
}  // namespace khv
