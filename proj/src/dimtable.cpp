#include "khv/dimtable.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "khv/errors.hpp"

namespace khv {
namespace grading {

void DimTable::set(int i, int j, int d) {
  if (d < 0) throw ValidationError("negative dimension");
  if (d == 0)
    t_.erase({i, j});
  else
    t_[{i, j}] = d;
}

void DimTable::add(int i, int j, int d) { set(i, j, dim(i, j) + d); }

int DimTable::total() const {
  int s = 0;
  for (auto& [k, d] : t_) s += d;
  return s;
}

bool DimTable::odd_j_support() const {
  for (auto& [k, d] : t_)
    if (k.second % 2 == 0) return false;
  return true;
}

DimTable DimTable::mirrored() const {
  DimTable out;
  for (auto& [k, d] : t_) out.set(-k.first, -k.second, d);
  return out;
}

Laurent2 DimTable::poincare_series() const {
  Laurent2 p;
  for (auto& [k, d] : t_) p.add(k.first, k.second, d);
  return p;
}

Laurent1 DimTable::graded_euler() const {
  Laurent1 p;
  for (auto& [k, d] : t_) p.add(k.second, (k.first % 2 == 0) ? d : -d);
  return p;
}

std::string DimTable::render_grid() const {
  if (t_.empty()) return "(empty)\n";
  int imin = 0, imax = 0, jmin = 0, jmax = 0;
  bool first = true;
  for (auto& [k, d] : t_) {
    if (first) {
      imin = imax = k.first;
      jmin = jmax = k.second;
      first = false;
    }
    imin = std::min(imin, k.first);
    imax = std::max(imax, k.first);
    jmin = std::min(jmin, k.second);
    jmax = std::max(jmax, k.second);
  }
  size_t w = 3;
  for (auto& [k, d] : t_) w = std::max(w, std::to_string(d).size() + 1);
  for (int i = imin; i <= imax; ++i)
    w = std::max(w, std::to_string(i).size() + 1);
  std::ostringstream os;
  os << std::string(5, ' ') << "|";
  for (int i = imin; i <= imax; ++i) {
    std::string s = std::to_string(i);
    os << std::string(w - s.size(), ' ') << s;
  }
  os << "\n" << std::string(5, '-') << "+"
     << std::string(w * (imax - imin + 1), '-') << "\n";
  int step = 2;  // odd j only for knots; keep every row that appears
  std::set<int> rows;
  for (auto& [k, d] : t_) rows.insert(k.second);
  int lo = *rows.begin(), hi = *rows.rbegin();
  if ((hi - lo) % 2 != 0) step = 1;
  for (int j = hi; j >= lo; j -= step) {
    std::string js = std::to_string(j);
    os << std::string(5 - js.size() - 1, ' ') << js << " |";
    for (int i = imin; i <= imax; ++i) {
      int d = dim(i, j);
      std::string s = d ? std::to_string(d) : "";
      os << std::string(w - s.size(), ' ') << s;
    }
    os << "\n";
  }
  return os.str();
}

std::string DimTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [k, d] : t_)
    arr.push_back({{"i", k.first}, {"j", k.second}, {"dim", d}});
  return arr.dump(2);
}

std::string DimTable::to_csv() const {
  std::ostringstream os;
  os << "i,j,dim\n";
  for (auto& [k, d] : t_)
    os << k.first << "," << k.second << "," << d << "\n";
  return os.str();
}

DimTable DimTable::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad table JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("table JSON must be an array");
  DimTable out;
  for (auto& e : j) {
    if (!e.contains("i") || !e.contains("j") || !e.contains("dim"))
      throw ParseError("table entries need i, j, dim");
    int d = e["dim"].get<int>();
    if (d < 0) throw ParseError("negative dimension in table");
    out.add(e["i"].get<int>(), e["j"].get<int>(), d);
  }
  return out;
}

}  // namespace grading
}  // namespace khv
