#include "khv/laurent.hpp"

#include <sstream>

#include "khv/errors.hpp"

namespace khv {
namespace grading {

Int Laurent1::eval_int(const Int& x) const {
  if (is_zero()) return 0;
  if (x == 1) {
    Int s = 0;
    for (auto& [e, c] : t_) s += c;
    return s;
  }
  if (x == -1) {
    Int s = 0;
    for (auto& [e, c] : t_) s += (e % 2 == 0) ? c : -c;
    return s;
  }
  if (min_exp() < 0)
    throw InternalError("eval_int with negative exponents at |x| != 1");
  Int s = 0;
  for (auto& [e, c] : t_) {
    Int p = 1;
    for (int k = 0; k < e; ++k) p *= x;
    s += c * p;
  }
  return s;
}

static void append_term(std::ostringstream& os, bool& first, const Int& c,
                        const std::string& mono) {
  Int a = c < 0 ? Int(-c) : c;
  if (first) {
    if (c < 0) os << "-";
    first = false;
  } else {
    os << (c < 0 ? " - " : " + ");
  }
  if (a != 1 || mono.empty()) os << a.str();
  if (!mono.empty()) {
    if (a != 1) os << "*";
    os << mono;
  }
}

static std::string power(const std::string& var, int e) {
  if (e == 0) return "";
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

std::string Laurent1::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : t_) append_term(os, first, c, power(var, e));
  return os.str();
}

std::string Laurent2::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : t_) {
    std::string mono = power("t", k.first);
    std::string qp = power("q", k.second);
    if (!mono.empty() && !qp.empty()) mono += "*";
    mono += qp;
    append_term(os, first, c, mono);
  }
  return os.str();
}

}  // namespace grading
}  // namespace khv
