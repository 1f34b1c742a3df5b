#pragma once

#include <map>
#include <string>
#include <utility>

#include "khv/rat.hpp"

namespace khv {
namespace grading {

// One-variable Laurent polynomial with exact integer coefficients.
// Zero coefficients are never stored.
class Laurent1 {
 public:
  using Map = std::map<int, Int>;

  Laurent1() = default;
  static Laurent1 monomial(const Int& c, int e) {
    Laurent1 p;
    p.set(e, c);
    return p;
  }

  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Int coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Int(0) : it->second;
  }
  void set(int e, const Int& c) {
    if (c == 0)
      t_.erase(e);
    else
      t_[e] = c;
  }
  void add(int e, const Int& c) {
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (c != 0) t_[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }
  int min_exp() const { return t_.begin()->first; }
  int max_exp() const { return t_.rbegin()->first; }
  int span() const { return is_zero() ? 0 : max_exp() - min_exp(); }

  Laurent1 operator+(const Laurent1& o) const {
    Laurent1 r = *this;
    for (auto& [e, c] : o.t_) r.add(e, c);
    return r;
  }
  Laurent1 operator-(const Laurent1& o) const {
    Laurent1 r = *this;
    for (auto& [e, c] : o.t_) r.add(e, -c);
    return r;
  }
  Laurent1 operator*(const Laurent1& o) const {
    Laurent1 r;
    for (auto& [e1, c1] : t_)
      for (auto& [e2, c2] : o.t_) r.add(e1 + e2, c1 * c2);
    return r;
  }
  Laurent1 operator-() const {
    Laurent1 r;
    for (auto& [e, c] : t_) r.t_[e] = -c;
    return r;
  }
  Laurent1 shifted(int k) const {
    Laurent1 r;
    for (auto& [e, c] : t_) r.t_[e + k] = c;
    return r;
  }
  Laurent1 reversed() const {  // t -> 1/t
    Laurent1 r;
    for (auto& [e, c] : t_) r.t_[-e] = c;
    return r;
  }
  bool operator==(const Laurent1& o) const { return t_ == o.t_; }
  bool operator!=(const Laurent1& o) const { return t_ != o.t_; }

  Int eval_int(const Int& x) const;  // requires min_exp >= 0 or x = +-1
  std::string str(const std::string& var = "q") const;

 private:
  Map t_;
};

// Two-variable Laurent polynomial in (t, q).
class Laurent2 {
 public:
  using Key = std::pair<int, int>;  // (t exponent, q exponent)
  using Map = std::map<Key, Int>;

  Laurent2() = default;
  static Laurent2 monomial(const Int& c, int te, int qe) {
    Laurent2 p;
    p.add(te, qe, c);
    return p;
  }

  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Int coeff(int te, int qe) const {
    auto it = t_.find({te, qe});
    return it == t_.end() ? Int(0) : it->second;
  }
  void add(int te, int qe, const Int& c) {
    Key k{te, qe};
    auto it = t_.find(k);
    if (it == t_.end()) {
      if (c != 0) t_[k] = c;
    } else {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }
  Laurent2 operator+(const Laurent2& o) const {
    Laurent2 r = *this;
    for (auto& [k, c] : o.t_) r.add(k.first, k.second, c);
    return r;
  }
  Laurent2 operator-(const Laurent2& o) const {
    Laurent2 r = *this;
    for (auto& [k, c] : o.t_) r.add(k.first, k.second, -c);
    return r;
  }
  Laurent2 operator*(const Laurent2& o) const {
    Laurent2 r;
    for (auto& [k1, c1] : t_)
      for (auto& [k2, c2] : o.t_)
        r.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    return r;
  }
  bool operator==(const Laurent2& o) const { return t_ == o.t_; }
  bool operator!=(const Laurent2& o) const { return t_ != o.t_; }
  bool nonnegative() const {
    for (auto& [k, c] : t_)
      if (c < 0) return false;
    return true;
  }
  std::string str() const;

 private:
  Map t_;
};

}  // namespace grading
}  // namespace khv
