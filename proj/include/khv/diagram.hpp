#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace khv {
namespace knotio {

// One crossing as a PD tuple: edges counterclockwise starting from the
// incoming under-strand, so (a,c) is the under pair flowing a -> c and
// (b,d) the over pair. sign = +1 when the over strand flows d -> b.
struct Crossing {
  std::array<int, 4> e;
  int sign = 0;  // filled in by Diagram validation
  int operator[](size_t k) const { return e[k]; }
};

// Incidence of an edge end: which crossing and slot it plugs into.
struct EdgeEnd {
  int crossing = -1;
  int slot = -1;
  auto operator<=>(const EdgeEnd&) const = default;
};

// An oriented diagram validated at construction: every edge id occurs
// exactly twice, orientations propagate consistently, signs computed.
class Diagram {
 public:
  Diagram() = default;  // 0-crossing unknot
  explicit Diagram(std::vector<Crossing> crossings, bool rotate_fix = true);

  size_t size() const { return x_.size(); }
  const std::vector<Crossing>& crossings() const { return x_; }
  int components() const { return components_; }
  bool is_knot() const { return x_.empty() ? true : components_ == 1; }
  int n_plus() const { return nplus_; }
  int n_minus() const { return nminus_; }
  int writhe() const { return nplus_ - nminus_; }
  size_t edge_count() const { return heads_.size(); }

  // the incidence the edge flows into / out of
  EdgeEnd head(int edge) const;
  EdgeEnd tail(int edge) const;
  const std::map<int, std::array<EdgeEnd, 2>>& incidences() const {
    return inc_;
  }
  int next_edge(int edge) const;  // successor along the strand

  Diagram mirrored() const;
  Diagram renumbered() const;  // edges 1..2n along traversal (knots only)

  std::string pd_text() const;

  // incidence-structure isomorphism (same knot diagram up to relabeling)
  bool isomorphic(const Diagram& other) const;

 private:
  void orient_and_validate(bool rotate_fix);

  std::vector<Crossing> x_;
  std::map<int, std::array<EdgeEnd, 2>> inc_;
  std::map<int, EdgeEnd> heads_;
  int components_ = 0;
  int nplus_ = 0;
  int nminus_ = 0;
};

// PD text format: whitespace-separated X[a,b,c,d] tuples, '#' comments,
// keyword UNKNOT for the 0-crossing diagram.
Diagram parse_pd(const std::string& text);

// Braid closure; generator indices 1..strands-1, sign = direction.
// Multi-component closures are allowed (flagged via components()).
Diagram from_braid(const std::vector<int>& word, int strands);

struct TwistSpec {
  int strand_count = 0;
  int sign = +1;
  std::vector<int> attachment;  // edges crossed by the disk, in disk order
};

// Inserts a full twist on k strands (k(k-1) new crossings).
Diagram insert_full_twist(const Diagram& d, const TwistSpec& spec);

// Crossing processing order by greedy girth minimization: each step picks
// the crossing minimizing the resulting open boundary, ties by index.
std::vector<int> girth_order(const Diagram& d);

}  // namespace knotio
}  // namespace khv
