#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "khv/diagram.hpp"
#include "khv/dimtable.hpp"
#include "khv/rat.hpp"

namespace khv {
namespace scan {

// Boundary points of the scanned sub-tangle: 4*crossing + slot.
using Point = int;

// A boundary circuit of a cobordism sheet (sorted points) or a closed
// circle of an adjacent object (by id).
struct CircuitKey {
  bool circle = false;
  int id = 0;
  std::vector<Point> pts;
  auto operator<=>(const CircuitKey&) const = default;
};

// Connected genus-zero piece of a cobordism with 0 or 1 dots. Genus is
// rewritten eagerly (handle = twice a dot); two dots kill a term.
struct Sheet {
  std::vector<CircuitKey> circuits;  // sorted
  int dots = 0;
  auto operator<=>(const Sheet&) const = default;
};

using TermKey = std::vector<Sheet>;  // sorted

struct Morphism {
  std::map<TermKey, Rat> t;
  bool zero() const { return t.empty(); }
  void add(const TermKey& k, const Rat& c);
  Morphism plus(const Morphism& o) const;
  Morphism scaled(const Rat& f) const;
};

using Matching = std::vector<std::pair<Point, Point>>;  // sorted pairs

struct Obj {
  int h = 0;
  int q = 0;
  Matching match;
  std::vector<int> circles;
};

// Formal direct sums of crossingless objects with matrices of cobordism
// combinations between adjacent homological degrees.
class PartialComplex {
 public:
  std::map<int, Obj> obj;
  std::map<int, std::map<int, Morphism>> dout, din;
  int nextid = 0;
  int nextcirc = 0;
  long peak = 0;

  int add_obj(Obj o);
  void set_entry(int i, int j, Morphism m);
  void remove_obj(int i);
  long entry_count() const;
  long term_count() const;

  void fuse(Point x, Point y);
  void deloop_all();
  void eliminate_all();
  void check_composition_zero() const;  // exact D.D = 0 on the matrices

  std::string serialize(const std::string& sig, int step) const;
  static PartialComplex deserialize(const std::string& text,
                                    const std::string& sig, int* step);
};

struct ScanOptions {
  std::vector<int> order;        // crossing order override; empty = girth
  long object_ceiling = 0;       // abort when the live object count passes
  double time_budget_sec = 0;    // wall clock budget
  long mem_budget_mb = 0;        // rough estimate from object/term counts
  std::string checkpoint_path;   // save after each step; resume if present
  int stop_after_steps = 0;      // checkpoint-and-stop (testing/resume)
  bool paranoid = false;         // recheck composition-zero every step
  std::ostream* progress = nullptr;
};

struct ScanOutcome {
  grading::DimTable table;
  long peak_objects = 0;
  int steps_done = 0;
  bool finished = true;
};

// Khovanov homology over Q by scanning with delooping and elimination.
ScanOutcome reduced_kh_full(const knotio::Diagram& d,
                            const ScanOptions& opts = {});
grading::DimTable reduced_kh(const knotio::Diagram& d,
                             const ScanOptions& opts = {});

}  // namespace scan
}  // namespace khv
