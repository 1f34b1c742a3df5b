#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khv/diagram.hpp"
#include "khv/dimtable.hpp"
#include "khv/lee.hpp"

namespace khv {
namespace audit {

// Result of solving Kh(t,q) = q^s (q + 1/q) + f2 (1 + t q^4).
struct KnightMoveReport {
  bool holds = false;
  grading::Laurent2 f2;                 // on holds
  std::pair<int, int> witness{0, 0};    // on fails: the unmatchable cell
  std::string reason;
};

// The unique-recurrence solve: f(i,j) = R(i,j) - f(i-1, j-4), i ascending.
KnightMoveReport knight_move_solve(const grading::Laurent2& kh, int s);

struct Certificate {
  int n = 0;
  std::pair<int, int> source{0, 0};
  std::pair<int, int> target{0, 0};
};

// Forced higher differentials: for each unit not cancellable by any (1,4)
// pairing, the possible (1,4n) moves with support; emitted when unique.
std::vector<Certificate> higher_diff_certificate(const grading::DimTable& kh,
                                                 int s);

// Maximum matching of units along (i,j) -> (i+1,j+4), one pawn pair at
// (0, s-+1) removed first; computed by exact max-flow on the shift graph.
// Returns the unmatched units.
grading::DimTable max_knight_matching(const grading::DimTable& kh, int s);

struct FoxMilnorResult {
  enum class Verdict { Passes, Fails, Undecided };
  Verdict verdict = Verdict::Undecided;
  grading::Laurent1 factor;  // on Passes: f with delta = f(t) f(1/t)
  int span_bound = 8;
};

struct AlexanderResult {
  grading::Laurent1 delta;  // symmetric, delta(1) = +1 when possible
  FoxMilnorResult fox_milnor;
};

// Alexander polynomial via the Wirtinger presentation and Fox derivatives,
// one column deleted, fraction-free polynomial determinant.
AlexanderResult alexander(const knotio::Diagram& d, int fm_span_bound = 8);

FoxMilnorResult fox_milnor(const grading::Laurent1& delta, int span_bound = 8);

// 2N - 1 where N is the last page with a nonzero differential (0 if none).
int unknotting_lower_bound(const lee::PageSet& p);
int unknotting_lower_bound(const std::vector<Certificate>& forced);

struct AuditReport {
  KnightMoveReport km;
  std::vector<Certificate> certificates;
  std::optional<AlexanderResult> alex;
  int s = 0;
  int unknotting_bound = 0;
};

std::string report_json(const AuditReport& r);
std::string report_text(const AuditReport& r);

}  // namespace audit
}  // namespace khv
