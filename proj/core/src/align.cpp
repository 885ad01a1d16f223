#include "asrsel/align.hpp"

#include <algorithm>
#include <vector>

#include "asrsel/error.hpp"

namespace asrsel {

namespace {

// One DP cell: the cost plus the operation counts of the preferred script
// reaching it. Carrying the counts forward replaces an explicit backtrace.
struct Cell {
  std::size_t cost = 0;
  EditSummary ops;
};

// Most differing words already differ in length or first letter, which
// skips the library compare call.
bool same_token(const std::string& a, const std::string& b) {
  return a.size() == b.size() && (a.empty() || (a[0] == b[0] && a == b));
}

}  // namespace

EditSummary edit_align(TokenSpan ref, TokenSpan hyp) {
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();

  std::vector<Cell> rows(2 * (n + 1));
  Cell* prev = rows.data();
  Cell* curr = prev + (n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    prev[j].cost = j;
    prev[j].ops.insertions = j;
  }

  for (std::size_t i = 1; i <= m; ++i) {
    curr[0].cost = i;
    curr[0].ops = EditSummary{0, i, 0, 0};
    const std::string& r = ref[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      const Cell& diag = prev[j - 1];
      const Cell& up = prev[j];
      const Cell& left = curr[j - 1];
      const bool same = same_token(r, hyp[j - 1]);
      const std::size_t diag_cost = diag.cost + (same ? 0 : 1);
      const std::size_t best = std::min({diag_cost, up.cost + 1, left.cost + 1});

      Cell& cell = curr[j];
      if (diag_cost == best) {
        cell.ops = diag.ops;
        if (same) {
          ++cell.ops.matches;
        } else {
          ++cell.ops.substitutions;
        }
      } else if (up.cost + 1 == best) {
        cell.ops = up.ops;
        ++cell.ops.deletions;
      } else {
        cell.ops = left.ops;
        ++cell.ops.insertions;
      }
      cell.cost = best;
    }
    std::swap(prev, curr);
  }
  return prev[n].ops;
}

double wer(TokenSpan ref, TokenSpan hyp) {
  if (ref.empty()) throw Error("undefined WER: reference has no tokens");
  return static_cast<double>(edit_align(ref, hyp).distance()) / static_cast<double>(ref.size());
}

double divergence(TokenSpan weak, TokenSpan strong) {
  const auto d = edit_align(strong, weak).distance();
  return static_cast<double>(d) / static_cast<double>(std::max<std::size_t>(strong.size(), 1));
}

}  // namespace asrsel
