#pragma once

#include <utility>
#include <vector>

namespace scenefuzz {

struct Assignment {
  // (row, col) pairs; exactly min(rows, cols) of them.
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;
};

// Minimum-cost maximal assignment of a rectangular cost matrix. Among
// equal-cost optima, returns the one whose pair list sorted by (col, row)
// is lexicographically least, so callers mapping columns to ground-truth
// ids and rows to detection ids get the documented deterministic
// tie-break.
Assignment solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace scenefuzz
