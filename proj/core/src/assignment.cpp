#include "scenefuzz/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace scenefuzz {

namespace {

constexpr double kInf = 1e100;
// Equal-cost detection for the tie-break search. Costs here are metres;
// differences below this are treated as ties.
constexpr double kEps = 1e-7;

// Classic potentials-based Hungarian over a square row-major matrix.
// Fills col_to_row with the assigned row of every column.
void square_solve(const std::vector<double>& a, int n, std::vector<int>& col_to_row) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  col_to_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) col_to_row[j - 1] = p[j] - 1;
}

// Minimum cost of a maximal assignment over the given row/col subsets.
// Rectangular inputs are padded to a square with zero-cost dummies; the
// dummy pairings always number |rows - cols|, so they never change which
// real assignment is optimal.
double rect_min_cost(const std::vector<std::vector<double>>& cost,
                     const std::vector<int>& rows, const std::vector<int>& cols) {
  int nr = static_cast<int>(rows.size());
  int nc = static_cast<int>(cols.size());
  if (nr == 0 || nc == 0) return 0.0;
  int n = std::max(nr, nc);
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      a[static_cast<std::size_t>(i) * n + j] = cost[rows[i]][cols[j]];
  std::vector<int> col_to_row;
  square_solve(a, n, col_to_row);
  double total = 0.0;
  for (int j = 0; j < nc; ++j)
    if (col_to_row[j] < nr) total += cost[rows[col_to_row[j]]][cols[j]];
  return total;
}

}  // namespace

Assignment solve_assignment(const std::vector<std::vector<double>>& cost) {
  Assignment out;
  int n = static_cast<int>(cost.size());
  int m = n > 0 ? static_cast<int>(cost[0].size()) : 0;
  if (n == 0 || m == 0) return out;

  std::vector<int> all_rows(n), all_cols(m);
  for (int i = 0; i < n; ++i) all_rows[i] = i;
  for (int j = 0; j < m; ++j) all_cols[j] = j;
  const double best = rect_min_cost(cost, all_rows, all_cols);
  const int k = std::min(n, m);

  // Rebuild the optimum column by column, always committing the smallest
  // row that can still reach the optimal total. This yields the
  // lexicographically least optimal assignment under (col, row) order.
  std::vector<char> row_used(n, 0);
  double fixed_cost = 0.0;
  for (int c = 0; c < m && static_cast<int>(out.pairs.size()) < k; ++c) {
    std::vector<int> later_cols;
    for (int j = c + 1; j < m; ++j) later_cols.push_back(j);
    for (int r = 0; r < n; ++r) {
      if (row_used[r]) continue;
      std::vector<int> free_rows;
      for (int i = 0; i < n; ++i)
        if (!row_used[i] && i != r) free_rows.push_back(i);
      std::size_t residual_pairs =
          std::min(free_rows.size(), later_cols.size());
      if (out.pairs.size() + 1 + residual_pairs != static_cast<std::size_t>(k))
        continue;
      double with_pair = fixed_cost + cost[r][c] +
                         rect_min_cost(cost, free_rows, later_cols);
      if (std::abs(with_pair - best) <= kEps) {
        row_used[r] = 1;
        out.pairs.emplace_back(r, c);
        fixed_cost += cost[r][c];
        break;
      }
    }
    // No row committed: this column stays unmatched (only possible when
    // columns outnumber rows).
  }
  out.total = fixed_cost;
  return out;
}

}  // namespace scenefuzz
