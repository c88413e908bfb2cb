#pragma once

#include <functional>
#include <optional>

namespace scalelaw::detail {

// Grid-scan plus bisection over a log-spaced grid on [n_lo, n_cap]. Both
// searches locate the FIRST crossing; monotonicity is checked on the grid up
// to that crossing so later dips of the function cannot corrupt the answer.

struct UpCrossing {
  std::optional<double> n;       // smallest n with f(n) >= target
  bool monotone_ok = true;       // no decrease (beyond slack) seen before the crossing
  double bad_lo = 0, bad_hi = 0; // offending interval when !monotone_ok
};

UpCrossing find_up_crossing(const std::function<double(double)>& f, double target,
                            double n_lo, double n_cap, double rel_tol, int grid_points);

struct BudgetCrossing {
  double n = 0;             // largest n (up to the first crossing) with f(n) <= budget
  bool at_floor = false;    // f(n_lo) already exceeds the budget
  bool never_binds = false; // budget never exceeded up to n_cap; n == n_cap
  bool monotone_ok = true;
  double bad_lo = 0, bad_hi = 0;
};

BudgetCrossing find_budget_crossing(const std::function<double(double)>& f, double budget,
                                    double n_lo, double n_cap, double rel_tol,
                                    int grid_points);

}  // namespace scalelaw::detail
