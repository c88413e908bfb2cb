#include "crossing_search.hpp"

#include <cmath>
#include <vector>

namespace scalelaw::detail {

namespace {

std::vector<double> log_grid(double n_lo, double n_cap, int count) {
  std::vector<double> grid;
  if (count < 2 || !(n_cap > n_lo)) {
    grid.push_back(n_lo);
    if (n_cap > n_lo) grid.push_back(n_cap);
    return grid;
  }
  const double t_lo = std::log(n_lo);
  const double t_hi = std::log(n_cap);
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (count - 1);
    grid.push_back(std::exp(t));
  }
  grid.front() = n_lo;
  grid.back() = n_cap;
  return grid;
}

bool decreased(double prev, double cur) {
  return cur < prev - (1e-12 + 1e-9 * std::abs(prev));
}

}  // namespace

UpCrossing find_up_crossing(const std::function<double(double)>& f, double target,
                            double n_lo, double n_cap, double rel_tol, int grid_points) {
  UpCrossing result;
  const auto grid = log_grid(n_lo, n_cap, grid_points);
  double prev = f(grid.front());
  if (prev >= target) {
    result.n = grid.front();
    return result;
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]);
    if (cur >= target) {
      // Bisect in log n; invariant f(lo) < target <= f(hi).
      double lo = grid[i - 1], hi = grid[i];
      while (hi - lo > rel_tol * lo) {
        const double mid = std::sqrt(lo * hi);
        if (f(mid) >= target) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      result.n = hi;
      return result;
    }
    if (decreased(prev, cur)) {
      result.monotone_ok = false;
      result.bad_lo = grid[i - 1];
      result.bad_hi = grid[i];
      return result;
    }
    prev = cur;
  }
  return result;  // never reaches the target
}

BudgetCrossing find_budget_crossing(const std::function<double(double)>& f, double budget,
                                    double n_lo, double n_cap, double rel_tol,
                                    int grid_points) {
  BudgetCrossing result;
  const auto grid = log_grid(n_lo, n_cap, grid_points);
  double prev = f(grid.front());
  if (prev > budget) {
    result.n = grid.front();
    result.at_floor = true;
    return result;
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]);
    if (cur > budget) {
      // Invariant f(lo) <= budget < f(hi); return the feasible lower end.
      double lo = grid[i - 1], hi = grid[i];
      while (hi - lo > rel_tol * lo) {
        const double mid = std::sqrt(lo * hi);
        if (f(mid) <= budget) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      result.n = lo;
      return result;
    }
    if (decreased(prev, cur) && result.monotone_ok) {
      result.monotone_ok = false;  // keep the first offending interval
      result.bad_lo = grid[i - 1];
      result.bad_hi = grid[i];
    }
    prev = cur;
  }
  result.n = n_cap;
  result.never_binds = true;
  return result;
}

}  // namespace scalelaw::detail
