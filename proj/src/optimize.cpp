#include "netrate/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netrate::opt {

namespace {

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

SearchResult grid_refine(const Objective& objective, const SearchBox& box,
                         int grid_points_per_dim, int refine_iters,
                         double stop_tol, bool keep_trace) {
  const int n = static_cast<int>(box.dims.size());
  if (grid_points_per_dim < 2) {
    throw std::invalid_argument("grid_refine: need at least 2 grid points per dimension");
  }

  std::vector<double> lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    const auto& dim = box.dims[d];
    if (!(dim.lower < dim.upper)) {
      throw std::invalid_argument("grid_refine: dimension '" + dim.name + "' has lower >= upper");
    }
    if (dim.scale == Scale::Log) {
      if (dim.lower <= 0.0) {
        throw std::invalid_argument("grid_refine: log-scale dimension '" + dim.name +
                                    "' requires a positive lower bound");
      }
      lo[d] = std::log(dim.lower);
      hi[d] = std::log(dim.upper);
    } else {
      lo[d] = dim.lower;
      hi[d] = dim.upper;
    }
  }

  SearchResult res;
  auto to_params = [&](const std::vector<double>& t) {
    std::vector<double> x(n);
    for (int d = 0; d < n; ++d) {
      x[d] = box.dims[d].scale == Scale::Log ? std::exp(t[d]) : t[d];
    }
    return x;
  };
  auto eval = [&](const std::vector<double>& t) {
    auto x = to_params(t);
    ++res.evaluations;
    try {
      return objective(x);
    } catch (const ObjectiveError&) {
      throw;
    } catch (const std::exception& e) {
      throw ObjectiveError(std::string("grid_refine: objective failed at ") + format_point(x) +
                               ": " + e.what(),
                           x);
    }
  };

  if (n == 0) {
    res.best_value = eval({});
    if (keep_trace) res.trace.emplace_back(std::vector<double>{}, res.best_value);
    return res;
  }

  std::vector<double> step(n);
  for (int d = 0; d < n; ++d) step[d] = (hi[d] - lo[d]) / (grid_points_per_dim - 1);

  // Full factorial pass, odometer order with the last dimension fastest.
  // Strict improvement keeps the first-found argmax on ties.
  std::vector<int> idx(n, 0);
  std::vector<double> t(n), best_t;
  bool have_incumbent = false;
  for (;;) {
    for (int d = 0; d < n; ++d) t[d] = lo[d] + idx[d] * step[d];
    const double v = eval(t);
    if (!have_incumbent || v > res.best_value) {
      have_incumbent = true;
      res.best_value = v;
      best_t = t;
      if (keep_trace) res.trace.emplace_back(to_params(t), v);
    }
    int d = n - 1;
    while (d >= 0) {
      if (++idx[d] == grid_points_per_dim) {
        idx[d] = 0;
        --d;
      } else {
        break;
      }
    }
    if (d < 0) break;
  }

  // Cyclic coordinate refinement: golden-section maximization bracketed one
  // grid step around the incumbent, in the transformed coordinate.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int iter = 0; iter < refine_iters; ++iter) {
    const double cycle_start = res.best_value;
    for (int d = 0; d < n; ++d) {
      double a = std::max(lo[d], best_t[d] - step[d]);
      double b = std::min(hi[d], best_t[d] + step[d]);
      if (!(b > a)) continue;

      auto line_eval = [&](double td) {
        std::vector<double> tt = best_t;
        tt[d] = td;
        return std::make_pair(eval(tt), std::move(tt));
      };

      double x1 = b - invphi * (b - a);
      double x2 = a + invphi * (b - a);
      auto [v1, t1] = line_eval(x1);
      auto [v2, t2] = line_eval(x2);
      double local_best = v1;
      std::vector<double> local_best_t = t1;
      if (v2 > local_best) {
        local_best = v2;
        local_best_t = t2;
      }

      const double xtol = 1e-12 * std::max(1.0, std::abs(hi[d] - lo[d]));
      for (int gs = 0; gs < 90 && (b - a) > xtol; ++gs) {
        if (v1 < v2) {
          a = x1;
          x1 = x2;
          v1 = v2;
          x2 = a + invphi * (b - a);
          auto [v, tv] = line_eval(x2);
          v2 = v;
          if (v > local_best) {
            local_best = v;
            local_best_t = std::move(tv);
          }
        } else {
          b = x2;
          x2 = x1;
          v2 = v1;
          x1 = b - invphi * (b - a);
          auto [v, tv] = line_eval(x1);
          v1 = v;
          if (v > local_best) {
            local_best = v;
            local_best_t = std::move(tv);
          }
        }
      }
      if (local_best > res.best_value) {
        res.best_value = local_best;
        best_t = local_best_t;
        if (keep_trace) res.trace.emplace_back(to_params(best_t), local_best);
      }
    }
    if (res.best_value - cycle_start < stop_tol) break;
  }

  res.best_params = to_params(best_t);
  return res;
}

}  // namespace netrate::opt
