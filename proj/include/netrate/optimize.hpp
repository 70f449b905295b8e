// Deterministic derivative-free maximization over box-constrained parameters:
// a full factorial grid pass followed by cyclic per-coordinate golden-section
// refinement around the incumbent. No randomness anywhere; identical inputs
// produce identical results including the trace.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netrate::opt {

enum class Scale { Linear, Log };

struct Dimension {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  Scale scale = Scale::Linear;
};

struct SearchBox {
  std::vector<Dimension> dims;
};

struct SearchResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  long evaluations = 0;
  // One entry per incumbent improvement, starting with the first grid point.
  std::vector<std::pair<std::vector<double>, double>> trace;
};

/// Wraps an objective failure with the parameter point that triggered it.
class ObjectiveError : public std::runtime_error {
 public:
  ObjectiveError(const std::string& what, std::vector<double> at)
      : std::runtime_error(what), params(std::move(at)) {}
  std::vector<double> params;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Maximizes `objective` over `box`. Grid scan order is odometer order with
/// the last dimension fastest; the first point attaining the maximum wins
/// ties. Refinement cycles through coordinates in declaration order, running
/// a golden-section search bracketed one grid step around the incumbent
/// (log-scale dimensions are refined in log space), and stops early once a
/// full cycle improves the incumbent by less than `stop_tol` bits.
SearchResult grid_refine(const Objective& objective, const SearchBox& box,
                         int grid_points_per_dim = 21, int refine_iters = 50,
                         double stop_tol = 1e-6, bool keep_trace = false);

}  // namespace netrate::opt
