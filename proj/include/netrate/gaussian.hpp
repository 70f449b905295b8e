// Exact mutual information over jointly Gaussian variables via covariance
// algebra. Systems are assembled from independent exogenous variables and
// linear structural equations; every rate evaluator in this project sits on
// top of mutual_information().
#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace netrate::gauss {

/// Thrown when a mutual-information query is ill-posed on the support of the
/// distribution (rank bookkeeping between numerator and denominator
/// submatrices does not cancel, i.e. the value would be infinite).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// target = sum_i coeff_i * source_i + N(0, noise_var).
/// Sources must be previously declared variables (exogenous or earlier
/// targets), which keeps the system acyclic by construction.
struct StructuralEquation {
  std::string target;
  std::vector<std::pair<double, std::string>> terms;
  double noise_var = 0.0;
};

/// A named set of jointly Gaussian, zero-mean variables with its covariance.
/// Immutable after construction; all queries are const and thread-safe.
class GaussianSystem {
 public:
  GaussianSystem(std::vector<std::string> names, Eigen::MatrixXd cov);

  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  int size() const { return static_cast<int>(names_.size()); }

  int index_of(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) > 0; }

  /// Covariance submatrix for the given variables, rows/cols ordered by the
  /// system's canonical variable order (so the result is independent of the
  /// order names are listed in).
  Eigen::MatrixXd submatrix(std::span<const std::string> vars) const;
  Eigen::MatrixXd submatrix(const std::vector<int>& idx) const;

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXd cov_;
  std::unordered_map<std::string, int> index_;
};

/// Forward-substitutes the structural equations over mutually independent
/// exogenous variables N(0, variance) and returns the joint system covering
/// exogenous variables plus all equation targets, in declaration order.
GaussianSystem build_system(
    const std::vector<std::pair<std::string, double>>& exogenous,
    const std::vector<StructuralEquation>& equations);

/// log2 pseudo-determinant with rank bookkeeping. Eigenvalues below
/// 1e-12 * trace/dim are treated as exact zeros; the determinant is taken
/// over the positive eigenspace only.
struct LogPdet {
  double log2_pdet = 0.0;
  int rank = 0;
};
LogPdet log2_pseudo_det(const Eigen::MatrixXd& m);

/// I(A;B|C) in bits:
///   1/2 * log2( pdet(S_AC) pdet(S_BC) / ( pdet(S_C) pdet(S_ABC) ) )
/// with the empty-set determinant equal to 1 and the result clamped at 0.
/// Evaluated on the unit-diagonal rescaling of the covariance (MI is scale
/// invariant), which keeps rank decisions stable across mixed magnitudes.
/// Rank-deficient submatrices are handled through pseudo-determinants so
/// boundary parameter choices (zero-variance layers) evaluate to the correct
/// limit. Throws DegenerateInputError if ranks are inconsistent (the true
/// value is infinite), std::invalid_argument on overlapping sets or unknown
/// names.
double mutual_information(const GaussianSystem& sys,
                          std::span<const std::string> a,
                          std::span<const std::string> b,
                          std::span<const std::string> c = {});

inline double mutual_information(const GaussianSystem& sys,
                                 std::initializer_list<std::string> a,
                                 std::initializer_list<std::string> b,
                                 std::initializer_list<std::string> c = {}) {
  std::vector<std::string> av(a), bv(b), cv(c);
  return mutual_information(sys, std::span<const std::string>(av),
                            std::span<const std::string>(bv),
                            std::span<const std::string>(cv));
}

}  // namespace netrate::gauss
