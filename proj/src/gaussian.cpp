#include "netrate/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace netrate::gauss {

namespace {

constexpr double kSymTol = 1e-12;   // relative symmetry tolerance
constexpr double kPsdTol = 1e-9;    // min eigenvalue >= -kPsdTol * trace
constexpr double kRankTol = 1e-12;  // eigenvalue zero threshold, relative to trace/dim

}  // namespace

GaussianSystem::GaussianSystem(std::vector<std::string> names, Eigen::MatrixXd cov)
    : names_(std::move(names)), cov_(std::move(cov)) {
  const int n = static_cast<int>(names_.size());
  if (cov_.rows() != n || cov_.cols() != n) {
    throw std::invalid_argument("GaussianSystem: covariance size does not match variable count");
  }
  for (int i = 0; i < n; ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw std::invalid_argument("GaussianSystem: duplicate variable name '" + names_[i] + "'");
    }
  }
  const double scale = std::max(cov_.cwiseAbs().maxCoeff(), 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(cov_(i, j) - cov_(j, i)) > kSymTol * scale) {
        throw std::invalid_argument("GaussianSystem: covariance is not symmetric");
      }
    }
  }
  // Symmetrize exactly so downstream eigensolves see a clean input.
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
    const double tr = cov_.trace();
    if (es.eigenvalues().minCoeff() < -kPsdTol * std::max(tr, 1e-300)) {
      throw std::invalid_argument("GaussianSystem: covariance is not positive semidefinite");
    }
  }
}

int GaussianSystem::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::invalid_argument("GaussianSystem: unknown variable '" + name + "'");
  }
  return it->second;
}

Eigen::MatrixXd GaussianSystem::submatrix(std::span<const std::string> vars) const {
  std::vector<int> idx;
  idx.reserve(vars.size());
  for (const auto& v : vars) idx.push_back(index_of(v));
  std::sort(idx.begin(), idx.end());
  return submatrix(idx);
}

Eigen::MatrixXd GaussianSystem::submatrix(const std::vector<int>& idx) const {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out(i, j) = cov_(idx[i], idx[j]);
    }
  }
  return out;
}

GaussianSystem build_system(
    const std::vector<std::pair<std::string, double>>& exogenous,
    const std::vector<StructuralEquation>& equations) {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  for (const auto& [name, var] : exogenous) {
    if (var < 0.0) {
      throw std::invalid_argument("build_system: negative variance for '" + name + "'");
    }
    if (!index.emplace(name, static_cast<int>(names.size())).second) {
      throw std::invalid_argument("build_system: duplicate variable name '" + name + "'");
    }
    names.push_back(name);
  }

  const int total = static_cast<int>(exogenous.size() + equations.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(total, total);
  for (std::size_t i = 0; i < exogenous.size(); ++i) {
    cov(i, i) = exogenous[i].second;
  }

  // Forward substitution: each target's covariances follow from linearity.
  int n = static_cast<int>(exogenous.size());
  for (const auto& eq : equations) {
    if (eq.noise_var < 0.0) {
      throw std::invalid_argument("build_system: negative noise variance for '" + eq.target + "'");
    }
    if (index.count(eq.target)) {
      throw std::invalid_argument("build_system: duplicate variable name '" + eq.target + "'");
    }
    std::vector<std::pair<double, int>> terms;
    terms.reserve(eq.terms.size());
    for (const auto& [coeff, source] : eq.terms) {
      auto it = index.find(source);
      if (it == index.end()) {
        // Either a genuinely unknown name or a forward reference (cycle).
        throw std::invalid_argument("build_system: source '" + source + "' of '" + eq.target +
                                    "' is not defined at this point (unknown name or cycle)");
      }
      terms.emplace_back(coeff, it->second);
    }
    for (int j = 0; j < n; ++j) {
      double cv = 0.0;
      for (const auto& [coeff, src] : terms) cv += coeff * cov(src, j);
      cov(n, j) = cv;
      cov(j, n) = cv;
    }
    double var = eq.noise_var;
    for (const auto& [ci, si] : terms) {
      for (const auto& [cj, sj] : terms) var += ci * cj * cov(si, sj);
    }
    cov(n, n) = var;
    index.emplace(eq.target, n);
    names.push_back(eq.target);
    ++n;
  }

  return GaussianSystem(std::move(names), std::move(cov));
}

LogPdet log2_pseudo_det(const Eigen::MatrixXd& m) {
  LogPdet out;
  if (m.rows() == 0) return out;  // empty-set determinant is 1
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double tau = kRankTol * std::max(m.trace() / static_cast<double>(m.rows()), 0.0);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (ev > tau && ev > 0.0) {
      out.log2_pdet += std::log2(ev);
      ++out.rank;
    }
  }
  return out;
}

namespace {

std::vector<int> resolve_sorted(const GaussianSystem& sys, std::span<const std::string> vars) {
  std::vector<int> idx;
  idx.reserve(vars.size());
  for (const auto& v : vars) idx.push_back(sys.index_of(v));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<int> merge_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

double mutual_information(const GaussianSystem& sys,
                          std::span<const std::string> a,
                          std::span<const std::string> b,
                          std::span<const std::string> c) {
  auto ia = resolve_sorted(sys, a);
  auto ib = resolve_sorted(sys, b);
  auto ic = resolve_sorted(sys, c);

  {
    std::set<int> seen;
    for (const auto& grp : {ia, ib, ic}) {
      for (int i : grp) {
        if (!seen.insert(i).second) {
          throw std::invalid_argument("mutual_information: variable sets overlap at '" +
                                      sys.names()[i] + "'");
        }
      }
    }
  }
  if (ia.empty() || ib.empty()) return 0.0;

  // Mutual information is invariant under per-variable scaling, so the whole
  // computation runs on the unit-diagonal (correlation-like) version of the
  // union submatrix. That makes the rank thresholds scale-free: mixed
  // magnitudes (tiny powers against large compression variances) would
  // otherwise push borderline eigenvalues to different sides of the cutoff
  // in different principal submatrices.
  const auto iu = merge_sorted(merge_sorted(ia, ib), ic);
  Eigen::MatrixXd u = sys.submatrix(iu);
  for (int i = 0; i < u.rows(); ++i) {
    const double var = u(i, i);
    if (var > 0.0) {
      const double s = 1.0 / std::sqrt(var);
      u.row(i) *= s;
      u.col(i) *= s;
    }
  }
  auto local = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd m(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto ri = std::lower_bound(iu.begin(), iu.end(), idx[r]) - iu.begin();
      for (std::size_t s = 0; s < idx.size(); ++s) {
        const auto si = std::lower_bound(iu.begin(), iu.end(), idx[s]) - iu.begin();
        m(r, s) = u(ri, si);
      }
    }
    return m;
  };

  const LogPdet ac = log2_pseudo_det(local(merge_sorted(ia, ic)));
  const LogPdet bc = log2_pseudo_det(local(merge_sorted(ib, ic)));
  const LogPdet cc = log2_pseudo_det(local(ic));
  const LogPdet abc = log2_pseudo_det(local(iu));

  // The pdet formula is the finite limit only when the dimension A adds over
  // C matches the dimension A adds over (B,C); otherwise some component of A
  // is determined by B given C and the information is infinite.
  if (ac.rank - cc.rank != abc.rank - bc.rank) {
    throw DegenerateInputError(
        "mutual_information: inconsistent ranks (deterministic dependence across the sets)");
  }

  const double bits = 0.5 * (ac.log2_pdet + bc.log2_pdet - cc.log2_pdet - abc.log2_pdet);
  return std::max(0.0, bits);
}

}  // namespace netrate::gauss
