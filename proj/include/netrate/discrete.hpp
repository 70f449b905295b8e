// Exact joint-pmf construction and mutual information over finite alphabets.
// Dense tensors only; joint state spaces are capped at 2^24 entries.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace netrate::disc {

struct Var {
  std::string name;
  int card = 2;  // alphabet size, >= 1
};

/// Dense joint probability tensor over named finite-alphabet variables.
/// Row-major layout: the last listed variable varies fastest. Immutable
/// after construction.
class JointPmf {
 public:
  JointPmf(std::vector<Var> vars, std::vector<double> probs);

  const std::vector<Var>& vars() const { return vars_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  int index_of(const std::string& name) const;  // -1 if absent
  /// Strides matching the row-major layout (stride of the last variable = 1).
  const std::vector<std::size_t>& strides() const { return strides_; }

 private:
  std::vector<Var> vars_;
  std::vector<double> probs_;
  std::vector<std::size_t> strides_;
};

/// Conditional factor p(targets | conditioning). Table layout is row-major
/// over [conditioning..., targets...] with the last dimension fastest; each
/// conditioning slice must sum to 1 within 1e-12.
struct PmfFactor {
  std::vector<Var> targets;
  std::vector<Var> conditioning;
  std::vector<double> table;
  void validate() const;
};

/// Multiplies the factors into a joint pmf. Factor targets must be disjoint;
/// every conditioning variable must be some factor's target, and a valid
/// factorization order must exist (factors are topologically sorted, stable
/// in input order). The joint's variable order is the concatenation of
/// targets in that order.
JointPmf compose(const std::vector<PmfFactor>& factors);

/// Sums out everything not in `keep`; kept variables stay in their original
/// relative order.
JointPmf marginalize(const JointPmf& pmf, std::span<const std::string> keep);

/// I(A;B|C) in bits by direct summation, with 0 log 0 = 0 and probabilities
/// below 1e-15 treated as exact zeros. A, B, C must be pairwise disjoint.
double mutual_information(const JointPmf& pmf, std::span<const std::string> a,
                          std::span<const std::string> b,
                          std::span<const std::string> c = {});

inline double mutual_information(const JointPmf& pmf, std::initializer_list<std::string> a,
                                 std::initializer_list<std::string> b,
                                 std::initializer_list<std::string> c = {}) {
  std::vector<std::string> av(a), bv(b), cv(c);
  return mutual_information(pmf, std::span<const std::string>(av),
                            std::span<const std::string>(bv),
                            std::span<const std::string>(cv));
}

/// Maximum number of entries a joint tensor may have.
inline constexpr std::size_t kMaxJointEntries = std::size_t{1} << 24;

}  // namespace netrate::disc
