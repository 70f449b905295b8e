#include "netrate/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace netrate::disc {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kZeroProb = 1e-15;

std::size_t checked_size(const std::vector<Var>& vars, const char* what) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.card < 1) throw std::invalid_argument(std::string(what) + ": alphabet size must be >= 1");
    if (n > kMaxJointEntries / static_cast<std::size_t>(v.card)) {
      throw std::invalid_argument(std::string(what) + ": state space exceeds 2^24 entries");
    }
    n *= static_cast<std::size_t>(v.card);
  }
  return n;
}

std::vector<std::size_t> make_strides(const std::vector<Var>& vars) {
  std::vector<std::size_t> s(vars.size(), 1);
  for (int i = static_cast<int>(vars.size()) - 2; i >= 0; --i) {
    s[i] = s[i + 1] * static_cast<std::size_t>(vars[i + 1].card);
  }
  return s;
}

}  // namespace

JointPmf::JointPmf(std::vector<Var> vars, std::vector<double> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
  const std::size_t n = checked_size(vars_, "JointPmf");
  if (probs_.size() != n) {
    throw std::invalid_argument("JointPmf: tensor size does not match alphabet product");
  }
  std::set<std::string> seen;
  for (const auto& v : vars_) {
    if (!seen.insert(v.name).second) {
      throw std::invalid_argument("JointPmf: duplicate variable name '" + v.name + "'");
    }
  }
  double total = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw std::invalid_argument("JointPmf: negative probability entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw std::invalid_argument("JointPmf: entries sum to " + std::to_string(total) +
                                ", expected 1");
  }
  strides_ = make_strides(vars_);
}

int JointPmf::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void PmfFactor::validate() const {
  const std::size_t tsize = checked_size(targets, "PmfFactor targets");
  const std::size_t csize = checked_size(conditioning, "PmfFactor conditioning");
  if (targets.empty()) throw std::invalid_argument("PmfFactor: needs at least one target");
  if (table.size() != tsize * csize) {
    throw std::invalid_argument("PmfFactor: table size does not match alphabets");
  }
  for (double p : table) {
    if (p < 0.0) throw std::invalid_argument("PmfFactor: negative probability entry");
  }
  for (std::size_t c = 0; c < csize; ++c) {
    double slice = 0.0;
    for (std::size_t t = 0; t < tsize; ++t) slice += table[c * tsize + t];
    if (std::abs(slice - 1.0) > kNormTol) {
      throw std::invalid_argument("PmfFactor: conditional slice for '" + targets.front().name +
                                  "' sums to " + std::to_string(slice) + ", expected 1");
    }
  }
}

JointPmf compose(const std::vector<PmfFactor>& factors) {
  for (const auto& f : factors) f.validate();

  // Cardinality bookkeeping and disjointness of targets.
  std::unordered_map<std::string, int> card;
  for (const auto& f : factors) {
    for (const auto& t : f.targets) {
      if (!card.emplace(t.name, t.card).second) {
        throw std::invalid_argument("compose: variable '" + t.name +
                                    "' is targeted by more than one factor");
      }
    }
  }
  for (const auto& f : factors) {
    for (const auto& c : f.conditioning) {
      auto it = card.find(c.name);
      if (it == card.end()) {
        throw std::invalid_argument("compose: conditioning variable '" + c.name +
                                    "' is not produced by any factor");
      }
      if (it->second != c.card) {
        throw std::invalid_argument("compose: alphabet mismatch for '" + c.name + "'");
      }
    }
  }

  // Stable topological order over factors.
  std::vector<const PmfFactor*> order;
  std::set<std::string> placed;
  std::vector<bool> done(factors.size(), false);
  while (order.size() < factors.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (done[i]) continue;
      bool ready = true;
      for (const auto& c : factors[i].conditioning) {
        if (!placed.count(c.name)) {
          ready = false;
          break;
        }
      }
      if (ready) {
        order.push_back(&factors[i]);
        for (const auto& t : factors[i].targets) placed.insert(t.name);
        done[i] = true;
        progressed = true;
      }
    }
    if (!progressed) {
      throw std::invalid_argument("compose: no valid factorization order (cyclic conditioning)");
    }
  }

  std::vector<Var> vars;
  for (const auto* f : order) {
    vars.insert(vars.end(), f->targets.begin(), f->targets.end());
  }
  const std::size_t total = checked_size(vars, "compose");
  const auto strides = make_strides(vars);
  std::unordered_map<std::string, int> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos.emplace(vars[i].name, static_cast<int>(i));

  // Per-factor index plan: position and stride of every factor dimension in
  // the joint odometer, conditioning dims first (matching table layout).
  struct Plan {
    const PmfFactor* f;
    std::vector<std::pair<int, std::size_t>> dims;  // (joint position, factor stride)
  };
  std::vector<Plan> plans;
  for (const auto* f : order) {
    Plan plan{f, {}};
    std::vector<Var> fdims = f->conditioning;
    fdims.insert(fdims.end(), f->targets.begin(), f->targets.end());
    const auto fstrides = make_strides(fdims);
    for (std::size_t i = 0; i < fdims.size(); ++i) {
      plan.dims.emplace_back(pos.at(fdims[i].name), fstrides[i]);
    }
    plans.push_back(std::move(plan));
  }

  std::vector<double> probs(total);
  std::vector<int> digit(vars.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double p = 1.0;
    for (const auto& plan : plans) {
      std::size_t fidx = 0;
      for (const auto& [jpos, fstride] : plan.dims) fidx += digit[jpos] * fstride;
      p *= plan.f->table[fidx];
      if (p == 0.0) break;
    }
    probs[flat] = p;
    for (int d = static_cast<int>(vars.size()) - 1; d >= 0; --d) {
      if (++digit[d] < vars[d].card) break;
      digit[d] = 0;
    }
  }
  return JointPmf(std::move(vars), std::move(probs));
}

JointPmf marginalize(const JointPmf& pmf, std::span<const std::string> keep) {
  std::set<std::string> keep_set;
  for (const auto& k : keep) {
    if (pmf.index_of(k) < 0) {
      throw std::invalid_argument("marginalize: unknown variable '" + k + "'");
    }
    keep_set.insert(k);
  }

  std::vector<Var> out_vars;
  std::vector<int> kept_pos;
  for (std::size_t i = 0; i < pmf.vars().size(); ++i) {
    if (keep_set.count(pmf.vars()[i].name)) {
      out_vars.push_back(pmf.vars()[i]);
      kept_pos.push_back(static_cast<int>(i));
    }
  }
  const auto out_strides = make_strides(out_vars);
  std::size_t out_size = 1;
  for (const auto& v : out_vars) out_size *= static_cast<std::size_t>(v.card);

  std::vector<double> out(out_size, 0.0);
  std::vector<int> digit(pmf.vars().size(), 0);
  for (std::size_t flat = 0; flat < pmf.size(); ++flat) {
    std::size_t oidx = 0;
    for (std::size_t j = 0; j < kept_pos.size(); ++j) oidx += digit[kept_pos[j]] * out_strides[j];
    out[oidx] += pmf.probs()[flat];
    for (int d = static_cast<int>(pmf.vars().size()) - 1; d >= 0; --d) {
      if (++digit[d] < pmf.vars()[d].card) break;
      digit[d] = 0;
    }
  }
  return JointPmf(std::move(out_vars), std::move(out));
}

double mutual_information(const JointPmf& pmf, std::span<const std::string> a,
                          std::span<const std::string> b, std::span<const std::string> c) {
  {
    std::set<std::string> seen;
    for (const auto& grp : {a, b, c}) {
      for (const auto& name : grp) {
        if (pmf.index_of(name) < 0) {
          throw std::invalid_argument("mutual_information: unknown variable '" + name + "'");
        }
        if (!seen.insert(name).second) {
          throw std::invalid_argument("mutual_information: variable sets overlap at '" + name +
                                      "'");
        }
      }
    }
  }
  if (a.empty() || b.empty()) return 0.0;

  std::vector<std::string> abc(a.begin(), a.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  const JointPmf joint = marginalize(pmf, abc);

  std::vector<std::string> ac(a.begin(), a.end());
  ac.insert(ac.end(), c.begin(), c.end());
  std::vector<std::string> bc(b.begin(), b.end());
  bc.insert(bc.end(), c.begin(), c.end());
  std::vector<std::string> cs(c.begin(), c.end());
  const JointPmf m_ac = marginalize(joint, ac);
  const JointPmf m_bc = marginalize(joint, bc);
  const JointPmf m_c = marginalize(joint, cs);

  // Positions of each marginal's variables inside the ABC odometer.
  auto plan_for = [&](const JointPmf& m) {
    std::vector<std::pair<int, std::size_t>> plan;
    for (std::size_t i = 0; i < m.vars().size(); ++i) {
      plan.emplace_back(joint.index_of(m.vars()[i].name), m.strides()[i]);
    }
    return plan;
  };
  const auto plan_ac = plan_for(m_ac);
  const auto plan_bc = plan_for(m_bc);
  const auto plan_c = plan_for(m_c);
  auto project = [](const std::vector<int>& digit,
                    const std::vector<std::pair<int, std::size_t>>& plan) {
    std::size_t idx = 0;
    for (const auto& [jpos, stride] : plan) idx += digit[jpos] * stride;
    return idx;
  };

  double bits = 0.0;
  std::vector<int> digit(joint.vars().size(), 0);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const double p = joint.probs()[flat];
    if (p >= kZeroProb) {
      const double pac = m_ac.probs()[project(digit, plan_ac)];
      const double pbc = m_bc.probs()[project(digit, plan_bc)];
      const double pc = m_c.size() ? m_c.probs()[project(digit, plan_c)] : 1.0;
      bits += p * std::log2(p * pc / (pac * pbc));
    }
    for (int d = static_cast<int>(joint.vars().size()) - 1; d >= 0; --d) {
      if (++digit[d] < joint.vars()[d].card) break;
      digit[d] = 0;
    }
  }
  return std::max(0.0, bits);
}

}  // namespace netrate::disc
