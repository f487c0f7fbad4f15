#pragma once

#include <optional>
#include <string>
#include <vector>

#include "credal/model.hpp"

namespace credal::hmm {

/// A network/task pair in predictive form: the state nodes form a chain
/// ending at the query node, every other node is an (at most one per state)
/// manifest leaf hanging off a non-terminal state, and evidence sits on
/// manifest nodes only.
struct PredictiveHmm {
  std::vector<NodeId> chain;                   ///< state nodes, root first, query last
  std::vector<std::optional<NodeId>> manifest;  ///< manifest child per chain position
  /// Every manifest set is a singleton putting mass one on its parent's state.
  bool markov_chain = false;
};

struct Classification {
  std::optional<PredictiveHmm> hmm;
  std::string reason;  ///< why the pair was rejected; empty when accepted
  bool accepted() const { return hmm.has_value(); }
};

Classification classify_predictive_hmm(const CredalNetwork& net, const GbrTask& task);

/// Value of the GBR left side at mu together with the affine function
/// weighted - mu * mass of the minimizing local choices.
struct PhiValue {
  Rational value;
  Rational weighted;
  Rational mass;
};

/// Backward recursion for min over the strong extension of
/// sum_{x ~ evidence} (f(x_q) - mu) p(x). Unobserved manifests drop out.
PhiValue phi_hmm(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task, const Rational& mu);

/// Lower probability of the evidence, by the same recursion with h = 1.
Rational evidence_lower(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task);

struct HmmResult {
  Rational mu;
  int bisection_steps = 0;
  int newton_steps = 0;
};

/// Exact root of phi_hmm in mu. Bisects on [min f, max f] and, at each
/// midpoint, tries the root of the minimizing affine piece; falls back to
/// Dinkelbach-style updates from the upper bracket. The result is verified
/// by phi_hmm(mu) == 0. Throws CredalError(GbrUndefined) when the evidence
/// lower probability is zero.
HmmResult gbr_hmm(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task);

}  // namespace credal::hmm
