#include "credal/hmm.hpp"

#include <algorithm>

namespace credal::hmm {

namespace {

Classification reject(std::string reason) { return {std::nullopt, std::move(reason)}; }

bool is_identity_manifest(const CredalNetwork& net, NodeId manifest, NodeId state) {
  if (net.cardinality(manifest) != net.cardinality(state)) return false;
  for (std::size_t c = 0; c < net.config_count(manifest); ++c) {
    const auto& spec = net.spec(manifest, c);
    if (!spec.is_singleton() || spec.extrema[0][c] != 1) return false;
  }
  return true;
}

}  // namespace

Classification classify_predictive_hmm(const CredalNetwork& net, const GbrTask& task) {
  const NodeId q = task.query;
  if (q >= net.size()) return reject("query node out of range");

  // A leaf query whose parent has a non-leaf child is a manifest of a chain.
  if (net.children(q).empty() && net.parents(q).size() == 1) {
    const NodeId parent = net.parents(q).front();
    for (NodeId sibling : net.children(parent))
      if (sibling != q && !net.children(sibling).empty())
        return reject("query node is not the terminal state node");
  }
  if (!net.children(q).empty()) return reject("query node is not the terminal state node (it has children)");

  PredictiveHmm hmm;
  for (NodeId v = q;;) {
    hmm.chain.push_back(v);
    if (net.parents(v).empty()) break;
    if (net.parents(v).size() > 1) return reject("state node " + std::to_string(v) + " has more than one parent");
    v = net.parents(v).front();
    if (hmm.chain.size() > net.size()) return reject("cycle detected");
  }
  std::reverse(hmm.chain.begin(), hmm.chain.end());
  hmm.manifest.assign(hmm.chain.size(), std::nullopt);

  std::vector<int> position(net.size(), -1);
  for (std::size_t k = 0; k < hmm.chain.size(); ++k) position[hmm.chain[k]] = static_cast<int>(k);

  for (NodeId v = 0; v < net.size(); ++v) {
    if (position[v] >= 0) continue;
    if (!net.children(v).empty())
      return reject("node " + std::to_string(v) + " is off the state chain but not a leaf");
    if (net.parents(v).size() != 1 || position[net.parents(v).front()] < 0)
      return reject("node " + std::to_string(v) + " is not a manifest leaf of a state node");
    const auto pos = static_cast<std::size_t>(position[net.parents(v).front()]);
    if (pos + 1 == hmm.chain.size()) return reject("the query state node has a manifest child");
    if (hmm.manifest[pos]) return reject("state node " + std::to_string(hmm.chain[pos]) + " has two manifest children");
    hmm.manifest[pos] = v;
  }
  for (const auto& [node, state] : task.evidence)
    if (position[node] >= 0) return reject("evidence on state node " + std::to_string(node));

  hmm.markov_chain = true;
  for (std::size_t k = 0; k < hmm.chain.size(); ++k)
    if (hmm.manifest[k] && !is_identity_manifest(net, *hmm.manifest[k], hmm.chain[k])) hmm.markov_chain = false;
  return {std::move(hmm), {}};
}

namespace {

/// h(x) = weighted(x) - mu * mass(x), with the minimizing choices' affine form.
struct Affine {
  Rational weighted;
  Rational mass;
};

Rational at(const Affine& h, const Rational& mu) { return h.weighted - mu * h.mass; }

/// min over extrema of sum_x q(x) h(x), evaluated at mu.
Affine best_mixture(const CredalSpec& spec, const std::vector<Affine>& h, const Rational& mu) {
  Affine best;
  Rational best_value;
  bool have = false;
  for (const auto& q : spec.extrema) {
    Affine cand{0, 0};
    for (std::size_t x = 0; x < q.size(); ++x) {
      if (sgn(q[x]) == 0) continue;
      cand.weighted += q[x] * h[x].weighted;
      cand.mass += q[x] * h[x].mass;
    }
    Rational v = at(cand, mu);
    if (!have || v < best_value) {
      best = std::move(cand);
      best_value = std::move(v);
      have = true;
    }
  }
  return best;
}

Affine recurse(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task, std::vector<Affine> h,
               const Rational& mu) {
  for (std::size_t k = hmm.chain.size() - 1; k-- > 0;) {
    const NodeId state = hmm.chain[k];
    const NodeId next = hmm.chain[k + 1];
    std::vector<Affine> t(static_cast<std::size_t>(net.cardinality(state)));
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = best_mixture(net.spec(next, x), h, mu);

    if (hmm.manifest[k]) {
      const NodeId m = *hmm.manifest[k];
      auto ev = task.evidence.find(m);
      if (ev != task.evidence.end()) {
        const auto e = static_cast<std::size_t>(ev->second);
        for (std::size_t x = 0; x < t.size(); ++x) {
          // q(e|x) >= 0, so the minimizing endpoint depends on the sign of t(x).
          const auto& extrema = net.spec(m, x).extrema;
          const bool nonneg = sgn(at(t[x], mu)) >= 0;
          const Rational* pick = &extrema.front()[e];
          for (const auto& q : extrema)
            if (nonneg ? q[e] < *pick : q[e] > *pick) pick = &q[e];
          t[x].weighted *= *pick;
          t[x].mass *= *pick;
        }
      }
    }
    h = std::move(t);
  }
  return best_mixture(net.spec(hmm.chain.front(), 0), h, mu);
}

}  // namespace

PhiValue phi_hmm(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task, const Rational& mu) {
  std::vector<Affine> h(task.f.size());
  for (std::size_t x = 0; x < h.size(); ++x) h[x] = {task.f[x], 1};
  Affine r = recurse(net, hmm, task, std::move(h), mu);
  return {at(r, mu), r.weighted, r.mass};
}

Rational evidence_lower(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task) {
  // h = 1 - 0 * mass: the recursion then minimizes p(evidence) itself.
  std::vector<Affine> h(task.f.size(), Affine{1, 0});
  return recurse(net, hmm, task, std::move(h), Rational(0)).weighted;
}

HmmResult gbr_hmm(const CredalNetwork& net, const PredictiveHmm& hmm, const GbrTask& task) {
  check_task(net, task);
  if (task.bound == Bound::Upper) {
    HmmResult r = gbr_hmm(net, hmm, task.negated());
    r.mu = -r.mu;
    return r;
  }
  if (sgn(evidence_lower(net, hmm, task)) <= 0)
    throw CredalError(ErrorKind::GbrUndefined, "GBR undefined: min p(evidence) = 0");

  HmmResult result;
  Rational lo = *std::min_element(task.f.begin(), task.f.end());
  Rational hi = *std::max_element(task.f.begin(), task.f.end());
  constexpr int kMaxBisection = 64;
  for (; result.bisection_steps < kMaxBisection; ++result.bisection_steps) {
    const Rational mid = (lo + hi) / 2;
    const PhiValue v = phi_hmm(net, hmm, task, mid);
    const Rational candidate = v.weighted / v.mass;
    if (sgn(phi_hmm(net, hmm, task, candidate).value) == 0) {
      result.mu = candidate;
      return result;
    }
    if (sgn(v.value) >= 0) lo = mid;
    else hi = mid;
  }
  // phi(hi) <= 0; each affine root moves down toward the true root.
  Rational mu = hi;
  for (;; ++result.newton_steps) {
    const PhiValue v = phi_hmm(net, hmm, task, mu);
    if (sgn(v.value) == 0) break;
    mu = v.weighted / v.mass;
  }
  result.mu = mu;
  return result;
}

}  // namespace credal::hmm
