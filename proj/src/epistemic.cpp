#include "credal/epistemic.hpp"

#include <algorithm>
#include <map>

#include "credal/polytope.hpp"

namespace credal::epistemic {

bool EpistemicPolytope::contains(const RationalVector& p) const {
  if (p.size() != atom_count) return false;
  for (const auto& v : p)
    if (sgn(v) < 0) return false;
  for (const auto& row : rows) {
    const int s = sgn(dot(row.coefficients, p));
    if (row.equality ? s != 0 : s > 0) return false;
  }
  return true;
}

std::vector<State> atom_states(const CredalNetwork& net, std::size_t atom) {
  std::vector<State> joint(net.size());
  for (std::size_t k = net.size(); k-- > 0;) {
    const auto card = static_cast<std::size_t>(net.cardinality(k));
    joint[k] = static_cast<State>(atom % card);
    atom /= card;
  }
  return joint;
}

EpistemicPolytope epistemic_polytope(const CredalNetwork& net, std::uint64_t max_atoms) {
  const std::uint64_t atoms = net.joint_size();
  if (atoms > max_atoms)
    throw CredalError(ErrorKind::SizeCap, "epistemic polytope too large: " + std::to_string(atoms) +
                                              " atoms (cap " + std::to_string(max_atoms) + ")");
  EpistemicPolytope poly;
  poly.atom_count = static_cast<std::size_t>(atoms);

  std::vector<std::vector<State>> states(poly.atom_count);
  for (std::size_t a = 0; a < poly.atom_count; ++a) states[a] = atom_states(net, a);

  for (NodeId i = 0; i < net.size(); ++i) {
    // Facets per configuration, without those implied by p >= 0.
    std::vector<std::vector<Facet>> facets(net.config_count(i));
    for (std::size_t c = 0; c < facets.size(); ++c) {
      for (auto& f : v_to_h(net.spec(i, c), net.cardinality(i)))
        if (!is_nonnegativity_facet(f)) facets[c].push_back(std::move(f));
    }
    const auto desc = net.descendants(i);
    std::vector<NodeId> nd;
    for (NodeId k = 0; k < net.size(); ++k)
      if (k != i && !desc[k]) nd.push_back(k);

    // Row block per non-descendant assignment, in order of first appearance.
    std::map<std::vector<State>, std::size_t> group_of;
    std::vector<std::size_t> first_row;
    std::vector<State> key(nd.size());
    for (std::size_t a = 0; a < poly.atom_count; ++a) {
      for (std::size_t k = 0; k < nd.size(); ++k) key[k] = states[a][nd[k]];
      const std::size_t c = net.config_index(i, states[a]);
      const auto& fs = facets[c];
      if (fs.empty()) continue;
      auto [it, inserted] = group_of.try_emplace(key, 0);
      if (inserted) {
        it->second = poly.rows.size();
        for (const auto& f : fs) poly.rows.push_back({RationalVector(poly.atom_count), f.equality});
      }
      const auto xi = static_cast<std::size_t>(states[a][i]);
      for (std::size_t k = 0; k < fs.size(); ++k)
        poly.rows[it->second + k].coefficients[a] = fs[k].coefficients[xi] - fs[k].bound;
    }
  }
  return poly;
}

namespace {

struct Objective {
  RationalVector weighted;  // f(x_q) on evidence-consistent atoms
  RationalVector mask;      // 1 on evidence-consistent atoms
};

Objective objective_for(const CredalNetwork& net, std::size_t atoms, const GbrTask& task) {
  Objective o{RationalVector(atoms), RationalVector(atoms)};
  for (std::size_t a = 0; a < atoms; ++a) {
    const auto x = atom_states(net, a);
    bool consistent = true;
    for (const auto& [node, state] : task.evidence)
      if (x[node] != state) consistent = false;
    if (!consistent) continue;
    o.mask[a] = 1;
    o.weighted[a] = task.f[static_cast<std::size_t>(x[task.query])];
  }
  return o;
}

}  // namespace

Rational epistemic_phi(const CredalNetwork& net, const EpistemicPolytope& polytope, const GbrTask& task,
                       const Rational& mu, lp::Route route) {
  check_task(net, task);
  const auto obj = objective_for(net, polytope.atom_count, task);
  RationalVector c(polytope.atom_count);
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = obj.weighted[a] - mu * obj.mask[a];
  return lp::cone_min(c, RationalVector(polytope.atom_count, Rational(1)), polytope.rows, route);
}

EpistemicResult gbr_epistemic(const CredalNetwork& net, const EpistemicPolytope& polytope, const GbrTask& task,
                              const Options& options) {
  check_task(net, task);
  if (task.bound == Bound::Upper) {
    EpistemicResult r = gbr_epistemic(net, polytope, task.negated(), options);
    r.mu = -r.mu;
    Rational lo = -r.bracket_high;
    r.bracket_high = -r.bracket_low;
    r.bracket_low = std::move(lo);
    return r;
  }
  const auto obj = objective_for(net, polytope.atom_count, task);
  const RationalVector ones(polytope.atom_count, Rational(1));
  EpistemicResult result;
  result.constraint_rows = polytope.rows.size();
  result.evidence_lower = 1;
  if (!task.evidence.empty()) {
    result.evidence_lower = lp::cone_min(obj.mask, ones, polytope.rows, options.route);
    if (sgn(result.evidence_lower) <= 0)
      throw CredalError(ErrorKind::GbrUndefined, "GBR undefined: min p(evidence) = 0");
  }

  if (options.method == Method::Fractional) {
    result.mu = task.evidence.empty() ? lp::cone_min(obj.weighted, ones, polytope.rows, options.route)
                                      : lp::fractional_min(obj.weighted, obj.mask, polytope.rows, options.route);
    result.bracket_low = result.bracket_high = result.mu;
    return result;
  }

  Rational lo = *std::min_element(task.f.begin(), task.f.end());
  Rational hi = *std::max_element(task.f.begin(), task.f.end());
  for (int step = 0; step < options.bisection_steps && lo < hi; ++step) {
    Rational mid = (lo + hi) / 2;
    if (sgn(epistemic_phi(net, polytope, task, mid, options.route)) >= 0) lo = mid;
    else hi = mid;
  }
  result.bracket_low = lo;
  result.bracket_high = hi;
  result.mu = (lo + hi) / 2;
  return result;
}

EpistemicResult gbr_epistemic(const CredalNetwork& net, const GbrTask& task, const Options& options) {
  check_task(net, task);
  // Nodes outside the ancestral set of query and evidence are barren: giving
  // each a parents-only conditional extends any point of the smaller
  // extension, and every projected constraint is a mixture of original ones.
  const auto sub = restrict_to_ancestors(net, task);
  return gbr_epistemic(sub.network, epistemic_polytope(sub.network, options.max_atoms), sub.task, options);
}

}  // namespace credal::epistemic
