#include "credal/model.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "credal/polytope.hpp"

namespace credal {

bool CredalSpec::is_vacuous() const {
  if (extrema.empty() || extrema.size() != extrema.front().size()) return false;
  std::vector<bool> seen(extrema.size(), false);
  for (const auto& q : extrema) {
    std::size_t hot = q.size();
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q[k] == 1 && hot == q.size()) hot = k;
      else if (sgn(q[k]) != 0) return false;
    }
    if (hot == q.size() || seen[hot]) return false;
    seen[hot] = true;
  }
  return true;
}

CredalNetwork::CredalNetwork(std::vector<Variable> variables, std::vector<Arc> arcs,
                             std::vector<std::vector<CredalSpec>> local_specs)
    : variables_(std::move(variables)),
      arcs_(std::move(arcs)),
      parents_(variables_.size()),
      children_(variables_.size()),
      specs_(std::move(local_specs)) {
  const std::size_t n = variables_.size();
  if (specs_.size() != n)
    throw CredalError(ErrorKind::Validation, "local specs given for " + std::to_string(specs_.size()) +
                                                 " nodes, network has " + std::to_string(n));
  for (const auto& a : arcs_) {
    if (a.parent >= n || a.child >= n)
      throw CredalError(ErrorKind::Validation, "arc references a node out of range");
    if (std::find(parents_[a.child].begin(), parents_[a.child].end(), a.parent) != parents_[a.child].end())
      throw CredalError(ErrorKind::Validation, "duplicate arc " + std::to_string(a.parent) + "->" +
                                                   std::to_string(a.child));
    parents_[a.child].push_back(a.parent);
    children_[a.parent].push_back(a.child);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

bool CredalNetwork::names_equal(const CredalNetwork& other) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name != other.variables_[i].name ||
        variables_[i].cardinality != other.variables_[i].cardinality)
      return false;
  return true;
}

std::size_t CredalNetwork::config_count(NodeId i) const {
  std::size_t count = 1;
  for (NodeId p : parents_[i]) count *= static_cast<std::size_t>(variables_[p].cardinality);
  return count;
}

std::size_t CredalNetwork::config_index(NodeId i, const std::vector<State>& joint) const {
  std::size_t idx = 0;
  for (NodeId p : parents_[i])
    idx = idx * static_cast<std::size_t>(variables_[p].cardinality) + static_cast<std::size_t>(joint[p]);
  return idx;
}

std::vector<State> CredalNetwork::config_states(NodeId i, std::size_t config) const {
  const auto& ps = parents_[i];
  std::vector<State> states(ps.size());
  for (std::size_t k = ps.size(); k-- > 0;) {
    const auto card = static_cast<std::size_t>(variables_[ps[k]].cardinality);
    states[k] = static_cast<State>(config % card);
    config /= card;
  }
  return states;
}

std::vector<NodeId> CredalNetwork::topological_order() const {
  const std::size_t n = size();
  std::vector<std::size_t> indegree(n);
  for (NodeId i = 0; i < n; ++i) indegree[i] = parents_[i].size();
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId c : children_[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() != n) throw CredalError(ErrorKind::Validation, "cycle detected");
  return order;
}

bool CredalNetwork::is_acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const CredalError&) {
    return false;
  }
}

std::vector<bool> CredalNetwork::descendants(NodeId i) const {
  std::vector<bool> mark(size(), false);
  std::vector<NodeId> stack(children_[i].begin(), children_[i].end());
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (mark[v]) continue;
    mark[v] = true;
    for (NodeId c : children_[v]) stack.push_back(c);
  }
  return mark;
}

std::vector<bool> CredalNetwork::ancestral_closure(const std::vector<NodeId>& nodes) const {
  std::vector<bool> mark(size(), false);
  std::vector<NodeId> stack(nodes);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (mark[v]) continue;
    mark[v] = true;
    for (NodeId p : parents_[v]) stack.push_back(p);
  }
  return mark;
}

std::uint64_t CredalNetwork::joint_size() const {
  std::uint64_t total = 1;
  for (const auto& v : variables_) {
    const auto card = static_cast<std::uint64_t>(v.cardinality);
    if (total > std::numeric_limits<std::uint64_t>::max() / card) return std::numeric_limits<std::uint64_t>::max();
    total *= card;
  }
  return total;
}

CredalNetwork CredalNetwork::with_specs(NodeId i, std::vector<CredalSpec> specs) const {
  auto all = specs_;
  all[i] = std::move(specs);
  return CredalNetwork(variables_, arcs_, std::move(all));
}

GbrTask GbrTask::negated() const {
  GbrTask t = *this;
  for (auto& v : t.f) v = -v;
  t.bound = bound == Bound::Lower ? Bound::Upper : Bound::Lower;
  return t;
}

void check_task(const CredalNetwork& net, const GbrTask& task) {
  if (task.query >= net.size()) throw CredalError(ErrorKind::Validation, "query node out of range");
  if (task.f.size() != static_cast<std::size_t>(net.cardinality(task.query)))
    throw CredalError(ErrorKind::Validation, "f has " + std::to_string(task.f.size()) +
                                                 " values but the query variable has " +
                                                 std::to_string(net.cardinality(task.query)) + " states");
  if (task.evidence.count(task.query)) throw CredalError(ErrorKind::Validation, "query node is in the evidence");
  for (const auto& [node, state] : task.evidence) {
    if (node >= net.size()) throw CredalError(ErrorKind::Validation, "evidence node out of range");
    if (state < 0 || state >= net.cardinality(node))
      throw CredalError(ErrorKind::Validation, "evidence state out of range for node " + std::to_string(node));
  }
}

ValidationReport validate_network(const CredalNetwork& net) {
  ValidationReport report;
  auto add = [&](std::string s) { report.findings.push_back(std::move(s)); };

  std::set<std::string> names;
  for (NodeId i = 0; i < net.size(); ++i) {
    const auto& v = net.variable(i);
    if (v.cardinality < 2) add("node " + std::to_string(i) + ": cardinality must be at least 2");
    if (!names.insert(v.name).second) add("node " + std::to_string(i) + ": duplicate name '" + v.name + "'");
  }
  if (!report.ok()) return report;
  if (!net.is_acyclic()) add("cycle detected");

  for (NodeId i = 0; i < net.size(); ++i) {
    const std::string where = "node " + std::to_string(i) + " (" + net.variable(i).name + ")";
    if (net.specs(i).size() != net.config_count(i)) {
      add(where + ": " + std::to_string(net.specs(i).size()) + " local sets for " +
          std::to_string(net.config_count(i)) + " parent configurations");
      continue;
    }
    const auto card = static_cast<std::size_t>(net.cardinality(i));
    for (std::size_t c = 0; c < net.specs(i).size(); ++c) {
      const auto& spec = net.spec(i, c);
      const std::string at = where + " config " + std::to_string(c);
      if (spec.extrema.empty()) {
        add(at + ": empty credal set");
        continue;
      }
      bool shapes_ok = true;
      for (std::size_t k = 0; k < spec.extrema.size(); ++k) {
        const auto& q = spec.extrema[k];
        if (q.size() != card) {
          add(at + ": pmf " + std::to_string(k) + " has wrong length");
          shapes_ok = false;
          continue;
        }
        Rational sum = 0;
        for (const auto& v : q) {
          if (sgn(v) < 0 || v > 1) {
            add(at + ": pmf " + std::to_string(k) + " has an entry outside [0,1]");
            shapes_ok = false;
          }
          sum += v;
        }
        if (sum != 1) {
          add(at + ": pmf not normalized (sums to " + to_string(sum) + ")");
          shapes_ok = false;
        }
      }
      if (!shapes_ok) continue;
      if (auto k = first_non_extreme(spec.extrema)) add(at + ": non-extreme point at index " + std::to_string(*k));
      for (std::size_t f = 0; f < spec.facets.size(); ++f) {
        const auto& facet = spec.facets[f];
        if (facet.coefficients.size() != card) {
          add(at + ": facet " + std::to_string(f) + " has wrong length");
          continue;
        }
        for (std::size_t k = 0; k < spec.extrema.size(); ++k)
          if (!satisfies(facet, spec.extrema[k]))
            add(at + ": extreme " + std::to_string(k) + " violates facet " + std::to_string(f));
      }
    }
  }
  return report;
}

CredalNetwork make_valid_network(std::vector<Variable> variables, std::vector<Arc> arcs,
                                 std::vector<std::vector<CredalSpec>> local_specs) {
  CredalNetwork net(std::move(variables), std::move(arcs), std::move(local_specs));
  auto report = validate_network(net);
  if (!report.ok()) {
    std::string msg = "invalid network:";
    for (const auto& f : report.findings) msg += "\n  " + f;
    throw CredalError(ErrorKind::Validation, msg);
  }
  return net;
}

EvidenceSums accumulate(const CredalNetwork& net, const GbrTask& task, const PmfChooser& choose) {
  std::vector<NodeId> targets{task.query};
  for (const auto& [node, state] : task.evidence) targets.push_back(node);
  const auto relevant = net.ancestral_closure(targets);
  std::vector<NodeId> order;
  for (NodeId v : net.topological_order())
    if (relevant[v]) order.push_back(v);

  std::vector<State> observed(net.size(), -1);
  for (const auto& [node, state] : task.evidence) observed[node] = state;

  EvidenceSums sums{0, 0};
  std::vector<State> joint(net.size(), 0);
  std::function<void(std::size_t, const Rational&)> descend = [&](std::size_t depth, const Rational& weight) {
    if (depth == order.size()) {
      sums.mass += weight;
      const Rational& fv = task.f[static_cast<std::size_t>(joint[task.query])];
      if (sgn(fv) != 0) sums.weighted += fv * weight;
      return;
    }
    const NodeId v = order[depth];
    const Pmf& q = choose(v, net.config_index(v, joint));
    const int lo = observed[v] >= 0 ? observed[v] : 0;
    const int hi = observed[v] >= 0 ? observed[v] + 1 : net.cardinality(v);
    for (State s = lo; s < hi; ++s) {
      const Rational& p = q[static_cast<std::size_t>(s)];
      if (sgn(p) == 0) continue;
      joint[v] = s;
      descend(depth + 1, weight * p);
    }
  };
  descend(0, Rational(1));
  return sums;
}

Rational bn_expectation(const CredalNetwork& net, const GbrTask& task) {
  check_task(net, task);
  for (NodeId i = 0; i < net.size(); ++i)
    for (const auto& s : net.specs(i))
      if (!s.is_singleton())
        throw CredalError(ErrorKind::Precondition, "bn_expectation needs all-singleton local sets (node " +
                                                       std::to_string(i) + ")");
  auto sums = accumulate(net, task, [&](NodeId v, std::size_t c) -> const Pmf& { return net.spec(v, c).extrema[0]; });
  if (sgn(sums.mass) == 0) throw CredalError(ErrorKind::GbrUndefined, "evidence has probability zero");
  return sums.weighted / sums.mass;
}

Restricted restrict_to_ancestors(const CredalNetwork& net, const GbrTask& task) {
  std::vector<NodeId> seeds{task.query};
  for (const auto& [node, state] : task.evidence) seeds.push_back(node);
  const auto keep = net.ancestral_closure(seeds);
  Restricted out;
  std::vector<NodeId> index(net.size(), 0);
  std::vector<Variable> vars;
  std::vector<std::vector<CredalSpec>> specs;
  for (NodeId i = 0; i < net.size(); ++i) {
    if (!keep[i]) continue;
    index[i] = out.original.size();
    out.original.push_back(i);
    vars.push_back(net.variable(i));
    specs.push_back(net.specs(i));
  }
  std::vector<Arc> arcs;
  for (const auto& a : net.arcs())
    if (keep[a.child]) arcs.push_back({index[a.parent], index[a.child]});
  out.network = CredalNetwork(std::move(vars), std::move(arcs), std::move(specs));
  out.task = task;
  out.task.query = index[task.query];
  out.task.evidence.clear();
  for (const auto& [node, state] : task.evidence) out.task.evidence[index[node]] = state;
  return out;
}

}  // namespace credal
