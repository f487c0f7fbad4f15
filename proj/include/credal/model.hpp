#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "credal/rational.hpp"

namespace credal {

using NodeId = std::size_t;
using State = int;
using Pmf = RationalVector;

struct Variable {
  std::string name;
  int cardinality = 2;
};

/// Linear restriction a . q <= b (or = b) on a pmf q.
struct Facet {
  RationalVector coefficients;
  Rational bound;
  bool equality = false;

  bool operator==(const Facet&) const = default;
};

/// Credal set given by its extreme points, optionally with a facet
/// description of the same polytope.
struct CredalSpec {
  std::vector<Pmf> extrema;
  std::vector<Facet> facets;

  bool is_singleton() const { return extrema.size() == 1; }
  /// Extrema are exactly the degenerate pmfs of every state (in any order).
  bool is_vacuous() const;

  bool operator==(const CredalSpec&) const = default;
};

struct Arc {
  NodeId parent;
  NodeId child;
  bool operator==(const Arc&) const = default;
};

/// Separately specified credal network. Local specs of node i are indexed by
/// parent configuration: parents sorted by node index, first parent most
/// significant. The object is immutable; invariants beyond index ranges are
/// checked by validate_network.
class CredalNetwork {
 public:
  CredalNetwork() = default;
  CredalNetwork(std::vector<Variable> variables, std::vector<Arc> arcs,
                std::vector<std::vector<CredalSpec>> local_specs);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(NodeId i) const { return variables_[i]; }
  int cardinality(NodeId i) const { return variables_[i].cardinality; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<NodeId>& parents(NodeId i) const { return parents_[i]; }
  const std::vector<NodeId>& children(NodeId i) const { return children_[i]; }
  bool is_root(NodeId i) const { return parents_[i].empty(); }

  const std::vector<CredalSpec>& specs(NodeId i) const { return specs_[i]; }
  const CredalSpec& spec(NodeId i, std::size_t config) const { return specs_[i][config]; }
  const std::vector<std::vector<CredalSpec>>& all_specs() const { return specs_; }

  std::size_t config_count(NodeId i) const;
  /// Configuration index of node i read off a full (or partial, covering the
  /// parents) joint assignment.
  std::size_t config_index(NodeId i, const std::vector<State>& joint) const;
  /// Parent states of configuration `config`, in sorted-parent order.
  std::vector<State> config_states(NodeId i, std::size_t config) const;

  /// Topological order (ties by node index). Throws on a cycle.
  std::vector<NodeId> topological_order() const;
  bool is_acyclic() const;
  /// Nodes reachable from i by a directed path (excluding i).
  std::vector<bool> descendants(NodeId i) const;
  /// Ancestors of the given nodes, including the nodes themselves.
  std::vector<bool> ancestral_closure(const std::vector<NodeId>& nodes) const;

  /// Number of joint states; saturates at UINT64_MAX.
  std::uint64_t joint_size() const;

  /// Copy with node i's local specs replaced.
  CredalNetwork with_specs(NodeId i, std::vector<CredalSpec> specs) const;

  bool operator==(const CredalNetwork& other) const {
    return variables_.size() == other.variables_.size() && arcs_ == other.arcs_ &&
           specs_ == other.specs_ && names_equal(other);
  }

 private:
  bool names_equal(const CredalNetwork& other) const;

  std::vector<Variable> variables_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<CredalSpec>> specs_;
};

enum class Bound { Lower, Upper };

/// Generalized-Bayes-rule query: lower/upper expectation of f(X_query)
/// given the evidence assignment.
struct GbrTask {
  NodeId query = 0;
  RationalVector f;
  std::map<NodeId, State> evidence;
  Bound bound = Bound::Lower;

  /// Same task with f negated and the bound direction flipped.
  GbrTask negated() const;
};

/// Throws CredalError(Validation) when the task does not fit the network.
void check_task(const CredalNetwork& net, const GbrTask& task);

struct ValidationReport {
  std::vector<std::string> findings;
  bool ok() const { return findings.empty(); }
};

ValidationReport validate_network(const CredalNetwork& net);

/// Builds a network and throws CredalError(Validation) listing every finding
/// if it is not valid.
CredalNetwork make_valid_network(std::vector<Variable> variables, std::vector<Arc> arcs,
                                 std::vector<std::vector<CredalSpec>> local_specs);

/// Sums over joint states consistent with evidence, for a precise joint
/// given by one pmf per (node, configuration).
struct EvidenceSums {
  Rational weighted;  ///< sum of f(x_q) p(x)
  Rational mass;      ///< sum of p(x) = p(evidence)
};

using PmfChooser = std::function<const Pmf&(NodeId node, std::size_t config)>;

/// Depth-first summation over the ancestral set of query and evidence, in
/// topological order, multiplying local probabilities as it descends and
/// pruning zero-probability branches.
EvidenceSums accumulate(const CredalNetwork& net, const GbrTask& task, const PmfChooser& choose);

/// Network restricted to the ancestral set of query and evidence, with the
/// task renumbered to match. Node order is preserved.
struct Restricted {
  CredalNetwork network;
  GbrTask task;
  std::vector<NodeId> original;  ///< original id of each kept node
};
Restricted restrict_to_ancestors(const CredalNetwork& net, const GbrTask& task);

/// Exact conditional expectation E[f | evidence] on an all-singleton network.
/// The bound field is ignored (a precise network has one expectation).
Rational bn_expectation(const CredalNetwork& net, const GbrTask& task);

}  // namespace credal
