#pragma once

#include <string>
#include <vector>

#include "credal/computable.hpp"
#include "credal/formula.hpp"
#include "credal/partition.hpp"

namespace credal::gadgets {

/// E-MAJSAT instance: formula over z1..zn, n its largest variable index, and
/// selector count k with 1 <= k < n.
struct EMajsatInstance {
  Formula formula;
  int n = 0;
  int k = 0;

  /// Throws CredalError(Parse) on a malformed formula, a formula without any
  /// operator, or k out of range.
  EMajsatInstance(Formula f, int k);
};

enum class Comparison { LessEqual, Less };

/// Generated network and query with the threshold that decides the source
/// instance: yes iff mu (comparison) threshold.
struct GadgetCertificate {
  std::string kind;  ///< "tree-partition", "polytree-partition" or "emajsat"
  CredalNetwork network;
  GbrTask task;
  Rational threshold;
  Comparison comparison = Comparison::LessEqual;
  Rational eps_rat;  ///< rationalization budget (0 when nothing was rounded)
  Rational eps_int;  ///< leaf interval lower endpoint, tree gadget only
  long bits = 0;     ///< per-parameter precision used
  std::string instance;
  std::vector<std::string> notes;

  bool decide(const Rational& mu) const;
};

/// Certificate metadata as JSON (network and task are written separately).
std::string serialize_certificate(const GadgetCertificate& cert, int indent = 1);

/// Credal tree: ternary uniform root, n precise Boolean children, n interval
/// leaves observed at 1; query f(x_0) = -I(x_0 = 3). bits = 0 picks the
/// default precision; the precision actually used is never below the
/// rationalization requirement.
GadgetCertificate gen_tree_partition(const PartitionInstance& inst, long bits = 0);

/// Default precision for the tree gadget: smallest b with 2^-b below a
/// quarter of the gap 2^-n / (4 * 64 z^4).
long tree_default_bits(const PartitionInstance& inst);

/// Interval leaf lower endpoint 2^(-n-3) / (64 z^4).
Rational tree_eps_int(const PartitionInstance& inst);

/// Polytree: n Boolean vacuous roots over a ternary chain; query
/// f = I(=1) + I(=2) on the last chain node, no evidence.
GadgetCertificate gen_polytree_partition(const PartitionInstance& inst, long bits = 0);

/// Default precision for the polytree gadget: a quarter of 1 / (3 * 32 z^4).
long polytree_default_bits(const PartitionInstance& inst);

/// Chain node holding the query of the polytree gadget for an n-integer
/// instance.
inline NodeId polytree_terminal(std::size_t n) { return 2 * n; }

/// Selector roots (vacuous), remaining variables (uniform), and one
/// deterministic gate per operator in post-order; query f = I(x_t = 0) on the
/// last gate, decision mu < 1/2.
GadgetCertificate gen_emajsat(const EMajsatInstance& inst);

inline constexpr int kMaxBruteEmajsat = 20;

/// True iff some assignment to z1..zk satisfies the formula on strictly more
/// than half of the assignments to the rest.
bool emajsat_brute(const EMajsatInstance& inst);

/// Number of satisfying completions for a selector assignment
/// (selectors[i] = z_{i+1}).
std::uint64_t emajsat_count(const EMajsatInstance& inst, const std::vector<bool>& selectors);

enum class Route { Tree, Polytree, Brute };

struct PartitionDecision {
  bool yes = false;
  Rational value;  ///< engine value (unset for Brute)
  Rational threshold;
  PartitionVerdict oracle;
  bool oracle_checked = false;
  bool agrees = true;
  std::string engine;
};

/// Generates the gadget for `route`, runs its engine (gbr_strong for the
/// tree, lemma2_inference for the polytree) and compares against the
/// certificate; always cross-checks partition_brute when n is within its cap.
PartitionDecision decide_partition(const PartitionInstance& inst, Route route);

struct EmajsatDecision {
  bool yes = false;
  Rational value;  ///< min p(x_t = 0) via lemma2_inference (network route)
  bool via_network = true;
  bool oracle_checked = false;
  bool oracle = false;
  bool agrees = true;
};

EmajsatDecision decide_emajsat(const EMajsatInstance& inst, bool via_network = true);

}  // namespace credal::gadgets
