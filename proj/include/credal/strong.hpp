#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "credal/model.hpp"

namespace credal::strong {

inline constexpr std::uint64_t kDefaultMaxCombinations = std::uint64_t{1} << 24;

/// One extreme of the strong extension: an index into the extrema list of
/// every (node, parent configuration) pair, flattened node-major.
struct ExtremaSelection {
  std::vector<std::size_t> indices;
  auto operator<=>(const ExtremaSelection&) const = default;
};

/// Flattening of (node, configuration) slots used by ExtremaSelection.
class SelectionLayout {
 public:
  explicit SelectionLayout(const CredalNetwork& net);
  std::size_t slot(NodeId node, std::size_t config) const { return offset_[node] + config; }
  std::size_t slot_count() const { return radix_.size(); }
  std::size_t radix(std::size_t slot) const { return radix_[slot]; }
  /// Product of extrema counts; saturates at UINT64_MAX.
  std::uint64_t combinations() const { return combinations_; }

 private:
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> radix_;
  std::uint64_t combinations_ = 1;
};

/// Calls visit(selection) for every selection in lexicographic order.
/// Throws CredalError(SizeCap) "strong enumeration too large" over the cap.
void for_each_selection(const CredalNetwork& net, const std::function<void(const ExtremaSelection&)>& visit,
                        std::uint64_t max_combinations = kDefaultMaxCombinations);

/// Materialized version of for_each_selection.
std::vector<ExtremaSelection> joint_extrema(const CredalNetwork& net,
                                            std::uint64_t max_combinations = kDefaultMaxCombinations);

/// Joint pmf of the selection over the full joint space, atoms in row-major
/// order (node 0 most significant).
RationalVector joint_pmf(const CredalNetwork& net, const ExtremaSelection& selection);

struct StrongResult {
  Rational mu;
  ExtremaSelection argmin;         ///< first optimal selection in lexicographic order
  Rational evidence_lower;         ///< min over selections of p(evidence)
  std::uint64_t selections = 0;
};

/// Lower (or upper) posterior expectation under strong independence by
/// exhaustive enumeration. A conditional expectation is linear-fractional in
/// the joint, so its minimum over the strong extension sits at one of its
/// vertices, which are exactly the selections.
/// Throws CredalError(GbrUndefined) when some selection gives the evidence
/// probability zero.
StrongResult gbr_strong(const CredalNetwork& net, const GbrTask& task,
                        std::uint64_t max_combinations = kDefaultMaxCombinations);

/// Left side of the GBR equation at mu: min over selections of
/// sum_{x ~ evidence} (f(x_q) - mu) p(x).
Rational strong_phi(const CredalNetwork& net, const GbrTask& task, const Rational& mu,
                    std::uint64_t max_combinations = kDefaultMaxCombinations);

/// True when every imprecise local set is vacuous and belongs to a root.
bool is_lemma2_form(const CredalNetwork& net);

struct Lemma2Result {
  Rational mu;
  std::vector<State> argmin_roots;  ///< states of the vacuous roots, in node order
  std::vector<NodeId> vacuous_roots;
  std::uint64_t assignments = 0;
};

/// Marginal lower expectation on networks whose only imprecision is vacuous
/// root sets: the minimum over clamped root assignments of the precise
/// expectation. Throws CredalError(EngineMismatch) "network not in vacuous-root
/// form" when the structure or task does not fit.
Lemma2Result lemma2_inference(const CredalNetwork& net, const GbrTask& task,
                              std::uint64_t max_combinations = kDefaultMaxCombinations);

/// Network with the given vacuous roots replaced by degenerate pmfs.
CredalNetwork clamp_roots(const CredalNetwork& net, const std::vector<NodeId>& roots,
                          const std::vector<State>& states);

}  // namespace credal::strong
