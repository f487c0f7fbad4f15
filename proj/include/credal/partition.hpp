#pragma once

#include <string_view>
#include <vector>

#include "credal/computable.hpp"

namespace credal::gadgets {

/// Partition problem instance: positive integers z_1..z_n, n >= 2.
struct PartitionInstance {
  std::vector<long> z;

  /// Throws CredalError(Parse) unless there are at least two positive values.
  explicit PartitionInstance(std::vector<long> values);
  std::size_t size() const { return z.size(); }
};

/// "3,5,8" -> {3, 5, 8}.
PartitionInstance parse_partition(std::string_view text);

/// Subset of {0..n-1} as a membership mask.
using Subset = std::vector<bool>;

struct Normalized {
  RationalVector v;  ///< v_i = z_i / z, summing to 2
  Rational z;        ///< half the total
};

Normalized partition_normalize(const PartitionInstance& inst);

Rational subset_sum(const RationalVector& v, const Subset& s);

/// (2^-(v-1) + 2^(v-1)) / 2 with certified error below 2^-bits; exact when
/// v - 1 is an integer.
Approximation h_eq9_certified(const Rational& v_s, long bits);
Rational h_eq9(const Rational& v_s, long bits);

/// No-instance gap threshold 1 + 1/(32 z^4).
Rational no_instance_floor(const Rational& z);

struct PartitionVerdict {
  bool yes = false;
  Subset argmin;             ///< first subset (by mask value) minimizing |v_S - 1|
  Approximation min_h;       ///< min_S h(v_S)
  long bits = 0;             ///< precision used for min_h
  Rational floor;            ///< 1 + 1/(32 z^4)
  bool dichotomy_holds = false;  ///< yes => min_h == 1; no => min_h - err > floor
};

inline constexpr std::size_t kMaxBrutePartition = 24;

/// Exhaustive subset enumeration. h is increasing in |v_S - 1|, so the
/// minimizer is found exactly on rationals and only evaluated once. The
/// evaluation precision is finer than a quarter of the gap.
PartitionVerdict partition_brute(const PartitionInstance& inst);

struct TreeGadgetDiagnostics {
  Rational b_low, b_high;        ///< certified interval for b_S
  Rational a_low, a_high;        ///< certified interval for a_S
  Rational h_low, h_high;        ///< certified interval for h(v_S)
  Rational slack;                ///< 2^(n+3) * eps_int
  bool lower_certified = false;  ///< h - 1 <= a_S proven by the intervals
  bool upper_certified = false;  ///< a_S <= h + slack - 1 proven by the intervals
  bool consistent = false;       ///< neither side refuted by the intervals
};

/// b_S = prod_{i in S}(2^-v_i + eps) prod_{i not in S}(1 + 2^-v_i eps),
/// a_S = b_S + b_{N\S} - 1, evaluated with interval arithmetic on certified
/// approximations of 2^-v_i at the given precision.
TreeGadgetDiagnostics tree_gadget_analysis(const PartitionInstance& inst, const Subset& s, const Rational& eps_int,
                                           long bits);

/// Calls visit(mask as Subset) for all 2^n subsets in mask order.
template <class Visit>
void for_each_subset_mask(std::size_t n, Visit visit) {
  Subset s(n, false);
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1UL;
    visit(s);
  }
}

}  // namespace credal::gadgets
