#include "credal/partition.hpp"

#include <algorithm>
#include <sstream>

namespace credal::gadgets {

PartitionInstance::PartitionInstance(std::vector<long> values) : z(std::move(values)) {
  if (z.size() < 2) throw CredalError(ErrorKind::Parse, "partition instance needs at least two integers");
  for (long v : z)
    if (v < 1) throw CredalError(ErrorKind::Parse, "partition instance values must be positive");
}

PartitionInstance parse_partition(std::string_view text) {
  std::vector<long> values;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stol(item, &used));
      while (used < item.size() && item[used] == ' ') ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CredalError(ErrorKind::Parse, "malformed partition value '" + item + "'");
    }
  }
  return PartitionInstance(std::move(values));
}

Normalized partition_normalize(const PartitionInstance& inst) {
  Normalized out;
  long total = 0;
  for (long v : inst.z) total += v;
  out.z = Rational(total, 2);
  out.z.canonicalize();
  for (long v : inst.z) out.v.push_back(Rational(v) / out.z);
  return out;
}

Rational subset_sum(const RationalVector& v, const Subset& s) {
  Rational sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (s[i]) sum += v[i];
  return sum;
}

Approximation h_eq9_certified(const Rational& v_s, long bits) {
  const Rational t = v_s - 1;
  if (t.get_den() == 1) return {(pow2(-t.get_num().get_si()) + pow2(t.get_num().get_si())) / 2, 0};
  const auto a = approx_pow2_certified(-t, bits + 1);
  const auto b = approx_pow2_certified(t, bits + 1);
  return {(a.value + b.value) / 2, (a.error_bound + b.error_bound) / 2};
}

Rational h_eq9(const Rational& v_s, long bits) { return h_eq9_certified(v_s, bits).value; }

Rational no_instance_floor(const Rational& z) {
  const Rational z4 = z * z * z * z;
  return 1 + 1 / (32 * z4);
}

PartitionVerdict partition_brute(const PartitionInstance& inst) {
  if (inst.size() > kMaxBrutePartition)
    throw CredalError(ErrorKind::SizeCap, "partition_brute supports at most " +
                                              std::to_string(kMaxBrutePartition) + " integers");
  const auto norm = partition_normalize(inst);
  PartitionVerdict out;
  Rational best_distance;
  bool have = false;
  for_each_subset_mask(inst.size(), [&](const Subset& s) {
    Rational d = abs(subset_sum(norm.v, s) - 1);
    if (!have || d < best_distance) {
      best_distance = std::move(d);
      out.argmin = s;
      have = true;
    }
  });
  out.yes = sgn(best_distance) == 0;
  out.floor = no_instance_floor(norm.z);
  out.bits = bits_below((out.floor - 1) / 4) + 1;
  out.min_h = h_eq9_certified(subset_sum(norm.v, out.argmin), out.bits);
  out.dichotomy_holds = out.yes ? (out.min_h.value == 1 && sgn(out.min_h.error_bound) == 0)
                                : (out.min_h.value - out.min_h.error_bound > out.floor);
  return out;
}

TreeGadgetDiagnostics tree_gadget_analysis(const PartitionInstance& inst, const Subset& s, const Rational& eps_int,
                                           long bits) {
  if (inst.size() > kMaxBrutePartition)
    throw CredalError(ErrorKind::SizeCap, "tree_gadget_analysis supports at most " +
                                              std::to_string(kMaxBrutePartition) + " integers");
  const auto norm = partition_normalize(inst);
  const std::size_t n = inst.size();
  RationalVector lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = approx_pow2_certified(-norm.v[i], bits);
    lo[i] = std::max(Rational(0), Rational(a.value - a.error_bound));
    hi[i] = a.value + a.error_bound;
  }
  // Every factor is increasing in 2^-v_i, so endpoints bound the product.
  auto b_of = [&](const Subset& in, const RationalVector& u) {
    Rational prod = 1;
    for (std::size_t i = 0; i < n; ++i) prod *= in[i] ? Rational(u[i] + eps_int) : Rational(1 + u[i] * eps_int);
    return prod;
  };
  Subset complement(n);
  for (std::size_t i = 0; i < n; ++i) complement[i] = !s[i];

  TreeGadgetDiagnostics d;
  d.b_low = b_of(s, lo);
  d.b_high = b_of(s, hi);
  d.a_low = d.b_low + b_of(complement, lo) - 1;
  d.a_high = d.b_high + b_of(complement, hi) - 1;
  const auto h = h_eq9_certified(subset_sum(norm.v, s), bits);
  d.h_low = h.value - h.error_bound;
  d.h_high = h.value + h.error_bound;
  d.slack = pow2(static_cast<long>(n) + 3) * eps_int;
  d.lower_certified = d.h_high - 1 <= d.a_low;
  d.upper_certified = d.a_high <= d.h_low + d.slack - 1;
  d.consistent = d.h_low - 1 <= d.a_high && d.a_low <= d.h_high + d.slack - 1;
  return d;
}

}  // namespace credal::gadgets
