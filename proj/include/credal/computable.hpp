#pragma once

#include <functional>
#include <string>
#include <vector>

#include "credal/model.hpp"

namespace credal {

/// Rational approximation with a certified bound on its absolute error.
struct Approximation {
  Rational value;
  Rational error_bound;
};

/// 2^t for rational |t| <= 2 with |result - 2^t| <= error_bound < 2^-bits.
/// Exact (error 0) for integer t. Uses a truncated series for exp(t ln 2)
/// with ln 2 from its series sum 1/(j 2^j); both truncation errors are
/// bounded explicitly.
Approximation approx_pow2_certified(const Rational& t, long bits);

/// Value part of approx_pow2_certified.
Rational approx_pow2(const Rational& t, long bits);

/// A real number given by a procedure that, for any b, returns a rational
/// within 2^-b of it.
struct ComputableNumber {
  std::function<Approximation(long bits)> evaluate;
  std::string description;

  static ComputableNumber exact(const Rational& value);
  /// 2^t.
  static ComputableNumber pow2(const Rational& t);
  /// 2^t1 / (1 + 2^t2).
  static ComputableNumber pow2_ratio(const Rational& t1, const Rational& t2);
  /// 1 - x.
  static ComputableNumber complement(ComputableNumber x);
};

using ComputablePmf = std::vector<ComputableNumber>;

/// Credal network whose local extrema are computable numbers.
struct ComputableNetwork {
  std::vector<Variable> variables;
  std::vector<Arc> arcs;
  /// node -> parent configuration -> extrema
  std::vector<std::vector<std::vector<ComputablePmf>>> specs;
};

struct RationalizedNetwork {
  CredalNetwork network;
  long bits = 0;         ///< per-parameter precision actually used
  Rational epsilon;      ///< joint-marginal budget the precision was chosen for
};

/// Per-parameter precision for a budget epsilon: the smallest b with
/// 2^-b <= 2^-(n+1)(v+1) epsilon, n the variable count and v the largest
/// cardinality.
long lemma1_bits(std::size_t variable_count, int max_cardinality, const Rational& epsilon);

/// Replaces every computable parameter by a rational at lemma1_bits
/// precision (or `min_bits`, if larger). In each pmf the entry with the
/// largest approximation is recomputed as one minus the others. Extrema keep
/// their indices, so strong-extension selections correspond one to one.
/// Throws CredalError(Precondition) if a procedure cannot certify the
/// requested precision.
RationalizedNetwork rationalize_network(const ComputableNetwork& net, const Rational& epsilon, long min_bits = 0);

/// Same with an explicit per-parameter precision.
CredalNetwork rationalize_at_bits(const ComputableNetwork& net, long bits);

}  // namespace credal
