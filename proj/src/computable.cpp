#include "credal/computable.hpp"

#include <algorithm>

namespace credal {

namespace {

mpz_class floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

/// Nearest multiple of 2^-bits (ties toward -infinity).
Rational round_dyadic(const Rational& r, long bits) {
  const Rational scaled = r * pow2(bits) + Rational(1, 2);
  return Rational(floor_of(scaled)) * pow2(-bits);
}

}  // namespace

Approximation approx_pow2_certified(const Rational& t, long bits) {
  if (abs(t) > 2) throw CredalError(ErrorKind::Precondition, "approx_pow2 needs |t| <= 2");
  if (bits < 1) throw CredalError(ErrorKind::Precondition, "approx_pow2 needs bits >= 1");
  const mpz_class k = floor_of(t);
  const long whole = k.get_si();
  if (t.get_den() == 1) return {pow2(whole), 0};

  const Rational frac = t - Rational(k);  // in (0, 1)
  const long guard = bits + 8;

  // ln 2 = sum_{j>=1} 1/(j 2^j); the tail after J terms is below 1/((J+1) 2^J).
  Rational ln2 = 0;
  for (long j = 1; j <= guard; ++j) ln2 += Rational(1, mpz_class(j)) * pow2(-j);
  Rational ln2_error = Rational(1, mpz_class(guard + 1)) * pow2(-guard);
  const Rational ln2_rounded = round_dyadic(ln2, guard + 2);
  ln2_error += abs(ln2_rounded - ln2);

  // exp(x) for x = frac * ln2 in [0, ln 2); terms shrink at least by half.
  const Rational x = frac * ln2_rounded;
  const Rational tolerance = pow2(-guard);
  Rational sum = 0, term = 1;
  for (long j = 1;; ++j) {
    sum += term;
    term = term * x / j;
    if (2 * term <= tolerance) break;
  }
  Rational error = 2 * term;  // geometric bound on the series tail
  // |exp(x') - exp(x)| <= exp(max) |x' - x| < 3 |x' - x| on [0, 1].
  error += 3 * frac * ln2_error;

  const Rational scale = pow2(whole);
  Rational value = round_dyadic(sum * scale, guard);
  error = error * scale + abs(value - sum * scale);
  if (error >= pow2(-bits))
    throw CredalError(ErrorKind::Precondition, "approx_pow2 could not certify the requested precision");
  return {std::move(value), std::move(error)};
}

Rational approx_pow2(const Rational& t, long bits) { return approx_pow2_certified(t, bits).value; }

ComputableNumber ComputableNumber::exact(const Rational& value) {
  return {[value](long) { return Approximation{value, 0}; }, to_string(value)};
}

ComputableNumber ComputableNumber::pow2(const Rational& t) {
  return {[t](long bits) { return approx_pow2_certified(t, bits); }, "2^(" + to_string(t) + ")"};
}

ComputableNumber ComputableNumber::pow2_ratio(const Rational& t1, const Rational& t2) {
  return {[t1, t2](long bits) {
            const auto a = approx_pow2_certified(t1, bits + 4);
            const auto b = approx_pow2_certified(t2, bits + 4);
            // |a'/(1+b') - a/(1+b)| <= |a'-a| + a|b'-b|, with a <= 4 + err.
            const Rational value = round_dyadic(a.value / (1 + b.value), bits + 4);
            const Rational error = a.error_bound + (a.value + a.error_bound) * b.error_bound +
                                   abs(value - a.value / (1 + b.value));
            return Approximation{value, error};
          },
          "2^(" + to_string(t1) + ")/(1+2^(" + to_string(t2) + "))"};
}

ComputableNumber ComputableNumber::complement(ComputableNumber x) {
  auto inner = x.evaluate;
  return {[inner](long bits) {
            auto a = inner(bits);
            return Approximation{1 - a.value, a.error_bound};
          },
          "1-" + x.description};
}

long lemma1_bits(std::size_t variable_count, int max_cardinality, const Rational& epsilon) {
  return static_cast<long>((variable_count + 1) * static_cast<std::size_t>(max_cardinality + 1)) +
         bits_below(epsilon);
}

CredalNetwork rationalize_at_bits(const ComputableNetwork& net, long bits) {
  const Rational limit = pow2(-bits);
  std::vector<std::vector<CredalSpec>> specs(net.specs.size());
  for (std::size_t i = 0; i < net.specs.size(); ++i) {
    for (const auto& config : net.specs[i]) {
      CredalSpec spec;
      for (const auto& pmf : config) {
        Pmf q(pmf.size());
        for (std::size_t x = 0; x < pmf.size(); ++x) {
          const auto a = pmf[x].evaluate(bits);
          if (a.error_bound >= limit && sgn(a.error_bound) != 0)
            throw CredalError(ErrorKind::Precondition,
                              "parameter " + pmf[x].description + " cannot certify 2^-" + std::to_string(bits));
          // Clamping into [0, 1] never moves a value away from a probability.
          q[x] = std::clamp(a.value, Rational(0), Rational(1));
        }
        const auto completion =
            static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
        Rational rest = 0;
        for (std::size_t x = 0; x < q.size(); ++x)
          if (x != completion) rest += q[x];
        q[completion] = 1 - rest;
        spec.extrema.push_back(std::move(q));
      }
      specs[i].push_back(std::move(spec));
    }
  }
  return CredalNetwork(net.variables, net.arcs, std::move(specs));
}

RationalizedNetwork rationalize_network(const ComputableNetwork& net, const Rational& epsilon, long min_bits) {
  int v = 2;
  for (const auto& var : net.variables) v = std::max(v, var.cardinality);
  const long bits = std::max(min_bits, lemma1_bits(net.variables.size(), v, epsilon));
  return {rationalize_at_bits(net, bits), bits, epsilon};
}

}  // namespace credal
