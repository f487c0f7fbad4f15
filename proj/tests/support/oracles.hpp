#pragma once

// Reference computations that share no code with the engines under test.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

#include "credal/model.hpp"
#include "credal/ratlp.hpp"

namespace credal::testing {

/// Solves the square system M x = r by Gauss-Jordan; nullopt when singular.
inline std::optional<RationalVector> solve_square(std::vector<RationalVector> m, RationalVector r) {
  const std::size_t n = r.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(m[piv][col]) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      const Rational factor = m[i][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= factor * m[col][j];
      r[i] -= factor * r[col];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / m[i][i];
  return x;
}

/// Optimum of a bounded LP over non-negative variables by enumerating every
/// basic solution (n tight constraints out of rows and sign bounds).
/// Returns nullopt when infeasible.
inline std::optional<Rational> brute_force_lp(const lp::LinearProgram& lp) {
  const std::size_t n = lp.variable_count;
  std::vector<RationalVector> rows;
  RationalVector rhs;
  for (const auto& c : lp.constraints) {
    rows.push_back(c.coefficients);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector e(n);
    e[j] = 1;
    rows.push_back(e);
    rhs.push_back(0);
  }
  auto feasible = [&](const RationalVector& x) {
    for (std::size_t j = 0; j < n; ++j)
      if (lp.nonnegative[j] && sgn(x[j]) < 0) return false;
    for (const auto& c : lp.constraints) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < n; ++j) lhs += c.coefficients[j] * x[j];
      if (c.relation == lp::Relation::LessEqual && lhs > c.rhs) return false;
      if (c.relation == lp::Relation::GreaterEqual && lhs < c.rhs) return false;
      if (c.relation == lp::Relation::Equal && lhs != c.rhs) return false;
    }
    return true;
  };
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t start) {
    if (pick.size() == n) {
      std::vector<RationalVector> m;
      RationalVector r;
      for (auto i : pick) {
        m.push_back(rows[i]);
        r.push_back(rhs[i]);
      }
      auto x = solve_square(m, r);
      if (!x || !feasible(*x)) return;
      Rational v = 0;
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * (*x)[j];
      if (lp.sense == lp::Sense::Maximize) v = -v;
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick.push_back(i);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  if (best && lp.sense == lp::Sense::Maximize) best = -*best;
  return best;
}

/// Joint pmf over all atoms (row-major, node 0 most significant) for the
/// given per-slot extreme choice, by direct multiplication.
inline RationalVector brute_joint(const CredalNetwork& net, const std::function<const Pmf&(NodeId, std::size_t)>& pick) {
  std::size_t atoms = 1;
  for (NodeId i = 0; i < net.size(); ++i) atoms *= static_cast<std::size_t>(net.cardinality(i));
  RationalVector joint(atoms);
  std::vector<State> x(net.size());
  for (std::size_t a = 0; a < atoms; ++a) {
    std::size_t rest = a;
    for (NodeId i = net.size(); i-- > 0;) {
      x[i] = static_cast<State>(rest % static_cast<std::size_t>(net.cardinality(i)));
      rest /= static_cast<std::size_t>(net.cardinality(i));
    }
    Rational p = 1;
    for (NodeId i = 0; i < net.size() && sgn(p) != 0; ++i) {
      std::size_t config = 0;
      for (NodeId par : net.parents(i)) config = config * static_cast<std::size_t>(net.cardinality(par)) + static_cast<std::size_t>(x[par]);
      p *= pick(i, config)[static_cast<std::size_t>(x[i])];
    }
    joint[a] = p;
  }
  return joint;
}

inline std::vector<State> decode_atom(const CredalNetwork& net, std::size_t a) {
  std::vector<State> x(net.size());
  for (NodeId i = net.size(); i-- > 0;) {
    x[i] = static_cast<State>(a % static_cast<std::size_t>(net.cardinality(i)));
    a /= static_cast<std::size_t>(net.cardinality(i));
  }
  return x;
}

/// (sum f p, sum p) over atoms consistent with the evidence.
inline std::pair<Rational, Rational> conditional_sums(const CredalNetwork& net, const GbrTask& task,
                                                      const RationalVector& joint) {
  Rational num = 0, den = 0;
  for (std::size_t a = 0; a < joint.size(); ++a) {
    const auto x = decode_atom(net, a);
    bool ok = true;
    for (const auto& [node, state] : task.evidence) ok = ok && x[node] == state;
    if (!ok) continue;
    num += task.f[static_cast<std::size_t>(x[task.query])] * joint[a];
    den += joint[a];
  }
  return {num, den};
}

/// Lower (upper) posterior expectation under strong independence by
/// enumerating every extreme of every slot over the full joint.
inline std::optional<Rational> strong_oracle(const CredalNetwork& net, const GbrTask& task) {
  std::vector<std::pair<NodeId, std::size_t>> slots;
  for (NodeId i = 0; i < net.size(); ++i)
    for (std::size_t c = 0; c < net.config_count(i); ++c) slots.push_back({i, c});
  std::vector<std::size_t> digit(slots.size(), 0);
  std::optional<Rational> best;
  bool zero = false;
  for (;;) {
    const auto joint = brute_joint(net, [&](NodeId i, std::size_t c) -> const Pmf& {
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (slots[s].first == i && slots[s].second == c) return net.spec(i, c).extrema[digit[s]];
      return net.spec(i, c).extrema[0];
    });
    const auto [num, den] = conditional_sums(net, task, joint);
    if (sgn(den) == 0) {
      zero = true;
    } else {
      Rational v = num / den;
      if (task.bound == Bound::Upper) v = -v;
      if (!best || v < *best) best = v;
    }
    std::size_t s = 0;
    while (s < slots.size() && ++digit[s] == net.spec(slots[s].first, slots[s].second).extrema.size()) digit[s++] = 0;
    if (s == slots.size()) break;
  }
  if (zero || !best) return std::nullopt;
  return task.bound == Bound::Upper ? Rational(-*best) : *best;
}

/// Lower posterior expectation under epistemic irrelevance for networks of
/// Boolean nodes. Each local set is the interval [lo, hi] of q(0); for every
/// node and every assignment of its non-descendants the rows
///   lo p(x_nd) <= p(X_i = 0, x_nd) <= hi p(x_nd)
/// are written out atom by atom. The ratio is minimized after the change of
/// variables y = p / p(evidence).
inline Rational epistemic_oracle_binary(const CredalNetwork& net, const GbrTask& task) {
  const std::size_t n = net.size();
  const std::size_t atoms = std::size_t{1} << n;
  lp::LinearProgram prog(atoms);
  for (NodeId i = 0; i < n; ++i) {
    std::vector<bool> desc = net.descendants(i);
    std::vector<NodeId> nd;
    for (NodeId j = 0; j < n; ++j)
      if (j != i && !desc[j]) nd.push_back(j);
    for (std::size_t ctx = 0; ctx < (std::size_t{1} << nd.size()); ++ctx) {
      std::vector<State> fixed(n, -1);
      for (std::size_t k = 0; k < nd.size(); ++k) fixed[nd[k]] = static_cast<State>((ctx >> k) & 1U);
      std::size_t config = 0;
      for (NodeId par : net.parents(i)) config = config * 2 + static_cast<std::size_t>(fixed[par]);
      Rational lo = 1, hi = 0;
      for (const auto& q : net.spec(i, config).extrema) {
        lo = std::min(lo, q[0]);
        hi = std::max(hi, q[0]);
      }
      RationalVector low(atoms), high(atoms);
      for (std::size_t a = 0; a < atoms; ++a) {
        const auto x = decode_atom(net, a);
        bool match = true;
        for (NodeId j : nd) match = match && x[j] == fixed[j];
        if (!match) continue;
        const Rational hit = x[i] == 0 ? 1 : 0;
        low[a] = lo - hit;   // lo p(x_nd) - p(0, x_nd) <= 0
        high[a] = hit - hi;  // p(0, x_nd) - hi p(x_nd) <= 0
      }
      prog.add(low, lp::Relation::LessEqual, 0);
      prog.add(high, lp::Relation::LessEqual, 0);
    }
  }
  RationalVector evidence_mass(atoms);
  for (std::size_t a = 0; a < atoms; ++a) {
    const auto x = decode_atom(net, a);
    bool ok = true;
    for (const auto& [node, state] : task.evidence) ok = ok && x[node] == state;
    if (!ok) continue;
    evidence_mass[a] = 1;
    prog.objective[a] = task.f[static_cast<std::size_t>(x[task.query])];
  }
  if (task.bound == Bound::Upper)
    for (auto& c : prog.objective) c = -c;
  prog.add(evidence_mass, lp::Relation::Equal, 1);
  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::Status::Optimal) throw std::runtime_error("oracle LP not optimal");
  return task.bound == Bound::Upper ? Rational(-sol.value) : sol.value;
}

/// Interval [lo, hi] around 2^(1/k) of width at most 2^-bits, by bisection
/// on x^k = 2 over [1, 2].
inline std::pair<Rational, Rational> root_of_two(int k, long bits) {
  Rational lo = 1, hi = 2;
  const Rational width = Rational(1) / (mpz_class(1) << static_cast<mp_bitcnt_t>(bits));
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    Rational p = 1;
    for (int i = 0; i < k; ++i) p *= mid;
    (p <= 2 ? lo : hi) = mid;
  }
  return {lo, hi};
}

/// Interval [lo, hi] around 2^t (t = p/q rational) of width at most 2^-bits,
/// by bisection on y^q = 2^p.
inline std::pair<Rational, Rational> pow2_interval(const Rational& t, long bits) {
  const mpz_class p = t.get_num();
  const unsigned long q = t.get_den().get_ui();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), p.get_mpz_t(), t.get_den().get_mpz_t());
  auto two_to = [](long e) {
    Rational r = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= 2;
    return e < 0 ? Rational(1 / r) : r;
  };
  Rational lo = two_to(fl.get_si()), hi = two_to(fl.get_si() + 1);
  if (q == 1) return {lo, lo};
  const Rational target = two_to(p.get_si());
  const Rational width = Rational(1) / (mpz_class(1) << static_cast<mp_bitcnt_t>(bits));
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    Rational m = 1;
    for (unsigned long i = 0; i < q; ++i) m *= mid;
    (m <= target ? lo : hi) = mid;
  }
  return {lo, hi};
}

}  // namespace credal::testing
