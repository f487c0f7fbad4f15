#pragma once

#include <cstddef>
#include <vector>

#include "credal/rational.hpp"

namespace credal::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
  RationalVector coefficients;
  Relation relation = Relation::LessEqual;
  Rational rhs = 0;
};

/// Exact LP over `variable_count` columns. Variables are non-negative unless
/// their flag in `nonnegative` is cleared.
struct LinearProgram {
  std::size_t variable_count = 0;
  RationalVector objective;
  Sense sense = Sense::Minimize;
  std::vector<Constraint> constraints;
  std::vector<bool> nonnegative;

  explicit LinearProgram(std::size_t n = 0)
      : variable_count(n), objective(n), nonnegative(n, true) {}

  void add(RationalVector coefficients, Relation relation, Rational rhs) {
    constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
  }
};

struct LpSolution {
  Status status = Status::Infeasible;
  Rational value;
  RationalVector point;
  std::size_t pivots = 0;
};

/// Two-phase dense-tableau simplex, Dantzig pricing with a lexicographic
/// ratio test against cycling. Exact.
LpSolution solve_lp(const LinearProgram& lp);

/// LP dual of `lp`. Its optimal value equals the primal optimum whenever
/// either side is optimal; primal infeasible maps to dual unbounded (or
/// infeasible) and vice versa.
LinearProgram dual_lp(const LinearProgram& lp);

/// True when `point` satisfies every constraint and sign restriction.
bool is_feasible(const LinearProgram& lp, const RationalVector& point);

enum class Route { Primal, Dual };

/// Homogeneous cone row: coefficients . y (<= or =) 0.
struct ConeRow {
  RationalVector coefficients;
  bool equality = false;
};

/// min (numerator . p) / (denominator . p) over {p >= 0, cone rows hold,
/// sum p = 1}. Scale invariance of the ratio lets this solve
///   min numerator . y  s.t. cone rows, denominator . y = 1, y >= 0
/// instead. The caller guarantees denominator . p > 0 on the feasible set;
/// otherwise the transformed LP is infeasible or unbounded and this throws
/// CredalError(Precondition).
Rational fractional_min(const RationalVector& numerator, const RationalVector& denominator,
                        const std::vector<ConeRow>& cone, Route route = Route::Dual);

/// min objective . p over {p >= 0, cone rows hold, normalization . p = 1}.
/// Throws CredalError(Precondition) if the set is empty or the LP is unbounded.
Rational cone_min(const RationalVector& objective, const RationalVector& normalization,
                  const std::vector<ConeRow>& cone, Route route = Route::Dual);

}  // namespace credal::lp
