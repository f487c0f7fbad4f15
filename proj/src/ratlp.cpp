#include "credal/ratlp.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace credal::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Dense simplex tableau in the form  T x = rhs, x >= 0, with an explicit
/// basis. Row operations skip zero entries, which keeps the many structurally
/// sparse LPs of the inference engines cheap.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows, RationalVector(cols)), rhs_(rows), basis_(rows, kNone), cols_(cols) {}

  Rational& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
  Rational& rhs(std::size_t r) { return rhs_[r]; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t col_count() const { return cols_; }

  /// Reduced-cost row for objective `cost` (restricted to allowed columns).
  void price(const RationalVector& cost) {
    reduced_ = cost;
    reduced_.resize(cols_);
    objective_ = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c)
        if (sgn(rows_[r][c]) != 0) reduced_[c] -= cb * rows_[r][c];
      objective_ += cb * rhs_[r];
    }
  }

  /// Columns that formed the identity of the starting basis, one per row in
  /// row order. Their entries are the rows of the current basis inverse.
  void set_unit_columns(std::vector<std::size_t> cols) { unit_cols_ = std::move(cols); }

  /// Pivots until optimal or unbounded. `allowed` masks columns that may
  /// enter the basis. Dantzig pricing with a lexicographic ratio test: ties
  /// in the minimum ratio are broken by comparing the rows of the basis
  /// inverse scaled by the pivot entry. Those rows are linearly independent,
  /// so the rule always picks a unique row and no basis repeats.
  Status iterate(const std::vector<bool>& allowed, std::size_t& pivots) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!allowed[c] || sgn(reduced_[c]) >= 0) continue;
        if (enter == kNone || reduced_[c] < reduced_[enter]) enter = c;
      }
      if (enter == kNone) return Status::Optimal;

      std::size_t leave = kNone;
      Rational best;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Rational ratio = rhs_[r] / rows_[r][enter];
        if (leave == kNone || ratio < best || (ratio == best && lex_less(r, leave, enter))) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (leave == kNone) return Status::Unbounded;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    RationalVector& prow = rows_[pr];
    const Rational inv = 1 / prow[pc];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn(prow[c]) != 0) {
        prow[c] *= inv;
        nz.push_back(c);
      }
    rhs_[pr] *= inv;
    const bool rhs_nz = sgn(rhs_[pr]) != 0;

    auto eliminate = [&](RationalVector& row, Rational& rhs) {
      if (sgn(row[pc]) == 0) return;
      const Rational factor = row[pc];
      for (std::size_t c : nz) row[c] -= factor * prow[c];
      if (rhs_nz) rhs -= factor * rhs_[pr];
    };
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (r != pr) eliminate(rows_[r], rhs_[r]);
    Rational neg_obj = -objective_;
    eliminate(reduced_, neg_obj);
    objective_ = -neg_obj;
    basis_[pr] = pc;
  }

  void erase_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  const Rational& objective() const { return objective_; }

 private:
  bool lex_less(std::size_t a, std::size_t b, std::size_t enter) const {
    const Rational& pa = rows_[a][enter];
    const Rational& pb = rows_[b][enter];
    for (std::size_t c : unit_cols_) {
      const int d = cmp(rows_[a][c] * pb, rows_[b][c] * pa);
      if (d != 0) return d < 0;
    }
    return false;
  }

  std::vector<RationalVector> rows_;
  RationalVector rhs_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
  std::vector<std::size_t> unit_cols_;
  RationalVector reduced_;
  Rational objective_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count;
  if (lp.objective.size() != n || lp.nonnegative.size() != n)
    throw CredalError(ErrorKind::Precondition, "LP objective or sign flags have wrong length");
  for (const auto& row : lp.constraints)
    if (row.coefficients.size() != n)
      throw CredalError(ErrorKind::Precondition, "LP constraint has wrong length");

  // Column layout: structural (free variables split into +/-), then one
  // slack/surplus per inequality, then artificials.
  std::vector<std::size_t> pos_col(n), neg_col(n, kNone);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (!lp.nonnegative[j]) neg_col[j] = cols++;
  }

  const std::size_t m = lp.constraints.size();
  std::vector<int> flip(m, 1);
  std::vector<Relation> rel(m);
  std::vector<std::size_t> slack_col(m, kNone), art_col(m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = lp.constraints[i].relation;
    if (sgn(lp.constraints[i].rhs) < 0) {
      flip[i] = -1;
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
    if (rel[i] != Relation::Equal) slack_col[i] = cols++;
  }
  const std::size_t first_artificial = cols;
  for (std::size_t i = 0; i < m; ++i)
    if (rel[i] != Relation::LessEqual) art_col[i] = cols++;

  Tableau t(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.constraints[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(row.coefficients[j]) == 0) continue;
      t.at(i, pos_col[j]) = flip[i] * row.coefficients[j];
      if (neg_col[j] != kNone) t.at(i, neg_col[j]) = -flip[i] * row.coefficients[j];
    }
    t.rhs(i) = flip[i] * row.rhs;
    if (rel[i] == Relation::LessEqual) {
      t.at(i, slack_col[i]) = 1;
      t.basic(i) = slack_col[i];
    } else {
      if (rel[i] == Relation::GreaterEqual) t.at(i, slack_col[i]) = -1;
      t.at(i, art_col[i]) = 1;
      t.basic(i) = art_col[i];
    }
  }

  std::vector<std::size_t> unit(m);
  for (std::size_t i = 0; i < m; ++i) unit[i] = t.basic(i);
  t.set_unit_columns(std::move(unit));

  LpSolution sol;
  std::vector<bool> allowed(cols, true);

  if (first_artificial < cols) {
    RationalVector phase1(cols);
    for (std::size_t c = first_artificial; c < cols; ++c) phase1[c] = 1;
    t.price(phase1);
    t.iterate(allowed, sol.pivots);
    if (sgn(t.objective()) > 0) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t r = t.row_count(); r-- > 0;) {
      if (t.basic(r) < first_artificial) continue;
      std::size_t enter = kNone;
      for (std::size_t c = 0; c < first_artificial; ++c)
        if (sgn(t.at(r, c)) != 0) {
          enter = c;
          break;
        }
      if (enter == kNone) {
        t.erase_row(r);
      } else {
        t.pivot(r, enter);
        ++sol.pivots;
      }
    }
    for (std::size_t c = first_artificial; c < cols; ++c) allowed[c] = false;
  }

  RationalVector cost(cols);
  const int sense = lp.sense == Sense::Minimize ? 1 : -1;
  for (std::size_t j = 0; j < n; ++j) {
    cost[pos_col[j]] = sense * lp.objective[j];
    if (neg_col[j] != kNone) cost[neg_col[j]] = -sense * lp.objective[j];
  }
  t.price(cost);
  if (t.iterate(allowed, sol.pivots) == Status::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  RationalVector values(cols);
  for (std::size_t r = 0; r < t.row_count(); ++r) values[t.basic(r)] = t.rhs(r);
  sol.point.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    sol.point[j] = values[pos_col[j]];
    if (neg_col[j] != kNone) sol.point[j] -= values[neg_col[j]];
  }
  sol.status = Status::Optimal;
  sol.value = dot(lp.objective, sol.point);
  return sol;
}

LinearProgram dual_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count;
  const std::size_t m = lp.constraints.size();
  // Work with the minimization form min s*c.x; s = -1 for a max problem.
  const int s = lp.sense == Sense::Minimize ? 1 : -1;
  LinearProgram d(m);
  // Dual of min: max b.y, y_i >= 0 for >=, y_i <= 0 for <= (stored as -w_i),
  // free for =. Constraint per primal column: A_j^T y <= c_j, or = c_j if free.
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.constraints[i];
    if (row.relation == Relation::LessEqual) sign[i] = -1;
    d.nonnegative[i] = row.relation != Relation::Equal;
    d.objective[i] = sign[i] * row.rhs;
  }
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector coeffs(m);
    for (std::size_t i = 0; i < m; ++i)
      if (sgn(lp.constraints[i].coefficients[j]) != 0)
        coeffs[i] = sign[i] * lp.constraints[i].coefficients[j];
    d.add(std::move(coeffs), lp.nonnegative[j] ? Relation::LessEqual : Relation::Equal,
          s * lp.objective[j]);
  }
  // max b.y has the value of min s*c.x; return it in the primal's own sense.
  if (s == 1) {
    d.sense = Sense::Maximize;
  } else {
    d.sense = Sense::Minimize;
    for (auto& c : d.objective) c = -c;
  }
  return d;
}

bool is_feasible(const LinearProgram& lp, const RationalVector& point) {
  if (point.size() != lp.variable_count) return false;
  for (std::size_t j = 0; j < point.size(); ++j)
    if (lp.nonnegative[j] && sgn(point[j]) < 0) return false;
  for (const auto& row : lp.constraints) {
    const Rational lhs = dot(row.coefficients, point);
    switch (row.relation) {
      case Relation::LessEqual:
        if (lhs > row.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != row.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

LinearProgram cone_program(const RationalVector& objective, const RationalVector& normalization,
                           const std::vector<ConeRow>& cone) {
  const std::size_t n = objective.size();
  LinearProgram lp(n);
  lp.objective = objective;
  for (const auto& row : cone)
    lp.add(row.coefficients, row.equality ? Relation::Equal : Relation::LessEqual, 0);
  lp.add(normalization, Relation::Equal, 1);
  return lp;
}

Rational solve_value(const LinearProgram& lp, Route route, const char* what) {
  if (route == Route::Primal) {
    LpSolution s = solve_lp(lp);
    if (s.status != Status::Optimal)
      throw CredalError(ErrorKind::Precondition,
                        std::string(what) + (s.status == Status::Infeasible ? ": LP infeasible" : ": LP unbounded"));
    return s.value;
  }
  LpSolution s = solve_lp(dual_lp(lp));
  if (s.status != Status::Optimal)
    throw CredalError(ErrorKind::Precondition,
                      std::string(what) + (s.status == Status::Infeasible ? ": LP unbounded" : ": LP infeasible"));
  return s.value;
}

}  // namespace

Rational fractional_min(const RationalVector& numerator, const RationalVector& denominator,
                        const std::vector<ConeRow>& cone, Route route) {
  if (numerator.size() != denominator.size())
    throw CredalError(ErrorKind::Precondition, "fractional_min: numerator/denominator length mismatch");
  return solve_value(cone_program(numerator, denominator, cone), route, "fractional_min");
}

Rational cone_min(const RationalVector& objective, const RationalVector& normalization,
                  const std::vector<ConeRow>& cone, Route route) {
  return solve_value(cone_program(objective, normalization, cone), route, "cone_min");
}

}  // namespace credal::lp
