#include "credal/polytope.hpp"

#include <algorithm>
#include <numeric>

#include "credal/ratlp.hpp"

namespace credal {

namespace {

/// Basis of the null space of `rows` (each of length n), by exact
/// Gauss-Jordan elimination.
std::vector<RationalVector> null_space(std::vector<RationalVector> rows, std::size_t n) {
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      const Rational factor = rows[i][c];
      for (std::size_t k = 0; k < n; ++k) rows[i][k] -= factor * rows[r][k];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(n);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Canonical full-coordinate form of  a . y (<=|=) b  where y drops the last
/// pmf coordinate. Adding t*(1,...,1) to the full row and t to the bound does
/// not change the set on the simplex; shift so the minimum is 0, then scale
/// so the maximum is 1.
Facet canonical(const RationalVector& reduced, const Rational& bound, bool equality) {
  Facet f;
  f.coefficients = reduced;
  f.coefficients.push_back(0);
  f.bound = bound;
  f.equality = equality;
  const Rational lo = *std::min_element(f.coefficients.begin(), f.coefficients.end());
  for (auto& c : f.coefficients) c -= lo;
  f.bound -= lo;
  const Rational hi = *std::max_element(f.coefficients.begin(), f.coefficients.end());
  if (sgn(hi) != 0) {
    for (auto& c : f.coefficients) c /= hi;
    f.bound /= hi;
  }
  return f;
}

bool facet_less(const Facet& a, const Facet& b) {
  if (a.equality != b.equality) return a.equality > b.equality;
  if (a.coefficients != b.coefficients)
    return std::lexicographical_compare(a.coefficients.begin(), a.coefficients.end(),
                                        b.coefficients.begin(), b.coefficients.end());
  return a.bound < b.bound;
}

/// Calls visit(subset) for every k-subset of {0..n-1}, lexicographically.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit visit) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  for (;;) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<Facet> v_to_h(const CredalSpec& spec, int cardinality) {
  if (cardinality > kMaxFacetCardinality)
    throw CredalError(ErrorKind::Precondition, "facet enumeration unsupported at this cardinality");
  if (spec.extrema.empty()) throw CredalError(ErrorKind::Precondition, "credal set has no extrema");
  const std::size_t d = static_cast<std::size_t>(cardinality) - 1;

  // Reduced coordinates: drop the last entry of each pmf.
  std::vector<RationalVector> pts;
  for (const auto& q : spec.extrema) pts.emplace_back(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(d));
  const RationalVector& origin = pts.front();

  std::vector<RationalVector> directions;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = pts[i][k] - origin[k];
    directions.push_back(std::move(v));
  }
  // Normals of the affine hull.
  std::vector<RationalVector> normals = null_space(directions, d);
  const std::size_t dim = d - normals.size();

  std::vector<Facet> out;
  for (const auto& a : normals) out.push_back(canonical(a, dot(a, origin), true));

  if (dim > 0) {
    // A facet of a dim-dimensional hull is spanned by dim affinely
    // independent extrema; its normal lies in the hull's direction space.
    for_each_subset(pts.size(), dim, [&](const std::vector<std::size_t>& subset) {
      std::vector<RationalVector> rows = normals;
      const RationalVector& base = pts[subset[0]];
      for (std::size_t s = 1; s < subset.size(); ++s) {
        RationalVector v(d);
        for (std::size_t k = 0; k < d; ++k) v[k] = pts[subset[s]][k] - base[k];
        rows.push_back(std::move(v));
      }
      auto ns = null_space(rows, d);
      if (ns.size() != 1) return;
      RationalVector a = ns.front();
      const Rational b = dot(a, base);
      bool any_below = false, any_above = false;
      for (const auto& p : pts) {
        const int s = cmp(dot(a, p), b);
        any_below |= s < 0;
        any_above |= s > 0;
      }
      if (any_below && any_above) return;
      if (!any_below && !any_above) return;  // all on the hyperplane; not a facet
      if (any_above)
        for (auto& c : a) c = -c;
      out.push_back(canonical(a, dot(a, base), false));
    });
  }
  std::sort(out.begin(), out.end(), facet_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_nonnegativity_facet(const Facet& facet) {
  // In canonical form, q_z >= 0 reads  sum_{j != z} q_j <= 1.
  if (facet.equality || facet.bound != 1) return false;
  int zeros = 0;
  for (const auto& c : facet.coefficients) {
    if (sgn(c) == 0) ++zeros;
    else if (c != 1) return false;
  }
  return zeros == 1;
}

bool satisfies(const Facet& facet, const Pmf& q) {
  const Rational lhs = dot(facet.coefficients, q);
  return facet.equality ? lhs == facet.bound : lhs <= facet.bound;
}

bool in_convex_hull(const Pmf& point, const std::vector<Pmf>& points) {
  if (points.empty()) return false;
  if (points.size() == 1) return point == points.front();
  lp::LinearProgram prog(points.size());
  for (std::size_t k = 0; k < point.size(); ++k) {
    RationalVector row(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) row[j] = points[j][k];
    prog.add(std::move(row), lp::Relation::Equal, point[k]);
  }
  prog.add(RationalVector(points.size(), Rational(1)), lp::Relation::Equal, 1);
  return lp::solve_lp(prog).status == lp::Status::Optimal;
}

std::optional<std::size_t> first_non_extreme(const std::vector<Pmf>& extrema) {
  for (std::size_t k = 0; k < extrema.size(); ++k) {
    std::vector<Pmf> others;
    for (std::size_t j = 0; j < extrema.size(); ++j)
      if (j != k) others.push_back(extrema[j]);
    if (in_convex_hull(extrema[k], others)) return k;
  }
  return std::nullopt;
}

}  // namespace credal
