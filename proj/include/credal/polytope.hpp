#pragma once

#include <optional>
#include <vector>

#include "credal/model.hpp"

namespace credal {

inline constexpr int kMaxFacetCardinality = 5;

/// Complete facet description of conv(extrema) inside the probability
/// simplex, by brute-force enumeration of supporting hyperplanes. When the
/// hull is lower dimensional its affine hull is returned as equality facets.
/// Facets are canonical: smallest coefficient 0, largest 1 (for non-constant
/// rows), sorted, duplicates removed. Throws CredalError(Precondition) above
/// kMaxFacetCardinality.
std::vector<Facet> v_to_h(const CredalSpec& spec, int cardinality);

/// True if the facet is implied by non-negativity of the pmf alone.
bool is_nonnegativity_facet(const Facet& facet);

bool satisfies(const Facet& facet, const Pmf& q);

/// LP membership test: is `point` a convex combination of `points`?
bool in_convex_hull(const Pmf& point, const std::vector<Pmf>& points);

/// Index of the first extreme that is a convex combination of the others
/// (duplicates included), if any.
std::optional<std::size_t> first_non_extreme(const std::vector<Pmf>& extrema);

}  // namespace credal
