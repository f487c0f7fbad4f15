#pragma once

#include <cstdint>
#include <vector>

#include "credal/model.hpp"
#include "credal/ratlp.hpp"

namespace credal::epistemic {

inline constexpr std::uint64_t kDefaultMaxAtoms = std::uint64_t{1} << 16;

/// The epistemic extension as an explicit polytope over joint pmfs. Atoms are
/// joint states in row-major order (node 0 most significant). Every row is
/// homogeneous: for node i, non-descendant assignment x_nd and facet
/// a.q <= b of Q(X_i | x_pa), it reads
///   sum_{x_i} a(x_i) p(x_i, x_nd) - b p(x_nd) <= 0   (or = 0).
/// Normalization and non-negativity are implicit.
struct EpistemicPolytope {
  std::size_t atom_count = 0;
  std::vector<lp::ConeRow> rows;

  /// Whether p (a joint pmf over atoms) satisfies every row.
  bool contains(const RationalVector& p) const;
};

EpistemicPolytope epistemic_polytope(const CredalNetwork& net, std::uint64_t max_atoms = kDefaultMaxAtoms);

/// Decodes an atom index into a joint assignment.
std::vector<State> atom_states(const CredalNetwork& net, std::size_t atom);

enum class Method { Fractional, Bisection };

struct Options {
  Method method = Method::Fractional;
  lp::Route route = lp::Route::Dual;
  int bisection_steps = 60;
  std::uint64_t max_atoms = kDefaultMaxAtoms;
};

struct EpistemicResult {
  Rational mu;              ///< exact value (Fractional) or bracket midpoint (Bisection)
  Rational bracket_low;     ///< equals mu for the exact method
  Rational bracket_high;
  Rational evidence_lower;  ///< min p(evidence) over the polytope (1 with no evidence)
  std::size_t constraint_rows = 0;
};

/// Posterior lower (or upper) expectation under epistemic irrelevance.
/// Throws CredalError(GbrUndefined) when the evidence has lower probability 0
/// and CredalError(SizeCap) over the atom cap.
EpistemicResult gbr_epistemic(const CredalNetwork& net, const GbrTask& task, const Options& options = {});

/// Same, reusing a prebuilt polytope for the network.
EpistemicResult gbr_epistemic(const CredalNetwork& net, const EpistemicPolytope& polytope, const GbrTask& task,
                              const Options& options = {});

/// LP value of min_p sum_{x ~ evidence} (f(x_q) - mu) p(x) over the polytope.
Rational epistemic_phi(const CredalNetwork& net, const EpistemicPolytope& polytope, const GbrTask& task,
                       const Rational& mu, lp::Route route = lp::Route::Dual);

}  // namespace credal::epistemic
