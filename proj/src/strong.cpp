#include "credal/strong.hpp"

#include <limits>

namespace credal::strong {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

[[noreturn]] void too_large(std::uint64_t count, std::uint64_t cap) {
  throw CredalError(ErrorKind::SizeCap, "strong enumeration too large: " +
                                            (count == std::numeric_limits<std::uint64_t>::max()
                                                 ? std::string("more than 2^64")
                                                 : std::to_string(count)) +
                                            " selections (cap " + std::to_string(cap) + ")");
}

/// Odometer over slots with the given radices, last slot fastest.
template <class Visit>
void odometer(const std::vector<std::size_t>& radix, std::vector<std::size_t>& digits, Visit visit) {
  digits.assign(radix.size(), 0);
  for (;;) {
    visit();
    std::size_t k = radix.size();
    while (k > 0) {
      --k;
      if (++digits[k] < radix[k]) break;
      digits[k] = 0;
      if (k == 0) return;
    }
    if (radix.empty()) return;
  }
}

}  // namespace

SelectionLayout::SelectionLayout(const CredalNetwork& net) : offset_(net.size()) {
  for (NodeId i = 0; i < net.size(); ++i) {
    offset_[i] = radix_.size();
    for (const auto& spec : net.specs(i)) {
      radix_.push_back(spec.extrema.size());
      combinations_ = saturating_mul(combinations_, spec.extrema.size());
    }
  }
}

void for_each_selection(const CredalNetwork& net, const std::function<void(const ExtremaSelection&)>& visit,
                        std::uint64_t max_combinations) {
  SelectionLayout layout(net);
  if (layout.combinations() > max_combinations) too_large(layout.combinations(), max_combinations);
  std::vector<std::size_t> radix(layout.slot_count());
  for (std::size_t s = 0; s < radix.size(); ++s) radix[s] = layout.radix(s);
  ExtremaSelection sel;
  odometer(radix, sel.indices, [&] { visit(sel); });
}

std::vector<ExtremaSelection> joint_extrema(const CredalNetwork& net, std::uint64_t max_combinations) {
  std::vector<ExtremaSelection> out;
  for_each_selection(net, [&](const ExtremaSelection& s) { out.push_back(s); }, max_combinations);
  return out;
}

RationalVector joint_pmf(const CredalNetwork& net, const ExtremaSelection& selection) {
  SelectionLayout layout(net);
  const auto total = net.joint_size();
  RationalVector p(static_cast<std::size_t>(total));
  std::vector<State> joint(net.size(), 0);
  for (std::size_t atom = 0; atom < p.size(); ++atom) {
    std::size_t rest = atom;
    for (std::size_t k = net.size(); k-- > 0;) {
      joint[k] = static_cast<State>(rest % static_cast<std::size_t>(net.cardinality(k)));
      rest /= static_cast<std::size_t>(net.cardinality(k));
    }
    Rational prod = 1;
    for (NodeId i = 0; i < net.size() && sgn(prod) != 0; ++i) {
      const std::size_t c = net.config_index(i, joint);
      prod *= net.spec(i, c).extrema[selection.indices[layout.slot(i, c)]][static_cast<std::size_t>(joint[i])];
    }
    p[atom] = prod;
  }
  return p;
}

namespace {

/// Enumerates selections over slots that can influence the query/evidence
/// sums (the ancestral set); other slots stay at index 0.
template <class Visit>
void for_each_relevant(const CredalNetwork& net, const GbrTask& task, std::uint64_t cap, Visit visit) {
  std::vector<NodeId> targets{task.query};
  for (const auto& [node, state] : task.evidence) targets.push_back(node);
  const auto relevant = net.ancestral_closure(targets);
  SelectionLayout layout(net);
  std::vector<std::size_t> radix(layout.slot_count(), 1);
  std::uint64_t count = 1;
  for (NodeId i = 0; i < net.size(); ++i) {
    if (!relevant[i]) continue;
    for (std::size_t c = 0; c < net.config_count(i); ++c) {
      radix[layout.slot(i, c)] = layout.radix(layout.slot(i, c));
      count = saturating_mul(count, radix[layout.slot(i, c)]);
    }
  }
  if (count > cap) too_large(count, cap);
  ExtremaSelection sel;
  const PmfChooser choose = [&](NodeId v, std::size_t c) -> const Pmf& {
    return net.spec(v, c).extrema[sel.indices[layout.slot(v, c)]];
  };
  odometer(radix, sel.indices, [&] { visit(sel, accumulate(net, task, choose)); });
}

}  // namespace

StrongResult gbr_strong(const CredalNetwork& net, const GbrTask& task, std::uint64_t max_combinations) {
  check_task(net, task);
  if (task.bound == Bound::Upper) {
    StrongResult r = gbr_strong(net, task.negated(), max_combinations);
    r.mu = -r.mu;
    return r;
  }
  StrongResult result;
  bool have = false, zero_mass = false;
  for_each_relevant(net, task, max_combinations, [&](const ExtremaSelection& sel, const EvidenceSums& sums) {
    ++result.selections;
    if (result.selections == 1 || sums.mass < result.evidence_lower) result.evidence_lower = sums.mass;
    if (sgn(sums.mass) == 0) {
      zero_mass = true;
      return;
    }
    if (zero_mass) return;
    Rational ratio = sums.weighted / sums.mass;
    if (!have || ratio < result.mu) {
      result.mu = std::move(ratio);
      result.argmin = sel;
      have = true;
    }
  });
  if (zero_mass) throw CredalError(ErrorKind::GbrUndefined, "GBR undefined: min p(evidence) = 0");
  return result;
}

Rational strong_phi(const CredalNetwork& net, const GbrTask& task, const Rational& mu,
                    std::uint64_t max_combinations) {
  check_task(net, task);
  bool have = false;
  Rational best;
  for_each_relevant(net, task, max_combinations, [&](const ExtremaSelection&, const EvidenceSums& sums) {
    Rational v = sums.weighted - mu * sums.mass;
    if (!have || v < best) best = std::move(v);
    have = true;
  });
  return best;
}

bool is_lemma2_form(const CredalNetwork& net) {
  for (NodeId i = 0; i < net.size(); ++i)
    for (const auto& spec : net.specs(i))
      if (!spec.is_singleton() && (!net.is_root(i) || !spec.is_vacuous())) return false;
  return true;
}

CredalNetwork clamp_roots(const CredalNetwork& net, const std::vector<NodeId>& roots,
                          const std::vector<State>& states) {
  auto specs = net.all_specs();
  for (std::size_t k = 0; k < roots.size(); ++k) {
    Pmf q(static_cast<std::size_t>(net.cardinality(roots[k])));
    q[static_cast<std::size_t>(states[k])] = 1;
    specs[roots[k]] = {CredalSpec{{q}, {}}};
  }
  return CredalNetwork(net.variables(), net.arcs(), std::move(specs));
}

Lemma2Result lemma2_inference(const CredalNetwork& net, const GbrTask& task, std::uint64_t max_combinations) {
  check_task(net, task);
  if (!is_lemma2_form(net))
    throw CredalError(ErrorKind::EngineMismatch,
                      "network not in vacuous-root form: imprecision must be vacuous and at root nodes only");
  if (!task.evidence.empty())
    throw CredalError(ErrorKind::EngineMismatch, "network not in vacuous-root form: evidence must be empty");
  if (net.is_root(task.query))
    throw CredalError(ErrorKind::EngineMismatch, "network not in vacuous-root form: query node is a root");
  if (task.bound == Bound::Upper) {
    Lemma2Result r = lemma2_inference(net, task.negated(), max_combinations);
    r.mu = -r.mu;
    return r;
  }

  Lemma2Result result;
  std::vector<std::size_t> radix;
  for (NodeId i = 0; i < net.size(); ++i)
    if (!net.spec(i, 0).is_singleton()) {
      result.vacuous_roots.push_back(i);
      radix.push_back(static_cast<std::size_t>(net.cardinality(i)));
    }
  std::uint64_t count = 1;
  for (auto r : radix) count = saturating_mul(count, r);
  if (count > max_combinations) too_large(count, max_combinations);

  std::vector<Pmf> clamped(net.size());
  std::vector<std::size_t> digits;
  const PmfChooser choose = [&](NodeId v, std::size_t c) -> const Pmf& {
    return clamped[v].empty() ? net.spec(v, c).extrema[0] : clamped[v];
  };
  bool have = false;
  odometer(radix, digits, [&] {
    for (std::size_t k = 0; k < radix.size(); ++k) {
      const NodeId v = result.vacuous_roots[k];
      clamped[v].assign(radix[k], Rational(0));
      clamped[v][digits[k]] = 1;
    }
    ++result.assignments;
    // Precise given the roots, so the expectation is the weighted sum.
    const auto sums = accumulate(net, task, choose);
    if (!have || sums.weighted < result.mu) {
      result.mu = sums.weighted;
      result.argmin_roots.assign(digits.begin(), digits.end());
      have = true;
    }
  });
  return result;
}

}  // namespace credal::strong
