#include "credal/gadgets.hpp"

#include <algorithm>
#include <json.hpp>

#include "credal/strong.hpp"

namespace credal::gadgets {

namespace {

/// Smallest b with 2^-b strictly below x.
long bits_strictly_below(const Rational& x) {
  long b = bits_below(x);
  if (pow2(-b) == x) ++b;
  return b;
}

Rational fourth_power(const Rational& z) { return z * z * z * z; }

std::string describe(const PartitionInstance& inst) {
  std::string out;
  for (std::size_t i = 0; i < inst.size(); ++i) out += (i ? "," : "") + std::to_string(inst.z[i]);
  return out;
}

ComputablePmf exact_pmf(std::initializer_list<Rational> values) {
  ComputablePmf pmf;
  for (const auto& v : values) pmf.push_back(ComputableNumber::exact(v));
  return pmf;
}

/// Boolean pmf [1 - p, p].
ComputablePmf boolean_pmf(ComputableNumber p) {
  auto complement = ComputableNumber::complement(p);
  return {std::move(complement), std::move(p)};
}

std::string bits_note(long bits) {
  return "irrational parameters rounded to multiples of 2^-" + std::to_string(bits) +
         "; the largest entry of each pmf is one minus the others";
}

}  // namespace

EMajsatInstance::EMajsatInstance(Formula f, int k_) : formula(std::move(f)), n(formula.max_variable()), k(k_) {
  if (formula.gate_count() == 0) throw CredalError(ErrorKind::Parse, "formula has no operator");
  if (k < 1 || k >= n)
    throw CredalError(ErrorKind::Parse, "k must satisfy 1 <= k < n (n = " + std::to_string(n) + ")");
}

bool GadgetCertificate::decide(const Rational& mu) const {
  return comparison == Comparison::LessEqual ? mu <= threshold : mu < threshold;
}

std::string serialize_certificate(const GadgetCertificate& cert, int indent) {
  nlohmann::ordered_json j;
  j["kind"] = cert.kind;
  j["instance"] = cert.instance;
  j["threshold"] = to_string(cert.threshold);
  j["threshold_decimal"] = to_decimal(cert.threshold);
  j["comparison"] = cert.comparison == Comparison::LessEqual ? "<=" : "<";
  j["eps_rat"] = to_string(cert.eps_rat);
  j["eps_int"] = to_string(cert.eps_int);
  j["bits"] = cert.bits;
  j["query"] = cert.task.query;
  j["notes"] = cert.notes;
  return j.dump(indent) + "\n";
}

Rational tree_eps_int(const PartitionInstance& inst) {
  const auto norm = partition_normalize(inst);
  return pow2(-static_cast<long>(inst.size()) - 3) / (64 * fourth_power(norm.z));
}

long tree_default_bits(const PartitionInstance& inst) {
  const auto norm = partition_normalize(inst);
  const Rational gap = pow2(-static_cast<long>(inst.size())) / (4 * 64 * fourth_power(norm.z));
  return bits_strictly_below(gap / 4);
}

GadgetCertificate gen_tree_partition(const PartitionInstance& inst, long bits) {
  const auto norm = partition_normalize(inst);
  const std::size_t n = inst.size();
  const Rational z4 = fourth_power(norm.z);
  const Rational eps_int = tree_eps_int(inst);
  const Rational eps_rat = pow2(-static_cast<long>(n)) / (4 * 64 * z4) / 2;

  ComputableNetwork cnet;
  cnet.variables.push_back({"X0", 3});
  for (std::size_t i = 1; i <= 2 * n; ++i) cnet.variables.push_back({"X" + std::to_string(i), 2});
  for (std::size_t i = 1; i <= n; ++i) {
    cnet.arcs.push_back({0, i});
    cnet.arcs.push_back({i, n + i});
  }
  cnet.specs.resize(2 * n + 1);
  cnet.specs[0] = {{exact_pmf({Rational(1, 3), Rational(1, 3), Rational(1, 3)})}};
  for (std::size_t i = 1; i <= n; ++i) {
    const Rational v = norm.v[i - 1];
    cnet.specs[i] = {{boolean_pmf(ComputableNumber::pow2_ratio(-v, -v))},
                     {boolean_pmf(ComputableNumber::pow2_ratio(0, -v))},
                     {exact_pmf({Rational(1, 2), Rational(1, 2)})}};
    const auto leaf = std::vector<ComputablePmf>{exact_pmf({1 - eps_int, eps_int}), exact_pmf({0, 1})};
    cnet.specs[n + i] = {leaf, leaf};
  }

  const auto rational = rationalize_network(cnet, eps_rat, bits > 0 ? bits : tree_default_bits(inst));

  GadgetCertificate cert;
  cert.kind = "tree-partition";
  cert.network = rational.network;
  cert.task.query = 0;
  cert.task.f = {0, 0, -1};
  for (std::size_t i = 1; i <= n; ++i) cert.task.evidence[n + i] = 1;

  // g(alpha) with the same rounded q(x_i = 1 | x_0 = 2) as the network.
  const Rational alpha = Rational(3) / (128 * z4);
  Rational product = 1;
  for (std::size_t i = 1; i <= n; ++i) product *= (2 / (1 + eps_int)) * cert.network.spec(i, 1).extrema[0][1];
  const Rational g = 1 + (1 + alpha) * product;
  cert.threshold = -1 / g;
  cert.comparison = Comparison::LessEqual;
  cert.eps_rat = eps_rat;
  cert.eps_int = eps_int;
  cert.bits = rational.bits;
  cert.instance = describe(inst);
  cert.notes = {"yes iff the strong lower expectation is <= -1/g(alpha), alpha = 3/(128 z^4)",
                "leaf intervals [eps_int, 1] for q(x = 1 | parent)", bits_note(rational.bits)};
  return cert;
}

long polytree_default_bits(const PartitionInstance& inst) {
  const auto norm = partition_normalize(inst);
  return bits_strictly_below(1 / (3 * 32 * fourth_power(norm.z)) / 4);
}

GadgetCertificate gen_polytree_partition(const PartitionInstance& inst, long bits) {
  const auto norm = partition_normalize(inst);
  const std::size_t n = inst.size();
  const Rational z4 = fourth_power(norm.z);
  const Rational eps = 1 / (3 * 64 * z4);

  ComputableNetwork cnet;
  for (std::size_t j = 1; j <= n; ++j) cnet.variables.push_back({"R" + std::to_string(j), 2});
  for (std::size_t j = 0; j <= n; ++j) cnet.variables.push_back({"C" + std::to_string(j), 3});
  for (std::size_t j = 1; j <= n; ++j) {
    cnet.arcs.push_back({j - 1, n + j});
    cnet.arcs.push_back({n + j - 1, n + j});
  }
  cnet.specs.resize(2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) cnet.specs[j] = {{exact_pmf({1, 0}), exact_pmf({0, 1})}};
  cnet.specs[n] = {{exact_pmf({Rational(1, 3), Rational(1, 3), Rational(1, 3)})}};
  for (std::size_t j = 1; j <= n; ++j) {
    const auto p = ComputableNumber::pow2(-norm.v[j - 1]);
    const auto q = ComputableNumber::complement(p);
    const auto zero = ComputableNumber::exact(0);
    const auto one = ComputableNumber::exact(1);
    // Configuration = root state * 3 + previous chain state.
    cnet.specs[n + j] = {{exact_pmf({1, 0, 0})},       {ComputablePmf{zero, p, q}}, {exact_pmf({0, 0, 1})},
                         {ComputablePmf{p, zero, q}}, {exact_pmf({0, 1, 0})},       {exact_pmf({0, 0, 1})}};
  }

  const auto rational = rationalize_network(cnet, eps, bits > 0 ? bits : polytree_default_bits(inst));

  GadgetCertificate cert;
  cert.kind = "polytree-partition";
  cert.network = rational.network;
  cert.task.query = polytree_terminal(n);
  cert.task.f = {1, 1, 0};
  cert.threshold = (1 + 1 / (64 * z4)) / 3;
  cert.comparison = Comparison::LessEqual;
  cert.eps_rat = eps;
  cert.eps_int = 0;
  cert.bits = rational.bits;
  cert.instance = describe(inst);
  cert.notes = {"yes iff the lower expectation is <= alpha = (1 + 1/(64 z^4))/3",
                "same value under strong and epistemic semantics (vacuous roots, precise elsewhere)",
                bits_note(rational.bits)};
  return cert;
}

GadgetCertificate gen_emajsat(const EMajsatInstance& inst) {
  const auto n = static_cast<std::size_t>(inst.n);
  const auto k = static_cast<std::size_t>(inst.k);
  std::vector<Variable> variables;
  std::vector<Arc> arcs;
  std::vector<std::vector<CredalSpec>> specs;
  const CredalSpec vacuous{{{1, 0}, {0, 1}}, {}};
  const CredalSpec uniform{{{Rational(1, 2), Rational(1, 2)}}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    variables.push_back({"Z" + std::to_string(i + 1), 2});
    specs.push_back({i < k ? vacuous : uniform});
  }

  const auto& nodes = inst.formula.nodes();
  std::vector<NodeId> network_node(nodes.size());
  std::size_t gate = 0;
  for (int idx : inst.formula.post_order()) {
    const auto& node = nodes[static_cast<std::size_t>(idx)];
    if (node.op == Formula::Op::Var) {
      network_node[static_cast<std::size_t>(idx)] = static_cast<NodeId>(node.var - 1);
      continue;
    }
    const NodeId self = variables.size();
    network_node[static_cast<std::size_t>(idx)] = self;
    variables.push_back({"G" + std::to_string(++gate), 2});
    std::vector<NodeId> operands{network_node[static_cast<std::size_t>(node.left)]};
    if (node.right >= 0) operands.push_back(network_node[static_cast<std::size_t>(node.right)]);
    std::sort(operands.begin(), operands.end());
    operands.erase(std::unique(operands.begin(), operands.end()), operands.end());
    for (NodeId p : operands) arcs.push_back({p, self});

    auto gate_value = [&](bool a, bool b) {
      switch (node.op) {
        case Formula::Op::Not: return !a;
        case Formula::Op::And: return a && b;
        case Formula::Op::Or: return a || b;
        case Formula::Op::Var: break;
      }
      return false;
    };
    std::vector<CredalSpec> local;
    const std::size_t configs = std::size_t{1} << operands.size();
    for (std::size_t c = 0; c < configs; ++c) {
      // Two distinct operands: first (lower index) parent most significant.
      const bool a = operands.size() == 1 ? c == 1 : (c >> 1) & 1;
      const bool b = operands.size() == 1 ? a : c & 1;
      const bool value = gate_value(a, b);
      local.push_back(CredalSpec{{value ? Pmf{0, 1} : Pmf{1, 0}}, {}});
    }
    specs.push_back(std::move(local));
  }

  GadgetCertificate cert;
  cert.kind = "emajsat";
  cert.network = make_valid_network(std::move(variables), std::move(arcs), std::move(specs));
  cert.task.query = cert.network.size() - 1;
  cert.task.f = {1, 0};
  cert.threshold = Rational(1, 2);
  cert.comparison = Comparison::Less;
  cert.eps_rat = 0;
  cert.eps_int = 0;
  cert.bits = 0;
  cert.instance = inst.formula.to_string() + " k=" + std::to_string(inst.k);
  cert.notes = {"yes iff min p(x_t = 0) < 1/2 on the terminal gate",
                "gates created in left-to-right post-order of the formula"};
  return cert;
}

std::uint64_t emajsat_count(const EMajsatInstance& inst, const std::vector<bool>& selectors) {
  const auto n = static_cast<std::size_t>(inst.n);
  const auto k = static_cast<std::size_t>(inst.k);
  std::vector<bool> z(n);
  for (std::size_t i = 0; i < k; ++i) z[i] = selectors[i];
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - k)); ++mask) {
    for (std::size_t i = k; i < n; ++i) z[i] = (mask >> (i - k)) & 1;
    if (inst.formula.evaluate(z)) ++count;
  }
  return count;
}

bool emajsat_brute(const EMajsatInstance& inst) {
  if (inst.n > kMaxBruteEmajsat)
    throw CredalError(ErrorKind::SizeCap,
                      "emajsat_brute supports at most " + std::to_string(kMaxBruteEmajsat) + " variables");
  const auto k = static_cast<std::size_t>(inst.k);
  const std::uint64_t half = std::uint64_t{1} << (inst.n - inst.k - 1);
  std::vector<bool> selectors(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (std::size_t i = 0; i < k; ++i) selectors[i] = (mask >> i) & 1;
    if (emajsat_count(inst, selectors) > half) return true;
  }
  return false;
}

PartitionDecision decide_partition(const PartitionInstance& inst, Route route) {
  PartitionDecision out;
  const bool oracle_fits = inst.size() <= kMaxBrutePartition;
  if (oracle_fits) {
    out.oracle = partition_brute(inst);
    out.oracle_checked = true;
  }
  switch (route) {
    case Route::Brute: {
      if (!oracle_fits) out.oracle = partition_brute(inst);  // throws the cap error
      out.yes = out.oracle.yes;
      out.value = out.oracle.min_h.value;
      out.threshold = 1;
      out.engine = "brute";
      break;
    }
    case Route::Tree: {
      const auto cert = gen_tree_partition(inst);
      out.value = strong::gbr_strong(cert.network, cert.task).mu;
      out.threshold = cert.threshold;
      out.yes = cert.decide(out.value);
      out.engine = "enum";
      break;
    }
    case Route::Polytree: {
      const auto cert = gen_polytree_partition(inst);
      out.value = strong::lemma2_inference(cert.network, cert.task).mu;
      out.threshold = cert.threshold;
      out.yes = cert.decide(out.value);
      out.engine = "lemma2";
      break;
    }
  }
  out.agrees = !out.oracle_checked || out.yes == out.oracle.yes;
  return out;
}

EmajsatDecision decide_emajsat(const EMajsatInstance& inst, bool via_network) {
  EmajsatDecision out;
  out.via_network = via_network;
  if (inst.n <= kMaxBruteEmajsat) {
    out.oracle = emajsat_brute(inst);
    out.oracle_checked = true;
  }
  if (via_network) {
    const auto cert = gen_emajsat(inst);
    out.value = strong::lemma2_inference(cert.network, cert.task).mu;
    out.yes = cert.decide(out.value);
  } else {
    if (!out.oracle_checked) emajsat_brute(inst);  // throws the cap error
    out.yes = out.oracle;
  }
  out.agrees = !out.oracle_checked || out.yes == out.oracle;
  return out;
}

}  // namespace credal::gadgets
