// Command-line front end: validate, infer, compare, generate, decide.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "credal/epistemic.hpp"
#include "credal/gadgets.hpp"
#include "credal/hmm.hpp"
#include "credal/io.hpp"
#include "credal/strong.hpp"

using namespace credal;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  bool pretty = false;
  bool timing = false;
  std::uint64_t max_combos = strong::kDefaultMaxCombinations;
  std::uint64_t max_atoms = epistemic::kDefaultMaxAtoms;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation: return 2;
    case ErrorKind::GbrUndefined: return 3;
    case ErrorKind::SizeCap: return 4;
    case ErrorKind::EngineMismatch: return 5;
    case ErrorKind::Precondition: return 1;
  }
  return 1;
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::GbrUndefined: return "gbr-undefined";
    case ErrorKind::SizeCap: return "size-cap";
    case ErrorKind::EngineMismatch: return "engine-mismatch";
    case ErrorKind::Precondition: return "precondition";
  }
  return "error";
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Globals& g, json out, const Stopwatch& clock) {
  if (g.timing) out["elapsed_ms"] = clock.ms();
  if (!g.pretty) {
    std::cout << out.dump() << "\n";
    return;
  }
  for (const auto& [key, value] : out.items())
    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
}

json rational_fields(const Rational& mu) { return {{"mu", to_string(mu)}, {"decimal", to_decimal(mu)}}; }

struct Inference {
  Rational mu;
  std::string engine;
  json argmin;
};

json selection_json(const strong::ExtremaSelection& s) {
  json out = json::array();
  for (auto i : s.indices) out.push_back(i);
  return out;
}

Inference run_strong(const CredalNetwork& net, const GbrTask& task, const std::string& engine, const Globals& g) {
  if (engine == "lp") throw CredalError(ErrorKind::EngineMismatch, "engine lp computes epistemic semantics");
  if (engine == "enum") {
    auto r = strong::gbr_strong(net, task, g.max_combos);
    return {r.mu, "enum", {{"selection", selection_json(r.argmin)}, {"selections", r.selections}}};
  }
  throw CredalError(ErrorKind::EngineMismatch, "unknown engine " + engine);
}

Inference run_engine(const CredalNetwork& net, const GbrTask& task, const std::string& semantics,
                     std::string engine, const Globals& g) {
  if (engine == "auto") {
    if (hmm::classify_predictive_hmm(net, task).accepted())
      engine = "hmm";
    else if (strong::is_lemma2_form(net) && task.evidence.empty() && !net.is_root(task.query))
      engine = "lemma2";
    else
      engine = semantics == "strong" ? "enum" : "lp";
  }
  if (engine == "hmm") {
    const auto c = hmm::classify_predictive_hmm(net, task);
    if (!c.accepted()) throw CredalError(ErrorKind::EngineMismatch, "not a predictive HMM query: " + c.reason);
    auto r = hmm::gbr_hmm(net, *c.hmm, task);
    return {r.mu, "hmm", {{"bisection_steps", r.bisection_steps}, {"newton_steps", r.newton_steps}}};
  }
  if (engine == "lemma2") {
    auto r = strong::lemma2_inference(net, task, g.max_combos);
    json roots = json::object();
    for (std::size_t k = 0; k < r.vacuous_roots.size(); ++k)
      roots[std::to_string(r.vacuous_roots[k])] = r.argmin_roots[k];
    return {r.mu, "lemma2", {{"roots", roots}}};
  }
  if (semantics == "strong") return run_strong(net, task, engine, g);
  if (engine != "lp") throw CredalError(ErrorKind::EngineMismatch, "engine " + engine + " computes strong semantics");
  epistemic::Options options;
  options.max_atoms = g.max_atoms;
  auto r = epistemic::gbr_epistemic(net, task, options);
  return {r.mu, "lp", {{"constraint_rows", r.constraint_rows}}};
}

int cmd_validate(const std::string& path, const Globals& g) {
  Stopwatch clock;
  const auto net = parse_network_unvalidated(read_file(path));
  const auto report = validate_network(net);
  json out{{"command", "validate"}, {"valid", report.ok()}, {"nodes", net.size()}, {"findings", report.findings}};
  emit(g, out, clock);
  return report.ok() ? 0 : 2;
}

int cmd_infer(const std::string& net_path, const std::string& query_path, const std::string& semantics,
              const std::string& engine, const Globals& g) {
  Stopwatch clock;
  const auto net = parse_network(read_file(net_path));
  const auto task = parse_task(read_file(query_path));
  check_task(net, task);
  const auto r = run_engine(net, task, semantics, engine, g);
  json out{{"command", "infer"}};
  out.update(rational_fields(r.mu));
  out["semantics"] = semantics;
  out["engine"] = r.engine;
  out["bound"] = task.bound == Bound::Lower ? "lower" : "upper";
  out["argmin"] = r.argmin;
  emit(g, out, clock);
  return 0;
}

int cmd_compare(const std::string& net_path, const std::string& query_path, const Globals& g) {
  Stopwatch clock;
  const auto net = parse_network(read_file(net_path));
  const auto task = parse_task(read_file(query_path));
  check_task(net, task);
  const auto s = run_engine(net, task, "strong", "enum", g);
  const auto e = run_engine(net, task, "epistemic", "lp", g);
  // The strong extension is contained in the epistemic one.
  const bool dominance = task.bound == Bound::Lower ? s.mu >= e.mu : s.mu <= e.mu;
  json out{{"command", "compare"},
           {"strong", to_string(s.mu)},
           {"strong_decimal", to_decimal(s.mu)},
           {"epistemic", to_string(e.mu)},
           {"epistemic_decimal", to_decimal(e.mu)},
           {"dominance", dominance},
           {"equal", s.mu == e.mu}};
  const auto c = hmm::classify_predictive_hmm(net, task);
  out["predictive_hmm"] = c.accepted();
  if (!c.accepted()) out["hmm_reason"] = c.reason;
  bool precise = true;
  for (NodeId i = 0; i < net.size(); ++i)
    for (const auto& spec : net.specs(i)) precise = precise && spec.is_singleton();
  if (precise) out["bn"] = to_string(bn_expectation(net, task));
  emit(g, out, clock);
  return dominance ? 0 : 1;
}

gadgets::PartitionInstance partition_arg(const std::string& z) {
  if (z.empty()) throw CredalError(ErrorKind::Parse, "--z is required");
  return gadgets::parse_partition(z);
}

gadgets::EMajsatInstance emajsat_arg(const std::string& formula, int k) {
  if (formula.empty()) throw CredalError(ErrorKind::Parse, "--formula is required");
  return gadgets::EMajsatInstance(gadgets::Formula::parse(formula), k);
}

int cmd_generate(const std::string& kind, const std::string& z, const std::string& formula, int k, long bits,
                 const std::string& out_dir, const Globals& g) {
  Stopwatch clock;
  gadgets::GadgetCertificate cert;
  if (kind == "tree-partition")
    cert = gadgets::gen_tree_partition(partition_arg(z), bits);
  else if (kind == "polytree-partition")
    cert = gadgets::gen_polytree_partition(partition_arg(z), bits);
  else
    cert = gadgets::gen_emajsat(emajsat_arg(formula, k));

  const auto report = validate_network(cert.network);
  if (!report.ok()) throw CredalError(ErrorKind::Validation, "generated network invalid: " + report.findings.front());

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  const std::string files[] = {(dir / "network.json").string(), (dir / "query.json").string(),
                               (dir / "certificate.json").string()};
  write_file(files[0], serialize_network(cert.network));
  write_file(files[1], serialize_task(cert.task));
  write_file(files[2], gadgets::serialize_certificate(cert));

  json out{{"command", "generate"},
           {"kind", cert.kind},
           {"instance", cert.instance},
           {"nodes", cert.network.size()},
           {"threshold", to_string(cert.threshold)},
           {"comparison", cert.comparison == gadgets::Comparison::LessEqual ? "<=" : "<"},
           {"bits", cert.bits},
           {"files", files}};
  emit(g, out, clock);
  return 0;
}

int cmd_decide(const std::string& problem, const std::string& z, const std::string& formula, int k,
               const std::string& via, const Globals& g) {
  Stopwatch clock;
  json out{{"command", "decide"}, {"problem", problem}, {"via", via}};
  bool agrees = true;
  if (problem == "partition") {
    gadgets::Route route = gadgets::Route::Brute;
    if (via == "tree") route = gadgets::Route::Tree;
    else if (via == "polytree") route = gadgets::Route::Polytree;
    else if (via != "brute") throw CredalError(ErrorKind::Parse, "partition --via must be tree, polytree or brute");
    const auto d = gadgets::decide_partition(partition_arg(z), route);
    out["decision"] = d.yes ? "yes" : "no";
    out["engine"] = d.engine;
    out["value"] = to_string(d.value);
    out["value_decimal"] = to_decimal(d.value);
    out["threshold"] = to_string(d.threshold);
    if (d.oracle_checked) {
      out["oracle"] = d.oracle.yes ? "yes" : "no";
      out["oracle_min_h"] = to_decimal(d.oracle.min_h.value);
    }
    out["agreement"] = d.agrees;
    agrees = d.agrees;
  } else {
    if (via != "network" && via != "brute") throw CredalError(ErrorKind::Parse, "emajsat --via must be network or brute");
    const auto d = gadgets::decide_emajsat(emajsat_arg(formula, k), via == "network");
    out["decision"] = d.yes ? "yes" : "no";
    if (d.via_network) {
      out["engine"] = "lemma2";
      out["value"] = to_string(d.value);
      out["threshold"] = "1/2";
    }
    if (d.oracle_checked) out["oracle"] = d.oracle ? "yes" : "no";
    out["agreement"] = d.agrees;
    agrees = d.agrees;
  }
  emit(g, out, clock);
  return agrees ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact inference for credal networks under strong and epistemic semantics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--pretty", g.pretty, "Human-readable output");
  app.add_flag("--timing", g.timing, "Report elapsed time");
  app.add_option("--max-extrema-combos", g.max_combos, "Cap on strong-extension selections");
  app.add_option("--max-atoms", g.max_atoms, "Cap on joint states for the epistemic LP");

  std::string net_path, query_path, semantics = "strong", engine = "auto";
  auto* validate = app.add_subcommand("validate", "Check a network file");
  validate->add_option("network", net_path, "Network JSON")->required();

  auto* infer = app.add_subcommand("infer", "Lower/upper posterior expectation");
  infer->add_option("network", net_path, "Network JSON")->required();
  infer->add_option("query", query_path, "Query JSON")->required();
  infer->add_option("--semantics", semantics)->check(CLI::IsMember({"strong", "epistemic"}));
  infer->add_option("--engine", engine)->check(CLI::IsMember({"auto", "enum", "lp", "hmm", "lemma2"}));

  auto* compare = app.add_subcommand("compare", "Both semantics side by side");
  compare->add_option("network", net_path, "Network JSON")->required();
  compare->add_option("query", query_path, "Query JSON")->required();

  std::string kind, z, formula, out_dir, via;
  int k = 0;
  long bits = 0;
  auto* generate = app.add_subcommand("generate", "Write a hardness gadget");
  generate->add_option("kind", kind)->required()->check(
      CLI::IsMember({"tree-partition", "polytree-partition", "emajsat"}));
  generate->add_option("--z", z, "Partition integers, comma separated");
  generate->add_option("--formula", formula, "E-MAJSAT formula over z1..zN");
  generate->add_option("--k", k, "Number of selector variables");
  generate->add_option("--bits", bits, "Per-parameter precision (0 = default)");
  generate->add_option("--out", out_dir, "Output directory")->required();

  auto* decide = app.add_subcommand("decide", "Decide a source instance through its gadget");
  decide->add_option("problem", kind)->required()->check(CLI::IsMember({"partition", "emajsat"}));
  decide->add_option("--z", z, "Partition integers, comma separated");
  decide->add_option("--formula", formula, "E-MAJSAT formula over z1..zN");
  decide->add_option("--k", k, "Number of selector variables");
  decide->add_option("--via", via, "tree|polytree|brute or network|brute");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_validate(net_path, g);
    if (*infer) return cmd_infer(net_path, query_path, semantics, engine, g);
    if (*compare) return cmd_compare(net_path, query_path, g);
    if (*generate) return cmd_generate(kind, z, formula, k, bits, out_dir, g);
    if (*decide) {
      if (via.empty()) via = kind == "partition" ? "brute" : "network";
      return cmd_decide(kind, z, formula, k, via, g);
    }
  } catch (const CredalError& e) {
    std::cerr << "error (" << kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
