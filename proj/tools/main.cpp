#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treeflow/chain_oracle.hpp"
#include "treeflow/dynamics.hpp"
#include "treeflow/errors.hpp"
#include "treeflow/io.hpp"
#include "treeflow/lp_space.hpp"
#include "treeflow/parallel.hpp"
#include "treeflow/semigroup.hpp"
#include "treeflow/tree.hpp"
#include "treeflow/weights.hpp"

namespace {

using namespace treeflow;

struct Options {
  std::string tree_path;
  std::string weights_path;
  double p = 2.0;
  int N = 64;
  int horizon = 8;
  double tol = 1e-12;
  double tol_dyn = 1e-3;
  double M = std::nan("");
  double w = std::nan("");
  uint64_t seed = 1;
  std::string output;
  std::string format = "json";
  int threads = 0;
};

void add_common(CLI::App* cmd, Options& o, bool weights_required) {
  cmd->add_option("--tree", o.tree_path, "tree spec file (JSON)")->required();
  auto* wopt = cmd->add_option("--weights", o.weights_path, "weight spec file (JSON)");
  if (weights_required) wopt->required();
  cmd->add_option("--p", o.p, "exponent, >= 1");
  cmd->add_option("--N", o.N, "samples per edge, power of two");
  cmd->add_option("--horizon", o.horizon, "steps / time horizon");
  cmd->add_option("--tol", o.tol, "quadrature tolerance");
  cmd->add_option("--tol-dyn", o.tol_dyn, "criterion threshold");
  cmd->add_option("--M", o.M, "norm bound constant");
  cmd->add_option("--w", o.w, "norm bound exponent rate");
  cmd->add_option("--seed", o.seed, "seed for generated test functions");
  cmd->add_option("--output", o.output, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", o.threads, "worker cap (0 = hardware)");
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty())
    std::cout << text;
  else
    write_file(o.output, text);
}

LpConfig make_config(const Options& o) {
  LpConfig cfg;
  cfg.p = o.p;
  cfg.N = o.N;
  cfg.tol = o.tol;
  cfg.validate();
  if (o.horizon < 1) throw std::invalid_argument("--horizon must be >= 1");
  return cfg;
}

// Deterministic seeded data on the base edge: always materialized, and deep
// enough on unrooted trees to survive translations up to the ancestor depth.
GridFunction seeded_base_function(const DirectedTree& tree, uint64_t seed,
                                  const LpConfig& cfg) {
  std::mt19937_64 rng(seed);
  GridFunction f(cfg.N);
  auto& row = f.at(tree.base_edge());
  for (int k = 0; k < cfg.N; ++k)
    row[k] = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  return f;
}

std::vector<double> quarter_grid(int horizon) {
  std::vector<double> out;
  for (int j = 0; j <= 4 * horizon; ++j) out.push_back(0.25 * j);
  return out;
}

int cmd_tree_validate(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  JsonValue v = JsonValue::object();
  v["status"] = JsonValue::str("ok");
  v["kind"] = JsonValue::str(tree.kind() == TreeKind::rooted ? "rooted" : "unrooted");
  v["edge_count"] = JsonValue::integer(tree.edge_count());
  v["base_edge"] = JsonValue::integer(tree.base_edge());
  v["max_depth"] = JsonValue::integer(tree.max_depth());
  v["is_chain"] = JsonValue::boolean(tree.is_chain());
  if (auto leaf = tree.find_leaf())
    v["leaf"] = JsonValue::integer(*leaf);
  emit(o, v.dump());
  return 0;
}

int cmd_weights_check(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  double M = std::isnan(o.M) ? 1.0 : o.M;
  double w = std::isnan(o.w) ? 0.0 : o.w;
  LpConfig cfg = make_config(o);
  AdmissibilityReport rep =
      check_admissibility(tree, W, o.p, M, w, quarter_grid(o.horizon), cfg);
  emit(o, to_json(rep).dump());
  return 0;
}

int cmd_weights_fit(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  auto fit = fit_admissibility(tree, W, o.p, o.horizon, cfg);
  if (fit) {
    emit(o, to_json(*fit).dump());
  } else {
    JsonValue v = JsonValue::object();
    v["status"] = JsonValue::str("not-fitted");
    emit(o, v.dump());
  }
  return 0;
}

int cmd_dynamics_criterion(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  CriterionReport rep = evaluate_criterion(tree, W, o.p, o.horizon, cfg, o.tol_dyn);
  emit(o, o.format == "csv" ? criterion_csv(rep) : to_json(rep).dump());
  return 0;
}

int cmd_dynamics_witness(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  GridFunction f1 = seeded_base_function(tree, o.seed, cfg);
  GridFunction f2 = seeded_base_function(tree, o.seed + 1, cfg);
  const double eps = 0.25;
  try {
    Witness wit = tree.kind() == TreeKind::rooted
                      ? build_witness_rooted(tree, W, o.p, f1, f2, eps, cfg)
                      : build_witness_unrooted(tree, W, o.p, f1, f2, eps, cfg);
    JsonValue v = to_json(wit);
    v["status"] = JsonValue::str("ok");
    v["eps"] = JsonValue::num(eps);
    emit(o, v.dump());
  } catch (const Error& e) {
    if (e.code() != Errc::CriterionNotMet) throw;
    JsonValue v = JsonValue::object();
    v["status"] = JsonValue::str("criterion-not-met");
    v["message"] = JsonValue::str(e.what());
    emit(o, v.dump());
  }
  return 0;
}

int cmd_dynamics_certificate(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  std::vector<int> subsequence;
  for (int n = 1; n <= o.horizon; ++n) subsequence.push_back(n);
  const int i0 = tree.base_edge();
  try {
    NegativeCertificate cert =
        negative_certificate(tree, W, o.p, i0, subsequence, cfg, o.tol_dyn);
    JsonValue v = to_json(cert);
    v["status"] = JsonValue::str("ok");
    v["edge"] = JsonValue::integer(i0);
    emit(o, v.dump());
  } catch (const Error& e) {
    if (e.code() != Errc::CriterionMet) throw;
    JsonValue v = JsonValue::object();
    v["status"] = JsonValue::str("criterion-met");
    v["message"] = JsonValue::str(e.what());
    emit(o, v.dump());
  }
  return 0;
}

int cmd_semigroup_orbit(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  LpConfig cfg = make_config(o);
  GridFunction f = seeded_base_function(tree, o.seed, cfg);
  int denom = std::min(cfg.N, 4);
  std::vector<std::pair<double, GridFunction>> orbit;
  for (int j = 0; j <= o.horizon * denom; ++j) {
    double t = static_cast<double>(j) / denom;
    try {
      orbit.emplace_back(t, translate(tree, f, t, cfg));
    } catch (const Error& e) {
      if (e.code() == Errc::TruncationExceeded) break;  // dump the valid part
      throw;
    }
  }
  emit(o, orbit_csv(orbit, cfg));
  return 0;
}

int cmd_semigroup_laws(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  GridFunction f = seeded_base_function(tree, o.seed, cfg);
  GridFunction g = seeded_base_function(tree, o.seed + 1, cfg);

  double identity_error = max_abs_difference(translate(tree, f, 0.0, cfg), f);
  std::vector<double> ts;
  for (int j = 0; j <= 2 * std::min(o.horizon, 4); ++j) ts.push_back(0.5 * j);
  double law_error = 0.0;
  for (double t1 : ts)
    for (double t2 : ts) {
      if (t1 + t2 > o.horizon) continue;
      try {
        law_error = std::max(law_error, check_semigroup_law(tree, f, t1, t2, cfg));
      } catch (const Error& e) {
        if (e.code() != Errc::TruncationExceeded) throw;
      }
    }
  GridFunction combo = add_scaled(f, 2.0, g);
  GridFunction lhs = translate(tree, combo, 1.0, cfg);
  GridFunction rhs = add_scaled(translate(tree, f, 1.0, cfg), 2.0,
                                translate(tree, g, 1.0, cfg));
  double linearity_error = max_abs_difference(lhs, rhs);

  JsonValue v = JsonValue::object();
  v["identity_error"] = JsonValue::num(identity_error);
  v["law_max_error"] = JsonValue::num(law_error);
  v["linearity_error"] = JsonValue::num(linearity_error);
  std::vector<std::pair<double, double>> trace;
  for (double t : quarter_grid(o.horizon)) {
    try {
      trace.emplace_back(t, norm(translate(tree, f, t, cfg), tree, W, cfg));
    } catch (const Error& e) {
      if (e.code() != Errc::TruncationExceeded) throw;
      break;
    }
  }
  if (o.format == "csv") {
    emit(o, norm_trace_csv(trace));
    return 0;
  }
  JsonValue tr = JsonValue::array();
  for (const auto& [t, val] : trace) {
    JsonValue row = JsonValue::array();
    row.push(JsonValue::num(t));
    row.push(JsonValue::num(val));
    tr.push(std::move(row));
  }
  v["norm_trace"] = std::move(tr);
  JsonValue cont = JsonValue::array();
  for (const auto& [t, val] : strong_continuity_trend(tree, W, f, cfg)) {
    JsonValue row = JsonValue::array();
    row.push(JsonValue::num(t));
    row.push(JsonValue::num(val));
    cont.push(std::move(row));
  }
  v["continuity_trend"] = std::move(cont);
  if (!std::isnan(o.M)) {
    double wrate = std::isnan(o.w) ? 0.0 : o.w;
    v["norm_bound_worst"] = JsonValue::num(
        check_norm_bound(tree, W, f, quarter_grid(o.horizon), o.M, wrate, cfg));
  }
  emit(o, v.dump());
  return 0;
}

int cmd_oracle_chain(const Options& o) {
  TreeSpec spec = parse_tree_spec(read_file(o.tree_path));
  DirectedTree tree = build_tree(spec);
  WeightFamily W = parse_weight_spec(read_file(o.weights_path), tree);
  LpConfig cfg = make_config(o);
  GridFunction f = seeded_base_function(tree, o.seed, cfg);

  HalfLineFunction F = phi(tree, f, cfg);
  double isometry_error =
      std::abs(classical_norm(F, tree, W, cfg) - norm(f, tree, W, cfg));
  double intertwine_error = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    if (t > o.horizon) continue;
    try {
      HalfLineFunction lhs = phi(tree, translate(tree, f, t, cfg), cfg);
      HalfLineFunction rhs = classical_translate(F, t);
      for (size_t k = 0; k < lhs.samples.size(); ++k)
        intertwine_error =
            std::max(intertwine_error, std::abs(lhs.samples[k] - rhs.samples[k]));
    } catch (const Error& e) {
      if (e.code() != Errc::TruncationExceeded) throw;
    }
  }
  CriterionReport tree_rep = evaluate_criterion(tree, W, o.p, o.horizon, cfg, o.tol_dyn);
  CriterionReport cls_rep = classical_criterion(tree, W, o.p, o.horizon, cfg, o.tol_dyn);
  double value_gap = 0.0;
  for (size_t i = 0; i < tree_rep.edges.size() && i < cls_rep.edges.size(); ++i)
    for (size_t k = 0; k < tree_rep.edges[i].forward.size(); ++k)
      value_gap = std::max(value_gap, std::abs(tree_rep.edges[i].forward[k] -
                                               cls_rep.edges[i].forward[k]));

  JsonValue v = JsonValue::object();
  v["isometry_error"] = JsonValue::num(isometry_error);
  v["intertwining_error"] = JsonValue::num(intertwine_error);
  v["tree_verdict"] = JsonValue::str(verdict_name(tree_rep.verdict));
  v["classical_verdict"] = JsonValue::str(verdict_name(cls_rep.verdict));
  v["verdicts_agree"] =
      JsonValue::boolean(tree_rep.verdict == cls_rep.verdict);
  v["forward_value_gap"] = JsonValue::num(value_gap);
  emit(o, v.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted translation semigroups on directed metric trees"};
  app.require_subcommand(1);

  Options o;
  auto* tree_cmd = app.add_subcommand("tree", "tree spec operations");
  tree_cmd->require_subcommand(1);
  auto* tree_validate = tree_cmd->add_subcommand("validate", "parse and build a tree spec");
  add_common(tree_validate, o, false);

  auto* weights_cmd = app.add_subcommand("weights", "weight family operations");
  weights_cmd->require_subcommand(1);
  auto* weights_check = weights_cmd->add_subcommand("check", "admissibility inequalities");
  add_common(weights_check, o, true);
  auto* weights_fit = weights_cmd->add_subcommand("fit", "search for (M, w)");
  add_common(weights_fit, o, true);

  auto* dyn_cmd = app.add_subcommand("dynamics", "hypercyclicity criteria and proofs");
  dyn_cmd->require_subcommand(1);
  auto* dyn_criterion = dyn_cmd->add_subcommand("criterion", "evaluate the criterion");
  add_common(dyn_criterion, o, true);
  auto* dyn_witness = dyn_cmd->add_subcommand("witness", "build a transitivity witness");
  add_common(dyn_witness, o, true);
  auto* dyn_certificate = dyn_cmd->add_subcommand("certificate", "build a negative certificate");
  add_common(dyn_certificate, o, true);

  auto* semi_cmd = app.add_subcommand("semigroup", "translation semigroup checks");
  semi_cmd->require_subcommand(1);
  auto* semi_orbit = semi_cmd->add_subcommand("orbit", "dump a seeded orbit as CSV");
  add_common(semi_orbit, o, false);
  auto* semi_laws = semi_cmd->add_subcommand("laws", "semigroup law / norm trace");
  add_common(semi_laws, o, true);

  auto* oracle_cmd = app.add_subcommand("oracle", "independent cross-checks");
  oracle_cmd->require_subcommand(1);
  auto* oracle_chain = oracle_cmd->add_subcommand("chain", "classical half-line/line oracle");
  add_common(oracle_chain, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (o.threads == 0) {
    if (const char* env = std::getenv("TREEFLOW_THREADS")) o.threads = std::atoi(env);
  }
  if (o.threads > 0) set_max_threads(o.threads);

  try {
    if (tree_validate->parsed()) return cmd_tree_validate(o);
    if (weights_check->parsed()) return cmd_weights_check(o);
    if (weights_fit->parsed()) return cmd_weights_fit(o);
    if (dyn_criterion->parsed()) return cmd_dynamics_criterion(o);
    if (dyn_witness->parsed()) return cmd_dynamics_witness(o);
    if (dyn_certificate->parsed()) return cmd_dynamics_certificate(o);
    if (semi_orbit->parsed()) return cmd_semigroup_orbit(o);
    if (semi_laws->parsed()) return cmd_semigroup_laws(o);
    if (oracle_chain->parsed()) return cmd_oracle_chain(o);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    if (e.code() == Errc::TruncationExceeded) {
      std::cerr << "truncation: " << e.what() << "\n";
      return 3;
    }
    std::cerr << "error: " << e.what() << "\n";  // what() carries the code name
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected: " << e.what() << "\n";
    return 1;
  }
}
