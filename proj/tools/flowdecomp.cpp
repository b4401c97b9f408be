// Command-line front end: generate, decompose, verify, analyze, fwa, bench.
// Exit codes: 0 success, 1 semantic failure (infeasible or failed
// verification), 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowdecomp/flowdecomp.hpp"

namespace fd = flowdecomp;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Raised for a well-formed request that the instance cannot serve.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const fd::Json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << '\n';
  else
    fd::write_json_file(out, j);
}

struct GenerateArgs {
  std::string family;
  int level = 1;
  std::optional<fd::Value> b;
  std::vector<fd::Value> sizes;
  std::uint64_t seed = 1;
  int edges = 12;
  int nodes = 5;
  int cycles = 4;
  fd::Value weight_lo = 1;
  fd::Value weight_hi = 8;
  fd::Value max_cost = 9;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  fd::Json j;
  if (a.family == "gl" || a.family == "gl-star") {
    const fd::Value b = a.b.value_or(a.level >= 1 && a.level <= 20 ? fd::Value{1} << (a.level + 1) : 0);
    const fd::GlInstance inst = a.family == "gl" ? fd::gen_gl(a.level, b) : fd::gen_gl_star(a.level, b);
    const fd::Json annotations{{"family", a.family},
                               {"level", inst.level},
                               {"B", inst.b},
                               {"backbone", inst.backbone},
                               {"central", inst.central_edges}};
    j = fd::instance_to_json(inst.graph, inst.flow, annotations);
  } else if (a.family == "three-partition") {
    if (!a.b) throw UsageError("three-partition needs --B");
    const fd::Instance inst = fd::gen_three_partition(a.sizes, *a.b);
    j = fd::instance_to_json(inst.graph, inst.flow, {{"family", a.family}, {"sizes", a.sizes}, {"B", *a.b}});
  } else if (a.family == "sp-random") {
    const fd::Instance inst = fd::gen_sp_random(a.seed, a.edges, a.weight_lo, a.weight_hi);
    j = fd::instance_to_json(inst.graph, inst.flow, {{"family", a.family}, {"seed", a.seed}});
  } else if (a.family == "random-circulation") {
    const fd::Graph g = fd::gen_random_circulatory_graph(a.seed, a.nodes, a.edges, a.max_cost);
    const fd::PseudoFlow x = fd::gen_random_circulation(a.seed, g, a.cycles, a.weight_lo, a.weight_hi);
    j = fd::instance_to_json(g, x, {{"family", a.family}, {"seed", a.seed}});
  } else {
    throw UsageError("unknown family " + a.family);
  }
  emit(j, a.out);
  return kOk;
}

fd::OracleBudget budget_from(std::int64_t steps) {
  fd::OracleBudget budget;
  if (steps > 0) budget.max_steps = steps;
  return budget;
}

int report_paths(const fd::Graph& g, const fd::PseudoFlow& x, const fd::FlowDecomposition& d, fd::WeightDomain domain,
                 const std::string& out, const std::string& extra = "") {
  const fd::VerifyResult check = fd::verify_decomposition(g, x, d.paths, domain);
  if (!check) {
    std::cerr << "internal verification failed: " << check.message << '\n';
    return kFailure;
  }
  if (!out.empty()) emit(fd::to_json(d), out);
  std::cout << "paths: " << d.size() << '\n';
  std::cout << "method: " << d.method << '\n';
  if (!extra.empty()) std::cout << extra;
  return kOk;
}

int report_parts(const fd::Graph& g, const fd::PseudoFlow& x, const fd::CirculationDecomposition& d,
                 fd::WeightDomain domain, const std::string& out, const std::string& extra = "") {
  const fd::VerifyResult check = fd::verify_circulation_decomposition(g, x, d, domain);
  if (!check) {
    std::cerr << "internal verification failed: " << check.message << '\n';
    return kFailure;
  }
  if (!out.empty()) emit(fd::to_json(d), out);
  std::cout << "parts: " << d.parts.size() << '\n';
  std::cout << "total_cost: " << d.total_cost << '\n';
  if (!extra.empty()) std::cout << extra;
  return kOk;
}

fd::GlInstance gl_from_annotations(const fd::LoadedInstance& in) {
  const fd::Json& a = in.annotations;
  if (!a.is_object() || a.value("family", "") != "gl")
    throw UsageError("witness-gl needs an instance generated with --family gl");
  fd::GlInstance inst = fd::gen_gl(a.at("level").get<int>(), a.at("B").get<fd::Value>());
  if (!(inst.graph == in.graph) || !(inst.flow == in.flow))
    throw UsageError("instance does not match its gl annotations");
  return inst;
}

int cmd_decompose(const std::string& instance, const std::string& method, const std::string& out,
                  std::int64_t steps) {
  const fd::LoadedInstance in = fd::instance_from_json(fd::read_json_file(instance));
  const fd::Graph& g = in.graph;
  const fd::PseudoFlow& x = in.flow;
  if (g.kind() == fd::GraphKind::Circulatory) {
    if (method == "logz") {
      const fd::Value factor = fd::log_factor(fd::norm(x));
      const fd::Value lower = x.is_zero() ? 0 : fd::mccc(g, fd::support_mask(x)).value;
      const fd::CirculationDecomposition d = fd::mccd_z_approx(g, x);
      return report_parts(g, x, d, fd::WeightDomain::Integer, out,
                          "bound: " + std::to_string(d.total_cost) + " <= " + std::to_string(factor) + " * " +
                              std::to_string(lower) + (d.total_cost <= factor * lower ? " holds\n" : " VIOLATED\n"));
    }
    if (method == "exact-nat" || method == "exact-int") {
      const auto domain = method == "exact-nat" ? fd::WeightDomain::Natural : fd::WeightDomain::Integer;
      const fd::CirculationOracleResult r = fd::exact_mccd(g, x, domain, budget_from(steps));
      return report_parts(g, x, r.decomposition, domain, out, std::string("status: ") + fd::to_string(r.status) + "\n");
    }
    throw UsageError("method " + method + " needs a dag-st instance");
  }
  if (method == "greedy-weight" || method == "greedy-long" || method == "greedy-short") {
    const auto criterion = method == "greedy-weight" ? fd::PathCriterion::Weight
                           : method == "greedy-long" ? fd::PathCriterion::Longest
                                                     : fd::PathCriterion::Shortest;
    return report_paths(g, x, fd::greedy_decompose(g, x, criterion), fd::WeightDomain::Natural, out);
  }
  if (method == "logz") return report_paths(g, x, fd::mfd_z_approx(g, x), fd::WeightDomain::Integer, out);
  if (method == "exact-nat") {
    const fd::OracleResult r = fd::exact_mfd_nat(g, x, budget_from(steps));
    return report_paths(g, x, r.decomposition, fd::WeightDomain::Natural, out,
                        std::string("status: ") + fd::to_string(r.status) + "\n");
  }
  if (method == "exact-int") {
    const fd::OracleResult r = fd::exact_mfd_int(g, x, budget_from(steps));
    return report_paths(g, x, r.decomposition, fd::WeightDomain::Integer, out,
                        std::string("status: ") + fd::to_string(r.status) +
                            "\nweight_bound: " + std::to_string(r.weight_bound) + "\n");
  }
  if (method == "witness-gl")
    return report_paths(g, x, fd::gl_optimal_witness(gl_from_annotations(in)), fd::WeightDomain::Natural, out);
  throw UsageError("unknown method " + method);
}

int cmd_verify(const std::string& instance, const std::string& decomposition, const std::string& domain_name) {
  const fd::LoadedInstance in = fd::instance_from_json(fd::read_json_file(instance));
  const fd::Json dj = fd::read_json_file(decomposition);
  const auto domain = domain_name == "nat" ? fd::WeightDomain::Natural : fd::WeightDomain::Integer;
  fd::VerifyResult r;
  if (dj.contains("parts"))
    r = fd::verify_circulation_decomposition(in.graph, in.flow, fd::circulation_decomposition_from_json(dj), domain);
  else
    r = fd::verify_decomposition(in.graph, in.flow, fd::decomposition_from_json(dj).paths, domain);
  if (r) {
    std::cout << "ok\n";
    return kOk;
  }
  std::cout << "FAIL: " << r.message << '\n';
  if (r.edge) std::cout << "edge: " << *r.edge << '\n';
  return kFailure;
}

int cmd_analyze(const std::string& instance, const std::string& check, int trials, std::uint64_t seed) {
  const fd::LoadedInstance in = fd::instance_from_json(fd::read_json_file(instance));
  const fd::Graph& g = in.graph;
  const fd::PseudoFlow& x = in.flow;
  const bool dag = g.kind() == fd::GraphKind::DagST;
  if (check == "mccc") {
    if (dag) {
      const fd::ReducedInstance red = fd::reduce_flow_to_circulation(g, x);
      std::cout << "mccc: " << fd::mccc(red.graph, fd::support_mask(red.circulation)).value << '\n';
    } else {
      const fd::EdgeMask demanded = x.is_zero() ? fd::all_edges(g) : fd::support_mask(x);
      std::cout << "mccc: " << fd::mccc(g, demanded).value << '\n';
    }
    return kOk;
  }
  if (!dag) throw UsageError("check " + check + " needs a dag-st instance");
  if (check == "width") {
    std::cout << "width: " << (x.is_zero() ? fd::width(g).value : fd::support_width(g, x)) << '\n';
  } else if (check == "funnel") {
    const fd::FunnelResult r = fd::is_funnel(g);
    std::cout << "funnel: " << (r.is_funnel ? "true" : "false") << '\n';
    for (const auto& [path, edge] : r.private_edges) {
      std::cout << "private edge " << edge << " on path";
      for (fd::EdgeId e : path) std::cout << ' ' << e;
      std::cout << '\n';
    }
  } else if (check == "series-parallel") {
    std::cout << "series-parallel: " << (fd::is_series_parallel(g).is_series_parallel ? "true" : "false") << '\n';
  } else if (check == "stability") {
    const fd::StabilityReport r = fd::falsify_width_stability(g, trials, seed);
    std::cout << "stability: " << fd::to_string(r.verdict) << '\n';
    std::cout << "trials: " << r.trials_used << '\n';
  } else {
    throw UsageError("unknown check " + check);
  }
  return kOk;
}

int cmd_fwa(const std::string& instance, const std::string& paths_file, const std::string& weights,
            const std::string& out) {
  const fd::LoadedInstance in = fd::instance_from_json(fd::read_json_file(instance));
  const auto paths = fd::paths_from_json(fd::read_json_file(paths_file));
  const fd::LinearSystem sys = fd::build_system(in.graph, in.flow, paths);
  const fd::RankReport rank = fd::system_rank(sys);
  if (weights == "int") {
    const fd::IntResult r = fd::solve_int(sys);
    if (!r.feasible) {
      std::cout << "infeasible: " << r.certificate->describe() << '\n';
      return kFailure;
    }
    if (!fd::satisfies(sys, r.solution.particular)) {
      std::cerr << "internal verification failed\n";
      return kFailure;
    }
    emit(fd::solution_to_json(r.solution.particular, r.solution.kernel_basis, rank.rank), out);
    if (!out.empty()) std::cout << "feasible\nrank: " << rank.rank << '\n';
    return kOk;
  }
  const fd::NatResult r = fd::solve_nat(sys);
  if (r.status == fd::NatStatus::InfeasibleWithinBounds) {
    std::cout << "infeasible within bounds\n";
    return kFailure;
  }
  if (r.status == fd::NatStatus::BoundLimited) {
    std::cout << "bound-limited: search budget exhausted\n";
    return kFailure;
  }
  std::vector<fd::BigInt> w(r.weights().begin(), r.weights().end());
  emit(fd::solution_to_json(w, rank.kernel_basis, rank.rank), out);
  if (!out.empty()) std::cout << "feasible\nrank: " << rank.rank << '\n';
  return kOk;
}

int cmd_bench(const std::string& family, int levels, const std::string& csv, bool serial) {
  if (family != "gl") throw UsageError("bench supports --family gl");
  const auto rows = fd::gl_bench(levels, !serial);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!csv.empty() && csv != "-") {
    file.open(csv);
    if (!file) throw fd::InvalidInput("cannot write " + csv);
    os = &file;
  }
  *os << fd::kBenchHeader << '\n';
  for (const auto& r : rows) *os << fd::to_csv(r) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow decomposition toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a generated instance as JSON");
  generate->add_option("--family", gen.family, "gl, gl-star, three-partition, sp-random, random-circulation")
      ->required()
      ->check(CLI::IsMember({"gl", "gl-star", "three-partition", "sp-random", "random-circulation"}));
  generate->add_option("--level", gen.level, "Level of the gl families");
  generate->add_option("--B", gen.b, "Backbone parameter (gl default 2^(level+1)) or bin size");
  generate->add_option("--sizes", gen.sizes, "Item sizes for three-partition")->delimiter(',');
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--edges", gen.edges, "Edge count for random families");
  generate->add_option("--nodes", gen.nodes, "Node count for random-circulation");
  generate->add_option("--cycles", gen.cycles, "Cycle count for random-circulation");
  generate->add_option("--weight-lo", gen.weight_lo, "Smallest path or cycle weight");
  generate->add_option("--weight-hi", gen.weight_hi, "Largest path or cycle weight");
  generate->add_option("--max-cost", gen.max_cost, "Largest edge cost for random-circulation");
  generate->add_option("--out", gen.out, "Output file (default stdout)");

  std::string instance, method, out, decomposition, domain = "int", check, paths_file, weights, family = "gl", csv;
  std::int64_t steps = 0;
  int trials = 200, levels = 6;
  std::uint64_t seed = 1;
  bool serial = false;

  auto* decompose = app.add_subcommand("decompose", "Decompose an instance's flow or circulation");
  decompose->add_option("--instance", instance)->required();
  decompose->add_option("--method", method)
      ->required()
      ->check(CLI::IsMember(
          {"greedy-weight", "greedy-long", "greedy-short", "logz", "exact-nat", "exact-int", "witness-gl"}));
  decompose->add_option("--out", out, "Write the decomposition JSON here ('-' for stdout)");
  decompose->add_option("--max-steps", steps, "Step budget for the exact methods");

  auto* verify = app.add_subcommand("verify", "Check a decomposition by exact re-summation");
  verify->add_option("--instance", instance)->required();
  verify->add_option("--decomposition", decomposition)->required();
  verify->add_option("--domain", domain)->check(CLI::IsMember({"nat", "int"}));

  auto* analyze = app.add_subcommand("analyze", "Report a structural property");
  analyze->add_option("--instance", instance)->required();
  analyze->add_option("--check", check)
      ->required()
      ->check(CLI::IsMember({"width", "mccc", "funnel", "series-parallel", "stability"}));
  analyze->add_option("--trials", trials, "Trials for the stability falsifier");
  analyze->add_option("--seed", seed, "Seed for the stability falsifier");

  auto* fwa = app.add_subcommand("fwa", "Assign weights to given paths");
  fwa->add_option("--instance", instance)->required();
  fwa->add_option("--paths", paths_file)->required();
  fwa->add_option("--weights", weights)->required()->check(CLI::IsMember({"int", "nat"}));
  fwa->add_option("--out", out, "Write the solution JSON here (default stdout)");

  auto* bench = app.add_subcommand("bench", "Emit the benchmark table as CSV");
  bench->add_option("--family", family)->check(CLI::IsMember({"gl"}));
  bench->add_option("--levels", levels, "Highest level")->check(CLI::Range(1, 20));
  bench->add_option("--csv", csv, "Output file (default stdout)");
  bench->add_flag("--serial", serial, "Compute levels one at a time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*decompose) return cmd_decompose(instance, method, out, steps);
    if (*verify) return cmd_verify(instance, decomposition, domain);
    if (*analyze) return cmd_analyze(instance, check, trials, seed);
    if (*fwa) return cmd_fwa(instance, paths_file, weights, out);
    if (*bench) return cmd_bench(family, levels, csv, serial);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fd::OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const fd::CycleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
