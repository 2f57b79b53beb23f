// schedkit: solve / gen / verify / flow / bench for the scheduling toolkit.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "schedkit/flow.hpp"
#include "schedkit/model.hpp"
#include "schedkit/prec.hpp"
#include "schedkit/unrelated.hpp"

namespace {

using namespace schedkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << text << "\n";
}

struct RunReport {
  std::string problem;
  double eps = 0;
  double guess = 0;
  double value = 0;
  std::optional<double> oracle;
  double wall_ms = 0;
  unrelated::LpStats lp;
  std::uint64_t seed = 0;

  json to_json() const {
    json j;
    j["problem"] = problem;
    j["eps"] = eps;
    j["guess"] = guess;
    j["value"] = value;
    j["oracle"] = oracle ? json(*oracle) : json(nullptr);
    j["ratio"] = oracle ? json(value / *oracle) : json(nullptr);
    j["wall_ms"] = wall_ms;
    j["seed"] = seed;
    j["lp"] = {{"rows", lp.rows},
               {"nonzeros", lp.nonzeros},
               {"mpc_steps", lp.mpc_steps},
               {"guesses_tried", lp.guesses_tried}};
    return j;
  }
};

struct SolveArgs {
  std::string problem;
  std::string input;
  std::string output;
  std::string report_path;
  std::string mode = "general";
  double eps = 0.2;
  double q = 0;
  bool has_q = false;
  bool deterministic = false;
  std::uint64_t seed = 0;
};

double prec_bound(const std::string& mode, double eps) {
  if (mode == "single") return 2 + 3 * eps;
  if (mode == "unit-theta") return 1 + std::sqrt(2.0) + 3 * eps;
  if (mode == "unit-det") return 3 + 3 * eps;
  return 6 + 3 * eps;
}

prec::PrecMode parse_mode(const std::string& mode) {
  if (mode == "single") return prec::PrecMode::single_machine;
  if (mode == "unit-theta") return prec::PrecMode::unit_theta;
  if (mode == "unit-det") return prec::PrecMode::unit_det;
  if (mode == "general") return prec::PrecMode::general;
  throw argument_error("unknown mode '" + mode + "'");
}

int cmd_solve(const SolveArgs& args) {
  auto instance = model::instance_from_json(slurp(args.input));
  RunReport report;
  report.problem = args.problem;
  report.eps = args.eps;
  report.seed = args.seed;
  std::string solution_json;
  auto started = std::chrono::steady_clock::now();

  if (args.problem == "prec") {
    auto* inst = std::get_if<model::PrecInstance>(&instance);
    if (!inst) throw argument_error("--problem prec needs a prec instance");
    prec::PrecOptions opt;
    opt.seed = args.seed;
    auto res = prec::solve_prec(*inst, args.eps, parse_mode(args.mode), opt);
    report.value = res.value.value;
    report.guess = res.lp_objective;
    solution_json = model::to_json(res.schedule);
  } else {
    auto* inst = std::get_if<model::UnrelatedInstance>(&instance);
    if (!inst)
      throw argument_error("--problem " + args.problem +
                           " needs an unrelated instance");
    unrelated::SolveResult res;
    if (args.problem == "cmax") {
      res = unrelated::solve_makespan(*inst, args.eps);
    } else if (args.problem == "wct") {
      unrelated::WcOptions opt;
      opt.deterministic = args.deterministic;
      opt.seed = args.seed;
      res = unrelated::solve_weighted_completion(*inst, args.eps, opt);
    } else if (args.problem == "lq") {
      double q = args.has_q ? args.q : inst->q.value_or(0.0);
      if (q <= 1.0)
        throw argument_error(
            "--problem lq needs --q > 1 (or a q stored in the instance)");
      res = unrelated::solve_lq(*inst, q, args.eps, args.seed);
    } else {
      throw argument_error("unknown problem '" + args.problem + "'");
    }
    report.value = res.value;
    report.guess = res.guess;
    report.lp = res.stats;
    solution_json = model::to_json(res.assignment);
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  if (!args.output.empty()) spill(args.output, solution_json);
  json report_json = report.to_json();
  report_json["solution"] = json::parse(solution_json);
  std::string report_text = report_json.dump(2);
  if (!args.report_path.empty())
    spill(args.report_path, report_text);
  else
    std::cout << report_text << "\n";
  return kExitOk;
}

int cmd_gen(const std::string& family_name, std::uint64_t seed,
            const model::GenParams& params, const std::string& output) {
  auto family = model::family_from_name(family_name);
  if (!family) throw argument_error("unknown family '" + family_name + "'");
  auto inst = model::generate(seed, *family, params);
  std::string text = model::to_json(inst);
  if (output.empty())
    std::cout << text << "\n";
  else
    spill(output, text);
  return kExitOk;
}

int cmd_verify(const std::string& instance_path,
               const std::string& solution_path, const std::string& objective,
               double q, bool has_q) {
  auto instance = model::instance_from_json(slurp(instance_path));
  auto solution = model::solution_from_json(slurp(solution_path));
  model::ObjectiveValue value;
  if (auto* prec_inst = std::get_if<model::PrecInstance>(&instance)) {
    auto* sched = std::get_if<model::Schedule>(&solution);
    if (!sched) throw validation_error("prec instances need a schedule");
    value = model::evaluate(*prec_inst, *sched);
  } else {
    auto& inst = std::get<model::UnrelatedInstance>(instance);
    auto* asg = std::get_if<model::Assignment>(&solution);
    if (!asg) throw validation_error("unrelated instances need an assignment");
    model::Objective obj = model::Objective::makespan;
    if (objective == "wct") obj = model::Objective::weighted_completion;
    if (objective == "lq") obj = model::Objective::lq_norm;
    value = model::evaluate(inst, *asg, obj,
                            has_q ? std::optional<double>(q) : std::nullopt);
  }
  json out;
  out["objective"] = model::objective_name(value.kind);
  out["value"] = value.value;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_flow(const std::string& input, double eps, const std::string& output) {
  double gamma = 1.0;
  auto raw = flow::raw_flow_from_json(slurp(input), &gamma);
  // Fold a non-unit demand scale into the demands; the approximation then
  // runs against the unit-scale instance.
  if (gamma != 1.0)
    for (auto& b : raw.b) b *= gamma;
  auto [inst, lift] = flow::normalize(raw, 1.0);
  auto f = flow::max_flow_approx(inst, eps);
  double value = 0;
  for (int v = 0; v < inst.n; ++v)
    if (inst.is_source(v))
      for (int e : inst.out_edges[v]) value += f[e];
  json out;
  out["value"] = value;
  json per_edge = json::array();
  for (size_t e = 0; e < raw.edges.size(); ++e) {
    int ne = lift.norm_edge_of[e];
    per_edge.push_back(ne >= 0 ? f[ne] : 0.0);
  }
  out["flow"] = std::move(per_edge);
  std::string text = out.dump();
  if (output.empty())
    std::cout << text << "\n";
  else
    spill(output, text);
  return kExitOk;
}

struct BenchArgs {
  std::string problem = "cmax";
  std::string family;
  std::string mode = "general";
  std::uint64_t seed_from = 1, seed_to = 20;
  std::vector<double> eps_list{0.2};
  model::GenParams params;
  double q = 2.0;
  std::string out_csv;
};

int cmd_bench(const BenchArgs& args) {
  std::ostringstream csv;
  csv << "seed,problem,eps,value,oracle,ratio,bound,pass\n";
  auto family = model::family_from_name(args.family);
  if (!family) throw argument_error("unknown family '" + args.family + "'");
  for (std::uint64_t seed = args.seed_from; seed <= args.seed_to; ++seed) {
    for (double eps : args.eps_list) {
      double value = 0, bound = 0;
      std::optional<double> oracle;
      if (args.problem == "prec") {
        auto inst = model::generate_prec(seed, *family, args.params);
        prec::PrecOptions opt;
        opt.seed = seed;
        auto res = prec::solve_prec(inst, eps, parse_mode(args.mode), opt);
        value = res.value.value;
        bound = prec_bound(args.mode, eps);
        try {
          oracle = model::brute_force_prec(inst).second.value;
        } catch (const size_error&) {
        }
      } else {
        auto inst = model::generate_unrelated(seed, *family, args.params);
        model::Objective obj = model::Objective::makespan;
        if (args.problem == "cmax") {
          value = unrelated::solve_makespan(inst, eps).value;
          bound = 2 + 3 * eps;
        } else if (args.problem == "wct") {
          obj = model::Objective::weighted_completion;
          value = unrelated::solve_weighted_completion(inst, eps).value;
          bound = 1.5 + 3 * eps;
        } else if (args.problem == "lq") {
          obj = model::Objective::lq_norm;
          value = unrelated::solve_lq(inst, args.q, eps, seed).value;
          bound = std::abs(args.q - 2.0) < 1e-12 ? std::sqrt(2.0) + 3 * eps
                                                 : 4 + 3 * eps;
          if (*family == model::Family::restricted_assignment)
            bound = 2 + 3 * eps;
        } else {
          throw argument_error("unknown problem '" + args.problem + "'");
        }
        try {
          oracle = model::brute_force_unrelated(inst, obj, args.q)
                       .second.value;
        } catch (const size_error&) {
        }
      }
      csv << seed << "," << args.problem << "," << eps << "," << value << ",";
      if (oracle) {
        bool pass = value <= bound * *oracle + 1e-9;
        csv << *oracle << "," << value / *oracle << "," << bound << ","
            << (pass ? "true" : "false") << "\n";
      } else {
        csv << "NA,NA," << bound << ",NA\n";
      }
    }
  }
  if (args.out_csv.empty())
    std::cout << csv.str();
  else
    spill(args.out_csv, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-relaxation scheduling solvers with oracle benchmarks"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* cmd_solve_p = app.add_subcommand("solve", "solve an instance file");
  cmd_solve_p->add_option("--problem", solve.problem,
                          "cmax | wct | lq | prec")->required();
  cmd_solve_p->add_option("--eps", solve.eps, "accuracy parameter");
  cmd_solve_p->add_option("--q", solve.q, "norm exponent for lq")
      ->each([&](const std::string&) { solve.has_q = true; });
  cmd_solve_p->add_flag("--det", solve.deterministic,
                        "derandomized rounding (wct)");
  cmd_solve_p->add_option("--mode", solve.mode,
                          "prec rounding: single | unit-theta | unit-det | general");
  cmd_solve_p->add_option("--seed", solve.seed, "seed for randomized parts");
  cmd_solve_p->add_option("input", solve.input, "instance JSON")->required();
  cmd_solve_p->add_option("-o,--output", solve.output, "solution JSON path");
  cmd_solve_p->add_option("--report", solve.report_path, "report JSON path");

  std::string gen_family;
  std::uint64_t gen_seed = 1;
  model::GenParams gen_params;
  std::string gen_output;
  auto* cmd_gen_p = app.add_subcommand("gen", "generate a random instance");
  cmd_gen_p->add_option("--family", gen_family, "instance family")->required();
  cmd_gen_p->add_option("--seed", gen_seed);
  cmd_gen_p->add_option("--n", gen_params.n);
  cmd_gen_p->add_option("--m", gen_params.m);
  cmd_gen_p->add_option("--p-max", gen_params.p_max);
  cmd_gen_p->add_option("--w-max", gen_params.w_max);
  cmd_gen_p->add_option("--density", gen_params.density);
  cmd_gen_p->add_option("-o,--output", gen_output);

  std::string ver_instance, ver_solution, ver_objective = "cmax";
  double ver_q = 2.0;
  bool ver_has_q = false;
  auto* cmd_verify_p =
      app.add_subcommand("verify", "re-derive a solution's objective value");
  cmd_verify_p->add_option("instance", ver_instance)->required();
  cmd_verify_p->add_option("solution", ver_solution)->required();
  cmd_verify_p->add_option("--objective", ver_objective, "cmax | wct | lq");
  cmd_verify_p->add_option("--q", ver_q)
      ->each([&](const std::string&) { ver_has_q = true; });

  std::string flow_input, flow_output;
  double flow_eps = 0.2;
  auto* cmd_flow_p =
      app.add_subcommand("flow", "approximate max flow on a supply/demand DAG");
  cmd_flow_p->add_option("--eps", flow_eps);
  cmd_flow_p->add_option("input", flow_input)->required();
  cmd_flow_p->add_option("-o,--output", flow_output);

  BenchArgs bench;
  auto* cmd_bench_p =
      app.add_subcommand("bench", "ratio table against brute-force oracles");
  cmd_bench_p->add_option("--problem", bench.problem, "cmax | wct | lq | prec");
  cmd_bench_p->add_option("--family", bench.family)->required();
  cmd_bench_p->add_option("--mode", bench.mode, "prec rounding mode");
  cmd_bench_p->add_option("--seed-from", bench.seed_from);
  cmd_bench_p->add_option("--seed-to", bench.seed_to);
  cmd_bench_p->add_option("--eps", bench.eps_list);
  cmd_bench_p->add_option("--n", bench.params.n);
  cmd_bench_p->add_option("--m", bench.params.m);
  cmd_bench_p->add_option("--p-max", bench.params.p_max);
  cmd_bench_p->add_option("--w-max", bench.params.w_max);
  cmd_bench_p->add_option("--density", bench.params.density);
  cmd_bench_p->add_option("--q", bench.q);
  cmd_bench_p->add_option("-o,--output", bench.out_csv);

  try {
    app.parse(argc, argv);
    if (*cmd_solve_p) return cmd_solve(solve);
    if (*cmd_gen_p) return cmd_gen(gen_family, gen_seed, gen_params, gen_output);
    if (*cmd_verify_p)
      return cmd_verify(ver_instance, ver_solution, ver_objective, ver_q,
                        ver_has_q);
    if (*cmd_flow_p) return cmd_flow(flow_input, flow_eps, flow_output);
    if (*cmd_bench_p) return cmd_bench(bench);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const argument_error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitParse;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitParse;
  } catch (const size_error& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kExitParse;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const internal_error& e) {
    std::cerr << "internal invariant breach: " << e.what() << "\n";
    return kExitInternal;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitParse;
}
