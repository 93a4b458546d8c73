// Command-line harness around the core library: instance ingestion from JSON
// files or named recipes, channel design with the analytic or iterative
// solvers, and CSV/JSON emission for plotting. Exit codes: 0 success,
// 2 invalid input, 3 numerical failure, 4 unsupported structure.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fusegain/dimension.hpp"
#include "fusegain/errors.hpp"
#include "fusegain/gain.hpp"
#include "fusegain/io.hpp"
#include "fusegain/model.hpp"
#include "fusegain/optimize.hpp"
#include "fusegain/waterfill.hpp"

namespace {

using namespace fusegain;

struct CommonArgs {
  std::string instance;
  std::string recipe;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  auto* instance = cmd->add_option("--instance", args.instance,
                                   "System instance JSON file");
  auto* recipe = cmd->add_option(
      "--recipe", args.recipe,
      "Built-in instance family: example1, ar, random, example2");
  instance->excludes(recipe);
  recipe->excludes(instance);
  cmd->add_option("--params", args.params,
                  "Recipe parameters as key=value pairs")
      ->expected(-1);
  cmd->add_option("--seed", args.seed,
                  "Random seed (default: FUSEGAIN_SEED env var, else 0)")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--out", args.out_dir, "Directory for output files");
}

std::uint64_t effective_seed(const CommonArgs& args) {
  if (args.seed_given) return args.seed;
  if (const char* env = std::getenv("FUSEGAIN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput("FUSEGAIN_SEED is not an unsigned integer: " +
                         std::string(env));
    }
  }
  return 0;
}

std::map<std::string, std::string> parse_params(
    const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const std::string& kv : raw) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidInput("--params entries must look like key=value, got '" +
                         kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw InvalidInput("parameter " + key + " is not a number: " +
                       it->second);
  }
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& key, int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw InvalidInput("parameter " + key + " is not an integer: " +
                       it->second);
  }
}

TwoChannelSystem make_instance(const CommonArgs& args) {
  if (!args.instance.empty()) return load_system(args.instance);
  if (args.recipe.empty())
    throw InvalidInput("provide --instance FILE or --recipe NAME");

  const auto params = parse_params(args.params);
  const std::uint64_t seed = effective_seed(args);

  if (args.recipe == "example1")
    return gen_example1(param_int(params, "scenario", 1));
  if (args.recipe == "ar") return gen_ar_system(param_double(params, "rho", 0.5));
  if (args.recipe == "example2")
    return gen_random_system(seed, RandomDims{10, 20, 10, 20},
                             ConditionalKind::Identity);
  if (args.recipe == "random") {
    RandomDims dims;
    dims.p = param_int(params, "p", 4);
    dims.q = param_int(params, "q", 5);
    dims.s = param_int(params, "s", 3);
    dims.t = param_int(params, "t", 4);
    ConditionalKind kind = ConditionalKind::Identity;
    auto it = params.find("conditional");
    if (it != params.end()) {
      if (it->second == "identity") {
        kind = ConditionalKind::Identity;
      } else if (it->second == "banded") {
        kind = ConditionalKind::Banded;
      } else {
        throw InvalidInput("conditional must be identity or banded, got " +
                           it->second);
      }
    }
    return gen_random_system(seed, dims, kind);
  }
  throw InvalidInput("unknown recipe '" + args.recipe +
                     "' (use example1, ar, random, or example2)");
}

StepMode parse_step(const std::string& text, double& delta) {
  if (text == "linesearch") return StepMode::LineSearch;
  if (text.rfind("const:", 0) == 0) {
    try {
      delta = std::stod(text.substr(6));
    } catch (const std::exception&) {
      throw InvalidInput("bad step size in '" + text + "'");
    }
    if (!(delta > 0.0)) throw InvalidInput("step size must be positive");
    return StepMode::Constant;
  }
  throw InvalidInput("--step must be const:<delta> or linesearch, got '" +
                     text + "'");
}

void emit(const std::string& out_dir, const std::string& name,
          const std::string& content) {
  if (out_dir.empty()) return;
  write_file_atomic(out_dir + "/" + name, content);
}

// Runs jobs 0..n-1 on up to `workers` threads (0 = hardware count). The
// first exception wins and is rethrown after all threads join.
void parallel_for(int n, int workers,
                  const std::function<void(int)>& job) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 4;
  }
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

int cmd_eval(const CommonArgs& args, const std::string& channel_path) {
  const TwoChannelSystem sys = make_instance(args);
  const DerivedQuantities d = derive(sys);
  const Matrix g = channel_path.empty() ? Matrix::Zero(sys.t, sys.q)
                                        : load_channel(channel_path);

  const double gain = information_gain(g, d);
  const double gain_snr = information_gain_snr(g, d);
  const Matrix an = gradient(g, d);
  const Matrix fd = fd_gradient(g, d);
  const double grad_rel = (an - fd).norm() / std::max(1.0, fd.norm());

  std::string report = "{\n";
  report += "  \"gain_nats\": " + format_double(gain) + ",\n";
  report += "  \"gain_nats_snr_form\": " + format_double(gain_snr) + ",\n";
  report += "  \"upper_bound_nats\": " + format_double(upper_bound(d)) + ",\n";
  report += "  \"power\": " + format_double(g.squaredNorm()) + ",\n";
  report += "  \"power_budget\": " + format_double(sys.P) + ",\n";
  report += "  \"grad_check_rel\": " + format_double(grad_rel) + "\n";
  report += "}\n";
  std::cout << report;
  emit(args.out_dir, "eval.json", report);
  return 0;
}

int cmd_design(const CommonArgs& args, const std::string& solver,
               const std::string& step, int iters, int restarts) {
  const TwoChannelSystem sys = make_instance(args);
  const DerivedQuantities d = derive(sys);

  if (solver == "analytic") {
    WaterfillDesign design;
    try {
      design = analytic_design(sys, d);
    } catch (const UnsupportedStructure& e) {
      throw UnsupportedStructure(
          std::string(e.what()) +
          " (use --solver extrinsic or --solver intrinsic)");
    }
    const std::string report = analytic_design_to_json(design, sys.P);
    std::cout << report;
    emit(args.out_dir, "design.json", report);
    emit(args.out_dir, "vessel.csv", vessel_to_csv(design));
    return 0;
  }

  OptimConfig config;
  config.seed = effective_seed(args);
  config.max_iters = iters;
  config.restarts = restarts;
  config.step_mode = parse_step(step, config.delta);
  Algorithm algo;
  if (solver == "extrinsic") {
    algo = Algorithm::Extrinsic;
  } else if (solver == "intrinsic") {
    algo = Algorithm::Intrinsic;
  } else {
    throw InvalidInput("--solver must be analytic, extrinsic, or intrinsic");
  }

  const RunResult result = run_multistart(sys, d, algo, config);
  const std::string report = run_result_to_json(result, algo, config, sys.P);
  std::cout << report;
  emit(args.out_dir, "design.json", report);
  emit(args.out_dir, "trace.csv", trace_to_csv(result.trace));
  return 0;
}

int cmd_sweep_rho(const CommonArgs& args, const std::string& rhos_text,
                  const std::string& step, int iters, int restarts,
                  int workers) {
  std::vector<double> rhos;
  std::string token;
  std::istringstream stream(rhos_text);
  while (std::getline(stream, token, ',')) {
    try {
      rhos.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw InvalidInput("--rhos must be a comma-separated number list");
    }
  }
  if (rhos.empty()) throw InvalidInput("--rhos is empty");

  OptimConfig base;
  base.seed = effective_seed(args);
  base.max_iters = iters;
  base.restarts = restarts;
  double delta = 0.1;
  const StepMode intrinsic_mode = parse_step(step, delta);

  struct Cell {
    double gain = 0.0;
    double analytic = 0.0;
    std::string trace_csv;
  };
  std::vector<Cell> cells(2 * rhos.size());

  parallel_for(static_cast<int>(cells.size()), workers, [&](int idx) {
    const double rho = rhos[idx / 2];
    const bool extrinsic = idx % 2 == 0;
    const TwoChannelSystem sys = gen_ar_system(rho);
    const DerivedQuantities d = derive(sys);
    OptimConfig config = base;
    config.delta = delta;
    config.step_mode = extrinsic ? StepMode::Constant : intrinsic_mode;
    const RunResult result = run_multistart(
        sys, d, extrinsic ? Algorithm::Extrinsic : Algorithm::Intrinsic,
        config);
    cells[idx].gain = result.gain;
    cells[idx].analytic = analytic_design(sys, d).gain;
    cells[idx].trace_csv = trace_to_csv(result.trace);
  });

  std::string report = "{\n  \"runs\": [\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    const double rho = rhos[i / 2];
    const char* algo = i % 2 == 0 ? "extrinsic" : "intrinsic";
    const std::string stem =
        "trace_rho" + format_double(rho) + "_" + algo + ".csv";
    emit(args.out_dir, stem, cells[i].trace_csv);
    report += "    {\"rho\": " + format_double(rho) + ", \"solver\": \"" +
              algo + "\", \"gain_nats\": " + format_double(cells[i].gain) +
              ", \"analytic_gain_nats\": " +
              format_double(cells[i].analytic) + "}";
    report += i + 1 < cells.size() ? ",\n" : "\n";
  }
  report += "  ]\n}\n";
  std::cout << report;
  emit(args.out_dir, "sweep_rho.json", report);
  return 0;
}

int cmd_sweep_dim(const CommonArgs& args, const std::string& solver,
                  const std::string& step, int iters, int restarts, double c,
                  int workers) {
  const TwoChannelSystem sys = make_instance(args);

  SweepSolver sweep_solver;
  if (solver == "analytic") {
    sweep_solver = SweepSolver::Analytic;
  } else if (solver == "extrinsic") {
    sweep_solver = SweepSolver::Extrinsic;
  } else if (solver == "intrinsic") {
    sweep_solver = SweepSolver::Intrinsic;
  } else {
    throw InvalidInput("--solver must be analytic, extrinsic, or intrinsic");
  }

  OptimConfig config;
  config.seed = effective_seed(args);
  config.max_iters = iters;
  config.restarts = restarts;
  if (sweep_solver != SweepSolver::Analytic)
    config.step_mode = parse_step(step, config.delta);

  const DimensionSweep sweep =
      dimension_sweep(sys, sweep_solver, c, config, workers);
  emit(args.out_dir, "sweep_dim.csv", sweep_to_csv(sweep));

  std::string report = "{\n";
  report += "  \"t_hat\": " + std::to_string(sweep.t_hat) + ",\n";
  report += "  \"max_rank\": " + std::to_string(sweep.max_rank) + ",\n";
  report += "  \"threshold_c\": " + format_double(sweep.c) + ",\n";
  report += "  \"full_gain_nats\": " +
            format_double(sweep.records.back().gain) + "\n";
  report += "}\n";
  std::cout << report;
  emit(args.out_dir, "sweep_dim.json", report);
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Two-channel Gaussian measurement design: information gain "
      "evaluation, channel design, and sweeps"};
  app.require_subcommand(1);

  CommonArgs eval_args;
  std::string channel_path;
  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate a channel matrix against an instance");
  add_common(eval, eval_args);
  eval->add_option("--channel,--design", channel_path,
                   "Channel matrix JSON (bare array or design file); "
                   "defaults to the zero matrix");

  CommonArgs design_args;
  std::string design_solver = "analytic";
  std::string design_step = "const:0.1";
  int design_iters = 2000;
  int design_restarts = 5;
  CLI::App* design =
      app.add_subcommand("design", "Design the channel matrix");
  add_common(design, design_args);
  design->add_option("--solver", design_solver,
                     "analytic, extrinsic, or intrinsic");
  design->add_option("--step", design_step, "const:<delta> or linesearch");
  design->add_option("--iters", design_iters, "Iteration cap per start");
  design->add_option("--restarts", design_restarts, "Multistart count");

  CommonArgs rho_args;
  std::string rhos_text = "0.1,0.5,0.9";
  std::string rho_step = "const:0.1";
  int rho_iters = 2000;
  int rho_restarts = 5;
  int rho_workers = 0;
  CLI::App* sweep_rho = app.add_subcommand(
      "sweep-rho",
      "Run both iterative solvers across correlation levels of the "
      "autoregressive family");
  sweep_rho->add_option("--rhos", rhos_text, "Comma-separated correlations");
  sweep_rho->add_option("--step", rho_step,
                        "Intrinsic step rule: const:<delta> or linesearch "
                        "(extrinsic always uses the constant step)");
  sweep_rho->add_option("--iters", rho_iters, "Iteration cap per start");
  sweep_rho->add_option("--restarts", rho_restarts, "Multistart count");
  sweep_rho->add_option("--workers", rho_workers,
                        "Thread cap (0 = hardware)");
  sweep_rho->add_option("--seed", rho_args.seed, "Random seed")
      ->each([&rho_args](const std::string&) { rho_args.seed_given = true; });
  sweep_rho->add_option("--out", rho_args.out_dir,
                        "Directory for output files");

  CommonArgs dim_args;
  std::string dim_solver = "analytic";
  std::string dim_step = "const:0.1";
  int dim_iters = 2000;
  int dim_restarts = 5;
  double threshold_c = 1e-3;
  int dim_workers = 0;
  CLI::App* sweep_dim = app.add_subcommand(
      "sweep-dim", "Sweep the output dimension k = 1..q and select t-hat");
  add_common(sweep_dim, dim_args);
  sweep_dim->add_option("--solver", dim_solver,
                        "analytic, extrinsic, or intrinsic");
  sweep_dim->add_option("--step", dim_step, "const:<delta> or linesearch");
  sweep_dim->add_option("--iters", dim_iters, "Iteration cap per start");
  sweep_dim->add_option("--restarts", dim_restarts, "Multistart count");
  sweep_dim->add_option("--threshold-c", threshold_c,
                        "Gain closeness threshold for t-hat");
  sweep_dim->add_option("--workers", dim_workers,
                        "Thread cap (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (eval->parsed()) return cmd_eval(eval_args, channel_path);
  if (design->parsed())
    return cmd_design(design_args, design_solver, design_step, design_iters,
                      design_restarts);
  if (sweep_rho->parsed())
    return cmd_sweep_rho(rho_args, rhos_text, rho_step, rho_iters,
                         rho_restarts, rho_workers);
  return cmd_sweep_dim(dim_args, dim_solver, dim_step, dim_iters,
                       dim_restarts, threshold_c, dim_workers);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
