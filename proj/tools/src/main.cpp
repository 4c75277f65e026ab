// dantzig: command-line front end for single solves, the synthetic experiments and the
// digit classification/separation pipeline.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

#include <iostream>
#include <memory>

#include "commands.hpp"
#include "dantzig/errors.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

using dantzig::cli::FlagSet;

struct SolveFlags {
  std::string x, dict, y, mode, out, alpha;
  double delta = 0.0, sigma = 0.0, epsilon = 0.0;
  int eta = 0;
  long max_iter = 0;
  bool trace = false;
};

struct ExperimentFlags {
  int id = 0, trials = 0, eta = 0, jobs = 0;
  std::vector<int> m;
  double sigma = 0.0, epsilon = 0.0, delta = 0.0;
  long seed = 0, max_iter = 0;
  std::string alpha, mode, out;
};

struct DigitsFlags {
  std::string data, alpha, mode, dump_images, out;
  bool synthetic = false;
  long k = 0, n = 0, seed = 0, synthetic_seed = 0, max_iter = 0, dump_limit = 0;
  int trials = 0, jobs = 0, eta = 0;
  double epsilon = 0.0, delta_fraction = 0.0, delta = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dantzig selector recovery and separation with overcomplete dictionaries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DANTZIG_VERSION);

  std::string config_path;
  auto add_common = [&](CLI::App* sub, FlagSet& fs, std::string& out, std::string& mode) {
    sub->add_option("--config", config_path,
                    "JSON config or manifest.json of an earlier run (flags take precedence)");
    fs.add("--out", "out", out, "output directory (default: $DANTZIG_OUT_DIR or cwd)");
    fs.add("--mode", "mode", mode, "operator application: matrix-free or dense");
  };

  SolveFlags sf;
  CLI::App* solve = app.add_subcommand("solve", "solve one Dantzig selector problem");
  FlagSet solve_flags(solve);
  add_common(solve, solve_flags, sf.out, sf.mode);
  solve_flags.add("--x", "x", sf.x, "sensing matrix CSV (n rows, p columns)");
  solve_flags.add("--dict", "dict", sf.dict, "dictionary, e.g. identity,dft or haar:5,dct");
  solve_flags.add("--y", "y", sf.y, "observation CSV (one column, or re,im columns)");
  solve_flags.add("--delta", "delta", sf.delta, "feasibility radius");
  solve_flags.add("--sigma", "sigma", sf.sigma, "noise level; delta = sigma*sqrt(2 ln q)");
  solve_flags.add_alpha(sf.alpha);
  solve_flags.add("--epsilon", "epsilon", sf.epsilon, "relative residual tolerance");
  solve_flags.add("--eta", "eta", sf.eta, "support-stationarity window");
  solve_flags.add("--max-iter", "max_iter", sf.max_iter, "iteration cap");
  solve_flags.add_switch("--trace", "trace", sf.trace, "write trace.csv, one row per iteration");

  ExperimentFlags ef;
  CLI::App* experiment = app.add_subcommand("experiment", "run a synthetic experiment (1, 2 or 3)");
  FlagSet exp_flags(experiment);
  add_common(experiment, exp_flags, ef.out, ef.mode);
  exp_flags.add("--id", "id", ef.id, "experiment: 1 Haar+DCT, 2 spikes+sinusoids, 3 smooth+spikes");
  exp_flags.add("--m", "m", ef.m, "size index (one or more values)");
  exp_flags.add("--sigma", "sigma", ef.sigma, "noise standard deviation");
  exp_flags.add("--trials", "trials", ef.trials, "trials per size index");
  exp_flags.add("--seed", "seed", ef.seed, "base seed");
  exp_flags.add("--epsilon", "epsilon", ef.epsilon, "override the residual tolerance");
  exp_flags.add("--eta", "eta", ef.eta, "override the support-stationarity window");
  exp_flags.add("--delta", "delta", ef.delta, "override delta = sigma*sqrt(2 ln q)");
  exp_flags.add_alpha(ef.alpha);
  exp_flags.add("--max-iter", "max_iter", ef.max_iter, "iteration cap");
  exp_flags.add("--jobs", "jobs", ef.jobs, "parallel trials");

  DigitsFlags df;
  CLI::App* digits = app.add_subcommand("digits", "classify and separate two-digit composites");
  FlagSet dig_flags(digits);
  add_common(digits, dig_flags, df.out, df.mode);
  dig_flags.add("--data", "data", df.data, "digit CSV: label,v1,...,v256 per row");
  dig_flags.add_switch("--synthetic", "synthetic", df.synthetic,
                       "use random 30-dimensional class subspaces instead of a data file");
  dig_flags.add("--synthetic-seed", "synthetic_seed", df.synthetic_seed, "seed of the synthetic set");
  dig_flags.add("--k", "k", df.k, "principal components per class");
  dig_flags.add("--n", "n", df.n, "rows of the Bernoulli sensing matrix");
  dig_flags.add("--trials", "trials", df.trials, "number of composites");
  dig_flags.add("--seed", "seed", df.seed, "base seed");
  dig_flags.add("--jobs", "jobs", df.jobs, "parallel trials");
  dig_flags.add_alpha(df.alpha);
  dig_flags.add("--epsilon", "epsilon", df.epsilon, "relative residual tolerance");
  dig_flags.add("--eta", "eta", df.eta, "support-stationarity window");
  dig_flags.add("--max-iter", "max_iter", df.max_iter, "iteration cap");
  dig_flags.add("--delta-fraction", "delta_fraction", df.delta_fraction,
                "delta as a fraction of ||gamma||_inf");
  dig_flags.add("--delta", "delta", df.delta, "absolute delta (overrides the fraction)");
  dig_flags.add("--dump-images", "dump_images", df.dump_images, "directory for PGM dumps");
  dig_flags.add("--dump-limit", "dump_limit", df.dump_limit, "trials to dump (from trial 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  using namespace dantzig::cli;
  try {
    if (*solve) {
      return cmd_solve(merge_config("solve", solve_defaults(), config_path, solve_flags.given()));
    }
    if (*experiment) {
      return cmd_experiment(
          merge_config("experiment", experiment_defaults(), config_path, exp_flags.given()));
    }
    return cmd_digits(merge_config("digits", digits_defaults(), config_path, dig_flags.given()));
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const dantzig::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const dantzig::CountError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const dantzig::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const dantzig::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
