#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include "dantzig/digits.hpp"
#include "dantzig/errors.hpp"
#include "dantzig/experiments.hpp"
#include "dantzig/io.hpp"
#include "dantzig/sensing.hpp"
#include "dantzig/solver.hpp"

namespace dantzig::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

ApplyMode parse_mode(const std::string& mode) {
  if (mode == "matrix-free") return ApplyMode::MatrixFree;
  if (mode == "dense") return ApplyMode::Dense;
  throw InputError("mode must be 'matrix-free' or 'dense', got '" + mode + "'");
}

std::string num(double v) { return format_real(v); }

// Outputs go through here so the manifest lists them in write order.
struct Outputs {
  std::filesystem::path dir;
  Manifest manifest;

  void csv(const std::string& name, CsvTable table) {
    auto comments = manifest.csv_comments();
    comments.insert(comments.end(), table.comments.begin(), table.comments.end());
    table.comments = std::move(comments);
    write_csv(dir / name, table);
    manifest.outputs.push_back(name);
  }

  void finish() { manifest.write(dir); }
};

}  // namespace

Dictionary parse_dictionary_spec(const std::string& spec, Index p) {
  std::vector<TransformBlock> blocks;
  for (const auto& raw : split(spec, ',')) {
    const auto colon = raw.find(':');
    const std::string name = raw.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : raw.substr(colon + 1);
    if (name == "identity" && arg.empty()) {
      blocks.push_back(TransformBlock::identity(p));
    } else if (name == "dft" && arg.empty()) {
      blocks.push_back(TransformBlock::dft(p));
    } else if (name == "dct" && arg.empty()) {
      blocks.push_back(TransformBlock::dct(p));
    } else if (name == "haar") {
      int levels = 0;
      try {
        std::size_t used = 0;
        levels = std::stoi(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
      } catch (const std::exception&) {
        throw InputError("haar needs an integer level, e.g. 'haar:5'");
      }
      blocks.push_back(TransformBlock::haar(p, levels));
    } else if (name == "learned" && !arg.empty()) {
      RealMat u = read_real_matrix_csv(arg);
      if (u.rows() != p) {
        throw InputError("learned block '" + arg + "' has " + std::to_string(u.rows()) +
                         " rows, expected " + std::to_string(p));
      }
      blocks.push_back(TransformBlock::learned(std::move(u)));
    } else {
      throw InputError("unknown dictionary block '" + raw +
                       "' (use identity, dft, dct, haar:L, learned:PATH)");
    }
  }
  if (blocks.empty()) throw InputError("empty dictionary specification");
  return Dictionary(std::move(blocks));
}

// ---------------------------------------------------------------------------------------
// solve

json solve_defaults() {
  return {{"x", nullptr},        {"dict", "identity"}, {"y", nullptr},
          {"delta", nullptr},    {"sigma", nullptr},   {"alpha", 1.0},
          {"epsilon", 1e-4},     {"eta", 20},          {"max_iter", 50000},
          {"trace", false},      {"mode", "matrix-free"}, {"out", nullptr}};
}

namespace {

template <SolverScalar Scalar>
int solve_as(const json& cfg, SensingMatrix x, Dictionary dict, Vec<Scalar> y) {
  const Index q = dict.cols();
  double delta = 0.0;
  if (is_set(cfg, "delta")) {
    delta = get_real(cfg, "delta");
  } else if (is_set(cfg, "sigma")) {
    delta = default_delta(get_real(cfg, "sigma"), q);
  }
  if (!(delta >= 0.0)) throw InputError("delta must be nonnegative");

  const auto pre = assemble<Scalar>(Problem<Scalar>{std::move(x), std::move(dict), std::move(y), delta},
                                    AssemblyOptions{.mode = parse_mode(get_string(cfg, "mode"))});
  SolverConfig sc;
  if (cfg["alpha"].is_string()) {
    if (cfg["alpha"] != "auto") throw InputError("alpha must be 'auto' or a positive number");
    sc.alpha = balanced_alpha(pre);
  } else {
    sc.alpha = get_real(cfg, "alpha");
    if (!(sc.alpha > 0.0)) throw InputError("alpha must be positive");
  }
  sc.epsilon = get_real(cfg, "epsilon");
  sc.eta = static_cast<int>(get_int(cfg, "eta"));
  sc.max_iter = get_int(cfg, "max_iter");
  if (!(sc.epsilon > 0.0) || sc.eta < 1 || sc.max_iter < 1) {
    throw InputError("epsilon, eta and max_iter must be positive");
  }

  Outputs out{output_dir(cfg), Manifest{"solve", cfg, {}}};
  std::filesystem::create_directories(out.dir);
  std::ofstream trace;
  if (get_bool(cfg, "trace")) {
    trace.open(out.dir / "trace.csv");
    if (!trace) throw InputError("cannot write trace file in '" + out.dir.string() + "'");
    sc.trace = &trace;
    out.manifest.outputs.push_back("trace.csv");
  }

  const Solution<Scalar> sol = solve<Scalar>(pre, sc);

  out.csv("c_raw.csv", vector_table<Scalar>(sol.c_raw));
  out.csv("c_hat.csv", vector_table<Scalar>(sol.c_hat));
  CsvTable support;
  support.header = {"index"};
  for (Index i : sol.support) support.add_row({std::to_string(i)});
  out.csv("support.csv", std::move(support));
  CsvTable summary;
  summary.header = {"stop_reason", "iterations", "residual", "delta", "alpha", "support_size",
                    "elapsed_seconds"};
  summary.add_row({to_string(sol.stop_reason), std::to_string(sol.iterations), num(sol.residual),
                   num(delta), num(sc.alpha), std::to_string(sol.support.size()),
                   num(sol.elapsed_seconds)});
  out.csv("solution.csv", std::move(summary));
  out.finish();

  std::cout << "stop_reason=" << to_string(sol.stop_reason) << " iterations=" << sol.iterations
            << " support=" << sol.support.size() << " -> " << out.dir.string() << '\n';
  return 0;
}

}  // namespace

int cmd_solve(const json& cfg) {
  const std::string x_path = get_string(cfg, "x");
  const std::string y_path = get_string(cfg, "y");
  if (!std::filesystem::exists(x_path)) throw InputError("X file not found: " + x_path);
  if (!std::filesystem::exists(y_path)) throw InputError("y file not found: " + y_path);

  SensingMatrix x = custom_sensing(read_real_matrix_csv(x_path));
  const VectorFile y = read_vector_csv(y_path);
  if (y.values.size() != x.rows()) {
    throw InputError("y has " + std::to_string(y.values.size()) + " entries but X has " +
                     std::to_string(x.rows()) + " rows");
  }
  Dictionary dict = parse_dictionary_spec(get_string(cfg, "dict"), x.cols());
  if (dict.is_real() && !y.complex) {
    return solve_as<double>(cfg, std::move(x), std::move(dict), RealVec(y.values.real()));
  }
  return solve_as<Complex>(cfg, std::move(x), std::move(dict), y.values);
}

// ---------------------------------------------------------------------------------------
// experiment

json experiment_defaults() {
  return {{"id", 2},         {"m", json::array({1})}, {"sigma", 0.01},     {"trials", 50},
          {"seed", 1},       {"epsilon", nullptr},    {"eta", nullptr},    {"delta", nullptr},
          {"alpha", nullptr}, {"max_iter", 50000},    {"mode", "matrix-free"},
          {"jobs", 1},       {"out", nullptr}};
}

int cmd_experiment(const json& cfg) {
  ExperimentConfig base;
  base.id = static_cast<int>(get_int(cfg, "id"));
  base.sigma = get_real(cfg, "sigma");
  base.trials = static_cast<int>(get_int(cfg, "trials"));
  base.base_seed = static_cast<std::uint64_t>(get_int(cfg, "seed"));
  base.max_iter = get_int(cfg, "max_iter");
  base.mode = parse_mode(get_string(cfg, "mode"));
  base.jobs = static_cast<int>(get_int(cfg, "jobs"));
  if (is_set(cfg, "epsilon")) base.epsilon = get_real(cfg, "epsilon");
  if (is_set(cfg, "eta")) base.eta = static_cast<int>(get_int(cfg, "eta"));
  if (is_set(cfg, "delta")) base.delta = get_real(cfg, "delta");
  if (is_set(cfg, "alpha") && !(cfg["alpha"].is_string() && cfg["alpha"] == "auto")) {
    base.alpha = get_real(cfg, "alpha");
  }
  if (base.id < 1 || base.id > 3) throw InputError("--id must be 1, 2 or 3");
  if (!(base.sigma >= 0.0)) throw InputError("--sigma must be nonnegative");
  if (base.trials < 0) throw InputError("--trials must be nonnegative");
  if (base.jobs < 1) throw InputError("--jobs must be positive");
  if (base.alpha && !(*base.alpha > 0.0)) throw InputError("--alpha must be positive");

  std::vector<int> ms;
  const json& mj = cfg["m"];
  for (const auto& v : mj.is_array() ? mj : json::array({mj})) {
    if (!v.is_number_integer() || v.get<int>() < 1) throw InputError("--m values must be >= 1");
    ms.push_back(v.get<int>());
  }
  if (ms.empty()) throw InputError("--m needs at least one value");

  Outputs out{output_dir(cfg), Manifest{"experiment", cfg, {}}};

  CsvTable trials;
  trials.header = {"m",     "trial",  "seed",       "elapsed_seconds", "E_beta",
                   "E_phi", "E_psi",  "iterations", "stop_reason",     "flagged"};
  CsvTable summary;
  summary.header = {"m",          "p",          "n",          "s",          "trials",
                    "flagged",    "time_mean",  "time_std",   "E_beta_mean", "E_beta_std",
                    "E_phi_mean", "E_phi_std",  "E_psi_mean", "E_psi_std",  "iterations_mean"};
  CsvTable plot;
  plot.header = {"m", "time_mean", "time_std"};

  for (int m : ms) {
    ExperimentConfig ec = base;
    ec.m = m;
    const ExperimentRun run = run_experiment(ec);
    for (const auto& t : run.trials) {
      trials.add_row({std::to_string(m), std::to_string(t.trial), std::to_string(t.seed),
                      num(t.elapsed_seconds), num(t.e_beta), num(t.e_phi), num(t.e_psi),
                      std::to_string(t.iterations), to_string(t.stop_reason),
                      t.flagged() ? "1" : "0"});
    }
    const auto& st = run.stats;
    summary.add_row({std::to_string(m), std::to_string(run.shape.p), std::to_string(run.shape.n),
                     std::to_string(run.shape.s), std::to_string(st.count),
                     std::to_string(st.flagged), num(st.time.mean), num(st.time.stddev),
                     num(st.e_beta.mean), num(st.e_beta.stddev), num(st.e_phi.mean),
                     num(st.e_phi.stddev), num(st.e_psi.mean), num(st.e_psi.stddev),
                     num(st.iterations.mean)});
    plot.add_row({std::to_string(m), num(st.time.mean), num(st.time.stddev)});
    std::cout << "experiment " << ec.id << " m=" << m << " sigma=" << ec.sigma
              << ": E_phi=" << st.e_phi.mean << " E_psi=" << st.e_psi.mean
              << " E_beta=" << st.e_beta.mean << " time=" << st.time.mean << "s"
              << " flagged=" << st.flagged << '\n';
  }

  out.csv("trials.csv", std::move(trials));
  out.csv("summary.csv", std::move(summary));
  out.csv("plot.csv", std::move(plot));
  out.finish();
  return 0;
}

// ---------------------------------------------------------------------------------------
// digits

json digits_defaults() {
  return {{"data", nullptr},     {"synthetic", false}, {"synthetic_seed", 1},
          {"k", 30},             {"trials", 1000},     {"seed", 1},
          {"n", 128},            {"jobs", 1},          {"alpha", "auto"},
          {"epsilon", 1e-4},     {"eta", 20},          {"max_iter", 50000},
          {"delta_fraction", 1e-3}, {"delta", nullptr}, {"mode", "matrix-free"},
          {"dump_images", nullptr}, {"dump_limit", 10}, {"out", nullptr}};
}

namespace {

void dump_trial(const std::filesystem::path& dir, const DigitDataset& data,
                std::span<const PcaBlock> blocks, const DigitExperimentConfig& dc, int trial) {
  const DigitCase c = draw_digit_case(data, dc, trial);
  const SeparationResult sep = classify_and_separate(c.y, c.x, blocks, dc.options);
  std::filesystem::create_directories(dir);
  const std::string stem = "trial" + std::to_string(trial) + "_";
  write_pgm(dir / (stem + "beta.pgm"), RealVec(c.beta1 + c.beta2));
  write_pgm(dir / (stem + "beta1.pgm"), c.beta1);
  write_pgm(dir / (stem + "beta2.pgm"), c.beta2);
  write_pgm(dir / (stem + "beta_hat.pgm"), sep.beta_hat);
  write_pgm(dir / (stem + "component_j1.pgm"), sep.component1);
  write_pgm(dir / (stem + "component_j2.pgm"), sep.component2);
}

}  // namespace

int cmd_digits(const json& cfg) {
  DigitExperimentConfig dc;
  dc.trials = static_cast<int>(get_int(cfg, "trials"));
  dc.k = get_int(cfg, "k");
  dc.seed = static_cast<std::uint64_t>(get_int(cfg, "seed"));
  dc.n = get_int(cfg, "n");
  dc.jobs = static_cast<int>(get_int(cfg, "jobs"));
  if (dc.k < 1 || dc.k > kDigitPixels) throw InputError("--k must lie in 1..256");
  if (dc.n < 1 || dc.n > kDigitPixels) throw InputError("--n must lie in 1..256");
  if (dc.trials < 0) throw InputError("--trials must be nonnegative");
  if (dc.jobs < 1) throw InputError("--jobs must be positive");

  auto& o = dc.options;
  if (cfg["alpha"].is_string()) {
    if (cfg["alpha"] != "auto") throw InputError("alpha must be 'auto' or a positive number");
    o.balanced_alpha = true;
  } else {
    o.balanced_alpha = false;
    o.solver.alpha = get_real(cfg, "alpha");
    if (!(o.solver.alpha > 0.0)) throw InputError("alpha must be positive");
  }
  o.solver.epsilon = get_real(cfg, "epsilon");
  o.solver.eta = static_cast<int>(get_int(cfg, "eta"));
  o.solver.max_iter = get_int(cfg, "max_iter");
  o.delta_fraction = get_real(cfg, "delta_fraction");
  if (is_set(cfg, "delta")) o.delta = get_real(cfg, "delta");
  o.mode = parse_mode(get_string(cfg, "mode"));

  DigitDataset data;
  if (get_bool(cfg, "synthetic")) {
    data = synthetic_digits(
        SyntheticDigitsSpec{.seed = static_cast<std::uint64_t>(get_int(cfg, "synthetic_seed"))});
  } else {
    if (!is_set(cfg, "data")) throw InputError("--data PATH or --synthetic is required");
    const std::string path = get_string(cfg, "data");
    if (!std::filesystem::exists(path)) throw InputError("data file not found: " + path);
    data = load_usps(path);
  }

  const DigitSummary summary = run_digit_experiment(data, dc);

  Outputs out{output_dir(cfg), Manifest{"digits", cfg, {}}};
  CsvTable trials;
  trials.header = {"trial",   "class1",  "class2",        "index1",        "index2",
                   "j1",      "j2",      "exact_j1",      "exact_j2",      "correct",
                   "exact_correct", "exact_pair", "match_or_exceed", "E_component1",
                   "E_component2",  "iterations", "elapsed_seconds"};
  for (int j = 0; j < kDigitClasses; ++j) trials.header.push_back("score" + std::to_string(j));
  for (const auto& t : summary.trials) {
    std::vector<std::string> row = {
        std::to_string(t.trial),    std::to_string(t.class1),   std::to_string(t.class2),
        std::to_string(t.index1),   std::to_string(t.index2),   std::to_string(t.j1),
        std::to_string(t.j2),       std::to_string(t.exact_j1), std::to_string(t.exact_j2),
        std::to_string(t.correct),  std::to_string(t.exact_correct),
        t.exact_pair() ? "1" : "0", t.matches_or_exceeds() ? "1" : "0",
        num(t.e_component1),        num(t.e_component2),        std::to_string(t.iterations),
        num(t.elapsed_seconds)};
    for (double s : t.scores) row.push_back(num(s));
    trials.add_row(std::move(row));
  }
  out.csv("digits_trials.csv", std::move(trials));

  CsvTable agg;
  agg.header = {"trials", "k", "exact_pair_rate", "match_or_exceed_rate", "exact_beta_pair_rate"};
  agg.add_row({std::to_string(dc.trials), std::to_string(dc.k), num(summary.exact_pair_rate),
               num(summary.match_or_exceed_rate), num(summary.exact_beta_pair_rate)});
  out.csv("digits_summary.csv", std::move(agg));

  if (is_set(cfg, "dump_images")) {
    const std::filesystem::path dir = get_string(cfg, "dump_images");
    const auto blocks = train_blocks(data, dc.k);
    const long limit = std::min<long>(get_int(cfg, "dump_limit"), dc.trials);
    for (int t = 0; t < limit; ++t) dump_trial(dir, data, blocks, dc, t);
  }
  out.finish();

  std::cout << "digits: trials=" << dc.trials << " k=" << dc.k
            << " exact_pair_rate=" << summary.exact_pair_rate
            << " match_or_exceed_rate=" << summary.match_or_exceed_rate << '\n';
  return 0;
}

}  // namespace dantzig::cli
