#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dantzig/solver.hpp"
#include "dantzig/types.hpp"

namespace dantzig {

/// One synthetic recovery/separation experiment at a single size index m and noise level.
///
///   id 1: p = 256m + 512, n = p/4,  s = ⌈n/9⌉, B = [Haar(level 5)  DCT], c ~ N(100, 15²)
///   id 2: p = 256m,       n = 64m,  s = ⌈n/9⌉, B = [I  DFT],  c = ±(1 + |N(0,1)|)
///   id 3: p = 1024,       n = 512,  s = 57,    B = [I  DFT],  β = sinusoid + spikes
struct ExperimentConfig {
  int id = 2;
  int m = 1;
  double sigma = 0.01;
  int trials = 50;
  std::uint64_t base_seed = 1;

  // Overrides; unset values take the per-experiment defaults.
  std::optional<double> epsilon;
  std::optional<int> eta;
  std::optional<double> delta;
  std::optional<double> alpha;
  long max_iter = 50000;

  ApplyMode mode = ApplyMode::MatrixFree;
  int jobs = 1;
};

struct ExperimentShape {
  Index p = 0;
  Index n = 0;
  Index s = 0;
};

/// Throws std::invalid_argument for an unknown id or m < 1.
ExperimentShape shape_of(int id, int m);

/// Fixed α for experiment 3. The smooth component's Fourier coefficients dwarf the spikes,
/// so the balanced choice would threshold every spike away.
inline constexpr double kExp3Alpha = 0.2;

/// Stopping parameters and α used for the experiment unless overridden.
SolverConfig solver_config_for(const ExperimentConfig& cfg);

/// True when α is picked per trial by balanced_alpha (experiments 1 and 2 without an
/// explicit override).
bool uses_balanced_alpha(const ExperimentConfig& cfg);

double delta_for(const ExperimentConfig& cfg, Index q);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  double e_beta = 0.0;
  double e_phi = 0.0;
  double e_psi = 0.0;  ///< NaN when the true component is zero
  long iterations = 0;
  StopReason stop_reason = StopReason::MaxIter;

  bool flagged() const noexcept { return stop_reason == StopReason::MaxIter; }
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and unbiased (n − 1) standard deviation; stddev is 0 for fewer than two values.
MetricStats summarize(std::span<const double> values);

/// Statistics over the unflagged trials; `flagged` counts trials that hit max_iter.
/// Component metrics skip trials where that component was identically zero.
struct AggregateStats {
  int count = 0;
  int flagged = 0;
  MetricStats time;
  MetricStats e_beta;
  MetricStats e_phi;
  MetricStats e_psi;
  MetricStats iterations;
};

AggregateStats aggregate(std::span<const TrialResult> trials);

struct ExperimentRun {
  ExperimentConfig config;
  ExperimentShape shape;
  std::vector<TrialResult> trials;
  AggregateStats stats;
};

/// Length-2p coefficients: uniform random support of size s, values N(100, 15²).
RealVec gen_exp1_coeffs(Index p, Index s, std::uint64_t seed);

/// Length-2p coefficients: uniform random support of size s, values λ(1 + |a|) with
/// λ = ±1 equiprobable and a ~ N(0, 1).
RealVec gen_exp2_coeffs(Index p, Index s, std::uint64_t seed);

struct Exp3Signal {
  RealVec beta;
  RealVec beta_phi;  ///< 30 sin(2πx/p) + sin(πx/2)
  RealVec beta_psi;  ///< s spikes with the same value law as gen_exp2_coeffs
};

Exp3Signal gen_exp3_signal(Index p, Index s, std::uint64_t seed);

/// ‖x − x̂‖₂ / ‖x‖₂. Throws DivisionByZero when x = 0.
template <typename Scalar>
double relative_error(const Vec<Scalar>& x, const Vec<Scalar>& x_hat);

TrialResult run_trial(const ExperimentConfig& cfg, int trial);

/// Runs cfg.trials independent trials (cfg.jobs worker threads); results are ordered by
/// trial index and do not depend on the number of workers.
ExperimentRun run_experiment(const ExperimentConfig& cfg);

}  // namespace dantzig
