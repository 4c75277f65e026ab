#include "dantzig/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dantzig/errors.hpp"
#include "dantzig/rng.hpp"
#include "parallel.hpp"

namespace dantzig {

namespace {

constexpr int kHaarLevels = 5;

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

void check_sparsity(Index p, Index s) {
  if (p < 1) throw DimensionError("signal length must be positive");
  if (s < 0 || s > 2 * p) throw DimensionError("sparsity must lie in [0, 2p]");
}

double signed_magnitude(Rng& rng) {
  const double sign = rng.coin() ? 1.0 : -1.0;
  return sign * (1.0 + std::abs(rng.normal()));
}

// A component can be identically zero when the whole support falls in the other block;
// its error is then undefined and recorded as NaN.
template <typename Scalar>
double component_error(const Vec<Scalar>& x, const Vec<Scalar>& x_hat) {
  if (x.norm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return relative_error<Scalar>(x, x_hat);
}

struct TrialSeeds {
  std::uint64_t sensing;
  std::uint64_t signal;
  std::uint64_t noise;
};

TrialSeeds seeds_for(std::uint64_t base, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  return {derive_seed(base, t, Stream::Sensing), derive_seed(base, t, Stream::Signal),
          derive_seed(base, t, Stream::Noise)};
}

template <SolverScalar Scalar>
Solution<Scalar> run_solver(const ExperimentConfig& cfg, Problem<Scalar> problem) {
  const auto pre = assemble<Scalar>(std::move(problem), AssemblyOptions{.mode = cfg.mode});
  SolverConfig sc = solver_config_for(cfg);
  if (uses_balanced_alpha(cfg)) sc.alpha = balanced_alpha(pre);
  return solve<Scalar>(pre, sc);
}

void fill(TrialResult& r, long iterations, StopReason reason, double elapsed) {
  r.iterations = iterations;
  r.stop_reason = reason;
  r.elapsed_seconds = elapsed;
}

TrialResult trial_exp1(const ExperimentConfig& cfg, const ExperimentShape& sh,
                       const TrialSeeds& seeds) {
  Dictionary b({TransformBlock::haar(sh.p, kHaarLevels), TransformBlock::dct(sh.p)});
  const RealVec c = gen_exp1_coeffs(sh.p, sh.s, seeds.signal);
  const RealVec beta_phi = b.component<double>(c, 0);
  const RealVec beta_psi = b.component<double>(c, 1);
  const RealVec beta = beta_phi + beta_psi;

  SensingMatrix x = gaussian_sensing(sh.n, sh.p, seeds.sensing);
  RealVec y = observe<double>(x, beta, NoiseSpec{cfg.sigma, seeds.noise});
  const double delta = delta_for(cfg, b.cols());
  const auto sol = run_solver<double>(cfg, Problem<double>{std::move(x), b, std::move(y), delta});

  const RealVec phi_hat = b.component<double>(sol.c_hat, 0);
  const RealVec psi_hat = b.component<double>(sol.c_hat, 1);
  TrialResult r;
  fill(r, sol.iterations, sol.stop_reason, sol.elapsed_seconds);
  r.e_beta = relative_error<double>(beta, phi_hat + psi_hat);
  r.e_phi = component_error<double>(beta_phi, phi_hat);
  r.e_psi = component_error<double>(beta_psi, psi_hat);
  return r;
}

TrialResult trial_exp2(const ExperimentConfig& cfg, const ExperimentShape& sh,
                       const TrialSeeds& seeds) {
  Dictionary b({TransformBlock::identity(sh.p), TransformBlock::dft(sh.p)});
  const ComplexVec c = gen_exp2_coeffs(sh.p, sh.s, seeds.signal).cast<Complex>();
  const ComplexVec beta_phi = b.component<Complex>(c, 0);
  const ComplexVec beta_psi = b.component<Complex>(c, 1);
  const ComplexVec beta = beta_phi + beta_psi;

  SensingMatrix x = gaussian_sensing(sh.n, sh.p, seeds.sensing);
  ComplexVec y = observe<Complex>(x, beta, NoiseSpec{cfg.sigma, seeds.noise});
  const double delta = delta_for(cfg, b.cols());
  const auto sol =
      run_solver<Complex>(cfg, Problem<Complex>{std::move(x), b, std::move(y), delta});

  const ComplexVec phi_hat = b.component<Complex>(sol.c_hat, 0);
  const ComplexVec psi_hat = b.component<Complex>(sol.c_hat, 1);
  TrialResult r;
  fill(r, sol.iterations, sol.stop_reason, sol.elapsed_seconds);
  r.e_beta = relative_error<Complex>(beta, phi_hat + psi_hat);
  r.e_phi = component_error<Complex>(beta_phi, phi_hat);
  r.e_psi = component_error<Complex>(beta_psi, psi_hat);
  return r;
}

// The smooth component lives in the DFT block (index 1), the spikes in the identity block.
TrialResult trial_exp3(const ExperimentConfig& cfg, const ExperimentShape& sh,
                       const TrialSeeds& seeds) {
  Dictionary b({TransformBlock::identity(sh.p), TransformBlock::dft(sh.p)});
  const Exp3Signal sig = gen_exp3_signal(sh.p, sh.s, seeds.signal);

  SensingMatrix x = gaussian_sensing(sh.n, sh.p, seeds.sensing);
  ComplexVec y =
      observe<double>(x, sig.beta, NoiseSpec{cfg.sigma, seeds.noise}).cast<Complex>();
  const double delta = delta_for(cfg, b.cols());
  const auto sol =
      run_solver<Complex>(cfg, Problem<Complex>{std::move(x), b, std::move(y), delta});

  const ComplexVec spikes_hat = b.component<Complex>(sol.c_hat, 0);
  const ComplexVec smooth_hat = b.component<Complex>(sol.c_hat, 1);
  TrialResult r;
  fill(r, sol.iterations, sol.stop_reason, sol.elapsed_seconds);
  r.e_beta = relative_error<Complex>(sig.beta.cast<Complex>(), spikes_hat + smooth_hat);
  r.e_phi = component_error<Complex>(sig.beta_phi.cast<Complex>(), smooth_hat);
  r.e_psi = component_error<Complex>(sig.beta_psi.cast<Complex>(), spikes_hat);
  return r;
}

}  // namespace

ExperimentShape shape_of(int id, int m) {
  if (m < 1) throw std::invalid_argument("experiment size index m must be positive");
  switch (id) {
    case 1: {
      const Index p = 256 * Index{m} + 512;
      const Index n = p / 4;
      return {p, n, ceil_div(n, 9)};
    }
    case 2: {
      const Index n = 64 * Index{m};
      return {256 * Index{m}, n, ceil_div(n, 9)};
    }
    case 3:
      return {1024, 512, 57};
    default:
      throw std::invalid_argument("experiment id must be 1, 2 or 3");
  }
}

SolverConfig solver_config_for(const ExperimentConfig& cfg) {
  SolverConfig sc;
  const bool low_noise = cfg.sigma <= 0.01;
  switch (cfg.id) {
    case 1:
      sc.epsilon = 1e-4;
      sc.eta = 20;
      break;
    case 2:
      sc.epsilon = 1e-4;
      sc.eta = low_noise ? 6 : 30;
      break;
    case 3:
      sc.epsilon = 1e-6;
      sc.eta = low_noise ? 6 : 30;
      sc.alpha = kExp3Alpha;
      break;
    default:
      throw std::invalid_argument("experiment id must be 1, 2 or 3");
  }
  if (cfg.epsilon) sc.epsilon = *cfg.epsilon;
  if (cfg.eta) sc.eta = *cfg.eta;
  if (cfg.alpha) sc.alpha = *cfg.alpha;
  sc.max_iter = cfg.max_iter;
  return sc;
}

bool uses_balanced_alpha(const ExperimentConfig& cfg) { return !cfg.alpha && cfg.id != 3; }

double delta_for(const ExperimentConfig& cfg, Index q) {
  return cfg.delta ? *cfg.delta : default_delta(cfg.sigma, q);
}

MetricStats summarize(std::span<const double> values) {
  MetricStats st;
  if (values.empty()) return st;
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return st;
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return st;
}

AggregateStats aggregate(std::span<const TrialResult> trials) {
  AggregateStats agg;
  std::vector<double> time, eb, ep, es, it;
  for (const auto& t : trials) {
    if (t.flagged()) {
      ++agg.flagged;
      continue;
    }
    time.push_back(t.elapsed_seconds);
    eb.push_back(t.e_beta);
    if (!std::isnan(t.e_phi)) ep.push_back(t.e_phi);
    if (!std::isnan(t.e_psi)) es.push_back(t.e_psi);
    it.push_back(static_cast<double>(t.iterations));
  }
  agg.count = static_cast<int>(time.size());
  agg.time = summarize(time);
  agg.e_beta = summarize(eb);
  agg.e_phi = summarize(ep);
  agg.e_psi = summarize(es);
  agg.iterations = summarize(it);
  return agg;
}

RealVec gen_exp1_coeffs(Index p, Index s, std::uint64_t seed) {
  check_sparsity(p, s);
  Rng rng(seed);
  RealVec c = RealVec::Zero(2 * p);
  for (std::size_t j : rng.sample_without_replacement(static_cast<std::size_t>(2 * p),
                                                      static_cast<std::size_t>(s))) {
    c[static_cast<Index>(j)] = rng.normal(100.0, 15.0);
  }
  return c;
}

RealVec gen_exp2_coeffs(Index p, Index s, std::uint64_t seed) {
  check_sparsity(p, s);
  Rng rng(seed);
  RealVec c = RealVec::Zero(2 * p);
  for (std::size_t j : rng.sample_without_replacement(static_cast<std::size_t>(2 * p),
                                                      static_cast<std::size_t>(s))) {
    c[static_cast<Index>(j)] = signed_magnitude(rng);
  }
  return c;
}

Exp3Signal gen_exp3_signal(Index p, Index s, std::uint64_t seed) {
  if (p < 1) throw DimensionError("signal length must be positive");
  if (s < 0 || s > p) throw DimensionError("spike count must lie in [0, p]");
  Exp3Signal sig;
  sig.beta_phi.resize(p);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index x = 0; x < p; ++x) {
    const double xd = static_cast<double>(x);
    sig.beta_phi[x] =
        30.0 * std::sin(two_pi * xd / static_cast<double>(p)) + std::sin(std::numbers::pi * xd / 2.0);
  }
  Rng rng(seed);
  sig.beta_psi = RealVec::Zero(p);
  for (std::size_t j :
       rng.sample_without_replacement(static_cast<std::size_t>(p), static_cast<std::size_t>(s))) {
    sig.beta_psi[static_cast<Index>(j)] = signed_magnitude(rng);
  }
  sig.beta = sig.beta_phi + sig.beta_psi;
  return sig;
}

template <typename Scalar>
double relative_error(const Vec<Scalar>& x, const Vec<Scalar>& x_hat) {
  if (x.size() != x_hat.size()) throw DimensionError("relative_error: length mismatch");
  const double denom = x.norm();
  if (denom == 0.0) throw DivisionByZero("relative_error: reference vector is zero");
  return (x - x_hat).norm() / denom;
}

template double relative_error<double>(const RealVec&, const RealVec&);
template double relative_error<Complex>(const ComplexVec&, const ComplexVec&);

TrialResult run_trial(const ExperimentConfig& cfg, int trial) {
  const ExperimentShape sh = shape_of(cfg.id, cfg.m);
  const TrialSeeds seeds = seeds_for(cfg.base_seed, trial);
  TrialResult r;
  switch (cfg.id) {
    case 1:
      r = trial_exp1(cfg, sh, seeds);
      break;
    case 2:
      r = trial_exp2(cfg, sh, seeds);
      break;
    default:
      r = trial_exp3(cfg, sh, seeds);
      break;
  }
  r.trial = trial;
  r.seed = seeds.signal;
  return r;
}

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 0) throw std::invalid_argument("trials must be nonnegative");
  if (!(cfg.sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  ExperimentRun run;
  run.config = cfg;
  run.shape = shape_of(cfg.id, cfg.m);
  run.trials.resize(static_cast<std::size_t>(cfg.trials));

  detail::parallel_for(cfg.trials, cfg.jobs, [&](int t) {
    run.trials[static_cast<std::size_t>(t)] = run_trial(cfg, t);
  });

  run.stats = aggregate(run.trials);
  return run;
}

}  // namespace dantzig
