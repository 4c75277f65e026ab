#include "dantzig/digits.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/SVD>

#include "dantzig/dictionary.hpp"
#include "dantzig/errors.hpp"
#include "dantzig/experiments.hpp"
#include "dantzig/rng.hpp"
#include "parallel.hpp"

namespace dantzig {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::size_t row) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw FormatError("not a finite number: '" + std::string(field) + "'", row);
  }
  return value;
}

int parse_label(std::string_view field, std::size_t row) {
  field = trim(field);
  int label = -1;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), label);
  if (ec != std::errc() || ptr != field.data() + field.size() || label < 0 ||
      label >= kDigitClasses) {
    throw FormatError("label must be an integer in 0..9, got '" + std::string(field) + "'",
                      row);
  }
  return label;
}

RealVec projector_residual(const RealVec& beta, const RealMat& u) {
  return beta - u * (u.transpose() * beta);
}

}  // namespace

DigitDataset split_dataset(std::span<const int> labels, const RealMat& images) {
  if (images.rows() != kDigitPixels) throw DimensionError("digit images must have 256 pixels");
  if (static_cast<Index>(labels.size()) != images.cols()) {
    throw DimensionError("one label per image required");
  }
  std::array<Index, kDigitClasses> counts{};
  for (int label : labels) {
    if (label < 0 || label >= kDigitClasses) throw FormatError("label out of range", 0);
    ++counts[static_cast<std::size_t>(label)];
  }
  for (int j = 0; j < kDigitClasses; ++j) {
    const Index c = counts[static_cast<std::size_t>(j)];
    if (c != kExamplesPerClass) {
      throw CountError("class " + std::to_string(j) + " has " + std::to_string(c) +
                       " examples, expected " + std::to_string(kExamplesPerClass));
    }
  }

  DigitDataset data;
  std::array<Index, kDigitClasses> seen{};
  for (int j = 0; j < kDigitClasses; ++j) {
    data.train[static_cast<std::size_t>(j)].resize(kDigitPixels, kTrainPerClass);
    data.test[static_cast<std::size_t>(j)].resize(kDigitPixels, kTestPerClass);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto j = static_cast<std::size_t>(labels[i]);
    const Index pos = seen[j]++;
    const auto col = images.col(static_cast<Index>(i));
    if (pos < kTrainPerClass) {
      data.train[j].col(pos) = col;
    } else {
      data.test[j].col(pos - kTrainPerClass) = col;
    }
  }
  return data;
}

DigitDataset load_usps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open digit file '" + path.string() + "'");

  std::vector<int> labels;
  std::vector<double> pixels;
  labels.reserve(kDigitClasses * kExamplesPerClass);
  pixels.reserve(static_cast<std::size_t>(kDigitClasses * kExamplesPerClass * kDigitPixels));

  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view token =
          view.substr(start, comma == std::string_view::npos ? view.size() - start
                                                             : comma - start);
      if (field == 0) {
        labels.push_back(parse_label(token, row));
      } else if (field <= static_cast<std::size_t>(kDigitPixels)) {
        pixels.push_back(parse_double(token, row));
      }
      ++field;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != static_cast<std::size_t>(kDigitPixels) + 1) {
      throw FormatError("expected a label and 256 pixel values, found " +
                        std::to_string(field) + " fields",
                        row);
    }
  }

  const Eigen::Map<const RealMat> images(pixels.data(), kDigitPixels,
                                         static_cast<Index>(labels.size()));
  return split_dataset(labels, images);
}

DigitDataset synthetic_digits(const SyntheticDigitsSpec& spec) {
  if (spec.dim < 1 || spec.dim > kDigitPixels) {
    throw std::invalid_argument("synthetic digits: subspace dimension must lie in 1..256");
  }
  if (!(spec.decay > 0.0) || !(spec.scale > 0.0)) {
    throw std::invalid_argument("synthetic digits: decay and scale must be positive");
  }
  DigitDataset data;
  for (int j = 0; j < kDigitClasses; ++j) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(j), Stream::Dataset));
    RealMat g(kDigitPixels, spec.dim);
    for (Index c = 0; c < g.cols(); ++c) {
      for (Index r = 0; r < g.rows(); ++r) g(r, c) = rng.normal();
    }
    const RealMat basis = Eigen::HouseholderQR<RealMat>(g).householderQ() *
                          RealMat::Identity(kDigitPixels, spec.dim);
    auto draw = [&](Index count) {
      RealMat coeffs(spec.dim, count);
      for (Index c = 0; c < count; ++c) {
        double sd = spec.scale;
        for (Index i = 0; i < spec.dim; ++i, sd *= spec.decay) coeffs(i, c) = sd * rng.normal();
      }
      return RealMat(basis * coeffs);
    };
    data.train[static_cast<std::size_t>(j)] = draw(kTrainPerClass);
    data.test[static_cast<std::size_t>(j)] = draw(kTestPerClass);
  }
  return data;
}

PcaBlock pca_block(const RealMat& r, Index k, int label) {
  if (k < 1 || k > r.rows()) {
    throw std::invalid_argument("pca_block: k must lie in 1.." + std::to_string(r.rows()));
  }
  Eigen::BDCSVD<RealMat> svd(r, Eigen::ComputeThinU);
  const RealVec& sv = svd.singularValues();
  const double tol = std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(r.rows(), r.cols())) *
                     (sv.size() > 0 ? sv[0] : 0.0);
  if (sv.size() < k || !(sv[k - 1] > tol)) {
    throw RankError("pca_block: training matrix has rank below k = " + std::to_string(k));
  }
  return PcaBlock{label, svd.matrixU().leftCols(k)};
}

std::vector<PcaBlock> train_blocks(const DigitDataset& data, Index k) {
  std::vector<PcaBlock> blocks;
  blocks.reserve(kDigitClasses);
  for (int j = 0; j < kDigitClasses; ++j) {
    blocks.push_back(pca_block(data.train[static_cast<std::size_t>(j)], k, j));
  }
  return blocks;
}

double residual_score(const RealVec& beta_hat, const PcaBlock& block) {
  if (beta_hat.size() != block.u_tilde.rows()) {
    throw DimensionError("residual_score: vector length does not match the block");
  }
  return projector_residual(beta_hat, block.u_tilde).norm();
}

std::pair<int, int> two_smallest(std::span<const double> scores, double beta_norm) {
  int first = -1;
  int second = -1;
  double largest = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!std::isfinite(s)) continue;
    largest = std::max(largest, s);
    const int idx = static_cast<int>(i);
    // Strict comparisons keep the earlier (lower) index on ties.
    if (first < 0 || s < scores[static_cast<std::size_t>(first)]) {
      second = first;
      first = idx;
    } else if (second < 0 || s < scores[static_cast<std::size_t>(second)]) {
      second = idx;
    }
  }
  if (second < 0) throw DegenerateScores("fewer than two finite residual scores");
  if (largest <= kDegenerateScoreTol * beta_norm) {
    throw DegenerateScores("every block explains the estimate; residual scores carry no ranking");
  }
  return {std::min(first, second), std::max(first, second)};
}

std::pair<int, int> classify(const RealVec& beta, std::span<const PcaBlock> blocks) {
  std::vector<double> scores;
  scores.reserve(blocks.size());
  for (const auto& b : blocks) scores.push_back(residual_score(beta, b));
  return two_smallest(scores, beta.norm());
}

namespace {

Solution<double> dantzig_solve(const RealVec& y, const SensingMatrix& x, Dictionary dictionary,
                               const DigitSolveOptions& options) {
  auto pre = assemble<double>(Problem<double>{x, std::move(dictionary), y, 0.0},
                              AssemblyOptions{.mode = options.mode});
  const double delta =
      options.delta ? *options.delta : options.delta_fraction * pre.gamma().cwiseAbs().maxCoeff();
  pre = pre.with_delta(delta);
  SolverConfig sc = options.solver;
  if (options.balanced_alpha) sc.alpha = balanced_alpha(pre);
  return solve<double>(pre, sc);
}

}  // namespace

SeparationResult classify_and_separate(const RealVec& y, const SensingMatrix& x,
                                       std::span<const PcaBlock> blocks,
                                       const DigitSolveOptions& options) {
  if (blocks.size() < 2) throw DimensionError("classify_and_separate: need at least two blocks");

  std::vector<TransformBlock> full;
  full.reserve(blocks.size());
  for (const auto& b : blocks) full.push_back(TransformBlock::learned(b.u_tilde));
  const Dictionary dict(std::move(full));

  SeparationResult out;
  const auto first = dantzig_solve(y, x, dict, options);
  out.beta_hat = dict.apply<double>(first.c_hat);
  out.scores.reserve(blocks.size());
  for (const auto& b : blocks) out.scores.push_back(residual_score(out.beta_hat, b));
  std::tie(out.j1, out.j2) = two_smallest(out.scores, out.beta_hat.norm());

  const auto& u1 = blocks[static_cast<std::size_t>(out.j1)].u_tilde;
  const auto& u2 = blocks[static_cast<std::size_t>(out.j2)].u_tilde;
  const Dictionary reduced({TransformBlock::learned(u1), TransformBlock::learned(u2)});
  const auto second = dantzig_solve(y, x, reduced, options);
  out.component1 = u1 * second.c_hat.head(u1.cols());
  out.component2 = u2 * second.c_hat.tail(u2.cols());
  out.iterations = first.iterations + second.iterations;
  return out;
}

DigitCase draw_digit_case(const DigitDataset& data, const DigitExperimentConfig& cfg, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  Rng rng(derive_seed(cfg.seed, t, Stream::Selection));
  const auto classes = rng.sample_without_replacement(kDigitClasses, 2);
  DigitCase dc;
  dc.class1 = static_cast<int>(std::min(classes[0], classes[1]));
  dc.class2 = static_cast<int>(std::max(classes[0], classes[1]));
  const auto& t1 = data.test[static_cast<std::size_t>(dc.class1)];
  const auto& t2 = data.test[static_cast<std::size_t>(dc.class2)];
  dc.index1 = static_cast<Index>(rng.below(static_cast<std::uint64_t>(t1.cols())));
  dc.index2 = static_cast<Index>(rng.below(static_cast<std::uint64_t>(t2.cols())));
  dc.beta1 = t1.col(dc.index1);
  dc.beta2 = t2.col(dc.index2);
  dc.x = bernoulli_sensing(cfg.n, kDigitPixels, derive_seed(cfg.seed, t, Stream::Sensing));
  dc.y = observe<double>(dc.x, RealVec(dc.beta1 + dc.beta2), NoiseSpec{});
  return dc;
}

namespace {

int count_correct(int j1, int j2, int c1, int c2) {
  return static_cast<int>(j1 == c1 || j1 == c2) + static_cast<int>(j2 == c1 || j2 == c2);
}

double component_error(const RealVec& truth, const RealVec& estimate) {
  const double norm = truth.norm();
  if (norm == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (truth - estimate).norm() / norm;
}

}  // namespace

DigitTrial run_digit_trial(const DigitDataset& data, std::span<const PcaBlock> blocks,
                           const DigitExperimentConfig& cfg, int trial) {
  if (blocks.size() != static_cast<std::size_t>(kDigitClasses)) {
    throw DimensionError("run_digit_trial: one block per class required");
  }
  const DigitCase dc = draw_digit_case(data, cfg, trial);
  DigitTrial r;
  r.trial = trial;
  r.class1 = dc.class1;
  r.class2 = dc.class2;
  r.index1 = dc.index1;
  r.index2 = dc.index2;

  const RealVec beta = dc.beta1 + dc.beta2;
  std::tie(r.exact_j1, r.exact_j2) = classify(beta, blocks);
  r.exact_correct = count_correct(r.exact_j1, r.exact_j2, r.class1, r.class2);

  const auto start = std::chrono::steady_clock::now();
  const SeparationResult sep = classify_and_separate(dc.y, dc.x, blocks, cfg.options);
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.j1 = sep.j1;
  r.j2 = sep.j2;
  r.scores = sep.scores;
  r.iterations = sep.iterations;
  r.correct = count_correct(r.j1, r.j2, r.class1, r.class2);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.e_component1 = nan;
  r.e_component2 = nan;
  if (r.exact_pair()) {
    // j1 < j2 and class1 < class2, so an exact pair lines up component-wise.
    r.e_component1 = component_error(dc.beta1, sep.component1);
    r.e_component2 = component_error(dc.beta2, sep.component2);
  }
  return r;
}

DigitSummary run_digit_experiment(const DigitDataset& data, const DigitExperimentConfig& cfg) {
  if (cfg.trials < 0) throw std::invalid_argument("trials must be nonnegative");
  DigitSummary summary;
  if (cfg.trials == 0) return summary;

  const auto blocks = train_blocks(data, cfg.k);
  summary.trials.resize(static_cast<std::size_t>(cfg.trials));
  detail::parallel_for(cfg.trials, cfg.jobs, [&](int t) {
    summary.trials[static_cast<std::size_t>(t)] = run_digit_trial(data, blocks, cfg, t);
  });

  int pair = 0;
  int match = 0;
  int exact = 0;
  for (const auto& t : summary.trials) {
    pair += t.exact_pair() ? 1 : 0;
    match += t.matches_or_exceeds() ? 1 : 0;
    exact += t.exact_correct == 2 ? 1 : 0;
  }
  const double n = static_cast<double>(cfg.trials);
  summary.exact_pair_rate = pair / n;
  summary.match_or_exceed_rate = match / n;
  summary.exact_beta_pair_rate = exact / n;
  return summary;
}

void write_pgm(const std::filesystem::path& path, const RealVec& image) {
  if (image.size() != kDigitSide * kDigitSide) {
    throw DimensionError("write_pgm: expected a 16x16 image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  const double lo = image.minCoeff();
  const double span = image.maxCoeff() - lo;
  out << "P5\n" << kDigitSide << ' ' << kDigitSide << "\n255\n";
  for (Index i = 0; i < image.size(); ++i) {
    const double v = span > 0.0 ? (image[i] - lo) / span : 0.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
  }
}

}  // namespace dantzig
