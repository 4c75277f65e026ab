#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dantzig/sensing.hpp"
#include "dantzig/solver.hpp"
#include "dantzig/types.hpp"

namespace dantzig {

inline constexpr int kDigitClasses = 10;
inline constexpr Index kDigitPixels = 256;
inline constexpr Index kDigitSide = 16;
inline constexpr Index kTrainPerClass = 998;
inline constexpr Index kTestPerClass = 102;
inline constexpr Index kExamplesPerClass = kTrainPerClass + kTestPerClass;

/// Images are columns of length 256 (16×16, row-major), grouped per class.
struct DigitDataset {
  std::array<RealMat, kDigitClasses> train;  ///< R[j], 256 × 998
  std::array<RealMat, kDigitClasses> test;   ///< T[j], 256 × 102
};

/// Reads `label,v1,...,v256` rows (label 0..9). Blank lines are skipped. Per class, the
/// first 998 rows in file order train and the remaining 102 test.
/// Throws FormatError (with the 1-based line number) on a malformed row and CountError if
/// some class does not have exactly 1100 rows.
DigitDataset load_usps(const std::filesystem::path& path);

/// Same validation and split for data already in memory; `images` holds one image per column.
DigitDataset split_dataset(std::span<const int> labels, const RealMat& images);

/// Stand-in for the USPS file: class j lives in a random `dim`-dimensional subspace, and
/// the coefficient on its i-th basis vector has standard deviation scale·decay^i, so the
/// spectrum of every R[j] decays geometrically and is exactly rank `dim`.
struct SyntheticDigitsSpec {
  Index dim = 30;
  double decay = 0.9;
  double scale = 100.0;
  std::uint64_t seed = 1;
};

DigitDataset synthetic_digits(const SyntheticDigitsSpec& spec);

struct PcaBlock {
  int label = 0;
  RealMat u_tilde;  ///< 256 × k, orthonormal columns by descending singular value

  Index k() const noexcept { return u_tilde.cols(); }
};

/// First k left singular vectors of R (no centering). Throws RankError if rank(R) < k and
/// std::invalid_argument unless 1 <= k <= rows(R).
PcaBlock pca_block(const RealMat& r, Index k, int label = 0);

std::vector<PcaBlock> train_blocks(const DigitDataset& data, Index k);

/// ‖(I − ŨŨ*)β̂‖₂.
double residual_score(const RealVec& beta_hat, const PcaBlock& block);

/// Indices of the two smallest scores, lower index first on ties. Throws DegenerateScores
/// if fewer than two scores are finite or every finite score is at most
/// kDegenerateScoreTol·‖β̂‖ (the blocks then explain everything and the ranking is noise).
inline constexpr double kDegenerateScoreTol = 1e-12;

std::pair<int, int> two_smallest(std::span<const double> scores, double beta_norm);

/// Step-4 classification of a known vector (used for the exact-β comparison).
std::pair<int, int> classify(const RealVec& beta, std::span<const PcaBlock> blocks);

struct DigitSolveOptions {
  SolverConfig solver{.alpha = 1.0, .epsilon = 1e-4, .eta = 20, .max_iter = 50000};
  /// Use balanced_alpha() instead of solver.alpha.
  bool balanced_alpha = true;
  /// δ = delta_fraction·‖γ‖∞ unless `delta` is set.
  double delta_fraction = 1e-3;
  std::optional<double> delta;
  ApplyMode mode = ApplyMode::MatrixFree;
};

struct SeparationResult {
  int j1 = 0;
  int j2 = 1;
  RealVec beta_hat;  ///< Bĉ from the full-dictionary solve
  RealVec component1;  ///< Ũ[j1]ĉ_{j1} from the reduced solve
  RealVec component2;
  std::vector<double> scores;
  long iterations = 0;  ///< both solves
};

/// Classifies the two classes present in y = Xβ and separates their components.
SeparationResult classify_and_separate(const RealVec& y, const SensingMatrix& x,
                                       std::span<const PcaBlock> blocks,
                                       const DigitSolveOptions& options = {});

struct DigitExperimentConfig {
  int trials = 1000;
  Index k = 30;
  std::uint64_t seed = 1;
  Index n = 128;
  int jobs = 1;
  DigitSolveOptions options;
};

struct DigitTrial {
  int trial = 0;
  int class1 = 0;  ///< true classes, class1 < class2
  int class2 = 1;
  Index index1 = 0;  ///< column in the class's test set
  Index index2 = 0;
  int j1 = 0;  ///< recovered pair, j1 < j2
  int j2 = 1;
  int exact_j1 = 0;  ///< pair from classifying the exact β
  int exact_j2 = 1;
  int correct = 0;  ///< labels of {j1, j2} in {class1, class2}
  int exact_correct = 0;
  double e_component1 = 0.0;  ///< relative error of β̂ for class1 (NaN if not recovered)
  double e_component2 = 0.0;
  long iterations = 0;
  double elapsed_seconds = 0.0;
  std::vector<double> scores;

  bool exact_pair() const noexcept { return correct == 2; }
  bool matches_or_exceeds() const noexcept { return correct >= exact_correct; }
};

struct DigitSummary {
  std::vector<DigitTrial> trials;
  double exact_pair_rate = 0.0;
  double match_or_exceed_rate = 0.0;
  double exact_beta_pair_rate = 0.0;
};

/// Per trial: two distinct classes and one test image of each, β = β1 + β2, a fresh
/// Bernoulli n × 256 X, y = Xβ (noiseless), then classify_and_separate.
DigitSummary run_digit_experiment(const DigitDataset& data, const DigitExperimentConfig& cfg);

/// Random ingredients of one trial; deterministic in (cfg.seed, trial).
struct DigitCase {
  int class1 = 0;
  int class2 = 1;
  Index index1 = 0;
  Index index2 = 0;
  RealVec beta1;
  RealVec beta2;
  SensingMatrix x;
  RealVec y;
};

DigitCase draw_digit_case(const DigitDataset& data, const DigitExperimentConfig& cfg, int trial);

/// One-trial version with explicit ingredients; `blocks` must hold one block per class.
DigitTrial run_digit_trial(const DigitDataset& data, std::span<const PcaBlock> blocks,
                           const DigitExperimentConfig& cfg, int trial);

/// Binary 16×16 PGM, linearly mapping [min, max] of the image to [0, 255].
void write_pgm(const std::filesystem::path& path, const RealVec& image);

}  // namespace dantzig
