#pragma once

#include <string>

#include "config.hpp"
#include "dantzig/dictionary.hpp"

namespace dantzig::cli {

/// Comma-separated block list for signal length p, e.g. "identity,dft", "haar:5,dct",
/// "learned:basis.csv" (a p × k CSV with orthonormal columns).
Dictionary parse_dictionary_spec(const std::string& spec, Index p);

json solve_defaults();
json experiment_defaults();
json digits_defaults();

/// Each command writes its outputs and manifest under output_dir(cfg) and returns the
/// process exit code. Library exceptions propagate to main().
int cmd_solve(const json& cfg);
int cmd_experiment(const json& cfg);
int cmd_digits(const json& cfg);

}  // namespace dantzig::cli
