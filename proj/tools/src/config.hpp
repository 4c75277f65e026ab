#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace dantzig::cli {

using nlohmann::json;

/// Bad flags, unreadable or malformed inputs: exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Records which options were given on the command line so that only those override the
/// config file.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& flag, const std::string& key, T& target,
                   const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, target, help);
    collectors_.push_back([opt, &target, key](json& out) {
      if (opt->count() > 0) out[key] = target;
    });
    return opt;
  }

  CLI::Option* add_switch(const std::string& flag, const std::string& key, bool& target,
                          const std::string& help);

  /// `auto` or a positive number.
  CLI::Option* add_alpha(std::string& target);

  json given() const;

 private:
  CLI::App* app_;
  std::vector<std::function<void(json&)>> collectors_;
};

/// defaults ← config file (plain object or a manifest written by an earlier run) ← flags.
/// Unknown keys in the config file are rejected.
json merge_config(const std::string& command, const json& defaults,
                  const std::string& config_path, const json& flags);

/// --out, else the config's "out", else $DANTZIG_OUT_DIR, else the working directory.
std::filesystem::path output_dir(const json& config);

struct Manifest {
  std::string command;
  json config;
  std::vector<std::string> outputs;

  /// Comment block embedded at the top of every CSV written by the run.
  std::vector<std::string> csv_comments() const;
  void write(const std::filesystem::path& dir) const;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Accessors that turn type mismatches in the merged config into InputError.
double get_real(const json& cfg, const char* key);
long get_int(const json& cfg, const char* key);
std::string get_string(const json& cfg, const char* key);
bool get_bool(const json& cfg, const char* key);
bool is_set(const json& cfg, const char* key);

}  // namespace dantzig::cli
