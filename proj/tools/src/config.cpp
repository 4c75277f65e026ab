#include "config.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "dantzig/rng.hpp"

namespace dantzig::cli {

CLI::Option* FlagSet::add_switch(const std::string& flag, const std::string& key, bool& target,
                                 const std::string& help) {
  CLI::Option* opt = app_->add_flag(flag, target, help);
  collectors_.push_back([opt, &target, key](json& out) {
    if (opt->count() > 0) out[key] = target;
  });
  return opt;
}

CLI::Option* FlagSet::add_alpha(std::string& target) {
  CLI::Option* opt = app_->add_option("--alpha", target,
                                      "prox parameter alpha > 0, or 'auto' for the balanced "
                                      "choice ||A|| / ||gamma||_inf");
  opt->check([](const std::string& v) -> std::string {
    if (v == "auto") return {};
    try {
      std::size_t used = 0;
      const double a = std::stod(v, &used);
      if (used == v.size() && a > 0.0) return {};
    } catch (const std::exception&) {
    }
    return "alpha must be 'auto' or a positive number";
  });
  collectors_.push_back([opt, &target](json& out) {
    if (opt->count() == 0) return;
    if (target == "auto") {
      out["alpha"] = "auto";
    } else {
      out["alpha"] = std::stod(target);
    }
  });
  return opt;
}

json FlagSet::given() const {
  json out = json::object();
  for (const auto& c : collectors_) c(out);
  return out;
}

json merge_config(const std::string& command, const json& defaults,
                  const std::string& config_path, const json& flags) {
  json merged = defaults;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config file '" + config_path + "'");
    json file;
    try {
      in >> file;
    } catch (const json::exception& e) {
      throw InputError("config file '" + config_path + "': " + e.what());
    }
    if (!file.is_object()) throw InputError("config file must hold a JSON object");
    if (file.contains("command") && file.contains("config")) {
      if (file["command"] != command) {
        throw InputError("manifest '" + config_path + "' was written by '" +
                         file["command"].get<std::string>() + "', not '" + command + "'");
      }
      file = file["config"];
    }
    for (const auto& [key, value] : file.items()) {
      if (!defaults.contains(key)) {
        throw InputError("config file: unknown key '" + key + "' for '" + command + "'");
      }
      merged[key] = value;
    }
  }
  for (const auto& [key, value] : flags.items()) merged[key] = value;
  return merged;
}

std::filesystem::path output_dir(const json& config) {
  if (config.contains("out") && config["out"].is_string()) {
    return config["out"].get<std::string>();
  }
  if (const char* env = std::getenv("DANTZIG_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return std::filesystem::current_path();
}

std::vector<std::string> Manifest::csv_comments() const {
  json recorded = config;
  recorded.erase("out");
  return {"command: " + command, "config: " + recorded.dump(), "rng: " + std::string(kRngName),
          "version: " DANTZIG_VERSION, std::string("manifest: ") + kManifestName};
}

void Manifest::write(const std::filesystem::path& dir) const {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  json recorded = config;
  recorded.erase("out");
  const json m = {{"command", command}, {"config", recorded},   {"rng", kRngName},
                  {"version", DANTZIG_VERSION}, {"timestamp", stamp}, {"outputs", outputs}};
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kManifestName);
  if (!out) throw InputError("cannot write manifest in '" + dir.string() + "'");
  out << m.dump(2) << '\n';
}

namespace {

const json& entry(const json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg[key].is_null()) {
    throw InputError(std::string("missing required setting '") + key + "'");
  }
  return cfg[key];
}

}  // namespace

double get_real(const json& cfg, const char* key) {
  const json& v = entry(cfg, key);
  if (!v.is_number()) throw InputError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

long get_int(const json& cfg, const char* key) {
  const json& v = entry(cfg, key);
  if (!v.is_number_integer()) throw InputError(std::string("'") + key + "' must be an integer");
  return v.get<long>();
}

std::string get_string(const json& cfg, const char* key) {
  const json& v = entry(cfg, key);
  if (!v.is_string()) throw InputError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& cfg, const char* key) {
  const json& v = entry(cfg, key);
  if (!v.is_boolean()) throw InputError(std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

bool is_set(const json& cfg, const char* key) { return cfg.contains(key) && !cfg[key].is_null(); }

}  // namespace dantzig::cli
