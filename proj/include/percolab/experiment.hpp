#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace percolab {

/// Parsed experiment config: flat key-value text with [section] headers,
/// keys exposed as "section.key". Relative file references resolve against
/// the config file's directory.
struct ExperimentConfig {
    std::string kind;
    std::multimap<std::string, std::string> values;
    std::string path;
    std::string base_dir;

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    std::string resolve_path(const std::string& relative) const;
};

ExperimentConfig load_experiment_config(const std::string& path);

struct Diagnostic {
    std::string field;
    std::string message;
};

/// Pure validation; lists every problem, not just the first.
std::vector<Diagnostic> validate_experiment(const ExperimentConfig& config);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
};

/// Exit status: 0 success, 1 validation failure, 2 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

int run_experiment(const ExperimentConfig& config, const RunOverrides& overrides,
                   std::ostream& log);

}  // namespace percolab
