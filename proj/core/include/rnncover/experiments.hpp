#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnncover {

/// Raised for malformed config files, unknown keys, missing mandatory
/// keys and out-of-domain values; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value config. Lines starting with # and blank lines are
/// ignored; list values are comma-separated. Typed getters validate on
/// access and fall back to the given default when the key is absent.
struct ExperimentConfig {
    std::map<std::string, std::string> entries;

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& dflt) const;
    double get_real(const std::string& key, double dflt) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t dflt) const;
    std::vector<std::uint64_t> get_uint_list(const std::string& key,
                                             const std::string& dflt) const;
    std::vector<double> get_real_list(const std::string& key,
                                      const std::string& dflt) const;
    /// The mandatory master seed (key master_seed, or --seed override).
    std::uint64_t master_seed() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a over the sorted key=value entries. The threads key is
/// excluded so outputs hash identically across execution resources.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Rejects configs containing keys outside the allowlist.
void require_keys_known(const ExperimentConfig& cfg,
                        const std::vector<std::string>& allowed);

// Subcommand drivers. Each writes its artifact to out_path and returns
// the process exit code: 0 success, 1 certification failure. Config
// problems throw ConfigError (exit 2 at the CLI layer).
int run_bounds(const ExperimentConfig& cfg, const std::string& out_path);
int run_suite(const ExperimentConfig& cfg, const std::string& out_path);
int run_gap(const ExperimentConfig& cfg, const std::string& out_path);
int run_certify_cover(const ExperimentConfig& cfg,
                      const std::string& out_path);

} // namespace rnncover
