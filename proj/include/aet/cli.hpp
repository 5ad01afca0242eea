#ifndef AET_CLI_HPP
#define AET_CLI_HPP

#include <map>
#include <string>

#include "json.hpp"

#include "aet/util.hpp"

namespace aet {

// A fully resolved experiment: one command plus canonical string parameters.
// The digest keys the result cache.
struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> kv;

    std::string canonical() const;
    std::string digest() const;        // 16 hex chars

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    long num(const std::string& key) const;
    long num_or(const std::string& key, long fallback) const;
    mpz_class big(const std::string& key) const;
    mpz_class big_or(const std::string& key, long fallback) const;
};

// Accepts a JSON object ({"command": ..., "poly": ...}) or flat
// key=value lines with a mandatory command=... entry.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Dispatches one experiment and returns its payload. Throws parse_error /
// budget_error / invariant_error; the frontend maps these to exit codes
// 2 / 3 / 4.
nlohmann::json run_command(const ExperimentConfig& cfg);

// Full record envelope: payload plus provenance.
struct RunResult {
    nlohmann::json record;
    bool cache_hit = false;
};

// Runs with the JSON-lines cache (one file per command under cache_dir,
// keyed by config digest). Empty cache_dir disables caching.
RunResult run_with_cache(const ExperimentConfig& cfg, const std::string& cache_dir);

extern const char* kToolkitVersion;

} // namespace aet

#endif
