#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace osw::cli {

using json = nlohmann::json;

// Invalid or unknown configuration entry; `key` names the offending entry.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// CSV table whose first line is '#' followed by compact JSON metadata.
struct Table {
    json metadata = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // Index of a column; throws std::out_of_range when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

std::string format_number(double v);

// Writes to a sibling temporary file, then renames over `path`.
void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);

// Validates a raw configuration and fills every default, so the returned
// document alone reproduces the run. Throws ConfigError.
json resolve_config(const json& raw);

// Runs a resolved configuration and returns its output table (metadata
// included). Does not touch the filesystem.
Table execute(const json& resolved, unsigned threads = 1);

struct RunOverrides {
    std::optional<std::string> output;
    std::optional<long long> seed;
    unsigned threads = 1;
};

// Reads, validates, executes and writes one job. Exit status: 0 on success,
// 1 for configuration errors, 2 for I/O failures. Diagnostics go to stderr.
int run(const std::filesystem::path& config_path, const RunOverrides& overrides = {});

enum class Verdict { pass, fail, not_run };
std::string_view to_string(Verdict v);

struct CriterionReport {
    std::string id;
    std::string title;
    Verdict verdict = Verdict::not_run;
    std::string detail;
};

// Evaluates the figure-reproduction criteria against the preset runs found in
// `results_dir` (file names as produced by the shipped preset configs).
std::vector<CriterionReport> compare_figures(const std::filesystem::path& results_dir);

std::string format_report(const std::vector<CriterionReport>& report);

}  // namespace osw::cli
