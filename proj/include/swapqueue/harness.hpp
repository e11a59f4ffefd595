#pragma once

// Scenario runner behind the swapqueue-sim CLI: configuration files, CSV
// output, and the six named scenarios.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swapqueue/core_model.hpp"
#include "swapqueue/dynamics.hpp"

namespace swapqueue {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration line. `line()` is 1-based.
class ConfigParseError : public ConfigError {
public:
    ConfigParseError(std::size_t line, std::string key, const std::string& what)
        : ConfigError(std::move(key), "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const CsvTable&) const = default;
};

/// Decimal notation (never exponent form) with 12 significant digits.
std::string format_number(double value);
std::string format_int(std::int64_t value);

/// RFC-4180 style text: header first, LF line endings, fields quoted only
/// when they contain a comma, quote, CR or LF.
std::string to_csv(const CsvTable& table);
/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
CsvTable parse_csv(std::string_view text);

/// Writes to_csv(table) to `path`. Throws IoError.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);
/// Throws IoError if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Configuration

struct HarnessConfig {
    RepeaterConfig repeater;
    PolicySpec policy;
};

/// Parses `key = value` lines ('#' starts a comment). Missing keys keep their
/// defaults; unknown or repeated keys are errors. Relative
/// `arrival_probs_file` paths resolve against `base_dir`.
HarnessConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir = {});
/// Reads and parses a config file. Throws IoError if it cannot be read.
HarnessConfig parse_config(const std::filesystem::path& path);

/// Reads an N x N probability matrix written as CSV (no header).
RateMatrix read_probability_matrix(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Scenarios

enum class ScenarioName { Fig3a, Fig3b, Fig4a, Fig4b, Stability, Compare };

std::string_view to_string(ScenarioName name) noexcept;
/// Throws ConfigError("scenario") for unknown names.
ScenarioName parse_scenario_name(std::string_view name);

struct LinearGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    /// start, start + step, ..., stop (inclusive when stop is on the lattice).
    std::vector<double> points() const;
};

/// Decades [first_decade, last_decade] sampled at `points_per_decade`.
struct LogGrid {
    int first_decade = 0;
    int last_decade = 8;
    int points_per_decade = 25;

    std::vector<double> points() const;
};

/// Operating point of the analytic delay/rate curves.
struct CurveParameters {
    std::size_t n = 5;
    std::int64_t losses = 1;           // 0.2 N lost outputs
    double beta_complete = 0.78;       // complete and perfect sets
    double beta_noncomplete = 0.64;
    double c1 = 0.7;
    double h = 0.2;
    double period = 1.0;
    double gamma = 0.2;

    double f() const;
};

struct ScenarioSpec {
    ScenarioName name = ScenarioName::Fig3a;
    LinearGrid period_grid{1.0, 10.0, 0.25};
    LinearGrid h_grid{0.0, 1.0, 0.025};
    std::int64_t n_min = 1;
    std::int64_t n_max = 10;
    double fig3b_period = 1.0;
    LogGrid rate_grid{};
    CurveParameters curves{};
    std::int64_t replications = 1;
    std::filesystem::path out_path;

    void validate() const;
};

struct Fig3aRow { double pi_s, h, pi_s_star; };
struct Fig3bRow { double h; std::int64_t n; double f_gamma; };
struct Fig4aRow { double b_total; SetType set_type; double delay; };
struct Fig4bRow { double b_total; SetType set_type; double ratio; };

std::vector<Fig3aRow> fig3a_rows(const ScenarioSpec& spec);
std::vector<Fig3bRow> fig3b_rows(const ScenarioSpec& spec);
std::vector<Fig4aRow> fig4a_rows(const ScenarioSpec& spec);
std::vector<Fig4bRow> fig4b_rows(const ScenarioSpec& spec);

/// Analytic delay bound of one set type at total incoming rate `b_total`.
double analytic_delay(const CurveParameters& p, SetType set_type, double b_total);
/// Analytic outgoing/incoming ratio of one set type at `b_total`.
double analytic_ratio(const CurveParameters& p, SetType set_type, double b_total);

/// Seed of replication `j`: base_seed + j.
std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t j);

/// Runs a scenario and returns its CSV document.
CsvTable run_scenario(const ScenarioSpec& spec, const HarnessConfig& config);

} // namespace swapqueue
