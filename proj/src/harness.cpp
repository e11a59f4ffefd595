#include "swapqueue/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "swapqueue/metrics.hpp"

namespace swapqueue {

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";

    constexpr int kDigits = 12;
    const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(value))));
    const int decimals = std::max(0, kDigits - 1 - exponent);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string format_int(std::int64_t value) { return std::to_string(value); }

namespace {

bool needs_quotes(std::string_view field) {
    return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
    if (!needs_quotes(field)) {
        out.append(field);
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
        if (j > 0) out.push_back(',');
        append_field(out, fields[j]);
    }
    out.push_back('\n');
}

} // namespace

std::string to_csv(const CsvTable& table) {
    std::string out;
    append_record(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::invalid_argument("csv row width does not match the header");
        }
        append_record(out, row);
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t j = 0; j < text.size(); ++j) {
        const char c = text[j];
        if (in_quotes) {
            if (c == '"') {
                if (j + 1 < text.size() && text[j + 1] == '"') {
                    field.push_back('"');
                    ++j;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started || !field.empty()) throw std::invalid_argument("csv: stray quote");
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (j + 1 < text.size() && text[j + 1] == '\n') break;
            end_record();
            break;
        case '\n':
            end_record();
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw std::invalid_argument("csv: unterminated quoted field");
    if (field_started || !record.empty()) end_record();

    CsvTable table;
    if (records.empty()) return table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw std::invalid_argument("csv: record " + std::to_string(r) + " has wrong width");
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
    const std::string text = to_csv(table);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

struct RawEntry {
    std::string value;
    std::size_t line;
};

class EntryReader {
public:
    explicit EntryReader(std::map<std::string, RawEntry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    template <typename T>
    std::optional<T> number(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const auto v = parse_number<T>(it->second.value);
        if (!v) {
            throw ConfigParseError(it->second.line, key,
                                   "invalid value for " + key + ": '" + it->second.value + "'");
        }
        return v;
    }

    std::optional<std::string> text(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

    std::size_t line(const std::string& key) const { return entries_.at(key).line; }

private:
    std::map<std::string, RawEntry> entries_;
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "n",        "gamma", "h",         "cycle_time",  "cycles_per_period",  "horizon",
        "seed",     "loss_mode", "arrival_prob", "arrival_probs_file", "policy", "delay_periods"};
    return keys;
}

} // namespace

RateMatrix read_probability_matrix(const std::filesystem::path& path) {
    const CsvTable raw = parse_csv(read_file(path));
    std::vector<std::vector<std::string>> lines;
    if (!raw.header.empty()) lines.push_back(raw.header);
    lines.insert(lines.end(), raw.rows.begin(), raw.rows.end());

    const std::size_t n = lines.size();
    RateMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (lines[i].size() != n) {
            throw ConfigError("arrival_probs_file", path.string() + " must hold a square matrix");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const auto v = parse_number<double>(trim(lines[i][k]));
            if (!v) {
                throw ConfigError("arrival_probs_file",
                                  path.string() + ": invalid number '" + lines[i][k] + "'");
            }
            m(i, k) = *v;
        }
    }
    return m;
}

HarnessConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
    std::map<std::string, RawEntry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigParseError(line_no, "", "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigParseError(line_no, "", "missing key");
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
            throw ConfigParseError(line_no, key, "unknown key '" + key + "'");
        }
        if (value.empty()) throw ConfigParseError(line_no, key, "missing value for " + key);
        if (!entries.emplace(key, RawEntry{value, line_no}).second) {
            throw ConfigParseError(line_no, key, "duplicate key '" + key + "'");
        }
    }

    const EntryReader in(std::move(entries));
    HarnessConfig cfg;
    RepeaterConfig& r = cfg.repeater;

    if (auto n = in.number<std::int64_t>("n")) {
        if (*n < 1) throw ConfigError("n", "n must be at least 1");
        r.n_connections = static_cast<std::size_t>(*n);
    }
    if (auto v = in.number<double>("gamma")) r.gamma = *v;
    if (auto v = in.number<double>("h")) r.h = *v;
    if (auto v = in.number<double>("cycle_time")) r.cycle_time = *v;
    if (auto v = in.number<std::int64_t>("cycles_per_period")) r.cycles_per_period = *v;
    if (auto v = in.number<std::int64_t>("horizon")) r.horizon = *v;
    if (auto v = in.number<std::uint64_t>("seed")) r.seed = *v;

    if (auto mode = in.text("loss_mode")) {
        if (*mode == "deterministic") {
            r.loss_mode = LossMode::Deterministic;
        } else if (*mode == "binomial") {
            r.loss_mode = LossMode::Binomial;
        } else {
            throw ConfigParseError(in.line("loss_mode"), "loss_mode",
                                   "loss_mode must be 'deterministic' or 'binomial'");
        }
    }

    if (in.has("arrival_prob") && in.has("arrival_probs_file")) {
        throw ConfigError("arrival_prob", "arrival_prob and arrival_probs_file are mutually exclusive");
    }
    if (auto file = in.text("arrival_probs_file")) {
        std::filesystem::path p(*file);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        r.arrival_probs = read_probability_matrix(p);
        if (r.arrival_probs.size() != r.n_connections) {
            throw ConfigError("arrival_probs_file", "matrix size does not match n");
        }
    } else {
        const double p = in.number<double>("arrival_prob").value_or(0.06);
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("arrival_prob", "arrival_prob must lie in [0, 1]");
        r.arrival_probs = uniform_probs(r.n_connections, p);
    }

    if (auto policy = in.text("policy")) {
        if (*policy == "maxweight") {
            cfg.policy.kind = Policy::MaxWeight;
        } else if (*policy == "random") {
            cfg.policy.kind = Policy::Random;
        } else if (*policy == "delayed") {
            cfg.policy.kind = Policy::Delayed;
        } else {
            throw ConfigParseError(in.line("policy"), "policy",
                                   "policy must be 'maxweight', 'random' or 'delayed'");
        }
    }
    if (auto d = in.number<std::int64_t>("delay_periods")) {
        if (*d < 0) throw ConfigError("delay_periods", "delay_periods must be >= 0");
        cfg.policy.delay_periods = *d;
    }

    r.validate();
    return cfg;
}

HarnessConfig parse_config(const std::filesystem::path& path) {
    return parse_config_text(read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Grids and analytic curves

std::vector<double> LinearGrid::points() const {
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count + 1));
    for (std::int64_t j = 0; j <= count; ++j) out.push_back(start + static_cast<double>(j) * step);
    return out;
}

std::vector<double> LogGrid::points() const {
    if (points_per_decade < 1 || last_decade < first_decade) {
        throw std::invalid_argument("log grid needs points_per_decade >= 1 and ordered decades");
    }
    const int count = (last_decade - first_decade) * points_per_decade;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count + 1));
    for (int j = 0; j <= count; ++j) {
        const double exponent = first_decade + static_cast<double>(j) / points_per_decade;
        out.push_back(std::pow(10.0, exponent));
    }
    return out;
}

double CurveParameters::f() const { return f_gamma(gamma, extended_period(period, h), n); }

double analytic_delay(const CurveParameters& p, SetType set_type, double b_total) {
    const double beta_value = set_type == SetType::NonComplete ? p.beta_noncomplete : p.beta_complete;
    const std::int64_t losses = set_type == SetType::NonComplete ? p.losses : 0;
    return delay(z_bound(set_type, p.n, losses, beta_value, p.c1, p.f()), b_total);
}

double analytic_ratio(const CurveParameters& p, SetType set_type, double b_total) {
    const std::int64_t losses = set_type == SetType::NonComplete ? p.losses : 0;
    const double d = analytic_delay(p, set_type, b_total);
    return rate_ratio(b_total, outgoing_rate(b_total, d, losses, p.n));
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t j) {
    return base_seed + static_cast<std::uint64_t>(j);
}

// ---------------------------------------------------------------------------
// Scenarios

std::string_view to_string(ScenarioName name) noexcept {
    switch (name) {
    case ScenarioName::Fig3a: return "fig3a";
    case ScenarioName::Fig3b: return "fig3b";
    case ScenarioName::Fig4a: return "fig4a";
    case ScenarioName::Fig4b: return "fig4b";
    case ScenarioName::Stability: return "stability";
    case ScenarioName::Compare: return "compare";
    }
    return "unknown";
}

ScenarioName parse_scenario_name(std::string_view name) {
    for (auto s : {ScenarioName::Fig3a, ScenarioName::Fig3b, ScenarioName::Fig4a, ScenarioName::Fig4b,
                   ScenarioName::Stability, ScenarioName::Compare}) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("scenario", "unknown scenario '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
    if (period_grid.points().empty() || h_grid.points().empty() || rate_grid.points().empty()) {
        throw ConfigError("grid", "scenario grids must be non-empty");
    }
    if (n_min < 1 || n_max < n_min) throw ConfigError("grid", "fig3b needs 1 <= n_min <= n_max");
    if (replications < 1) throw ConfigError("replications", "replications must be at least 1");
}

namespace {

constexpr SetType kCurveOrder[] = {SetType::Perfect, SetType::Complete, SetType::NonComplete};

} // namespace

std::vector<Fig3aRow> fig3a_rows(const ScenarioSpec& spec) {
    std::vector<Fig3aRow> rows;
    for (double pi : spec.period_grid.points()) {
        for (double h : spec.h_grid.points()) rows.push_back({pi, h, extended_period(pi, h)});
    }
    return rows;
}

std::vector<Fig3bRow> fig3b_rows(const ScenarioSpec& spec) {
    std::vector<Fig3bRow> rows;
    for (double h : spec.h_grid.points()) {
        const double extended = extended_period(spec.fig3b_period, h);
        for (std::int64_t n = spec.n_min; n <= spec.n_max; ++n) {
            // Any positive noise level gives the same constant.
            rows.push_back({h, n, f_gamma(1.0, extended, static_cast<std::size_t>(n))});
        }
    }
    return rows;
}

std::vector<Fig4aRow> fig4a_rows(const ScenarioSpec& spec) {
    std::vector<Fig4aRow> rows;
    for (double b : spec.rate_grid.points()) {
        for (auto t : kCurveOrder) rows.push_back({b, t, analytic_delay(spec.curves, t, b)});
    }
    return rows;
}

std::vector<Fig4bRow> fig4b_rows(const ScenarioSpec& spec) {
    std::vector<Fig4bRow> rows;
    for (double b : spec.rate_grid.points()) {
        for (auto t : kCurveOrder) rows.push_back({b, t, analytic_ratio(spec.curves, t, b)});
    }
    return rows;
}

namespace {

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

CsvTable stability_table(const ScenarioSpec& spec, const HarnessConfig& config) {
    CsvTable table;
    table.header = {"row_type",       "replication",   "seed",           "replications",
                    "period",         "z_total",       "z_total_after",  "incoming_total",
                    "swaps",          "losses",        "weight",         "max_weight",
                    "lyapunov",       "drift",         "delay",          "outgoing_rate",
                    "rate_ratio",     "set_type",      "bin_index",      "bin_lo",
                    "bin_hi",         "bin_mean_drift", "bin_count",     "bin_top",
                    "epsilon_hat",    "strongly_stable", "bound_set_type", "z_bound",
                    "empirical_mean_z", "delay_bound", "empirical_delay", "z_satisfied",
                    "delay_satisfied", "bound_status"};
    const std::size_t width = table.header.size();
    auto col = [&](std::string_view name) {
        return static_cast<std::size_t>(
            std::find(table.header.begin(), table.header.end(), name) - table.header.begin());
    };
    const std::string reps = format_int(spec.replications);

    double sum_mean_z = 0.0;
    std::int64_t stable_count = 0;
    std::int64_t satisfied_count = 0;
    bool any_bound = false;

    for (std::int64_t j = 0; j < spec.replications; ++j) {
        RepeaterConfig rc = config.repeater;
        rc.seed = replication_seed(config.repeater.seed, j);
        const Trajectory traj = run(rc, config.policy);
        const std::string rep = format_int(j);
        const std::string seed = std::to_string(rc.seed);

        for (const auto& m : traj.records) {
            std::vector<std::string> row(width);
            row[col("row_type")] = "period";
            row[col("replication")] = rep;
            row[col("seed")] = seed;
            row[col("replications")] = reps;
            row[col("period")] = format_int(m.period_index);
            row[col("z_total")] = format_int(m.z_total);
            row[col("z_total_after")] = format_int(m.z_total_after);
            row[col("incoming_total")] = format_int(m.incoming_total);
            row[col("swaps")] = format_int(m.swaps);
            row[col("losses")] = format_int(m.losses);
            row[col("weight")] = format_number(m.weight);
            row[col("max_weight")] = format_number(m.max_weight);
            row[col("lyapunov")] = format_number(m.lyapunov);
            row[col("drift")] = format_number(m.drift);
            row[col("delay")] = format_number(m.delay);
            row[col("outgoing_rate")] = format_number(m.outgoing_rate);
            row[col("rate_ratio")] = format_number(m.rate_ratio);
            row[col("set_type")] = std::string(to_string(m.set_type));
            table.rows.push_back(std::move(row));
        }

        std::optional<DriftEstimate> est;
        if (traj.records.size() >= 2) {
            est = estimate_drift(traj);
            for (std::size_t b = 0; b < est->bins.size(); ++b) {
                const auto& bin = est->bins[b];
                const bool top = std::find(est->top_bins.begin(), est->top_bins.end(), b) != est->top_bins.end();
                std::vector<std::string> row(width);
                row[col("row_type")] = "drift_bin";
                row[col("replication")] = rep;
                row[col("seed")] = seed;
                row[col("replications")] = reps;
                row[col("bin_index")] = format_int(static_cast<std::int64_t>(b));
                row[col("bin_lo")] = format_number(bin.z_lo);
                row[col("bin_hi")] = format_number(bin.z_hi);
                row[col("bin_mean_drift")] = format_number(bin.mean_drift);
                row[col("bin_count")] = format_int(bin.count);
                row[col("bin_top")] = fmt_bool(top);
                table.rows.push_back(std::move(row));
            }
        }

        std::vector<std::string> row(width);
        row[col("row_type")] = "summary";
        row[col("replication")] = rep;
        row[col("seed")] = seed;
        row[col("replications")] = reps;
        if (est) {
            row[col("epsilon_hat")] = format_number(est->epsilon_hat);
            row[col("strongly_stable")] = fmt_bool(est->strongly_stable_consistent);
            stable_count += est->strongly_stable_consistent ? 1 : 0;
        }
        const double mean_z = mean_z_total(traj);
        sum_mean_z += mean_z;
        row[col("empirical_mean_z")] = format_number(mean_z);
        const AnalyticInputs inputs = analytic_inputs(rc);
        row[col("bound_set_type")] = std::string(to_string(inputs.set_type));
        try {
            const BoundReport report = verify_bounds(traj, inputs);
            any_bound = true;
            row[col("z_bound")] = format_number(report.z_bound);
            row[col("delay_bound")] = format_number(report.delay_bound);
            row[col("empirical_delay")] = format_number(report.empirical_delay);
            row[col("z_satisfied")] = fmt_bool(report.z_satisfied);
            row[col("delay_satisfied")] = fmt_bool(report.delay_satisfied);
            row[col("bound_status")] = "ok";
            satisfied_count += report.z_satisfied ? 1 : 0;
        } catch (const NoBoundError&) {
            row[col("bound_status")] = "no_bound";
        }
        table.rows.push_back(std::move(row));
    }

    const auto r = static_cast<double>(spec.replications);
    std::vector<std::string> agg(width);
    agg[col("row_type")] = "aggregate";
    agg[col("replications")] = reps;
    agg[col("seed")] = std::to_string(config.repeater.seed);
    agg[col("empirical_mean_z")] = format_number(sum_mean_z / r);
    agg[col("strongly_stable")] = format_number(static_cast<double>(stable_count) / r);
    if (any_bound) agg[col("z_satisfied")] = format_number(static_cast<double>(satisfied_count) / r);
    agg[col("bound_status")] = any_bound ? "ok" : "no_bound";
    table.rows.push_back(std::move(agg));
    return table;
}

struct PolicySummary {
    double mean_z = 0.0;
    double mean_swaps = 0.0;
    double mean_rate_ratio = 0.0;
    double mean_delay = 0.0;
};

PolicySummary summarize(const Trajectory& traj) {
    const auto& rec = traj.records;
    const auto skip = static_cast<std::size_t>(std::floor(static_cast<double>(rec.size()) * 0.1));
    PolicySummary s;
    double z = 0.0, swaps = 0.0, ratio = 0.0, b = 0.0;
    for (std::size_t t = skip; t < rec.size(); ++t) {
        z += static_cast<double>(rec[t].z_total);
        swaps += static_cast<double>(rec[t].swaps);
        ratio += rec[t].rate_ratio;
        b += static_cast<double>(rec[t].incoming_total);
    }
    const double count = static_cast<double>(rec.size() - skip);
    s.mean_z = z / count;
    s.mean_swaps = swaps / count;
    s.mean_rate_ratio = ratio / count;
    s.mean_delay = b > 0.0 ? z / b : 0.0;
    return s;
}

CsvTable compare_table(const ScenarioSpec& spec, const HarnessConfig& config) {
    CsvTable table;
    table.header = {"row_type",   "replication", "seed",           "replications",  "policy",
                    "mean_z_total", "mean_swaps", "mean_rate_ratio", "mean_delay", "maxweight_wins_fraction"};
    constexpr Policy kPolicies[] = {Policy::MaxWeight, Policy::Random, Policy::Delayed};
    const std::string reps = format_int(spec.replications);

    std::vector<std::vector<PolicySummary>> per_policy(3);
    for (std::int64_t j = 0; j < spec.replications; ++j) {
        RepeaterConfig rc = config.repeater;
        rc.seed = replication_seed(config.repeater.seed, j);
        for (std::size_t p = 0; p < 3; ++p) {
            PolicySpec ps = config.policy;
            ps.kind = kPolicies[p];
            const PolicySummary s = summarize(run(rc, ps));
            per_policy[p].push_back(s);
            table.rows.push_back({"replication", format_int(j), std::to_string(rc.seed), reps,
                                  std::string(to_string(kPolicies[p])), format_number(s.mean_z),
                                  format_number(s.mean_swaps), format_number(s.mean_rate_ratio),
                                  format_number(s.mean_delay), ""});
        }
    }
    const auto r = static_cast<double>(spec.replications);
    for (std::size_t p = 0; p < 3; ++p) {
        PolicySummary avg;
        std::int64_t wins = 0;
        for (std::size_t j = 0; j < per_policy[p].size(); ++j) {
            const auto& s = per_policy[p][j];
            avg.mean_z += s.mean_z / r;
            avg.mean_swaps += s.mean_swaps / r;
            avg.mean_rate_ratio += s.mean_rate_ratio / r;
            avg.mean_delay += s.mean_delay / r;
            wins += per_policy[0][j].mean_z <= s.mean_z ? 1 : 0;
        }
        table.rows.push_back({"aggregate", "", std::to_string(config.repeater.seed), reps,
                              std::string(to_string(kPolicies[p])), format_number(avg.mean_z),
                              format_number(avg.mean_swaps), format_number(avg.mean_rate_ratio),
                              format_number(avg.mean_delay),
                              format_number(static_cast<double>(wins) / r)});
    }
    return table;
}

} // namespace

CsvTable run_scenario(const ScenarioSpec& spec, const HarnessConfig& config) {
    spec.validate();
    config.repeater.validate();
    CsvTable table;
    switch (spec.name) {
    case ScenarioName::Fig3a:
        table.header = {"pi_s", "h", "pi_s_star"};
        for (const auto& r : fig3a_rows(spec)) {
            table.rows.push_back({format_number(r.pi_s), format_number(r.h), format_number(r.pi_s_star)});
        }
        break;
    case ScenarioName::Fig3b:
        table.header = {"h", "n", "f_gamma"};
        for (const auto& r : fig3b_rows(spec)) {
            table.rows.push_back({format_number(r.h), format_int(r.n), format_number(r.f_gamma)});
        }
        break;
    case ScenarioName::Fig4a:
        table.header = {"b_total", "set_type", "delay"};
        for (const auto& r : fig4a_rows(spec)) {
            table.rows.push_back({format_number(r.b_total), std::string(to_string(r.set_type)),
                                  format_number(r.delay)});
        }
        break;
    case ScenarioName::Fig4b:
        table.header = {"b_total", "set_type", "ratio"};
        for (const auto& r : fig4b_rows(spec)) {
            table.rows.push_back({format_number(r.b_total), std::string(to_string(r.set_type)),
                                  format_number(r.ratio)});
        }
        break;
    case ScenarioName::Stability:
        table = stability_table(spec, config);
        break;
    case ScenarioName::Compare:
        table = compare_table(spec, config);
        break;
    }
    return table;
}

} // namespace swapqueue
