#pragma once

// Domain types shared by the scheduler, the period dynamics and the metrics:
// square count/rate matrices, the coincidence matrix Z, swap schedules,
// arrival batches, repeater configuration, and the period/noise arithmetic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swapqueue {

/// Raised when a configuration value violates its documented range.
/// `key()` names the offending configuration key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Raised when two matrices that must agree in size do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Row-major N x N matrix.
template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    T& operator()(std::size_t i, std::size_t k) { return data_[i * n_ + k]; }
    const T& operator()(std::size_t i, std::size_t k) const { return data_[i * n_ + k]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    std::span<const T> values() const noexcept { return data_; }
    std::span<T> values() noexcept { return data_; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

using CountMatrix = SquareMatrix<std::int64_t>;
using RateMatrix = SquareMatrix<double>;

/// Builds a square matrix from nested rows; throws DimensionError if ragged.
template <typename T>
SquareMatrix<T> matrix_from_rows(const std::vector<std::vector<T>>& rows) {
    SquareMatrix<T> m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw DimensionError("matrix rows must have length " + std::to_string(rows.size()));
        }
        for (std::size_t k = 0; k < rows.size(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

/// Queue state: z(i, k) counts stored incoming densities from input i that
/// wait for output k.
class CoincidenceMatrix {
public:
    CoincidenceMatrix() = default;
    explicit CoincidenceMatrix(std::size_t n) : z_(n, 0) {}
    explicit CoincidenceMatrix(CountMatrix z);
    CoincidenceMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static CoincidenceMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return z_.size(); }
    std::int64_t operator()(std::size_t i, std::size_t k) const { return z_(i, k); }
    void set(std::size_t i, std::size_t k, std::int64_t value);

    const CountMatrix& counts() const noexcept { return z_; }

    /// Sum of all coincidence-set cardinalities.
    std::int64_t total() const noexcept;

    bool operator==(const CoincidenceMatrix&) const = default;

private:
    CountMatrix z_;
};

/// 0/1 swap selection. Invariant: every row and column sum is at most one.
class Schedule {
public:
    Schedule() = default;
    explicit Schedule(std::size_t n) : s_(n, 0) {}

    static Schedule zero(std::size_t n) { return Schedule(n); }
    static Schedule identity(std::size_t n);
    /// `assignment[i]` is the output for input i, or -1 for no swap.
    static Schedule from_assignment(std::span<const int> assignment);
    /// Throws std::invalid_argument unless the rows form a sub-permutation.
    static Schedule from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t size() const noexcept { return s_.size(); }
    bool operator()(std::size_t i, std::size_t k) const { return s_(i, k) != 0; }

    /// Output assigned to each input, -1 where the input is idle.
    std::vector<int> assignment() const;
    std::size_t swap_count() const noexcept;
    bool is_full_permutation() const noexcept;

    /// Removes every selection that falls into a column not in `available`.
    Schedule restricted_to(const std::vector<bool>& available) const;

    bool operator==(const Schedule&) const = default;

private:
    SquareMatrix<std::uint8_t> s_;
};

/// Per-period arrivals: b(i, k) densities from input i requesting output k.
class ArrivalBatch {
public:
    ArrivalBatch() = default;
    explicit ArrivalBatch(std::size_t n) : b_(n, 0) {}
    explicit ArrivalBatch(CountMatrix b);
    ArrivalBatch(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    std::size_t size() const noexcept { return b_.size(); }
    std::int64_t operator()(std::size_t i, std::size_t k) const { return b_(i, k); }
    const CountMatrix& counts() const noexcept { return b_; }
    std::int64_t total() const noexcept { return total_; }

private:
    CountMatrix b_;
    std::int64_t total_ = 0;
};

enum class LossMode { Deterministic, Binomial };

enum class SetType { Perfect, Complete, NonComplete };

std::string_view to_string(SetType t) noexcept;
std::string_view to_string(LossMode m) noexcept;

struct SwappingSetState {
    std::int64_t input_cardinality = 0;  // Q'
    std::int64_t output_cardinality = 0; // M = N - L
    std::int64_t losses = 0;             // L
    SetType classification = SetType::NonComplete;
};

struct RepeaterConfig {
    std::size_t n_connections = 5;
    double gamma = 0.0;
    RateMatrix arrival_probs = RateMatrix(5, 0.06);
    double cycle_time = 1.0;
    std::int64_t cycles_per_period = 1;
    double h = 0.2;
    std::int64_t horizon = 10'000;
    std::uint64_t seed = 42;
    LossMode loss_mode = LossMode::Deterministic;
    /// Queue contents before the first period; empty when absent.
    std::optional<CoincidenceMatrix> initial_z;

    /// Throws ConfigError naming the first key out of range.
    void validate() const;
};

/// Uniform arrival probability `p` for every (input, output) pair.
RateMatrix uniform_probs(std::size_t n, double p);

struct PeriodMetrics {
    std::int64_t period_index = 0;
    double weight = 0.0;         // weight of the applied schedule
    double max_weight = 0.0;     // weight of the unmasked max-weight schedule
    double lyapunov = 0.0;
    double drift = 0.0;
    double delay = 0.0;
    std::int64_t incoming_total = 0;
    double outgoing_rate = 0.0;
    double rate_ratio = 0.0;
    std::int64_t losses = 0;
    std::int64_t z_total = 0;       // |Z| when the schedule is applied
    std::int64_t z_total_after = 0; // |Z| at the end of the period
    std::int64_t swaps = 0;
    SetType set_type = SetType::NonComplete;
};

/// Random source used by every stochastic operation. Draws are defined on
/// top of the raw 64-bit engine output so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    bool bernoulli(double p);
    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

// Period arithmetic and noise mapping.

double period_length(std::int64_t cycles, double cycle_time);
double extended_period(double period, double h);
/// Sub-linear weight penalty: 0 without noise, 2 * extended_period * N otherwise.
double f_gamma(double gamma, double extended, std::size_t n);
std::int64_t losses_for_period(double gamma, std::size_t n, LossMode mode, Rng& rng);
SetType classify_set(std::int64_t q, std::size_t n, std::int64_t losses);
SwappingSetState swapping_set_state(std::int64_t q, std::size_t n, std::int64_t losses);

} // namespace swapqueue
