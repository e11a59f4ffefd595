#pragma once

// Period-by-period evolution of a single repeater:
//
//   1. sample Bernoulli arrivals and add them to Z
//   2. draw the loss count L and mask L random output columns
//   3. build the policy's schedule on the unmasked outputs
//   4. serve: every scheduled, non-empty coincidence set loses one density
//   5. record the period's metrics
//
// Z is observed for the metrics at the moment the schedule is applied (after
// arrivals, before service).

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "swapqueue/core_model.hpp"

namespace swapqueue {

enum class Policy { MaxWeight, Random, Delayed };

std::string_view to_string(Policy p) noexcept;

struct PolicySpec {
    Policy kind = Policy::MaxWeight;
    /// Delay of the Delayed policy in whole periods. When unset it is derived
    /// from the extended period: ceil((1 + h) * period / period).
    std::optional<std::int64_t> delay_periods;
};

/// Independent random streams of one run, all derived from the same seed.
struct RandomStreams {
    explicit RandomStreams(std::uint64_t seed)
        : arrivals(seed, 0), losses(seed, 1), policy(seed, 2) {}

    Rng arrivals;
    Rng losses;
    Rng policy;
};

struct RepeaterState {
    CoincidenceMatrix z;
    std::int64_t period = 0;
    double previous_lyapunov = 0.0;
    /// Recent unmasked max-weight schedules; front() belongs to `history_start`.
    std::deque<Schedule> history;
    std::int64_t history_start = 0;

    static RepeaterState initial(const RepeaterConfig& config);
};

struct StepResult {
    RepeaterState state;
    PeriodMetrics metrics;
    ArrivalBatch arrivals;
};

struct Trajectory {
    RepeaterConfig config;
    PolicySpec policy;
    std::vector<PeriodMetrics> records;
    CoincidenceMatrix final_z;
    /// Per-pair arrival counts summed over the whole run.
    CountMatrix arrival_counts;
};

ArrivalBatch sample_arrivals(Rng& rng, const RateMatrix& probs);

/// Entrywise sum. Throws DimensionError on size mismatch.
CoincidenceMatrix accumulate(const CoincidenceMatrix& z, const ArrivalBatch& b);

struct ServeResult {
    CoincidenceMatrix z;
    std::int64_t swaps = 0;
};

/// Removes one density from every scheduled coincidence set. Scheduled pairs
/// whose set is already empty perform nothing.
ServeResult apply_schedule(const CoincidenceMatrix& z, const Schedule& s);

/// Picks `losses` distinct output columns uniformly at random; the returned
/// mask is true for outputs that remain available.
std::vector<bool> draw_available_outputs(Rng& rng, std::size_t n, std::int64_t losses);

/// Resolved delay for the Delayed policy (0 for the other policies).
std::int64_t resolve_delay(const RepeaterConfig& config, const PolicySpec& policy);

/// One period. `state` is taken by value and returned updated.
StepResult step(RepeaterState state, const RepeaterConfig& config, const PolicySpec& policy,
                RandomStreams& rng);

/// Runs `config.horizon` periods. Deterministic in (config, policy).
Trajectory run(const RepeaterConfig& config, const PolicySpec& policy);

} // namespace swapqueue
