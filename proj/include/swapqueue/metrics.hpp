#pragma once

// Closed-form queue/delay/rate quantities and the empirical checks that
// compare a simulated trajectory against them.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swapqueue/core_model.hpp"
#include "swapqueue/dynamics.hpp"

namespace swapqueue {

/// No finite queue bound exists for the given inputs (C1 <= 0 or L >= N).
class NoBoundError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sum of squared coincidence counts.
double lyapunov(const CoincidenceMatrix& z);

/// lyapunov(after) - lyapunov(before).
double drift(const CoincidenceMatrix& before, const CoincidenceMatrix& after);

/// Arrivals divided by the batch total. Throws std::domain_error on an empty batch.
RateMatrix normalized_arrivals(const ArrivalBatch& b);

/// Arrivals divided by their per-output (column) total. Throws
/// std::domain_error when some column received nothing.
RateMatrix column_normalized_arrivals(const ArrivalBatch& b);

/// Long-run per-pair arrival rates of a trajectory (counts / periods).
RateMatrix empirical_rates(const Trajectory& trajectory);

/// Sum over all pairs of rate - rate^2.
double beta(const RateMatrix& rates);

/// Admissibility margin: 1 - max_i sum_k rates(i, k).
double c1(const RateMatrix& rates);

/// Predicted long-run mean of |Z|:
///   Perfect      N
///   Complete     N * beta / C1
///   NonComplete  (N - L) * beta / C1 + (N - L) * f / (2 * C1)
/// Throws NoBoundError when C1 <= 0 (Complete/NonComplete) or L >= N.
double z_bound(SetType set_type, std::size_t n, std::int64_t losses, double beta_value,
               double c1_value, double f);

/// Delay in periods, |Z| / |B|. Throws std::domain_error if b_total <= 0.
double delay(double z_total, double b_total);

/// Per-pair delay matrix z(i, k) / b(i, k); pairs without arrivals get 0.
RateMatrix delay_matrix(const CoincidenceMatrix& z, const ArrivalBatch& b);

/// Served throughput (1 - L/N) * |B| / (1 + D).
double outgoing_rate(double b_total, double delay_periods, std::int64_t losses, std::size_t n);

/// outgoing / b_total. Throws std::domain_error if b_total <= 0.
double rate_ratio(double b_total, double outgoing);

// ---------------------------------------------------------------------------
// Empirical checks over trajectories

struct DriftBin {
    double z_lo = 0.0;
    double z_hi = 0.0;
    double mean_drift = 0.0;
    std::int64_t count = 0;
};

struct DriftEstimate {
    std::vector<DriftBin> bins;
    /// Fitted slope of drift ~ -epsilon * |Z| over the large-|Z| bins.
    double epsilon_hat = 0.0;
    /// True when every large-|Z| bin has negative mean drift and epsilon_hat > 0.
    bool strongly_stable_consistent = false;
    /// Indices into `bins` of the large-|Z| bins (the top non-empty ones).
    std::vector<std::size_t> top_bins;
};

struct DriftOptions {
    std::size_t bin_count = 10;
    std::size_t top_bin_count = 3;
};

/// Pairs each period's |Z| with the Lyapunov change to the next period,
/// bins them by |Z| into equal-width bins over the observed range, and
/// reports the conditional mean drift per bin. Needs at least two records.
DriftEstimate estimate_drift(const Trajectory& trajectory, const DriftOptions& options = {});

struct AnalyticInputs {
    SetType set_type = SetType::Complete;
    std::size_t n = 0;
    std::int64_t losses = 0;
    double beta = 0.0;
    double c1 = 0.0;
    double f = 0.0;
};

/// Inputs derived from a configuration: rates are the configured arrival
/// probabilities; losses use the deterministic mapping; the set type is
/// NonComplete for gamma > 0, Perfect when the arrival probabilities form a
/// 0/1 permutation matrix, Complete otherwise.
AnalyticInputs analytic_inputs(const RepeaterConfig& config);

struct BoundReport {
    SetType set_type = SetType::Complete;
    double z_bound = 0.0;
    double empirical_mean_z = 0.0;
    double delay_bound = 0.0;
    double empirical_delay = 0.0;
    bool z_satisfied = false;
    bool delay_satisfied = false;
};

struct BoundOptions {
    double burn_in_fraction = 0.1;
    double slack = 1.0;
};

/// Post-burn-in mean of |Z| (observed at swap time).
double mean_z_total(const Trajectory& trajectory, double burn_in_fraction = 0.1);

/// Compares post-burn-in means against the analytic bounds. The empirical
/// delay is mean |Z| over mean |B|; its bound is z_bound over mean |B|.
/// Propagates NoBoundError from z_bound.
BoundReport verify_bounds(const Trajectory& trajectory, const AnalyticInputs& inputs,
                          const BoundOptions& options = {});

} // namespace swapqueue
