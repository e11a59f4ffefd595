#include "swapqueue/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swapqueue {

double lyapunov(const CoincidenceMatrix& z) {
    double sum = 0.0;
    for (auto v : z.counts().values()) sum += static_cast<double>(v) * static_cast<double>(v);
    return sum;
}

double drift(const CoincidenceMatrix& before, const CoincidenceMatrix& after) {
    if (before.size() != after.size()) throw DimensionError("drift: dimension mismatch");
    return lyapunov(after) - lyapunov(before);
}

RateMatrix normalized_arrivals(const ArrivalBatch& b) {
    if (b.total() <= 0) throw std::domain_error("normalized_arrivals: empty batch");
    RateMatrix out(b.size());
    const auto total = static_cast<double>(b.total());
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) out(i, k) = static_cast<double>(b(i, k)) / total;
    }
    return out;
}

RateMatrix column_normalized_arrivals(const ArrivalBatch& b) {
    const std::size_t n = b.size();
    RateMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t col = 0;
        for (std::size_t i = 0; i < n; ++i) col += b(i, k);
        if (col <= 0) {
            throw std::domain_error("column_normalized_arrivals: output " + std::to_string(k) +
                                    " received no arrivals");
        }
        for (std::size_t i = 0; i < n; ++i) {
            out(i, k) = static_cast<double>(b(i, k)) / static_cast<double>(col);
        }
    }
    return out;
}

RateMatrix empirical_rates(const Trajectory& trajectory) {
    const auto& counts = trajectory.arrival_counts;
    const auto periods = static_cast<double>(trajectory.records.size());
    if (periods <= 0) throw std::domain_error("empirical_rates: empty trajectory");
    RateMatrix out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t k = 0; k < counts.size(); ++k) {
            out(i, k) = static_cast<double>(counts(i, k)) / periods;
        }
    }
    return out;
}

double beta(const RateMatrix& rates) {
    double sum = 0.0;
    for (double r : rates.values()) sum += r - r * r;
    return sum;
}

double c1(const RateMatrix& rates) {
    double max_row = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        double row = 0.0;
        for (double r : rates.row(i)) row += r;
        max_row = std::max(max_row, row);
    }
    return 1.0 - max_row;
}

double z_bound(SetType set_type, std::size_t n, std::int64_t losses, double beta_value,
               double c1_value, double f) {
    const auto nn = static_cast<double>(n);
    if (set_type == SetType::Perfect) return nn;
    if (!(c1_value > 0.0)) throw NoBoundError("no queue bound: C1 must be positive (inadmissible load)");
    if (set_type == SetType::Complete) return nn * beta_value / c1_value;
    if (losses < 0 || losses >= static_cast<std::int64_t>(n)) {
        throw NoBoundError("no queue bound: losses must lie in [0, N)");
    }
    const double served = nn - static_cast<double>(losses);
    return served * beta_value / c1_value + served * f / (2.0 * c1_value);
}

double delay(double z_total, double b_total) {
    if (!(b_total > 0.0)) throw std::domain_error("delay undefined without incoming traffic");
    return z_total / b_total;
}

RateMatrix delay_matrix(const CoincidenceMatrix& z, const ArrivalBatch& b) {
    if (z.size() != b.size()) throw DimensionError("delay_matrix: dimension mismatch");
    RateMatrix out(z.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (b(i, k) > 0) out(i, k) = static_cast<double>(z(i, k)) / static_cast<double>(b(i, k));
        }
    }
    return out;
}

double outgoing_rate(double b_total, double delay_periods, std::int64_t losses, std::size_t n) {
    if (!(delay_periods >= 0.0) || losses < 0 || losses > static_cast<std::int64_t>(n) || n == 0) {
        throw std::invalid_argument("outgoing_rate: need D >= 0 and 0 <= L <= N");
    }
    const double kept = 1.0 - static_cast<double>(losses) / static_cast<double>(n);
    return kept * b_total / (1.0 + delay_periods);
}

double rate_ratio(double b_total, double outgoing) {
    if (!(b_total > 0.0)) throw std::domain_error("rate_ratio undefined without incoming traffic");
    return outgoing / b_total;
}

// ---------------------------------------------------------------------------

DriftEstimate estimate_drift(const Trajectory& trajectory, const DriftOptions& options) {
    const auto& rec = trajectory.records;
    if (rec.size() < 2) throw std::invalid_argument("estimate_drift needs at least two periods");
    if (options.bin_count == 0) throw std::invalid_argument("estimate_drift needs bins");

    // Sample t: state |Z| at period t, Lyapunov change from t to t + 1.
    double z_min = std::numeric_limits<double>::infinity();
    double z_max = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t + 1 < rec.size(); ++t) {
        const auto z = static_cast<double>(rec[t].z_total);
        z_min = std::min(z_min, z);
        z_max = std::max(z_max, z);
    }

    const std::size_t nb = options.bin_count;
    const double width = (z_max - z_min) / static_cast<double>(nb);
    DriftEstimate est;
    est.bins.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        est.bins[j].z_lo = z_min + width * static_cast<double>(j);
        est.bins[j].z_hi = j + 1 == nb ? z_max : z_min + width * static_cast<double>(j + 1);
    }
    std::vector<double> sums(nb, 0.0);
    for (std::size_t t = 0; t + 1 < rec.size(); ++t) {
        const auto z = static_cast<double>(rec[t].z_total);
        std::size_t j = 0;
        if (width > 0.0) {
            j = std::min(nb - 1, static_cast<std::size_t>((z - z_min) / width));
        }
        sums[j] += rec[t + 1].drift;
        ++est.bins[j].count;
    }
    for (std::size_t j = 0; j < nb; ++j) {
        if (est.bins[j].count > 0) est.bins[j].mean_drift = sums[j] / static_cast<double>(est.bins[j].count);
    }

    for (std::size_t j = nb; j-- > 0 && est.top_bins.size() < options.top_bin_count;) {
        if (est.bins[j].count > 0) est.top_bins.push_back(j);
    }
    std::reverse(est.top_bins.begin(), est.top_bins.end());

    // Least squares through the origin: mean_drift ~ -epsilon * center.
    double num = 0.0;
    double den = 0.0;
    bool all_negative = !est.top_bins.empty();
    for (auto j : est.top_bins) {
        const auto& b = est.bins[j];
        const double center = 0.5 * (b.z_lo + b.z_hi);
        num += b.mean_drift * center;
        den += center * center;
        all_negative = all_negative && b.mean_drift < 0.0;
    }
    est.epsilon_hat = den > 0.0 ? -num / den : 0.0;
    est.strongly_stable_consistent = all_negative && est.epsilon_hat > 0.0;
    return est;
}

namespace {

bool is_permutation_of_ones(const RateMatrix& probs) {
    const std::size_t n = probs.size();
    std::vector<int> col(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int row = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double p = probs(i, k);
            if (p == 1.0) {
                ++row;
                ++col[k];
            } else if (p != 0.0) {
                return false;
            }
        }
        if (row != 1) return false;
    }
    return std::all_of(col.begin(), col.end(), [](int c) { return c == 1; });
}

std::size_t burn_in_periods(std::size_t periods, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    return static_cast<std::size_t>(std::floor(static_cast<double>(periods) * fraction));
}

} // namespace

AnalyticInputs analytic_inputs(const RepeaterConfig& config) {
    AnalyticInputs in;
    in.n = config.n_connections;
    Rng unused(0);
    in.losses = losses_for_period(config.gamma, config.n_connections, LossMode::Deterministic, unused);
    in.beta = beta(config.arrival_probs);
    in.c1 = c1(config.arrival_probs);
    const double period = period_length(config.cycles_per_period, config.cycle_time);
    in.f = f_gamma(config.gamma, extended_period(period, config.h), config.n_connections);
    if (config.gamma > 0.0) {
        in.set_type = SetType::NonComplete;
    } else if (is_permutation_of_ones(config.arrival_probs)) {
        in.set_type = SetType::Perfect;
    } else {
        in.set_type = SetType::Complete;
    }
    return in;
}

double mean_z_total(const Trajectory& trajectory, double burn_in_fraction) {
    const auto& rec = trajectory.records;
    const std::size_t skip = burn_in_periods(rec.size(), burn_in_fraction);
    if (skip >= rec.size()) throw std::invalid_argument("trajectory too short for burn-in");
    double sum = 0.0;
    for (std::size_t t = skip; t < rec.size(); ++t) sum += static_cast<double>(rec[t].z_total);
    return sum / static_cast<double>(rec.size() - skip);
}

BoundReport verify_bounds(const Trajectory& trajectory, const AnalyticInputs& inputs,
                          const BoundOptions& options) {
    const auto& rec = trajectory.records;
    const std::size_t skip = burn_in_periods(rec.size(), options.burn_in_fraction);
    if (skip >= rec.size()) throw std::invalid_argument("trajectory too short for burn-in");

    BoundReport report;
    report.set_type = inputs.set_type;
    report.z_bound = z_bound(inputs.set_type, inputs.n, inputs.losses, inputs.beta, inputs.c1, inputs.f);
    report.empirical_mean_z = mean_z_total(trajectory, options.burn_in_fraction);

    double b_sum = 0.0;
    for (std::size_t t = skip; t < rec.size(); ++t) b_sum += static_cast<double>(rec[t].incoming_total);
    const double mean_b = b_sum / static_cast<double>(rec.size() - skip);

    report.z_satisfied = report.empirical_mean_z <= report.z_bound * options.slack;
    if (mean_b > 0.0) {
        report.empirical_delay = report.empirical_mean_z / mean_b;
        report.delay_bound = report.z_bound / mean_b;
        report.delay_satisfied = report.empirical_delay <= report.delay_bound * options.slack;
    } else {
        report.empirical_delay = 0.0;
        report.delay_bound = std::numeric_limits<double>::infinity();
        report.delay_satisfied = true;
    }
    return report;
}

} // namespace swapqueue
