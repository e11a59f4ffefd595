#include "swapqueue/dynamics.hpp"

#include "swapqueue/metrics.hpp"
#include "swapqueue/scheduler.hpp"

namespace swapqueue {

std::string_view to_string(Policy p) noexcept {
    switch (p) {
    case Policy::MaxWeight: return "maxweight";
    case Policy::Random: return "random";
    case Policy::Delayed: return "delayed";
    }
    return "unknown";
}

RepeaterState RepeaterState::initial(const RepeaterConfig& config) {
    RepeaterState s;
    s.z = config.initial_z.value_or(CoincidenceMatrix(config.n_connections));
    s.previous_lyapunov = lyapunov(s.z);
    return s;
}

ArrivalBatch sample_arrivals(Rng& rng, const RateMatrix& probs) {
    const std::size_t n = probs.size();
    CountMatrix b(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) b(i, k) = rng.bernoulli(probs(i, k)) ? 1 : 0;
    }
    return ArrivalBatch(std::move(b));
}

CoincidenceMatrix accumulate(const CoincidenceMatrix& z, const ArrivalBatch& b) {
    if (z.size() != b.size()) throw DimensionError("accumulate: dimension mismatch");
    CountMatrix sum = z.counts();
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t k = 0; k < z.size(); ++k) sum(i, k) += b(i, k);
    }
    return CoincidenceMatrix(std::move(sum));
}

ServeResult apply_schedule(const CoincidenceMatrix& z, const Schedule& s) {
    if (z.size() != s.size()) throw DimensionError("apply_schedule: dimension mismatch");
    CountMatrix next = z.counts();
    std::int64_t swaps = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (s(i, k) && next(i, k) > 0) {
                --next(i, k);
                ++swaps;
            }
        }
    }
    return {CoincidenceMatrix(std::move(next)), swaps};
}

std::vector<bool> draw_available_outputs(Rng& rng, std::size_t n, std::int64_t losses) {
    std::vector<bool> available(n, true);
    if (losses <= 0) return available;
    std::vector<std::size_t> cols(n);
    for (std::size_t k = 0; k < n; ++k) cols[k] = k;
    const auto lost = std::min<std::size_t>(static_cast<std::size_t>(losses), n);
    // Partial Fisher-Yates: the first `lost` slots are a uniform L-subset.
    for (std::size_t j = 0; j < lost; ++j) {
        const auto r = j + static_cast<std::size_t>(rng.below(n - j));
        std::swap(cols[j], cols[r]);
        available[cols[j]] = false;
    }
    return available;
}

std::int64_t resolve_delay(const RepeaterConfig& config, const PolicySpec& policy) {
    if (policy.kind != Policy::Delayed) return 0;
    if (policy.delay_periods) {
        if (*policy.delay_periods < 0) throw ConfigError("delay_periods", "delay_periods must be >= 0");
        return *policy.delay_periods;
    }
    const double period = period_length(config.cycles_per_period, config.cycle_time);
    return delay_in_periods(extended_period(period, config.h), period);
}

StepResult step(RepeaterState state, const RepeaterConfig& config, const PolicySpec& policy,
                RandomStreams& rng) {
    const std::size_t n = config.n_connections;
    const std::int64_t t = state.period;
    const std::int64_t before_total = state.z.total();

    // (1) arrivals
    const ArrivalBatch batch = sample_arrivals(rng.arrivals, config.arrival_probs);
    const CoincidenceMatrix loaded = accumulate(state.z, batch);

    // (2) noise losses
    const std::int64_t lost = losses_for_period(config.gamma, n, config.loss_mode, rng.losses);
    const std::vector<bool> available = draw_available_outputs(rng.losses, n, lost);

    // (3) schedule
    const Schedule best = max_weight_schedule(loaded);
    Schedule chosen;
    switch (policy.kind) {
    case Policy::MaxWeight:
        chosen = lost == 0 ? best : masked_max_weight(loaded, available);
        break;
    case Policy::Random:
        chosen = random_schedule(rng.policy, n, available);
        break;
    case Policy::Delayed: {
        const std::int64_t d = resolve_delay(config, policy);
        state.history.push_back(best);
        while (static_cast<std::int64_t>(state.history.size()) > d + 1) {
            state.history.pop_front();
            ++state.history_start;
        }
        const std::vector<Schedule> window(state.history.begin(), state.history.end());
        chosen = delayed_schedule(window, t, d, n, state.history_start).restricted_to(available);
        break;
    }
    }

    // (4) service
    ServeResult served = apply_schedule(loaded, chosen);

    // (5) metrics
    PeriodMetrics m;
    m.period_index = t;
    m.weight = weight(chosen, loaded);
    m.max_weight = weight(best, loaded);
    m.lyapunov = lyapunov(loaded);
    m.drift = m.lyapunov - state.previous_lyapunov;
    m.incoming_total = batch.total();
    m.losses = lost;
    m.z_total = loaded.total();
    m.z_total_after = served.z.total();
    m.swaps = served.swaps;
    m.set_type = classify_set(m.z_total, n, lost);
    if (m.incoming_total > 0) {
        const auto b = static_cast<double>(m.incoming_total);
        m.delay = delay(static_cast<double>(m.z_total), b);
        m.outgoing_rate = outgoing_rate(b, m.delay, lost, n);
        m.rate_ratio = rate_ratio(b, m.outgoing_rate);
    }

    if (m.z_total_after != before_total + m.incoming_total - m.swaps) {
        throw std::logic_error("coincidence totals not conserved");
    }

    state.z = std::move(served.z);
    state.previous_lyapunov = m.lyapunov;
    state.period = t + 1;
    return {std::move(state), m, batch};
}

Trajectory run(const RepeaterConfig& config, const PolicySpec& policy) {
    config.validate();
    Trajectory traj;
    traj.config = config;
    traj.policy = policy;
    traj.records.reserve(static_cast<std::size_t>(config.horizon));
    traj.arrival_counts = CountMatrix(config.n_connections, 0);

    RandomStreams rng(config.seed);
    RepeaterState state = RepeaterState::initial(config);
    for (std::int64_t t = 0; t < config.horizon; ++t) {
        auto result = step(std::move(state), config, policy, rng);
        state = std::move(result.state);
        traj.records.push_back(result.metrics);
        const auto counts = result.arrivals.counts().values();
        auto totals = traj.arrival_counts.values();
        for (std::size_t j = 0; j < counts.size(); ++j) totals[j] += counts[j];
    }
    traj.final_z = state.z;
    return traj;
}

} // namespace swapqueue
