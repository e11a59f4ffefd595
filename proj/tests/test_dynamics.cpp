#include "doctest.h"

#include "oracles.hpp"
#include "swapqueue/dynamics.hpp"
#include "swapqueue/scheduler.hpp"

#include <cmath>

using namespace swapqueue;

namespace {

RepeaterConfig small_config(std::size_t n, double p, std::int64_t horizon, std::uint64_t seed = 1) {
    RepeaterConfig c;
    c.n_connections = n;
    c.arrival_probs = uniform_probs(n, p);
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("sample_arrivals") {
    Rng rng(3);
    CHECK(sample_arrivals(rng, uniform_probs(3, 0.0)).total() == 0);
    const auto ones = sample_arrivals(rng, uniform_probs(3, 1.0));
    CHECK(ones.total() == 9);
    for (auto v : ones.counts().values()) CHECK(v == 1);

    constexpr int kPeriods = 10000;
    double sum = 0.0;
    for (int t = 0; t < kPeriods; ++t) sum += static_cast<double>(sample_arrivals(rng, uniform_probs(4, 0.5)).total());
    const double se = std::sqrt(16 * 0.25 / kPeriods);
    CHECK(std::fabs(sum / kPeriods - 8.0) < 3 * se);
}

TEST_CASE("accumulate adds entrywise") {
    CHECK(accumulate(CoincidenceMatrix(2), ArrivalBatch{{1, 2}, {0, 1}}) == CoincidenceMatrix{{1, 2}, {0, 1}});
    CHECK(accumulate(CoincidenceMatrix::identity(2), ArrivalBatch(2)) == CoincidenceMatrix::identity(2));
    CHECK(accumulate(CoincidenceMatrix{{1, 1}, {1, 1}}, ArrivalBatch{{1, 1}, {1, 1}}) ==
          CoincidenceMatrix{{2, 2}, {2, 2}});
    CHECK_THROWS_AS(accumulate(CoincidenceMatrix(2), ArrivalBatch(3)), DimensionError);
}

TEST_CASE("apply_schedule serves one density per scheduled non-empty set") {
    auto r = apply_schedule({{2, 0}, {0, 1}}, Schedule::identity(2));
    CHECK(r.z == CoincidenceMatrix{{1, 0}, {0, 0}});
    CHECK(r.swaps == 2);

    r = apply_schedule(CoincidenceMatrix{{0}}, Schedule::identity(1));
    CHECK(r.z == CoincidenceMatrix{{0}});
    CHECK(r.swaps == 0);

    const CoincidenceMatrix z{{4, 2, 0}, {1, 0, 3}, {0, 5, 1}};
    r = apply_schedule(z, Schedule::zero(3));
    CHECK(r.z == z);
    CHECK(r.swaps == 0);
}

TEST_CASE("draw_available_outputs masks exactly L distinct columns") {
    Rng rng(8);
    for (std::int64_t l = 0; l <= 6; ++l) {
        const auto avail = draw_available_outputs(rng, 6, l);
        CHECK(std::count(avail.begin(), avail.end(), false) == l);
    }
}

TEST_CASE("step: zero-noise drain of an identity backlog") {
    auto cfg = small_config(3, 0.0, 1);
    cfg.initial_z = CoincidenceMatrix::identity(3);
    RandomStreams rng(cfg.seed);
    auto res = step(RepeaterState::initial(cfg), cfg, {}, rng);
    CHECK(res.state.z.total() == 0);
    CHECK(res.metrics.swaps == 3);
    CHECK(res.metrics.z_total == 3);
    CHECK(res.metrics.weight == 3.0);
}

TEST_CASE("step: total loss masks every output") {
    auto cfg = small_config(3, 0.5, 1);
    cfg.gamma = 1.0;
    cfg.initial_z = CoincidenceMatrix{{2, 0, 1}, {0, 3, 0}, {1, 0, 0}};
    RandomStreams rng(cfg.seed);
    auto state = RepeaterState::initial(cfg);
    for (int t = 0; t < 5; ++t) {
        const auto before = state.z.total();
        auto res = step(std::move(state), cfg, {}, rng);
        CHECK(res.metrics.losses == 3);
        CHECK(res.metrics.swaps == 0);
        CHECK(res.metrics.weight == 0.0);
        CHECK(res.state.z.total() == before + res.metrics.incoming_total);
        state = std::move(res.state);
    }
}

TEST_CASE("step: saturated N = 2 grows by N^2 - N per period") {
    // Hand simulation: arrivals are all ones every period.
    //   t0: Z=[[1,1],[1,1]] -> identity (tie)  -> [[0,1],[1,0]]
    //   t1: Z=[[1,2],[2,1]] -> anti-diagonal    -> [[1,1],[1,1]]
    //   t2: Z=[[2,2],[2,2]] -> identity (tie)  -> [[1,2],[2,1]]
    const auto cfg = small_config(2, 1.0, 3);
    RandomStreams rng(cfg.seed);
    auto state = RepeaterState::initial(cfg);
    const CoincidenceMatrix expected[] = {{{0, 1}, {1, 0}}, {{1, 1}, {1, 1}}, {{1, 2}, {2, 1}}};
    for (int t = 0; t < 3; ++t) {
        auto res = step(std::move(state), cfg, {}, rng);
        state = std::move(res.state);
        CHECK(state.z == expected[t]);
        CHECK(res.metrics.z_total_after == 2 * (t + 1));
    }
}

TEST_CASE("run: horizon handling and determinism") {
    auto cfg = small_config(3, 0.2, 0);
    CHECK_THROWS_AS(run(cfg, {}), ConfigError);
    cfg.horizon = 1;
    CHECK(run(cfg, {}).records.size() == 1);

    cfg = small_config(4, 0.2, 500, 77);
    cfg.gamma = 0.25;
    cfg.loss_mode = LossMode::Binomial;
    for (auto policy : {Policy::MaxWeight, Policy::Random, Policy::Delayed}) {
        const auto a = run(cfg, {policy, std::nullopt});
        const auto b = run(cfg, {policy, std::nullopt});
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t t = 0; t < a.records.size(); ++t) {
            CHECK(a.records[t].period_index == static_cast<std::int64_t>(t));
            CHECK(a.records[t].z_total == b.records[t].z_total);
            CHECK(a.records[t].swaps == b.records[t].swaps);
            CHECK(a.records[t].drift == b.records[t].drift);
        }
        CHECK(a.final_z == b.final_z);
    }
}

TEST_CASE("run: zero arrivals shrink a backlog every period until empty") {
    // A non-zero Z gives the max-weight schedule positive weight, so at least
    // one swap happens each period and the backlog drains within |Z0| periods.
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 20; ++trial) {
        auto cfg = small_config(4, 0.0, 100);
        cfg.initial_z = oracle::random_matrix(gen, 4, 6);
        std::int64_t prev = cfg.initial_z->total();
        const auto traj = run(cfg, {});
        for (const auto& rec : traj.records) {
            if (prev > 0) CHECK(rec.z_total_after < prev);
            else CHECK(rec.z_total_after == 0);
            prev = rec.z_total_after;
        }
        CHECK(traj.final_z.total() == 0);
    }
}

TEST_CASE("conservation and swapping constraint hold every period") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto cfg = small_config(5, 0.15, 400, seed);
        cfg.gamma = 0.1 * static_cast<double>(seed % 4);
        cfg.loss_mode = seed % 2 ? LossMode::Binomial : LossMode::Deterministic;
        for (auto policy : {Policy::MaxWeight, Policy::Random, Policy::Delayed}) {
            const auto traj = run(cfg, {policy, std::nullopt});
            std::int64_t prev = 0;
            std::int64_t arrivals = 0;
            for (const auto& r : traj.records) {
                CHECK(r.z_total_after == prev + r.incoming_total - r.swaps);
                CHECK(r.swaps >= 0);
                CHECK(r.swaps <= 5 - r.losses);
                CHECK(r.delay >= 0.0);
                CHECK(r.rate_ratio >= 0.0);
                CHECK(r.rate_ratio <= 1.0);
                CHECK(r.outgoing_rate <= static_cast<double>(r.incoming_total));
                prev = r.z_total_after;
                arrivals += r.incoming_total;
            }
            std::int64_t counted = 0;
            for (auto v : traj.arrival_counts.values()) counted += v;
            CHECK(counted == arrivals);
        }
    }
}

TEST_CASE("higher noise never yields more swaps under saturation") {
    // With every pair receiving an arrival each period, every available
    // output has a non-empty set, so swaps per period equal N - L exactly.
    std::vector<std::vector<std::int64_t>> swaps;
    for (double gamma : {0.0, 0.2, 0.4, 0.6, 1.0}) {
        auto cfg = small_config(5, 1.0, 200, 11);
        cfg.gamma = gamma;
        const auto traj = run(cfg, {});
        std::vector<std::int64_t> s;
        for (const auto& r : traj.records) s.push_back(r.swaps);
        swaps.push_back(s);
    }
    for (std::size_t g = 1; g < swaps.size(); ++g) {
        for (std::size_t t = 0; t < swaps[g].size(); ++t) CHECK(swaps[g][t] <= swaps[g - 1][t]);
    }
    CHECK(swaps[1][10] == 4);
    CHECK(swaps[4][10] == 0);
}

TEST_CASE("delayed policy idles before history exists, then replays") {
    auto cfg = small_config(3, 0.3, 50, 5);
    const PolicySpec delayed{Policy::Delayed, 2};
    const auto traj = run(cfg, delayed);
    CHECK(traj.records[0].swaps == 0);
    CHECK(traj.records[1].swaps == 0);
    CHECK(traj.records[0].weight == 0.0);

    // Zero delay reproduces max-weight exactly.
    const auto zero_delay = run(cfg, {Policy::Delayed, 0});
    const auto fresh = run(cfg, {});
    for (std::size_t t = 0; t < fresh.records.size(); ++t) {
        CHECK(zero_delay.records[t].z_total == fresh.records[t].z_total);
        CHECK(zero_delay.records[t].swaps == fresh.records[t].swaps);
    }

    // Default delay comes from the extended period (h = 0.2 -> 2 periods).
    CHECK(resolve_delay(cfg, {Policy::Delayed, std::nullopt}) == 2);
    cfg.h = 0.0;
    CHECK(resolve_delay(cfg, {Policy::Delayed, std::nullopt}) == 1);
    CHECK(resolve_delay(cfg, {}) == 0);
}

TEST_CASE("one arrival per input on a permutation pattern is a perfect set") {
    RepeaterConfig cfg;
    cfg.n_connections = 4;
    cfg.arrival_probs = RateMatrix(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) cfg.arrival_probs(i, (i + 1) % 4) = 1.0;
    cfg.horizon = 100;
    const auto traj = run(cfg, {});
    for (const auto& r : traj.records) {
        CHECK(r.z_total == 4);
        CHECK(r.z_total_after == 0);
        CHECK(r.set_type == SetType::Perfect);
        CHECK(r.delay == 1.0);
    }
}
