#include "swapqueue/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace swapqueue {

namespace {

template <typename T>
SquareMatrix<T> from_init_list(std::initializer_list<std::initializer_list<T>> rows) {
    std::vector<std::vector<T>> nested;
    nested.reserve(rows.size());
    for (const auto& r : rows) nested.emplace_back(r);
    return matrix_from_rows(nested);
}

} // namespace

// ---------------------------------------------------------------------------
// CoincidenceMatrix

CoincidenceMatrix::CoincidenceMatrix(CountMatrix z) : z_(std::move(z)) {
    for (auto v : z_.values()) {
        if (v < 0) throw std::invalid_argument("coincidence counts must be non-negative");
    }
}

CoincidenceMatrix::CoincidenceMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : CoincidenceMatrix(from_init_list(rows)) {}

CoincidenceMatrix CoincidenceMatrix::identity(std::size_t n) {
    CoincidenceMatrix z(n);
    for (std::size_t i = 0; i < n; ++i) z.z_(i, i) = 1;
    return z;
}

void CoincidenceMatrix::set(std::size_t i, std::size_t k, std::int64_t value) {
    if (value < 0) throw std::invalid_argument("coincidence counts must be non-negative");
    z_(i, k) = value;
}

std::int64_t CoincidenceMatrix::total() const noexcept {
    const auto v = z_.values();
    return std::accumulate(v.begin(), v.end(), std::int64_t{0});
}

// ---------------------------------------------------------------------------
// Schedule

Schedule Schedule::identity(std::size_t n) {
    Schedule s(n);
    for (std::size_t i = 0; i < n; ++i) s.s_(i, i) = 1;
    return s;
}

Schedule Schedule::from_assignment(std::span<const int> assignment) {
    const auto n = assignment.size();
    Schedule s(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = assignment[i];
        if (k < 0) continue;
        if (static_cast<std::size_t>(k) >= n || used[k]) {
            throw std::invalid_argument("assignment is not a sub-permutation");
        }
        used[k] = true;
        s.s_(i, k) = 1;
    }
    return s;
}

Schedule Schedule::from_rows(const std::vector<std::vector<int>>& rows) {
    const auto n = rows.size();
    std::vector<int> assignment(n, -1);
    std::vector<int> col_sum(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw DimensionError("schedule must be square");
        for (std::size_t k = 0; k < n; ++k) {
            const int v = rows[i][k];
            if (v != 0 && v != 1) throw std::invalid_argument("schedule entries must be 0 or 1");
            if (v == 1) {
                if (assignment[i] != -1 || ++col_sum[k] > 1) {
                    throw std::invalid_argument("schedule violates the swapping constraint");
                }
                assignment[i] = static_cast<int>(k);
            }
        }
    }
    return from_assignment(assignment);
}

std::vector<int> Schedule::assignment() const {
    const auto n = size();
    std::vector<int> a(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s_(i, k)) a[i] = static_cast<int>(k);
        }
    }
    return a;
}

std::size_t Schedule::swap_count() const noexcept {
    const auto v = s_.values();
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
}

bool Schedule::is_full_permutation() const noexcept { return swap_count() == size(); }

Schedule Schedule::restricted_to(const std::vector<bool>& available) const {
    if (available.size() != size()) throw DimensionError("availability mask size mismatch");
    Schedule out = *this;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t k = 0; k < size(); ++k) {
            if (!available[k]) out.s_(i, k) = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ArrivalBatch

ArrivalBatch::ArrivalBatch(CountMatrix b) : b_(std::move(b)) {
    for (auto v : b_.values()) {
        if (v < 0) throw std::invalid_argument("arrival counts must be non-negative");
        total_ += v;
    }
}

ArrivalBatch::ArrivalBatch(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : ArrivalBatch(from_init_list(rows)) {}

// ---------------------------------------------------------------------------

std::string_view to_string(SetType t) noexcept {
    switch (t) {
    case SetType::Perfect: return "perfect";
    case SetType::Complete: return "complete";
    case SetType::NonComplete: return "noncomplete";
    }
    return "unknown";
}

std::string_view to_string(LossMode m) noexcept {
    return m == LossMode::Deterministic ? "deterministic" : "binomial";
}

RateMatrix uniform_probs(std::size_t n, double p) { return RateMatrix(n, p); }

void RepeaterConfig::validate() const {
    if (n_connections < 1) throw ConfigError("n", "n must be at least 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma", "gamma must lie in [0, 1]");
    if (arrival_probs.size() != n_connections) {
        throw ConfigError("arrival_probs", "arrival_probs must be an n x n matrix");
    }
    for (double p : arrival_probs.values()) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("arrival_probs", "arrival probabilities must lie in [0, 1]");
        }
    }
    if (!(cycle_time > 0.0)) throw ConfigError("cycle_time", "cycle_time must be positive");
    if (cycles_per_period < 1) {
        throw ConfigError("cycles_per_period", "cycles_per_period must be at least 1");
    }
    if (!(h >= 0.0)) throw ConfigError("h", "h must be non-negative");
    if (horizon < 1) throw ConfigError("horizon", "horizon must be at least 1");
    if (initial_z && initial_z->size() != n_connections) {
        throw ConfigError("initial_z", "initial coincidence matrix must be n x n");
    }
}

// ---------------------------------------------------------------------------
// Rng

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

bool Rng::bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling over the largest multiple of `bound`.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

// ---------------------------------------------------------------------------
// Period arithmetic

double period_length(std::int64_t cycles, double cycle_time) {
    if (cycles < 1 || !(cycle_time > 0.0)) {
        throw std::invalid_argument("period_length needs cycles >= 1 and cycle_time > 0");
    }
    return static_cast<double>(cycles) * cycle_time;
}

double extended_period(double period, double h) {
    if (!(period > 0.0) || !(h >= 0.0)) {
        throw std::invalid_argument("extended_period needs period > 0 and h >= 0");
    }
    return (1.0 + h) * period;
}

double f_gamma(double gamma, double extended, std::size_t n) {
    if (gamma == 0.0) return 0.0;
    return 2.0 * extended * static_cast<double>(n);
}

std::int64_t losses_for_period(double gamma, std::size_t n, LossMode mode, Rng& rng) {
    const auto nn = static_cast<std::int64_t>(n);
    if (gamma <= 0.0) return 0;
    if (mode == LossMode::Deterministic) {
        return std::clamp<std::int64_t>(std::llround(gamma * static_cast<double>(n)), 0, nn);
    }
    std::int64_t lost = 0;
    for (std::size_t j = 0; j < n; ++j) lost += rng.bernoulli(gamma) ? 1 : 0;
    return lost;
}

SetType classify_set(std::int64_t q, std::size_t n, std::int64_t losses) {
    const auto nn = static_cast<std::int64_t>(n);
    if (losses > 0) return SetType::NonComplete;
    if (q == nn) return SetType::Perfect;
    if (q > nn) return SetType::Complete;
    // Underfilled without losses: neither cardinality condition holds.
    return SetType::NonComplete;
}

SwappingSetState swapping_set_state(std::int64_t q, std::size_t n, std::int64_t losses) {
    const auto nn = static_cast<std::int64_t>(n);
    if (losses < 0 || losses > nn) throw std::invalid_argument("losses must lie in [0, n]");
    return {q, nn - losses, losses, classify_set(q, n, losses)};
}

} // namespace swapqueue
