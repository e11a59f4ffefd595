#include "swapqueue/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace swapqueue {

namespace {

using Cost = std::int64_t;

struct Assignment {
    std::vector<int> row_to_col;
    std::vector<Cost> u; // row potentials, 0-based
    std::vector<Cost> v; // column potentials, 0-based
};

// Minimum-cost perfect assignment (shortest augmenting path form of the
// Hungarian method). Potentials stay integral because costs are integers,
// and cost(i, k) - u[i] - v[k] >= 0 holds on exit with equality on every
// matched pair.
Assignment solve_min_cost(const CountMatrix& cost) {
    const std::size_t n = cost.size();
    constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
    std::vector<Cost> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            Cost delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const Cost cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Assignment out;
    out.row_to_col.assign(n, -1);
    for (std::size_t j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

// Kuhn-style augmenting search over tight edges. Columns owned by fixed rows
// are never re-assigned.
class TightMatcher {
public:
    TightMatcher(std::vector<std::vector<char>> tight, std::vector<int> row_to_col)
        : n_(tight.size()), tight_(std::move(tight)), row_to_col_(std::move(row_to_col)),
          col_to_row_(n_, -1), fixed_(n_, 0) {
        for (std::size_t i = 0; i < n_; ++i) col_to_row_[row_to_col_[i]] = static_cast<int>(i);
    }

    // Lexicographically smallest perfect matching among tight edges.
    std::vector<int> lexicographic_min() {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                if (!tight_[i][k] || is_blocked(k)) continue;
                if (row_to_col_[i] == static_cast<int>(k) || try_force(i, k)) break;
            }
            fixed_[i] = 1;
        }
        return row_to_col_;
    }

private:
    bool is_blocked(std::size_t k) const {
        const int r = col_to_row_[k];
        return r >= 0 && fixed_[r];
    }

    // Re-route the matching so that row i takes column k.
    bool try_force(std::size_t i, std::size_t k) {
        const auto saved_rc = row_to_col_;
        const auto saved_cr = col_to_row_;
        const int displaced = col_to_row_[k];
        const int freed = row_to_col_[i];

        row_to_col_[i] = static_cast<int>(k);
        col_to_row_[k] = static_cast<int>(i);
        row_to_col_[displaced] = -1;
        col_to_row_[freed] = -1;

        fixed_[i] = 1; // keeps column k out of the search
        visited_.assign(n_, 0);
        const bool ok = augment(static_cast<std::size_t>(displaced));
        fixed_[i] = 0;
        if (!ok) {
            row_to_col_ = saved_rc;
            col_to_row_ = saved_cr;
        }
        return ok;
    }

    bool augment(std::size_t r) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!tight_[r][j] || visited_[j] || is_blocked(j)) continue;
            visited_[j] = 1;
            const int owner = col_to_row_[j];
            if (owner < 0 || augment(static_cast<std::size_t>(owner))) {
                row_to_col_[r] = static_cast<int>(j);
                col_to_row_[j] = static_cast<int>(r);
                return true;
            }
        }
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<char>> tight_;
    std::vector<int> row_to_col_;
    std::vector<int> col_to_row_;
    std::vector<char> fixed_;
    std::vector<char> visited_;
};

std::vector<int> lexicographic_max_assignment(const CountMatrix& w) {
    const std::size_t n = w.size();
    if (n == 0) return {};
    CountMatrix cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) cost(i, k) = -w(i, k);
    }
    auto solved = solve_min_cost(cost);

    // Every optimal permutation lives on the tight edges of an optimal dual.
    std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            tight[i][k] = (cost(i, k) - solved.u[i] - solved.v[k]) == 0 ? 1 : 0;
        }
    }
    return TightMatcher(std::move(tight), std::move(solved.row_to_col)).lexicographic_min();
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

} // namespace

double weight(const Schedule& schedule, const CoincidenceMatrix& z) {
    require_same_size(schedule.size(), z.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (schedule(i, k)) total += z(i, k);
        }
    }
    return static_cast<double>(total);
}

Schedule max_weight_schedule(const CoincidenceMatrix& z) {
    const auto assignment = lexicographic_max_assignment(z.counts());
    return Schedule::from_assignment(assignment);
}

Schedule brute_force_max_weight(const CoincidenceMatrix& z) {
    const std::size_t n = z.size();
    if (n > kBruteForceMaxN) {
        throw std::invalid_argument("brute_force_max_weight refuses N > " +
                                    std::to_string(kBruteForceMaxN));
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    std::int64_t best_weight = std::numeric_limits<std::int64_t>::min();
    // next_permutation walks in lexicographic order, so a strict comparison
    // keeps the smallest maximizer.
    do {
        std::int64_t w = 0;
        for (std::size_t i = 0; i < n; ++i) w += z(i, static_cast<std::size_t>(perm[i]));
        if (w > best_weight) {
            best_weight = w;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Schedule::from_assignment(best);
}

Schedule masked_max_weight(const CoincidenceMatrix& z, const std::vector<bool>& available) {
    require_same_size(available.size(), z.size());
    const std::size_t n = z.size();
    // Unavailable columns carry zero weight; with non-negative counts the
    // full-permutation optimum restricted to available columns is optimal
    // among sub-permutations on those columns.
    CountMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) w(i, k) = available[k] ? z(i, k) : 0;
    }
    return Schedule::from_assignment(lexicographic_max_assignment(w)).restricted_to(available);
}

Schedule random_schedule(Rng& rng, std::size_t n, const std::vector<bool>& available) {
    require_same_size(available.size(), n);
    std::vector<int> inputs(n);
    std::iota(inputs.begin(), inputs.end(), 0);
    for (std::size_t j = n; j > 1; --j) {
        const auto r = static_cast<std::size_t>(rng.below(j));
        std::swap(inputs[j - 1], inputs[r]);
    }
    std::vector<int> assignment(n, -1);
    std::size_t next_input = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!available[k]) continue;
        assignment[static_cast<std::size_t>(inputs[next_input++])] = static_cast<int>(k);
    }
    return Schedule::from_assignment(assignment);
}

Schedule delayed_schedule(std::span<const Schedule> history, std::int64_t t, std::int64_t delay,
                          std::size_t n, std::int64_t first_period) {
    if (delay < 0) throw std::invalid_argument("delay must be non-negative");
    if (t < delay) return Schedule::zero(n);
    const std::int64_t index = t - delay - first_period;
    if (index < 0 || index >= static_cast<std::int64_t>(history.size())) {
        throw std::out_of_range("history does not cover period " + std::to_string(t - delay));
    }
    return history[static_cast<std::size_t>(index)];
}

std::int64_t delay_in_periods(double extended, double period) {
    if (!(period > 0.0) || !(extended >= 0.0)) {
        throw std::invalid_argument("delay_in_periods needs period > 0 and extended >= 0");
    }
    // Guard against (1 + h) * period landing a hair above an integer ratio.
    return static_cast<std::int64_t>(std::ceil(extended / period - 1e-9));
}

double schedule_norm(const Schedule& schedule) {
    const std::size_t n = schedule.size();
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t k = 0; k < n; ++k) {
            row += schedule(i, k) ? 1 : 0;
            col += schedule(k, i) ? 1 : 0;
        }
        best = std::max({best, row, col});
    }
    return static_cast<double>(best);
}

} // namespace swapqueue
