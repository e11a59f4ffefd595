#pragma once

// Swap schedule construction: exact max-weight assignment, the factorial
// enumeration used to cross-check it, and the random and delayed policies.

#include <cstdint>
#include <span>
#include <vector>

#include "swapqueue/core_model.hpp"

namespace swapqueue {

/// Largest N accepted by brute_force_max_weight.
inline constexpr std::size_t kBruteForceMaxN = 9;

/// Inner product <schedule, z>. Throws DimensionError on size mismatch.
double weight(const Schedule& schedule, const CoincidenceMatrix& z);

/// Full permutation maximizing <s, z>. Among maximizers, returns the one whose
/// assignment vector (output per input row) is lexicographically smallest.
///
/// Solved with a shortest-augmenting-path Hungarian method on integer costs;
/// the optimal dual then identifies the tight edges, and the lexicographic
/// maximizer is extracted as the smallest perfect matching over those edges.
Schedule max_weight_schedule(const CoincidenceMatrix& z);

/// Enumerates all N! permutations. Same tie-break as max_weight_schedule.
/// Throws std::invalid_argument if N > kBruteForceMaxN.
Schedule brute_force_max_weight(const CoincidenceMatrix& z);

/// Max-weight schedule that only uses outputs with `available[k] == true`.
/// Every available output is assigned to some input, so the result holds
/// exactly min(N, |available|) swaps.
Schedule masked_max_weight(const CoincidenceMatrix& z, const std::vector<bool>& available);

/// Uniformly random maximal matching of inputs onto the available outputs.
Schedule random_schedule(Rng& rng, std::size_t n, const std::vector<bool>& available);

/// Delayed policy: the max-weight schedule from `delay` periods ago.
/// `history[j]` holds the max-weight schedule of period `first_period + j`
/// and must cover period `t - delay` whenever `t >= delay`.
/// Before enough history exists the zero schedule is returned.
Schedule delayed_schedule(std::span<const Schedule> history, std::int64_t t, std::int64_t delay,
                          std::size_t n, std::int64_t first_period = 0);

/// Number of whole periods covered by a time offset of `extended` seconds.
std::int64_t delay_in_periods(double extended, double period);

/// Largest row or column sum.
double schedule_norm(const Schedule& schedule);

} // namespace swapqueue
