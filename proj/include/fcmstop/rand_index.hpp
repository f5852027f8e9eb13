#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fcmstop/fcm.hpp"

namespace fcmstop {

/// Pair agreement counts between two partitions of the same n points.
///  m00: different clusters in both; m11: same cluster in both;
///  m01: same in A, different in B; m10: different in A, same in B.
struct PairCounts {
  std::uint64_t m00 = 0;
  std::uint64_t m01 = 0;
  std::uint64_t m10 = 0;
  std::uint64_t m11 = 0;

  std::uint64_t total() const noexcept { return m00 + m01 + m10 + m11; }
};

/// Explicit O(n^2) enumeration of all point pairs.
PairCounts count_pairs(std::span<const Label> a, std::span<const Label> b);

/// Rand index by pair enumeration. Quadratic; kept as a reference for small n.
double rand_index_pairwise(std::span<const Label> a, std::span<const Label> b);

/// Rand index from the contingency table; equal to the pairwise form.
double rand_index_contingency(std::span<const Label> a, std::span<const Label> b);

/// r_m = Rand(L_m, L_n) for every iteration m of the trace.
std::vector<double> accuracy_trace(const ClusterTrace& trace);

}  // namespace fcmstop
