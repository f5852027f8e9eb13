#include "fcmstop/rand_index.hpp"

#include <algorithm>
#include <string>

#include "fcmstop/errors.hpp"

namespace fcmstop {
namespace {

void check_inputs(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw InputError("partition sizes differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw InputError("Rand index needs at least 2 points");
}

constexpr std::uint64_t choose2(std::uint64_t n) noexcept { return n * (n - (n > 0 ? 1 : 0)) / 2; }

}  // namespace

PairCounts count_pairs(std::span<const Label> a, std::span<const Label> b) {
  check_inputs(a, b);
  PairCounts counts;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool same_a = a[i] == a[k];
      const bool same_b = b[i] == b[k];
      if (same_a && same_b) {
        ++counts.m11;
      } else if (same_a) {
        ++counts.m01;
      } else if (same_b) {
        ++counts.m10;
      } else {
        ++counts.m00;
      }
    }
  }
  return counts;
}

double rand_index_pairwise(std::span<const Label> a, std::span<const Label> b) {
  const PairCounts c = count_pairs(a, b);
  return static_cast<double>(c.m00 + c.m11) / static_cast<double>(c.total());
}

double rand_index_contingency(std::span<const Label> a, std::span<const Label> b) {
  check_inputs(a, b);
  const std::size_t ka = static_cast<std::size_t>(*std::max_element(a.begin(), a.end())) + 1;
  const std::size_t kb = static_cast<std::size_t>(*std::max_element(b.begin(), b.end())) + 1;

  std::vector<std::uint64_t> table(ka * kb, 0);
  std::vector<std::uint64_t> rows(ka, 0);
  std::vector<std::uint64_t> cols(kb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++table[a[i] * kb + b[i]];
    ++rows[a[i]];
    ++cols[b[i]];
  }

  std::uint64_t same_both = 0;
  for (std::uint64_t nij : table) same_both += choose2(nij);
  std::uint64_t same_a = 0;
  for (std::uint64_t r : rows) same_a += choose2(r);
  std::uint64_t same_b = 0;
  for (std::uint64_t c : cols) same_b += choose2(c);

  const std::uint64_t total = choose2(a.size());
  // m11 + m00 = total + 2*m11 - (m11 + m01) - (m11 + m10); never negative.
  const std::uint64_t agree = total + 2 * same_both - same_a - same_b;
  return static_cast<double>(agree) / static_cast<double>(total);
}

std::vector<double> accuracy_trace(const ClusterTrace& trace) {
  if (trace.labels.size() < 2) throw InputError("accuracy_trace needs at least 2 iterations");
  const Labels& final_labels = trace.labels.back();
  std::vector<double> accuracies;
  accuracies.reserve(trace.labels.size());
  for (std::size_t m = 0; m + 1 < trace.labels.size(); ++m) {
    accuracies.push_back(rand_index_contingency(trace.labels[m], final_labels));
  }
  accuracies.push_back(1.0);
  return accuracies;
}

}  // namespace fcmstop
