#pragma once

#include <algorithm>
#include <vector>

namespace osw::detail {

// Order-independent reduction: sorts the terms before accumulating, so equal
// multisets of terms produce bit-identical sums regardless of input order.
// Welfare must be invariant under type permutations with uniform shares; a
// plain left-to-right sum is not.
inline long double ordered_sum(std::vector<long double> terms) {
  std::sort(terms.begin(), terms.end());
  long double total = 0.0L;
  for (long double t : terms) total += t;
  return total;
}

}  // namespace osw::detail
