#pragma once

#include <vector>

namespace pbprop {

template <typename Visitor>
bool for_each_subset_canonical(std::size_t n, Visitor &&visit) {
  if (!visit(0ULL))
    return false;
  std::vector<std::size_t> pick;
  for (std::size_t k = 1; k <= n; ++k) {
    pick.resize(k);
    for (std::size_t t = 0; t < k; ++t)
      pick[t] = t;
    for (;;) {
      unsigned long long mask = 0;
      for (auto p : pick)
        mask |= 1ULL << p;
      if (!visit(mask))
        return false;
      // Next k-combination in lexicographic order.
      std::size_t t = k;
      while (t > 0 && pick[t - 1] == n - k + t - 1)
        --t;
      if (t == 0)
        break;
      ++pick[t - 1];
      for (std::size_t u = t; u < k; ++u)
        pick[u] = pick[u - 1] + 1;
    }
  }
  return true;
}

} // namespace pbprop
