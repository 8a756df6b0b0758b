#pragma once

// k-subset enumeration in lexicographic order, shared by the Pluecker
// embedding and the coordinate-plane sweeps.

#include <vector>

namespace grassgeo::detail {

inline std::vector<std::vector<int>> lex_subsets(int n_total, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n_total) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n_total - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace grassgeo::detail
