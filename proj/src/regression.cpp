#include "mosc/regression.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace mosc {

FoldAssignment make_folds(Index n, int M, std::uint64_t seed) {
  if (M < 2) throw DomainError("number of folds must be >= 2, got " + std::to_string(M));
  if (M > n)
    throw DomainError("number of folds (" + std::to_string(M) + ") exceeds record count (" + std::to_string(n) + ")");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  FoldAssignment folds;
  folds.M = M;
  folds.fold_of.resize(n);
  folds.fold_sizes.assign(static_cast<std::size_t>(M), 0);
  for (Index pos = 0; pos < n; ++pos) {
    const int m = static_cast<int>(pos % M);
    folds.fold_of(order[static_cast<std::size_t>(pos)]) = m;
    ++folds.fold_sizes[static_cast<std::size_t>(m)];
  }
  return folds;
}

}  // namespace mosc
