#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uavnet
{

/// A partial matching between N rows (UGVs) and M columns (UAVs).
struct Matching
{
  /// column_of[i] is the column matched to row i, or -1.
  std::vector<int> column_of;
  double value = 0.0;

  std::size_t size() const;
  /// Dense row-major 0/1 matrix of the matching.
  std::vector<double> to_dense(std::size_t cols) const;
};

/**
 * Linear maximization oracle over the doubly-substochastic polytope: the 0/1
 * matrix with row and column sums <= 1 maximizing sum w_ij x_ij. Entries
 * with w_ij <= 0 are never selected, so the empty matching is returned when
 * every weight is nonpositive.
 *
 * weights is row-major rows x cols.
 */
Matching matching_lmo(std::span<const double> weights, std::size_t rows, std::size_t cols);

/**
 * Same oracle with lexicographic weights: ties in the primary weight are
 * resolved by the secondary, then the tertiary weight. Selection requires a
 * lexicographically positive weight.
 */
Matching matching_lmo_lex(std::span<const double> primary, std::span<const double> secondary,
                          std::span<const double> tertiary, std::size_t rows, std::size_t cols);

} // namespace uavnet
