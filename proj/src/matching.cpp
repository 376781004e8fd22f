#include "uavnet/matching.hpp"

#include "uavnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace uavnet
{

namespace
{

struct Lex3
{
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Lex3 operator+(const Lex3& o) const { return {a + o.a, b + o.b, c + o.c}; }
  Lex3 operator-(const Lex3& o) const { return {a - o.a, b - o.b, c - o.c}; }
  Lex3 operator-() const { return {-a, -b, -c}; }
  Lex3& operator+=(const Lex3& o) { return *this = *this + o; }
  Lex3& operator-=(const Lex3& o) { return *this = *this - o; }
  bool operator<(const Lex3& o) const
  {
    if (a != o.a)
      return a < o.a;
    if (b != o.b)
      return b < o.b;
    return c < o.c;
  }
};

template <class W>
W
infinity()
{
  if constexpr (std::is_same_v<W, Lex3>)
    return Lex3{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  else
    return std::numeric_limits<double>::infinity();
}

/**
 * Minimum-cost assignment of every row to a distinct column (rows <= cols),
 * shortest augmenting path with potentials. Returns the column of each row.
 */
template <class W>
std::vector<int>
min_cost_assignment(const std::vector<W>& cost, std::size_t rows, std::size_t cols)
{
  const W inf = infinity<W>();
  std::vector<W> u(rows + 1, W{}), v(cols + 1, W{});
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i)
    {
      p[0] = i;
      std::size_t j0 = 0;
      std::vector<W> minv(cols + 1, inf);
      std::vector<char> used(cols + 1, 0);
      do
        {
          used[j0] = 1;
          const std::size_t i0 = p[j0];
          W delta = inf;
          std::size_t j1 = 0;
          for (std::size_t j = 1; j <= cols; ++j)
            {
              if (used[j])
                continue;
              const W cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
              if (cur < minv[j])
                {
                  minv[j] = cur;
                  way[j] = j0;
                }
              if (minv[j] < delta)
                {
                  delta = minv[j];
                  j1 = j;
                }
            }
          for (std::size_t j = 0; j <= cols; ++j)
            {
              if (used[j])
                {
                  u[p[j]] += delta;
                  v[j] -= delta;
                }
              else
                {
                  minv[j] -= delta;
                }
            }
          j0 = j1;
        }
      while (p[j0] != 0);
      do
        {
          const std::size_t j1 = way[j0];
          p[j0] = p[j1];
          j0 = j1;
        }
      while (j0 != 0);
    }

  std::vector<int> col_of(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j)
    {
      if (p[j] != 0)
        col_of[p[j] - 1] = static_cast<int>(j - 1);
    }
  return col_of;
}

template <class W>
std::vector<int>
max_weight_partial_matching(const std::vector<W>& weights, std::size_t rows, std::size_t cols)
{
  std::vector<int> column_of(rows, -1);
  if (rows == 0 || cols == 0)
    return column_of;

  const W zero{};
  const bool transpose = rows > cols;
  const std::size_t r = transpose ? cols : rows;
  const std::size_t c = transpose ? rows : cols;
  std::vector<W> cost(r * c);
  for (std::size_t i = 0; i < rows; ++i)
    {
      for (std::size_t j = 0; j < cols; ++j)
        {
          const W w = weights[i * cols + j];
          const W clipped = zero < w ? w : zero;
          const std::size_t k = transpose ? j * c + i : i * c + j;
          cost[k] = -clipped;
        }
    }

  const auto assigned = min_cost_assignment(cost, r, c);
  for (std::size_t k = 0; k < r; ++k)
    {
      const std::size_t i = transpose ? static_cast<std::size_t>(assigned[k]) : k;
      const std::size_t j = transpose ? k : static_cast<std::size_t>(assigned[k]);
      if (zero < weights[i * cols + j])
        column_of[i] = static_cast<int>(j);
    }
  return column_of;
}

} // namespace

std::size_t
Matching::size() const
{
  return static_cast<std::size_t>(
      std::count_if(column_of.begin(), column_of.end(), [](int c) { return c >= 0; }));
}

std::vector<double>
Matching::to_dense(std::size_t cols) const
{
  std::vector<double> out(column_of.size() * cols, 0.0);
  for (std::size_t i = 0; i < column_of.size(); ++i)
    {
      if (column_of[i] >= 0)
        out[i * cols + static_cast<std::size_t>(column_of[i])] = 1.0;
    }
  return out;
}

Matching
matching_lmo(std::span<const double> weights, std::size_t rows, std::size_t cols)
{
  if (weights.size() != rows * cols)
    throw UsageError("matching_lmo: weight matrix has the wrong size");
  for (double w : weights)
    {
      if (!std::isfinite(w))
        throw UsageError("matching_lmo: weights must be finite");
    }
  Matching out;
  out.column_of = max_weight_partial_matching(std::vector<double>(weights.begin(), weights.end()),
                                              rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    {
      if (out.column_of[i] >= 0)
        out.value += weights[i * cols + static_cast<std::size_t>(out.column_of[i])];
    }
  return out;
}

Matching
matching_lmo_lex(std::span<const double> primary, std::span<const double> secondary,
                 std::span<const double> tertiary, std::size_t rows, std::size_t cols)
{
  const std::size_t n = rows * cols;
  if (primary.size() != n || secondary.size() != n || tertiary.size() != n)
    throw UsageError("matching_lmo_lex: weight matrices have the wrong size");
  std::vector<Lex3> weights(n);
  for (std::size_t k = 0; k < n; ++k)
    weights[k] = {primary[k], secondary[k], tertiary[k]};
  Matching out;
  out.column_of = max_weight_partial_matching(weights, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    {
      if (out.column_of[i] >= 0)
        out.value += primary[i * cols + static_cast<std::size_t>(out.column_of[i])];
    }
  return out;
}

} // namespace uavnet
