#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnet
{

/// Raised for malformed inputs: bad indices, sizes, or configuration.
class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a schedule violates the one-to-one link constraints.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double
squared_distance(const Vec2& a, const Vec2& b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/**
 * Dense N x M x T tensor indexed by (ugv i, uav j, slot t).
 *
 * Storage is slot-major so that one slot is a contiguous row-major N x M
 * block; the per-slot solvers work on those blocks directly.
 */
class LinkTensor
{
public:
  LinkTensor() = default;
  LinkTensor(std::size_t n, std::size_t m, std::size_t t, double fill = 0.0)
    : n_(n), m_(m), t_(t), data_(n * m * t, fill)
  {
  }

  std::size_t ugvs() const { return n_; }
  std::size_t uavs() const { return m_; }
  std::size_t slots() const { return t_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t t)
  {
    return data_[index(i, j, t)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t t) const
  {
    return data_[index(i, j, t)];
  }

  double& at(std::size_t i, std::size_t j, std::size_t t)
  {
    check(i, j, t);
    return data_[index(i, j, t)];
  }
  double at(std::size_t i, std::size_t j, std::size_t t) const
  {
    check(i, j, t);
    return data_[index(i, j, t)];
  }

  /// Row-major N x M block of slot t.
  std::span<double> slot(std::size_t t) { return {data_.data() + t * n_ * m_, n_ * m_}; }
  std::span<const double> slot(std::size_t t) const
  {
    return {data_.data() + t * n_ * m_, n_ * m_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const LinkTensor& other) const
  {
    return n_ == other.n_ && m_ == other.m_ && t_ == other.t_;
  }

  friend bool operator==(const LinkTensor&, const LinkTensor&) = default;

private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t t) const
  {
    return (t * n_ + i) * m_ + j;
  }
  void check(std::size_t i, std::size_t j, std::size_t t) const
  {
    if (i >= n_ || j >= m_ || t >= t_)
      {
        throw UsageError("link index (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                         std::to_string(t) + ") out of range");
      }
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t t_ = 0;
  std::vector<double> data_;
};

/// Received powers P^R_ij[t] (W), one entry per UGV/UAV/slot.
using ReceivedPowers = LinkTensor;

/**
 * Scheduling tensor a_ij[t]. Continuous in [0, 1] while relaxed, binary once
 * rounded. Per slot every row (UGV) and column (UAV) sums to at most one.
 */
class Schedule : public LinkTensor
{
public:
  using LinkTensor::LinkTensor;

  /// Entries in [0, 1] and row/column sums <= 1 within tol.
  bool is_relaxed_feasible(double tol = 1e-9) const;
  /// Every entry exactly 0 or 1 and at most one link per row and column.
  bool is_binary_feasible() const;
  /// Sum over all entries of a (1 - a).
  double binary_residual() const;
  /// Total activity s_p[t] = sum_q a_pq[t] of UGV p.
  double ugv_activity(std::size_t p, std::size_t t) const;
};

} // namespace uavnet
