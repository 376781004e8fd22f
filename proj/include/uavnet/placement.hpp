#pragma once

#include "uavnet/channel.hpp"
#include "uavnet/types.hpp"

#include <vector>

namespace uavnet
{

struct GdConfig
{
  double step_init = 50.0;  ///< initial trial displacement per iteration (m)
  double backtrack = 0.5;
  double armijo_c = 1e-4;
  int max_backtracks = 15;
  int max_iters = 300;
  double grad_tol = 1e-6;   ///< projected-gradient norm (bits/s/Hz per m)
  double fd_step = 0.1;     ///< finite-difference step (m)

  std::vector<std::string> violations() const;
};

/// Sum rate as a function of the UAV coordinates for a fixed schedule.
double placement_objective(const Placement& placement, const Schedule& schedule,
                           const Scenario& scenario, const ChannelParams& params);

struct PlacementGradient
{
  /// Interleaved (d/dx_j, d/dy_j) for every UAV j.
  std::vector<double> grad;
  /// Some active link was within fd_step of the 15 degree elevation threshold;
  /// those UAVs got one-sided finite differences instead of the chain rule.
  bool kink = false;
};

PlacementGradient placement_gradient(const Placement& placement, const Schedule& schedule,
                                     const Scenario& scenario, const ChannelParams& params,
                                     double fd_step = 0.1);

std::vector<double> project_nonneg(std::span<const double> xy);

struct GdResult
{
  Placement placement;
  std::vector<double> trace; ///< objective at every accepted iterate, starting point first
  int iterations = 0;
  bool converged = true;     ///< false when the iteration cap was hit
  bool kink = false;
};

/// Projected gradient ascent with Armijo backtracking onto x, y >= 0.
GdResult gd_solve(const Placement& placement_init, const Schedule& schedule,
                  const Scenario& scenario, const ChannelParams& params, const GdConfig& config);

} // namespace uavnet
