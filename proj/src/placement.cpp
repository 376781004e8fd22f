#include "uavnet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uavnet
{

namespace
{

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;
constexpr double kLowElevation = std::numbers::pi / 12.0;
// Accepted displacements below this length end the ascent (m).
constexpr double kMinDisplacement = 1e-6;

enum class LosBranch
{
  kBelowThreshold,
  kSmooth,
  kSaturated,
};

LosBranch
los_branch(double theta, const ChannelParams& params)
{
  if (theta <= kLowElevation)
    return LosBranch::kBelowThreshold;
  const double deg = 180.0 * theta / std::numbers::pi - 15.0;
  return params.alpha_env * std::pow(deg, params.gamma_env) >= 1.0 ? LosBranch::kSaturated
                                                                    : LosBranch::kSmooth;
}

/// Received power of one link and its derivative w.r.t. the UAV's x and y.
struct PowerDerivative
{
  double power = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

PowerDerivative
power_derivative(const Vec2& uav, const Vec2& ugv, double h, double tx, const ChannelParams& params)
{
  const double ex = uav.x - ugv.x;
  const double ey = uav.y - ugv.y;
  const double rho2 = ex * ex + ey * ey;
  const double rho = std::sqrt(rho2);
  const double d2 = rho2 + h * h;
  const double d = std::sqrt(d2);
  const double theta = std::atan2(h, rho);

  const double free_space = free_space_factor(d, params);
  const double p_los = los_probability(theta, params);
  const double mu = p_los * params.mu_los + (1.0 - p_los) * params.mu_nlos;
  const double loss = free_space * mu;

  // d(free space)/dx = 2 K ex since free space = K d^2
  const double k = free_space / d2;
  double dloss_dx = 2.0 * k * ex * mu;
  double dloss_dy = 2.0 * k * ey * mu;
  if (rho > 0.0 && los_branch(theta, params) == LosBranch::kSmooth)
    {
      const double deg = 180.0 * theta / std::numbers::pi - 15.0;
      const double dp_dtheta = params.alpha_env * params.gamma_env * (180.0 / std::numbers::pi) *
                               std::pow(deg, params.gamma_env - 1.0);
      const double dmu_dtheta = dp_dtheta * (params.mu_los - params.mu_nlos);
      // theta = atan2(h, rho): dtheta/dx = -h ex / (d^2 rho)
      const double dtheta_common = -h / (d2 * rho);
      dloss_dx += free_space * dmu_dtheta * dtheta_common * ex;
      dloss_dy += free_space * dmu_dtheta * dtheta_common * ey;
    }

  PowerDerivative out;
  out.power = tx / loss;
  out.dx = -out.power * dloss_dx / loss;
  out.dy = -out.power * dloss_dy / loss;
  return out;
}

/// True when the LoS branch differs somewhere within +-h of the current planar offset.
bool
near_kink(const Vec2& uav, const Vec2& ugv, double height, double h, const ChannelParams& params)
{
  const double rho = std::sqrt(squared_distance(uav, ugv));
  const auto branch_at = [&](double r) { return los_branch(std::atan2(height, std::max(r, 0.0)), params); };
  const auto here = branch_at(rho);
  return branch_at(rho - h) != here || branch_at(rho + h) != here;
}

double
norm(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

} // namespace

std::vector<std::string>
GdConfig::violations() const
{
  std::vector<std::string> out;
  if (!(step_init > 0.0))
    out.emplace_back("step_init must be > 0");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    out.emplace_back("backtrack must lie in (0, 1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    out.emplace_back("armijo_c must lie in (0, 1)");
  if (max_backtracks < 1)
    out.emplace_back("max_backtracks must be >= 1");
  if (max_iters < 1)
    out.emplace_back("max_iters must be >= 1");
  if (!(grad_tol > 0.0))
    out.emplace_back("grad_tol must be > 0");
  if (!(fd_step > 0.0))
    out.emplace_back("fd_step must be > 0");
  return out;
}

double
placement_objective(const Placement& placement, const Schedule& schedule, const Scenario& scenario,
                    const ChannelParams& params)
{
  return sum_rate(schedule, placement, scenario, params);
}

PlacementGradient
placement_gradient(const Placement& placement, const Schedule& schedule, const Scenario& scenario,
                   const ChannelParams& params, double fd_step)
{
  const std::size_t n = scenario.ugvs();
  const std::size_t m = scenario.uavs();
  if (placement.xy.size() != m)
    throw UsageError("placement size does not match the UAV count");
  if (schedule.ugvs() != n || schedule.uavs() != m || schedule.slots() != scenario.slots())
    throw UsageError("schedule shape does not match the scenario");

  PlacementGradient out;
  out.grad.assign(2 * m, 0.0);
  std::vector<PowerDerivative> pd(n);
  std::vector<double> activity(n);

  for (std::size_t j = 0; j < m; ++j)
    {
      bool kinked = false;
      double gx = 0.0;
      double gy = 0.0;
      for (std::size_t t = 0; t < scenario.slots() && !kinked; ++t)
        {
          bool receiving = false;
          for (std::size_t i = 0; i < n; ++i)
            receiving = receiving || schedule(i, j, t) > 0.0;
          if (!receiving)
            continue;

          for (std::size_t p = 0; p < n; ++p)
            {
              activity[p] = schedule.ugv_activity(p, t);
              if (activity[p] > 0.0 &&
                  near_kink(placement.xy[j], scenario.position(p, t), scenario.height(j), fd_step,
                            params))
                kinked = true;
              pd[p] = power_derivative(placement.xy[j], scenario.position(p, t),
                                       scenario.height(j), scenario.tx_power(p), params);
            }
          if (kinked)
            break;

          for (std::size_t i = 0; i < n; ++i)
            {
              const double a = schedule(i, j, t);
              if (a == 0.0)
                continue;
              double interf = 0.0;
              double dix = 0.0;
              double diy = 0.0;
              for (std::size_t p = 0; p < n; ++p)
                {
                  if (p == i)
                    continue;
                  interf += activity[p] * pd[p].power;
                  dix += activity[p] * pd[p].dx;
                  diy += activity[p] * pd[p].dy;
                }
              const double total = params.n0 + a * pd[i].power + interf;
              const double noise = params.n0 + interf;
              gx += kInvLn2 * ((a * pd[i].dx + dix) / total - dix / noise);
              gy += kInvLn2 * ((a * pd[i].dy + diy) / total - diy / noise);
            }
        }

      if (kinked)
        {
          out.kink = true;
          const double base = placement_objective(placement, schedule, scenario, params);
          for (int axis = 0; axis < 2; ++axis)
            {
              Placement probe = placement;
              (axis == 0 ? probe.xy[j].x : probe.xy[j].y) += fd_step;
              out.grad[2 * j + axis] =
                  (placement_objective(probe, schedule, scenario, params) - base) / fd_step;
            }
        }
      else
        {
          out.grad[2 * j] = gx;
          out.grad[2 * j + 1] = gy;
        }
    }
  return out;
}

std::vector<double>
project_nonneg(std::span<const double> xy)
{
  std::vector<double> out(xy.begin(), xy.end());
  for (double& v : out)
    v = std::max(v, 0.0);
  return out;
}

GdResult
gd_solve(const Placement& placement_init, const Schedule& schedule, const Scenario& scenario,
         const ChannelParams& params, const GdConfig& config)
{
  GdResult out;
  auto x = project_nonneg(placement_init.flatten());
  double value = placement_objective(Placement::from_flat(x), schedule, scenario, params);
  out.trace.push_back(value);
  out.converged = false;
  double trial = config.step_init;

  while (out.iterations < config.max_iters)
    {
      const auto g = placement_gradient(Placement::from_flat(x), schedule, scenario, params,
                                        config.fd_step);
      out.kink = out.kink || g.kink;
      std::vector<double> pg = g.grad;
      for (std::size_t k = 0; k < pg.size(); ++k)
        {
          if (x[k] <= 0.0 && pg[k] < 0.0)
            pg[k] = 0.0;
        }
      const double pg_norm = norm(pg);
      if (pg_norm < config.grad_tol)
        {
          out.converged = true;
          break;
        }

      bool accepted = false;
      double length = trial;
      std::vector<double> next(x.size());
      double next_value = value;
      for (int b = 0; b <= config.max_backtracks; ++b, length *= config.backtrack)
        {
          const double scale = length / pg_norm;
          for (std::size_t k = 0; k < x.size(); ++k)
            next[k] = std::max(x[k] + scale * g.grad[k], 0.0);
          double predicted = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k)
            predicted += g.grad[k] * (next[k] - x[k]);
          next_value = placement_objective(Placement::from_flat(next), schedule, scenario, params);
          if (next_value >= value + config.armijo_c * predicted && next_value >= value)
            {
              accepted = true;
              break;
            }
        }
      if (!accepted)
        {
          out.converged = true;
          break;
        }

      ++out.iterations;
      double moved = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k)
        moved += (next[k] - x[k]) * (next[k] - x[k]);
      moved = std::sqrt(moved);
      x = next;
      value = next_value;
      out.trace.push_back(value);
      if (moved < kMinDisplacement)
        {
          out.converged = true;
          break;
        }
      trial = std::min(config.step_init, 2.0 * length);
    }

  out.placement = Placement::from_flat(x);
  return out;
}

} // namespace uavnet
