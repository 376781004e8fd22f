#include "uavnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavnet
{

namespace
{
constexpr double kLowElevation = std::numbers::pi / 12.0;

void
check_indices(const Scenario& scenario, const Placement& placement, std::size_t i, std::size_t j,
              std::size_t t)
{
  if (i >= scenario.ugvs() || j >= scenario.uavs() || t >= scenario.slots() ||
      j >= placement.xy.size())
    {
      std::ostringstream os;
      os << "link index (i=" << i << ", j=" << j << ", t=" << t << ") out of range for N="
         << scenario.ugvs() << ", M=" << scenario.uavs() << ", T=" << scenario.slots();
      throw UsageError(os.str());
    }
}
} // namespace

std::vector<std::string>
ChannelParams::violations() const
{
  std::vector<std::string> out;
  auto positive = [&out](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      out.push_back(std::string(name) + " must be positive and finite");
  };
  positive(fc, "fc");
  positive(c, "c");
  positive(g_t, "g_t");
  positive(g_r, "g_r");
  positive(mu_los, "mu_los");
  positive(mu_nlos, "mu_nlos");
  positive(alpha_env, "alpha_env");
  positive(n0, "n0");
  if (!(gamma_env >= 0.0) || !std::isfinite(gamma_env))
    out.emplace_back("gamma_env must be nonnegative and finite");
  if (mu_nlos < mu_los)
    out.emplace_back("mu_nlos must be >= mu_los");
  return out;
}

void
ChannelParams::validate() const
{
  auto v = violations();
  if (v.empty())
    return;
  std::string msg = "invalid channel parameters:";
  for (const auto& s : v)
    msg += " " + s + ";";
  throw UsageError(msg);
}

Scenario::Scenario(std::vector<double> heights, std::vector<double> tx_power,
                   std::vector<std::vector<Vec2>> trajectories, double slot_duration)
  : heights_(std::move(heights)),
    tx_power_(std::move(tx_power)),
    trajectories_(std::move(trajectories)),
    slot_duration_(slot_duration)
{
  if (heights_.empty())
    throw UsageError("scenario needs at least one UAV");
  if (tx_power_.empty())
    throw UsageError("scenario needs at least one UGV");
  if (trajectories_.size() != tx_power_.size())
    throw UsageError("one trajectory per UGV required");
  slots_ = trajectories_.front().size();
  if (slots_ == 0)
    throw UsageError("trajectories must cover at least one time slot");
  for (const auto& tr : trajectories_)
    {
      if (tr.size() != slots_)
        throw UsageError("all trajectories must have the same number of slots");
      for (const auto& p : tr)
        {
          if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw UsageError("trajectory coordinates must be finite");
        }
    }
  for (double h : heights_)
    {
      if (!(h > 0.0) || !std::isfinite(h))
        throw UsageError("UAV heights must be positive");
    }
  for (double p : tx_power_)
    {
      if (!(p > 0.0) || !std::isfinite(p))
        throw UsageError("transmit powers must be positive");
    }
  if (!(slot_duration_ > 0.0))
    throw UsageError("slot duration must be positive");
}

bool
Placement::is_feasible() const
{
  return std::all_of(xy.begin(), xy.end(), [](const Vec2& p) { return p.x >= 0.0 && p.y >= 0.0; });
}

std::vector<double>
Placement::flatten() const
{
  std::vector<double> out;
  out.reserve(2 * xy.size());
  for (const auto& p : xy)
    {
      out.push_back(p.x);
      out.push_back(p.y);
    }
  return out;
}

Placement
Placement::from_flat(std::span<const double> flat)
{
  if (flat.size() % 2 != 0)
    throw UsageError("flattened placement must have even length");
  Placement out;
  out.xy.reserve(flat.size() / 2);
  for (std::size_t k = 0; k < flat.size(); k += 2)
    out.xy.push_back({flat[k], flat[k + 1]});
  return out;
}

double
link_distance(const Placement& placement, const Scenario& scenario, std::size_t i, std::size_t j,
              std::size_t t)
{
  check_indices(scenario, placement, i, j, t);
  const double h = scenario.height(j);
  return std::sqrt(squared_distance(placement.xy[j], scenario.position(i, t)) + h * h);
}

double
elevation_angle(double d, double h)
{
  if (!(h > 0.0))
    throw std::domain_error("elevation_angle: height must be positive");
  if (h > d)
    throw std::domain_error("elevation_angle: height exceeds link distance");
  return std::asin(h / d);
}

double
los_probability(double theta, const ChannelParams& params)
{
  if (theta <= kLowElevation)
    return 0.0;
  const double degrees_above = 180.0 * theta / std::numbers::pi - 15.0;
  const double p = params.alpha_env * std::pow(degrees_above, params.gamma_env);
  return std::clamp(p, 0.0, 1.0);
}

double
free_space_factor(double d, const ChannelParams& params)
{
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 4.0 * pi2 * d * d * params.fc * params.fc / (params.c * params.c * params.g_t * params.g_r);
}

double
path_loss(double d, const ChannelParams& params, LinkCondition condition)
{
  const double mu = condition == LinkCondition::kLos ? params.mu_los : params.mu_nlos;
  return free_space_factor(d, params) * mu;
}

double
expected_path_loss(double d, double h, const ChannelParams& params)
{
  const double p_los = los_probability(elevation_angle(d, h), params);
  return p_los * path_loss(d, params, LinkCondition::kLos) +
         (1.0 - p_los) * path_loss(d, params, LinkCondition::kNlos);
}

double
expected_path_loss(const Placement& placement, const Scenario& scenario,
                   const ChannelParams& params, std::size_t i, std::size_t j, std::size_t t)
{
  const double d = link_distance(placement, scenario, i, j, t);
  // d >= h by construction; guard the last-ulp case of sqrt(h^2) < h.
  return expected_path_loss(std::max(d, scenario.height(j)), scenario.height(j), params);
}

double
received_power(const Placement& placement, const Scenario& scenario, const ChannelParams& params,
               std::size_t i, std::size_t j, std::size_t t)
{
  return scenario.tx_power(i) / expected_path_loss(placement, scenario, params, i, j, t);
}

ReceivedPowers
received_powers(const Placement& placement, const Scenario& scenario, const ChannelParams& params)
{
  if (placement.xy.size() != scenario.uavs())
    throw UsageError("placement size does not match the UAV count");
  ReceivedPowers rx(scenario.ugvs(), scenario.uavs(), scenario.slots());
  for (std::size_t t = 0; t < scenario.slots(); ++t)
    for (std::size_t i = 0; i < scenario.ugvs(); ++i)
      for (std::size_t j = 0; j < scenario.uavs(); ++j)
        rx(i, j, t) = received_power(placement, scenario, params, i, j, t);
  return rx;
}

double
interference(const Schedule& schedule, const ReceivedPowers& rx, std::size_t i, std::size_t j,
             std::size_t t)
{
  double total = 0.0;
  for (std::size_t p = 0; p < schedule.ugvs(); ++p)
    {
      if (p == i)
        continue;
      total += schedule.ugv_activity(p, t) * rx(p, j, t);
    }
  return total;
}

double
link_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
          std::size_t i, std::size_t j, std::size_t t)
{
  const double a = schedule.at(i, j, t);
  if (a == 0.0)
    return 0.0;
  const double sinr = rx(i, j, t) / (interference(schedule, rx, i, j, t) + params.n0);
  return std::log2(1.0 + a * sinr);
}

double
link_rate(const Schedule& schedule, const Placement& placement, const Scenario& scenario,
          const ChannelParams& params, std::size_t i, std::size_t j, std::size_t t)
{
  check_indices(scenario, placement, i, j, t);
  return link_rate(schedule, received_powers(placement, scenario, params), params, i, j, t);
}

double
slot_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
          std::size_t t)
{
  double total = 0.0;
  for (std::size_t i = 0; i < schedule.ugvs(); ++i)
    for (std::size_t j = 0; j < schedule.uavs(); ++j)
      total += link_rate(schedule, rx, params, i, j, t);
  return total;
}

double
sum_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params)
{
  if (!schedule.same_shape(rx))
    throw UsageError("schedule and received-power tensors differ in shape");
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    total += slot_rate(schedule, rx, params, t);
  return total;
}

double
sum_rate(const Schedule& schedule, const Placement& placement, const Scenario& scenario,
         const ChannelParams& params)
{
  return sum_rate(schedule, received_powers(placement, scenario, params), params);
}

LinkTensor
link_rates(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params)
{
  LinkTensor out(schedule.ugvs(), schedule.uavs(), schedule.slots());
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    for (std::size_t i = 0; i < schedule.ugvs(); ++i)
      for (std::size_t j = 0; j < schedule.uavs(); ++j)
        out(i, j, t) = link_rate(schedule, rx, params, i, j, t);
  return out;
}

double
dbw_to_watts(double dbw)
{
  return std::pow(10.0, dbw / 10.0);
}

} // namespace uavnet
