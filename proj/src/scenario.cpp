#include "uavnet/scenario.hpp"

#include "uavnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uavnet
{

namespace
{

constexpr double kArenaCenter = 300.0;
constexpr double kLineOffset = 30.0;
constexpr double kCircleSpacing = 300.0;

std::vector<double>
broadcast(const std::vector<double>& values, std::size_t count)
{
  if (values.size() == 1)
    return std::vector<double>(count, values.front());
  return values;
}

Scenario
assemble(const TrajectorySpec& spec, std::vector<std::vector<Vec2>> trajectories)
{
  return Scenario(broadcast(spec.uav_heights, spec.m_uavs),
                  broadcast(spec.tx_power_w, spec.n_ugvs), std::move(trajectories),
                  spec.slot_duration_s);
}

void
require_valid(const TrajectorySpec& spec, TrajectoryKind kind)
{
  if (spec.kind != kind)
    throw UsageError("trajectory spec has kind '" + to_string(spec.kind) + "', expected '" +
                     to_string(kind) + "'");
  const auto v = spec.violations();
  if (!v.empty())
    throw UsageError("invalid trajectory spec: " + v.front());
}

Vec2
average_position(const Scenario& scenario, std::size_t i)
{
  Vec2 sum;
  for (std::size_t t = 0; t < scenario.slots(); ++t)
    {
      sum.x += scenario.position(i, t).x;
      sum.y += scenario.position(i, t).y;
    }
  const double k = static_cast<double>(scenario.slots());
  return {sum.x / k, sum.y / k};
}

} // namespace

std::string
to_string(TrajectoryKind kind)
{
  switch (kind)
    {
    case TrajectoryKind::kLine:
      return "line";
    case TrajectoryKind::kCircle:
      return "circle";
    case TrajectoryKind::kCustom:
      return "custom";
    }
  return "unknown";
}

TrajectoryKind
trajectory_kind_from_string(const std::string& s)
{
  if (s == "line")
    return TrajectoryKind::kLine;
  if (s == "circle")
    return TrajectoryKind::kCircle;
  if (s == "custom")
    return TrajectoryKind::kCustom;
  throw UsageError("unknown trajectory kind '" + s + "'");
}

std::vector<std::string>
TrajectorySpec::violations() const
{
  std::vector<std::string> out;
  auto add = [&out](const std::string& field, const std::string& msg) {
    out.push_back("scenario." + field + ": " + msg);
  };
  if (n_ugvs < 1)
    add("n_ugvs", "must be >= 1");
  if (t_slots < 1)
    add("t_slots", "must be >= 1");
  if (m_uavs < 1)
    add("m_uavs", "must be >= 1");
  if (kind == TrajectoryKind::kLine && !(length_m > 0.0))
    add("length_m", "must be positive");
  if (kind == TrajectoryKind::kCircle && !(radius_m > 0.0))
    add("radius_m", "must be positive");
  if (uav_heights.size() != 1 && uav_heights.size() != m_uavs)
    add("uav_heights", "needs one value or one per UAV");
  for (double h : uav_heights)
    {
      if (!(h > 0.0))
        {
          add("uav_heights", "heights must be positive");
          break;
        }
    }
  if (tx_power_w.size() != 1 && tx_power_w.size() != n_ugvs)
    add("tx_power_w", "needs one value or one per UGV");
  for (double p : tx_power_w)
    {
      if (!(p > 0.0))
        {
          add("tx_power_w", "transmit powers must be positive");
          break;
        }
    }
  if (!(slot_duration_s > 0.0))
    add("slot_duration_s", "must be positive");

  if (kind == TrajectoryKind::kLine && !segments.empty() && segments.size() != n_ugvs)
    add("segments", "needs one segment per UGV");
  if (kind == TrajectoryKind::kCircle && !centers.empty() && centers.size() != n_ugvs)
    add("centers", "needs one center per UGV");
  if (kind == TrajectoryKind::kCircle && !phases.empty() && phases.size() != n_ugvs)
    add("phases", "needs one phase per UGV");
  if (kind == TrajectoryKind::kCustom)
    {
      if (trajectories.empty())
        add("trajectories", "required for the custom kind");
      else if (trajectories.size() != n_ugvs)
        add("trajectories", "needs one trajectory per UGV");
      else
        {
          for (const auto& tr : trajectories)
            {
              if (tr.size() != t_slots)
                {
                  add("trajectories", "every trajectory needs t_slots points");
                  break;
                }
            }
        }
    }
  return out;
}

std::vector<Segment>
default_line_segments(std::size_t n, double length)
{
  std::vector<Segment> out;
  const double half = 0.5 * length;
  for (std::size_t k = 0; k < n; ++k)
    {
      const double angle = (static_cast<double>(k) + 0.5) * std::numbers::pi / static_cast<double>(n);
      const Vec2 c{kArenaCenter + (k % 2 == 0 ? -kLineOffset : kLineOffset), kArenaCenter};
      const Vec2 dir{std::cos(angle), std::sin(angle)};
      out.push_back({{c.x - half * dir.x, c.y - half * dir.y}, {c.x + half * dir.x, c.y + half * dir.y}});
    }
  return out;
}

std::vector<Vec2>
default_circle_centers(std::size_t n)
{
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < n; ++k)
    out.push_back({kArenaCenter + kCircleSpacing * static_cast<double>(k), kArenaCenter});
  return out;
}

std::vector<double>
default_circle_phases(std::size_t n)
{
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k)
    out.push_back(k % 2 == 0 ? 0.0 : std::numbers::pi);
  return out;
}

Scenario
line_scenario(const TrajectorySpec& spec)
{
  require_valid(spec, TrajectoryKind::kLine);
  const auto segments =
      spec.segments.empty() ? default_line_segments(spec.n_ugvs, spec.length_m) : spec.segments;
  std::vector<std::vector<Vec2>> trajectories(spec.n_ugvs);
  for (std::size_t i = 0; i < spec.n_ugvs; ++i)
    {
      const auto& s = segments[i];
      for (std::size_t t = 0; t < spec.t_slots; ++t)
        {
          const double u =
              spec.t_slots == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(spec.t_slots - 1);
          trajectories[i].push_back({s.from.x + u * (s.to.x - s.from.x), s.from.y + u * (s.to.y - s.from.y)});
        }
    }
  return assemble(spec, std::move(trajectories));
}

Scenario
circle_scenario(const TrajectorySpec& spec)
{
  require_valid(spec, TrajectoryKind::kCircle);
  const auto centers = spec.centers.empty() ? default_circle_centers(spec.n_ugvs) : spec.centers;
  const auto phases = spec.phases.empty() ? default_circle_phases(spec.n_ugvs) : spec.phases;
  std::vector<std::vector<Vec2>> trajectories(spec.n_ugvs);
  for (std::size_t i = 0; i < spec.n_ugvs; ++i)
    {
      for (std::size_t t = 0; t < spec.t_slots; ++t)
        {
          const double angle = phases[i] + 2.0 * std::numbers::pi * static_cast<double>(t) /
                                                static_cast<double>(spec.t_slots);
          trajectories[i].push_back({centers[i].x + spec.radius_m * std::cos(angle),
                                     centers[i].y + spec.radius_m * std::sin(angle)});
        }
    }
  return assemble(spec, std::move(trajectories));
}

Scenario
custom_scenario(const TrajectorySpec& spec)
{
  require_valid(spec, TrajectoryKind::kCustom);
  return assemble(spec, spec.trajectories);
}

Scenario
build_scenario(const TrajectorySpec& spec)
{
  switch (spec.kind)
    {
    case TrajectoryKind::kLine:
      return line_scenario(spec);
    case TrajectoryKind::kCircle:
      return circle_scenario(spec);
    case TrajectoryKind::kCustom:
      return custom_scenario(spec);
    }
  throw UsageError("unknown trajectory kind");
}

std::pair<std::size_t, std::size_t>
farthest_pair(const Scenario& scenario, SeparationRule rule)
{
  const std::size_t n = scenario.ugvs();
  if (n < 2)
    throw UsageError("pair selection needs at least two UGVs");
  std::pair<std::size_t, std::size_t> best{0, 1};
  double best_score = -1.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      {
        double score = 0.0;
        for (std::size_t t = 0; t < scenario.slots(); ++t)
          {
            const double d =
                std::sqrt(squared_distance(scenario.position(p, t), scenario.position(q, t)));
            score = rule == SeparationRule::kSumOverSlots ? score + d : std::max(score, d);
          }
        if (score > best_score)
          {
            best_score = score;
            best = {p, q};
          }
      }
  return best;
}

std::pair<std::size_t, std::size_t>
random_pair(std::size_t n, std::uint64_t seed)
{
  if (n < 2)
    throw UsageError("pair selection needs at least two UGVs");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n * (n - 1) / 2 - 1);
  std::size_t k = pick(rng);
  for (std::size_t p = 0; p < n; ++p)
    {
      const std::size_t row = n - 1 - p;
      if (k < row)
        return {p, p + 1 + k};
      k -= row;
    }
  return {0, 1};
}

BaselineResult
baseline_for_pair(const Scenario& scenario, const ChannelParams& params,
                  const BaselineConfig& config, std::pair<std::size_t, std::size_t> pair)
{
  const std::size_t n = scenario.ugvs();
  const std::size_t m = scenario.uavs();
  if (n < 2)
    throw UsageError("baselines need at least two UGVs");
  if (pair.first >= n || pair.second >= n || pair.first == pair.second)
    throw UsageError("invalid UGV pair");

  BaselineResult out;
  out.pair = pair;
  out.schedule = Schedule(n, m, scenario.slots());
  const std::size_t selected[2] = {pair.first, pair.second};
  Placement init = initial_placement(scenario, 0);
  for (std::size_t j = 0; j < std::min<std::size_t>(m, 2); ++j)
    {
      for (std::size_t t = 0; t < scenario.slots(); ++t)
        out.schedule(selected[j], j, t) = 1.0;
      init.xy[j] = average_position(scenario, selected[j]);
    }
  auto gd = gd_solve(init, out.schedule, scenario, params, config.gd);
  out.placement = gd.placement;
  out.objective = gd.trace.back();
  out.gd_trace = std::move(gd.trace);
  return out;
}

BaselineResult
baseline_fixed_selection(const Scenario& scenario, const ChannelParams& params,
                         const BaselineConfig& config)
{
  return baseline_for_pair(scenario, params, config, farthest_pair(scenario, config.rule));
}

BaselineResult
baseline_random_selection(const Scenario& scenario, const ChannelParams& params,
                          const BaselineConfig& config, std::uint64_t seed)
{
  return baseline_for_pair(scenario, params, config, random_pair(scenario.ugvs(), seed));
}

Scenario
random_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t t, double arena_m)
{
  if (n == 0 || m == 0 || t == 0 || !(arena_m > 0.0))
    throw UsageError("random_instance: sizes must be positive");
  constexpr std::size_t kWaypoints = 3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, arena_m);
  std::vector<std::vector<Vec2>> trajectories(n);
  for (std::size_t i = 0; i < n; ++i)
    {
      std::vector<Vec2> waypoints;
      for (std::size_t w = 0; w < kWaypoints; ++w)
        {
          const double x = coord(rng);
          const double y = coord(rng);
          waypoints.push_back({x, y});
        }
      for (std::size_t s = 0; s < t; ++s)
        {
          const double u = t == 1 ? 0.0
                                  : static_cast<double>(s) * static_cast<double>(kWaypoints - 1) /
                                        static_cast<double>(t - 1);
          const std::size_t seg = std::min(static_cast<std::size_t>(u), kWaypoints - 2);
          const double frac = u - static_cast<double>(seg);
          const Vec2& a = waypoints[seg];
          const Vec2& b = waypoints[seg + 1];
          trajectories[i].push_back({std::clamp(a.x + frac * (b.x - a.x), 0.0, arena_m),
                                     std::clamp(a.y + frac * (b.y - a.y), 0.0, arena_m)});
        }
    }
  return Scenario(std::vector<double>(m, 200.0), std::vector<double>(n, 1.0),
                  std::move(trajectories));
}

} // namespace uavnet
