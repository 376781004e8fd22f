#pragma once

#include "uavnet/channel.hpp"
#include "uavnet/placement.hpp"
#include "uavnet/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace uavnet
{

enum class TrajectoryKind
{
  kLine,
  kCircle,
  kCustom,
};

std::string to_string(TrajectoryKind kind);
TrajectoryKind trajectory_kind_from_string(const std::string& s);

struct Segment
{
  Vec2 from;
  Vec2 to;
};

/**
 * Description of an experiment world. Geometry lists left empty fall back to
 * the default layouts (see default_line_segments / default_circle_centers).
 */
struct TrajectorySpec
{
  TrajectoryKind kind = TrajectoryKind::kCircle;
  std::size_t n_ugvs = 4;
  std::size_t t_slots = 10;
  double length_m = 450.0;
  double radius_m = 200.0;

  std::size_t m_uavs = 2;
  std::vector<double> uav_heights{200.0}; ///< one value broadcasts to all UAVs
  std::vector<double> tx_power_w{1.0};    ///< one value broadcasts to all UGVs
  double slot_duration_s = 1.0;

  std::vector<Segment> segments; ///< line kind, one per UGV
  std::vector<Vec2> centers;     ///< circle kind, one per UGV
  std::vector<double> phases;    ///< circle kind, one per UGV (rad)
  std::vector<std::vector<Vec2>> trajectories; ///< custom kind

  /// Field-path diagnostics; empty when the spec can be built.
  std::vector<std::string> violations() const;
};

/// Four equal segments through the middle of a 600 m x 600 m arena; every pair crosses.
std::vector<Segment> default_line_segments(std::size_t n, double length);

/// Centers on the row y = 300 starting at x = 300, spaced 300 m apart.
std::vector<Vec2> default_circle_centers(std::size_t n);

/// Alternating 0 and pi.
std::vector<double> default_circle_phases(std::size_t n);

Scenario line_scenario(const TrajectorySpec& spec);
Scenario circle_scenario(const TrajectorySpec& spec);
Scenario custom_scenario(const TrajectorySpec& spec);
/// Dispatches on spec.kind.
Scenario build_scenario(const TrajectorySpec& spec);

enum class SeparationRule
{
  kSumOverSlots,
  kMaxOverSlots,
};

struct BaselineConfig
{
  GdConfig gd;
  SeparationRule rule = SeparationRule::kSumOverSlots;
};

struct BaselineResult
{
  Schedule schedule;
  Placement placement;
  std::pair<std::size_t, std::size_t> pair;
  double objective = 0.0;
  std::vector<double> gd_trace;
};

/// The UGV pair with the largest separation under `rule`.
std::pair<std::size_t, std::size_t> farthest_pair(const Scenario& scenario, SeparationRule rule);

/// Seeded uniform unordered pair.
std::pair<std::size_t, std::size_t> random_pair(std::size_t n, std::uint64_t seed);

/// Schedules pair.first -> UAV 0 and pair.second -> UAV 1 in every slot, then places the UAVs.
BaselineResult baseline_for_pair(const Scenario& scenario, const ChannelParams& params,
                                 const BaselineConfig& config,
                                 std::pair<std::size_t, std::size_t> pair);

BaselineResult baseline_fixed_selection(const Scenario& scenario, const ChannelParams& params,
                                        const BaselineConfig& config);

BaselineResult baseline_random_selection(const Scenario& scenario, const ChannelParams& params,
                                         const BaselineConfig& config, std::uint64_t seed);

/// Seeded piecewise-linear trajectories inside [0, arena_m]^2; UAVs at 200 m, 1 W.
Scenario random_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t t,
                         double arena_m);

} // namespace uavnet
