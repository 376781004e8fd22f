#pragma once

#include "uavnet/types.hpp"

#include <cstddef>
#include <vector>

namespace uavnet
{

/**
 * Physical constants and environment parameters of the probabilistic
 * air-to-ground channel. All quantities are linear (no dB).
 */
struct ChannelParams
{
  double fc = 2e6;           ///< carrier frequency (Hz)
  double c = 299792458.0;    ///< speed of light (m/s)
  double g_t = 1.0;          ///< transmit antenna gain
  double g_r = 1.0;          ///< receive antenna gain
  double mu_los = 1.0;       ///< LoS attenuation factor
  double mu_nlos = 20.0;     ///< NLoS attenuation factor, >= mu_los
  double alpha_env = 0.6;    ///< LoS-probability scale
  double gamma_env = 0.11;   ///< LoS-probability exponent
  double n0 = 1e-9;          ///< noise power (W)

  /// Human-readable violations; empty when the parameters are usable.
  std::vector<std::string> violations() const;
  /// Throws UsageError listing every violation.
  void validate() const;
};

/**
 * UAV fleet and UGV trajectories. UAV heights are fixed; only the planar
 * UAV coordinates (see Placement) are decision variables.
 */
class Scenario
{
public:
  Scenario() = default;
  /// trajectories[i][t] is the planar position of UGV i in slot t.
  Scenario(std::vector<double> heights,
           std::vector<double> tx_power,
           std::vector<std::vector<Vec2>> trajectories,
           double slot_duration = 1.0);

  std::size_t uavs() const { return heights_.size(); }
  std::size_t ugvs() const { return tx_power_.size(); }
  std::size_t slots() const { return slots_; }

  double height(std::size_t j) const { return heights_.at(j); }
  double tx_power(std::size_t i) const { return tx_power_.at(i); }
  const Vec2& position(std::size_t i, std::size_t t) const { return trajectories_.at(i).at(t); }

  const std::vector<double>& heights() const { return heights_; }
  const std::vector<double>& tx_powers() const { return tx_power_; }
  const std::vector<std::vector<Vec2>>& trajectories() const { return trajectories_; }
  double slot_duration() const { return slot_duration_; }

private:
  std::vector<double> heights_;
  std::vector<double> tx_power_;
  std::vector<std::vector<Vec2>> trajectories_;
  std::size_t slots_ = 0;
  double slot_duration_ = 1.0;
};

/// Planar UAV coordinates; every coordinate must be nonnegative.
struct Placement
{
  std::vector<Vec2> xy;

  bool is_feasible() const;
  std::vector<double> flatten() const;
  static Placement from_flat(std::span<const double> flat);

  friend bool operator==(const Placement&, const Placement&) = default;
};

enum class LinkCondition
{
  kLos,
  kNlos,
};

/// 3-D distance between UAV j and UGV i in slot t. Always >= H_j.
double link_distance(const Placement& placement, const Scenario& scenario, std::size_t i,
                     std::size_t j, std::size_t t);

/// arcsin(h / d). Throws std::domain_error when h > d or h <= 0.
double elevation_angle(double d, double h);

/// LoS probability; zero at or below 15 degrees, clamped to [0, 1] above.
double los_probability(double theta, const ChannelParams& params);

/// Free-space part of the path loss: 4 pi^2 d^2 fc^2 / (c^2 Gt Gr).
double free_space_factor(double d, const ChannelParams& params);

double path_loss(double d, const ChannelParams& params, LinkCondition condition);

/// LoS/NLoS mixture of path losses for a link of length d to a UAV at height h.
double expected_path_loss(double d, double h, const ChannelParams& params);

double expected_path_loss(const Placement& placement, const Scenario& scenario,
                          const ChannelParams& params, std::size_t i, std::size_t j,
                          std::size_t t);

double received_power(const Placement& placement, const Scenario& scenario,
                      const ChannelParams& params, std::size_t i, std::size_t j, std::size_t t);

/// P^R for every (i, j, t).
ReceivedPowers received_powers(const Placement& placement, const Scenario& scenario,
                               const ChannelParams& params);

/// Interference at UAV j while decoding UGV i in slot t.
double interference(const Schedule& schedule, const ReceivedPowers& rx, std::size_t i,
                    std::size_t j, std::size_t t);

/// log2(1 + a_ij P^R_ij / (I_ij + N0)) in bits/s/Hz.
double link_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
                 std::size_t i, std::size_t j, std::size_t t);

double link_rate(const Schedule& schedule, const Placement& placement, const Scenario& scenario,
                 const ChannelParams& params, std::size_t i, std::size_t j, std::size_t t);

/// Sum of link rates over the links of one slot.
double slot_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
                 std::size_t t);

double sum_rate(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params);

double sum_rate(const Schedule& schedule, const Placement& placement, const Scenario& scenario,
                const ChannelParams& params);

/// Rate of every link, same shape as the schedule.
LinkTensor link_rates(const Schedule& schedule, const ReceivedPowers& rx,
                      const ChannelParams& params);

/// Converts a power in dBW to watts.
double dbw_to_watts(double dbw);

} // namespace uavnet
