#pragma once

// Alternating optimization of link scheduling and UAV placement.
//
// Each round solves the scheduling subproblem for the current placement
// (DC penalty relaxation, then rounding) and then the placement subproblem
// for the resulting binary schedule (projected gradient ascent), until the
// relative increase of the sum rate drops below epsilon_outer.
//
// Worst-case work is K1 (K2 C_inner + M C_grad K3) with K1 outer rounds, K2
// DC iterations and K3 gradient iterations; all three counts are reported.

#include "uavnet/channel.hpp"
#include "uavnet/placement.hpp"
#include "uavnet/scheduler.hpp"
#include "uavnet/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnet
{

struct AlternatingConfig
{
  double epsilon_outer = 1e-3;
  int max_rounds = 20;
  std::uint64_t seed = 0;
  /// Also run the scheduler from the greedy schedule and keep the better result.
  bool greedy_start = true;
  DcConfig dc;
  GdConfig gd;

  std::vector<std::string> violations() const;
};

struct RoundRecord
{
  int round = 0;
  double schedule_objective = 0.0; ///< sum rate of the new schedule at the old placement
  double objective = 0.0;          ///< sum rate after the placement step
  bool schedule_accepted = true;   ///< false when the previous schedule was kept
  int dc_iterations = 0;
  int gd_iterations = 0;
};

struct SolveReport
{
  Schedule final_schedule;
  Placement final_placement;
  double objective = 0.0;
  std::vector<double> objective_trace; ///< sum rate at X^0 then after every round
  std::vector<RoundRecord> rounds;
  std::vector<std::vector<DcIterate>> dc_traces; ///< one per scheduler start per round
  std::vector<std::vector<double>> gd_traces;
  LinkTensor per_link_rates;
  double wall_time = 0.0;
  AlternatingConfig config;
  std::vector<std::string> warnings;
  bool converged = false;
};

/// X^0: nearest-UGV clustering of the first-slot positions, jittered by up to 10 m.
Placement initial_placement(const Scenario& scenario, std::uint64_t seed);

SolveReport alternate(const Scenario& scenario, const ChannelParams& params,
                      const AlternatingConfig& config);

/// Thrown by brute_force_schedule for instances beyond the enumeration budget.
class OracleBudgetExceeded : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct OracleResult
{
  Schedule schedule;
  double objective = 0.0;
};

/// True when brute_force_schedule accepts an instance of this size.
bool oracle_within_budget(std::size_t n, std::size_t m, std::size_t t);

/**
 * Exact optimum of the binary scheduling problem at a fixed placement.
 * Slots share no constraint and no objective term, so each slot is solved by
 * enumerating all of its partial matchings. Budget: N <= 6, M <= 3, T <= 10.
 */
OracleResult brute_force_schedule(const Placement& placement, const Scenario& scenario,
                                  const ChannelParams& params);

/// Every partial matching of an N x M bipartite graph as dense 0/1 matrices.
std::vector<std::vector<double>> enumerate_partial_matchings(std::size_t n, std::size_t m);

struct PolicyEvaluation
{
  std::vector<double> per_slot;
  double total = 0.0;
};

/// Scores a binary feasible schedule; throws ValidationError otherwise.
PolicyEvaluation evaluate_policy(const Schedule& schedule, const Placement& placement,
                                 const Scenario& scenario, const ChannelParams& params);

} // namespace uavnet
