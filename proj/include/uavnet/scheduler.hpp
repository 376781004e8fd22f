#pragma once

// UAV-UGV link scheduling for a fixed placement.
//
// The binary scheduling problem is relaxed to the per-slot doubly
// substochastic polytope with the penalty eta * sum a (1 - a). The two
// nonconcave parts of the relaxed objective (the interference log and the
// a^2 part of the penalty) are replaced by their tangents around the
// previous iterate, giving a concave surrogate that is tight at that iterate
// and lies below the relaxed objective everywhere. Each surrogate is
// maximized with Frank-Wolfe over per-slot matchings.
//
// Cost per outer DC iteration is dominated by the inner solve; with K
// Frank-Wolfe steps it is O(K T (N M)^2) plus K matching oracle calls.

#include "uavnet/channel.hpp"
#include "uavnet/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace uavnet
{

struct InnerSolverConfig
{
  int max_iters = 5000;
  double gap_tol = 1e-6; ///< per-slot Frank-Wolfe duality-gap tolerance
};

struct DcConfig
{
  /// Initial penalty weight; derived from a greedy schedule when empty.
  std::optional<double> eta;
  double eta_growth = 2.0;
  /// Cap on eta; eta_max_factor x the initial weight when empty.
  std::optional<double> eta_max;
  double eta_max_factor = 1e6;
  double epsilon = 1e-4;
  int max_dc_iters = 300;
  /// Residual sum a (1 - a) below which the continuation stops early.
  double binary_tol = 1e-9;
  InnerSolverConfig inner;

  std::vector<std::string> violations() const;
};

/// eta * sum a (1 - a).
double penalty(const Schedule& schedule, double eta);

/// Affine function constant + slope * a.
struct AffineTerm
{
  double constant = 0.0;
  double slope = 0.0;

  double operator()(double a) const { return constant + slope * a; }
};

/// Tangent of -a^2 at a_prev: (a_prev)^2 - 2 a_prev a, which is >= -a^2.
AffineTerm linearize_penalty_term(double a_prev);

/**
 * Tangent of log2(I_ij[t] + N0) around a previous schedule, as an affine
 * function of the UGV activities s_p = sum_q a_pq[t]:
 *   value = constant + sum_p coefficient[p] * s_p.
 * coefficient[i] is always zero. Since log is concave the tangent is an upper
 * bound, so f - g is a lower bound on the link rate.
 */
struct InterferenceTangent
{
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t t = 0;
  double constant = 0.0;
  std::vector<double> coefficient;

  double evaluate(const Schedule& schedule) const;
};

InterferenceTangent linearize_g(const Schedule& schedule_prev, const ReceivedPowers& rx,
                                const ChannelParams& params, std::size_t i, std::size_t j,
                                std::size_t t);

/// log2(a_ij P^R_ij + N0 + I_ij).
double f_term(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
              std::size_t i, std::size_t j, std::size_t t);

/// Relaxed objective: sum rate minus penalty(schedule, eta).
double relaxed_objective(const Schedule& schedule, const ReceivedPowers& rx,
                         const ChannelParams& params, double eta);

/// Concave surrogate of relaxed_objective built around schedule_prev.
double surrogate_objective(const Schedule& schedule, const Schedule& schedule_prev,
                           const ReceivedPowers& rx, const ChannelParams& params, double eta);

struct InnerResult
{
  Schedule schedule;
  double gap = 0.0;  ///< sum of per-slot Frank-Wolfe gaps at the output
  int iterations = 0;
  bool exact = true; ///< false when some slot stopped with its gap above tolerance
};

/// Maximizes the surrogate around schedule_prev with Frank-Wolfe per slot.
InnerResult inner_solve(const Schedule& schedule_prev, const ReceivedPowers& rx,
                        const ChannelParams& params, double eta, const InnerSolverConfig& config);

/// Frank-Wolfe gap of the surrogate at `schedule`, from one extra oracle call.
double surrogate_gap(const Schedule& schedule, const Schedule& schedule_prev,
                     const ReceivedPowers& rx, const ChannelParams& params, double eta);

struct DcIterate
{
  int stage = 0;          ///< continuation stage; eta is constant within a stage
  double eta = 0.0;
  double objective = 0.0; ///< relaxed objective at this iterate and eta
  double residual = 0.0;  ///< sum a (1 - a)
  double inner_gap = 0.0;
  int inner_iterations = 0;
};

struct DcResult
{
  Schedule schedule;
  std::vector<DcIterate> trace;
  int iterations = 0;
  bool converged = true;
  bool inner_exact = true;
};

DcResult dc_solve(const Schedule& schedule_init, const ReceivedPowers& rx,
                  const ChannelParams& params, const DcConfig& config);

/**
 * Binary matching per slot. Two candidates are built, the nearest matching in
 * L2 (weights 2a - 1) and the max-weight matching on a, and the one with the
 * higher slot rate is kept. Ties favour higher received power.
 */
Schedule round_schedule(const Schedule& schedule_relaxed, const ReceivedPowers& rx,
                        const ChannelParams& params);

/// Seeded uniform draw scaled per slot by max(row sums, column sums, 1).
Schedule random_feasible_schedule(std::size_t n, std::size_t m, std::size_t t,
                                  std::uint64_t seed);

/// Per slot, adds links by decreasing received power while the slot rate grows.
Schedule greedy_schedule(const ReceivedPowers& rx, const ChannelParams& params);

/// Greedy sum rate / (N M T), or 1 when that is zero.
double initial_eta(const ReceivedPowers& rx, const ChannelParams& params);

} // namespace uavnet
