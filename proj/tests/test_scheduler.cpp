#include "oracles.hpp"

#include "uavnet/optimizer.hpp"
#include "uavnet/scenario.hpp"
#include "uavnet/scheduler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace uavnet;

namespace
{

struct Instance
{
  Scenario scenario;
  ReceivedPowers rx;
};

Instance
instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t t)
{
  auto s = random_instance(seed, n, m, t, 800);
  auto x = initial_placement(s, seed);
  return {s, received_powers(x, s, ChannelParams{})};
}

double
log2_interference(const Schedule& a, const ReceivedPowers& rx, const ChannelParams& p,
                  std::size_t i, std::size_t j, std::size_t t)
{
  return std::log2(interference(a, rx, i, j, t) + p.n0);
}

} // namespace

TEST(Penalty, Examples)
{
  Schedule a(2, 2, 2);
  a(0, 0, 0) = 1.0;
  EXPECT_EQ(penalty(a, 5.0), 0.0);

  Schedule b(1, 1, 1);
  b(0, 0, 0) = 0.5;
  EXPECT_DOUBLE_EQ(penalty(b, 4.0), 1.0);

  Schedule c(2, 2, 2, 0.25);
  EXPECT_DOUBLE_EQ(penalty(c, 1.0), 1.5);
}

TEST(Penalty, ZeroOnlyWhenBinary)
{
  Schedule a(2, 2, 1);
  a(1, 0, 0) = 1e-6;
  EXPECT_GT(penalty(a, 1.0), 0.0);
}

TEST(PenaltyLinearization, Examples)
{
  const auto z = linearize_penalty_term(0.0);
  EXPECT_EQ(z.constant, 0.0);
  EXPECT_EQ(z.slope, 0.0);
  EXPECT_DOUBLE_EQ(linearize_penalty_term(1.0)(1.0), -1.0);
  EXPECT_DOUBLE_EQ(linearize_penalty_term(0.5)(0.0), 0.25);
}

TEST(PenaltyLinearization, MajorizesNegativeSquare)
{
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k)
    {
      const double ap = u(rng);
      const double a = u(rng);
      const auto h = linearize_penalty_term(ap);
      EXPECT_GE(h(a), -a * a - 1e-12);
      EXPECT_NEAR(h(ap), -ap * ap, 1e-12);
    }
}

TEST(InterferenceTangent, ExactAtExpansionPoint)
{
  const ChannelParams p;
  const auto in = instance(3, 4, 2, 2);
  const auto a = random_feasible_schedule(4, 2, 2, 7);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        {
          const auto g = linearize_g(a, in.rx, p, i, j, t);
          EXPECT_NEAR(g.evaluate(a), log2_interference(a, in.rx, p, i, j, t), 1e-9);
          EXPECT_EQ(g.coefficient[i], 0.0);
        }
}

TEST(InterferenceTangent, SingleUgvIsConstant)
{
  const ChannelParams p;
  ReceivedPowers rx(1, 2, 1, 1e-6);
  Schedule a(1, 2, 1);
  a(0, 1, 0) = 0.7;
  const auto g = linearize_g(a, rx, p, 0, 0, 0);
  EXPECT_NEAR(g.constant, std::log2(p.n0), 1e-12);
  Schedule b(1, 2, 1);
  EXPECT_NEAR(g.evaluate(b), std::log2(p.n0), 1e-12);
}

// log is concave, so its tangent lies above it away from the expansion point.
TEST(InterferenceTangent, UpperBoundsLogInterference)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 1);
      const std::size_t n = in.scenario.ugvs();
      const auto prev = random_feasible_schedule(n, 2, 1, seed);
      const auto x = random_feasible_schedule(n, 2, 1, seed + 1000);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          {
            const auto g = linearize_g(prev, in.rx, p, i, j, 0);
            EXPECT_GE(g.evaluate(x), log2_interference(x, in.rx, p, i, j, 0) - 1e-9);
          }
    }
}

TEST(FTerm, Examples)
{
  const ChannelParams p;
  ReceivedPowers rx(1, 1, 1, p.n0);
  Schedule a(1, 1, 1);
  EXPECT_NEAR(f_term(a, rx, p, 0, 0, 0), std::log2(p.n0), 1e-12);
  a(0, 0, 0) = 1.0;
  EXPECT_NEAR(f_term(a, rx, p, 0, 0, 0), std::log2(2.0 * p.n0), 1e-12);
}

TEST(FTerm, MinusLogInterferenceIsLinkRate)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto in = instance(seed, 3, 2, 2);
      const auto a = random_feasible_schedule(3, 2, 2, seed);
      for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 2; ++j)
            EXPECT_NEAR(f_term(a, in.rx, p, i, j, t) - log2_interference(a, in.rx, p, i, j, t),
                        link_rate(a, in.rx, p, i, j, t), 1e-9);
    }
}

TEST(Surrogate, TightAtExpansionPoint)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 1 + seed % 3);
      const auto a = random_feasible_schedule(in.scenario.ugvs(), 2, in.scenario.slots(), seed);
      const double eta = 0.5 + seed;
      EXPECT_NEAR(surrogate_objective(a, a, in.rx, p, eta), relaxed_objective(a, in.rx, p, eta),
                  1e-9);
    }
}

TEST(Surrogate, ZeroScheduleIsZero)
{
  const ChannelParams p;
  const auto in = instance(1, 3, 2, 2);
  Schedule z(3, 2, 2);
  EXPECT_NEAR(surrogate_objective(z, z, in.rx, p, 2.0), 0.0, 1e-12);
}

TEST(Surrogate, BelowRelaxedObjective)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 2);
      const std::size_t n = in.scenario.ugvs();
      const auto prev = random_feasible_schedule(n, 2, 2, seed);
      const auto x = random_feasible_schedule(n, 2, 2, seed + 500);
      const double eta = 1.0 + seed % 7;
      EXPECT_LE(surrogate_objective(x, prev, in.rx, p, eta),
                relaxed_objective(x, in.rx, p, eta) + 1e-9);
    }
}

TEST(InnerSolve, SingleLinkSaturates)
{
  const ChannelParams p;
  ReceivedPowers rx(1, 1, 1, 1e-6);
  Schedule prev(1, 1, 1, 0.3);
  const auto out = inner_solve(prev, rx, p, 0.1, {});
  EXPECT_NEAR(out.schedule(0, 0, 0), 1.0, 1e-9);
  EXPECT_TRUE(out.exact);
}

TEST(InnerSolve, DominantLinkAgainstGridSearch)
{
  const ChannelParams p;
  ReceivedPowers rx(2, 1, 1);
  rx(0, 0, 0) = 1e-6;
  rx(1, 0, 0) = 1e-8;
  Schedule prev(2, 1, 1);
  prev(0, 0, 0) = 0.6;
  prev(1, 0, 0) = 0.1;
  const double eta = 0.01;
  const auto out = inner_solve(prev, rx, p, eta, {});

  double best = -1e300;
  double best0 = 0.0;
  double best1 = 0.0;
  Schedule probe(2, 1, 1);
  for (int u = 0; u <= 200; ++u)
    {
      for (int v = 0; u + v <= 200; ++v)
        {
          probe(0, 0, 0) = u / 200.0;
          probe(1, 0, 0) = v / 200.0;
          const double value = surrogate_objective(probe, prev, rx, p, eta);
          if (value > best)
            {
              best = value;
              best0 = probe(0, 0, 0);
              best1 = probe(1, 0, 0);
            }
        }
    }
  EXPECT_NEAR(best0, 1.0, 1e-12);
  EXPECT_NEAR(best1, 0.0, 1e-12);
  EXPECT_NEAR(out.schedule(0, 0, 0), best0, 1e-6);
  EXPECT_NEAR(out.schedule(1, 0, 0), best1, 1e-6);
  EXPECT_GE(surrogate_objective(out.schedule, prev, rx, p, eta), best - 1e-9);
}

TEST(InnerSolve, FeasibleAscentWithCertifiedGap)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 2);
      const std::size_t n = in.scenario.ugvs();
      const auto prev = random_feasible_schedule(n, 2, 2, seed);
      const double eta = initial_eta(in.rx, p);
      const auto out = inner_solve(prev, in.rx, p, eta, {});
      EXPECT_TRUE(out.schedule.is_relaxed_feasible(1e-9));
      EXPECT_GE(surrogate_objective(out.schedule, prev, in.rx, p, eta),
                surrogate_objective(prev, prev, in.rx, p, eta) - 1e-9);
      // One extra oracle call re-derives the gap.
      const double gap = surrogate_gap(out.schedule, prev, in.rx, p, eta);
      EXPECT_NEAR(gap, out.gap, 1e-12);
      if (out.exact)
        {
          EXPECT_LE(gap, InnerSolverConfig{}.gap_tol * in.scenario.slots());
        }
    }
}

TEST(DcSolve, OptimalBinaryInitStopsImmediately)
{
  const ChannelParams p;
  ReceivedPowers rx(1, 1, 1, 1e-6);
  Schedule init(1, 1, 1, 1.0);
  const auto out = dc_solve(init, rx, p, {});
  EXPECT_EQ(out.iterations, 1);
  EXPECT_TRUE(out.converged);
  EXPECT_EQ(out.schedule, init);
}

// A single random start can stop at the weaker link: activating the stronger
// one first destroys the weaker link's rate through interference, so the weak
// vertex is a local maximum of the relaxed objective.
TEST(DcSolve, TwoUgvsOneUavFindsOracleLink)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto s = random_instance(seed, 2, 1, 1, 800);
      const auto x = initial_placement(s, seed);
      const auto rx = received_powers(x, s, p);
      const auto dc = dc_solve(random_feasible_schedule(2, 1, 1, seed), rx, p, {});
      const auto rounded = round_schedule(dc.schedule, rx, p);
      const auto best = brute_force_schedule(x, s, p);
      EXPECT_NEAR(sum_rate(rounded, rx, p), best.objective, 1e-9 * best.objective) << seed;
    }
}

TEST(DcSolve, ObjectiveNondecreasingWithinEachStage)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 1 + seed % 3);
      const auto dc = dc_solve(
          random_feasible_schedule(in.scenario.ugvs(), 2, in.scenario.slots(), seed), in.rx, p, {});
      for (std::size_t k = 1; k < dc.trace.size(); ++k)
        {
          if (dc.trace[k].stage == dc.trace[k - 1].stage)
            {
              EXPECT_GE(dc.trace[k].objective, dc.trace[k - 1].objective - 1e-9) << seed << ":" << k;
            }
        }
    }
}

TEST(DcSolve, ResidualSmallAtTermination)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 1 + seed % 3);
      for (const auto& init :
           {random_feasible_schedule(in.scenario.ugvs(), 2, in.scenario.slots(), seed),
            greedy_schedule(in.rx, p)})
        {
          const auto dc = dc_solve(init, in.rx, p, {});
          EXPECT_TRUE(dc.converged);
          EXPECT_LT(dc.schedule.binary_residual(), 1e-3) << seed;
        }
    }
}

TEST(DcSolve, RejectsInfeasibleInit)
{
  const ChannelParams p;
  ReceivedPowers rx(2, 1, 1, 1e-6);
  Schedule bad(2, 1, 1, 0.8);
  EXPECT_THROW(dc_solve(bad, rx, p, {}), UsageError);
}

TEST(RoundSchedule, BinaryInputUnchanged)
{
  const ChannelParams p;
  const auto in = instance(4, 4, 2, 3);
  const auto a = greedy_schedule(in.rx, p);
  EXPECT_EQ(round_schedule(a, in.rx, p), a);
}

TEST(RoundSchedule, NearDiagonal)
{
  const ChannelParams p;
  ReceivedPowers rx(2, 2, 1, 1e-7);
  Schedule a(2, 2, 1);
  a(0, 0, 0) = 0.9;
  a(0, 1, 0) = 0.1;
  a(1, 0, 0) = 0.2;
  a(1, 1, 0) = 0.8;
  const auto r = round_schedule(a, rx, p);
  EXPECT_EQ(r(0, 0, 0), 1.0);
  EXPECT_EQ(r(1, 1, 0), 1.0);
  EXPECT_EQ(r(0, 1, 0), 0.0);
  EXPECT_EQ(r(1, 0, 0), 0.0);
}

TEST(RoundSchedule, AlwaysBinaryFeasible)
{
  const ChannelParams p;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
      const auto in = instance(seed, 1 + seed % 5, 1 + seed % 3, 2);
      const auto a = random_feasible_schedule(in.scenario.ugvs(), in.scenario.uavs(), 2, seed);
      EXPECT_TRUE(round_schedule(a, in.rx, p).is_binary_feasible());
    }
}

TEST(RoundSchedule, CloseToRelaxedRateWhenNearlyBinary)
{
  const ChannelParams p;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
      const auto in = instance(seed, 2 + seed % 3, 2, 1 + seed % 3);
      const auto dc = dc_solve(greedy_schedule(in.rx, p), in.rx, p, {});
      if (dc.schedule.binary_residual() >= 1e-3)
        continue;
      ++checked;
      const double relaxed = sum_rate(dc.schedule, in.rx, p);
      const double rounded = sum_rate(round_schedule(dc.schedule, in.rx, p), in.rx, p);
      EXPECT_NEAR(rounded, relaxed, 0.01 * relaxed) << seed;
    }
  EXPECT_GT(checked, 20);
}

TEST(RandomFeasibleSchedule, SeededAndFeasible)
{
  const auto a = random_feasible_schedule(4, 2, 3, 9);
  EXPECT_EQ(a, random_feasible_schedule(4, 2, 3, 9));
  EXPECT_NE(a, random_feasible_schedule(4, 2, 3, 10));
  EXPECT_TRUE(a.is_relaxed_feasible(1e-12));
}

TEST(DcConfig, Violations)
{
  DcConfig c;
  EXPECT_TRUE(c.violations().empty());
  c.epsilon = 0.0;
  c.eta_growth = 1.0;
  c.max_dc_iters = 0;
  EXPECT_EQ(c.violations().size(), 3u);
}
