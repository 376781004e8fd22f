#include "uavnet/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

using namespace uavnet;

namespace
{

double
cross(const Vec2& o, const Vec2& a, const Vec2& b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Proper crossing test: the endpoints of each segment straddle the other.
bool
segments_cross(const Segment& s, const Segment& u)
{
  const double d1 = cross(u.from, u.to, s.from);
  const double d2 = cross(u.from, u.to, s.to);
  const double d3 = cross(s.from, s.to, u.from);
  const double d4 = cross(s.from, s.to, u.to);
  return d1 * d2 < 0.0 && d3 * d4 < 0.0;
}

double
dist(const Vec2& a, const Vec2& b)
{
  return std::sqrt(squared_distance(a, b));
}

bool
all_nonnegative(const Scenario& s)
{
  for (const auto& tr : s.trajectories())
    for (const auto& p : tr)
      if (p.x < 0.0 || p.y < 0.0)
        return false;
  return true;
}

Scenario
static_scenario(std::vector<Vec2> ugvs, std::size_t t)
{
  std::vector<std::vector<Vec2>> traj;
  for (const auto& g : ugvs)
    traj.emplace_back(t, g);
  return Scenario({200.0, 200.0}, std::vector<double>(ugvs.size(), 1.0), std::move(traj));
}

} // namespace

TEST(LineScenario, SingleUgvUniformSpacing)
{
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kLine;
  spec.n_ugvs = 1;
  spec.t_slots = 10;
  spec.length_m = 450.0;
  const auto s = line_scenario(spec);
  ASSERT_EQ(s.slots(), 10u);
  for (std::size_t t = 1; t < 10; ++t)
    EXPECT_NEAR(dist(s.position(0, t - 1), s.position(0, t)), 50.0, 1e-9);
  const auto seg = default_line_segments(1, 450.0).front();
  EXPECT_NEAR(dist(s.position(0, 0), seg.from), 0.0, 1e-9);
  EXPECT_NEAR(dist(s.position(0, 9), seg.to), 0.0, 1e-9);
}

TEST(LineScenario, DefaultSegmentsIntersectPairwise)
{
  const auto segs = default_line_segments(4, 450.0);
  ASSERT_EQ(segs.size(), 4u);
  for (std::size_t a = 0; a < 4; ++a)
    {
      EXPECT_NEAR(dist(segs[a].from, segs[a].to), 450.0, 1e-9);
      for (std::size_t b = a + 1; b < 4; ++b)
        EXPECT_TRUE(segments_cross(segs[a], segs[b])) << a << " " << b;
    }
}

TEST(LineScenario, DefaultInsideArenaAndNonnegative)
{
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kLine;
  const auto s = line_scenario(spec);
  EXPECT_EQ(s.ugvs(), 4u);
  EXPECT_EQ(s.uavs(), 2u);
  EXPECT_EQ(s.slots(), 10u);
  EXPECT_TRUE(all_nonnegative(s));
  for (const auto& tr : s.trajectories())
    for (const auto& p : tr)
      {
        EXPECT_LE(p.x, 600.0);
        EXPECT_LE(p.y, 600.0);
      }
}

TEST(CircleScenario, QuarterTurnsFromPhaseZero)
{
  TrajectorySpec spec;
  spec.n_ugvs = 1;
  spec.t_slots = 4;
  spec.radius_m = 200.0;
  spec.centers = {{300, 300}};
  spec.phases = {0.0};
  const auto s = circle_scenario(spec);
  const Vec2 expected[] = {{500, 300}, {300, 500}, {100, 300}, {300, 100}};
  for (std::size_t t = 0; t < 4; ++t)
    {
      EXPECT_NEAR(s.position(0, t).x, expected[t].x, 1e-9);
      EXPECT_NEAR(s.position(0, t).y, expected[t].y, 1e-9);
    }
}

TEST(CircleScenario, AdjacentCirclesOverlap)
{
  const auto centers = default_circle_centers(4);
  ASSERT_EQ(centers.size(), 4u);
  EXPECT_EQ(centers.front(), (Vec2{300, 300}));
  for (std::size_t k = 1; k < 4; ++k)
    {
      const double gap = dist(centers[k - 1], centers[k]);
      EXPECT_DOUBLE_EQ(gap, 300.0);
      EXPECT_DOUBLE_EQ(2.0 * 200.0 - gap, 100.0);
    }
}

TEST(CircleScenario, DefaultRadiusAndNonnegative)
{
  const TrajectorySpec spec;
  const auto s = circle_scenario(spec);
  const auto centers = default_circle_centers(4);
  EXPECT_TRUE(all_nonnegative(s));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t t = 0; t < 10; ++t)
      EXPECT_NEAR(dist(s.position(i, t), centers[i]), 200.0, 1e-9);
}

TEST(TrajectorySpec, InvalidSpecsAreUsageErrors)
{
  TrajectorySpec spec;
  spec.radius_m = -1.0;
  EXPECT_FALSE(spec.violations().empty());
  EXPECT_THROW(circle_scenario(spec), UsageError);

  TrajectorySpec line;
  line.kind = TrajectoryKind::kLine;
  EXPECT_THROW(circle_scenario(line), UsageError);

  TrajectorySpec custom;
  custom.kind = TrajectoryKind::kCustom;
  EXPECT_EQ(custom.violations().size(), 1u);
  EXPECT_THROW(build_scenario(custom), UsageError);

  TrajectorySpec heights;
  heights.uav_heights = {200.0, -5.0};
  const auto v = heights.violations();
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v.front().find("uav_heights"), std::string::npos);
}

TEST(TrajectorySpec, KindRoundTrip)
{
  for (auto k : {TrajectoryKind::kLine, TrajectoryKind::kCircle, TrajectoryKind::kCustom})
    EXPECT_EQ(trajectory_kind_from_string(to_string(k)), k);
  EXPECT_THROW(trajectory_kind_from_string("spiral"), UsageError);
}

TEST(FixedSelection, TwoUgvsPickOnlyPair)
{
  const auto s = static_scenario({{0, 0}, {50, 50}}, 3);
  EXPECT_EQ(farthest_pair(s, SeparationRule::kSumOverSlots), (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(FixedSelection, CollinearPicksExtremes)
{
  const auto s = static_scenario({{0, 10}, {100, 10}, {500, 10}}, 2);
  EXPECT_EQ(farthest_pair(s, SeparationRule::kSumOverSlots), (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(farthest_pair(s, SeparationRule::kMaxOverSlots), (std::pair<std::size_t, std::size_t>{0, 2}));
}

TEST(FixedSelection, CircleDefaultPicksOutermost)
{
  const auto s = circle_scenario(TrajectorySpec{});
  EXPECT_EQ(farthest_pair(s, SeparationRule::kSumOverSlots), (std::pair<std::size_t, std::size_t>{0, 3}));
}

TEST(FixedSelection, SumAndMaxRulesCanDisagree)
{
  // Pair (0, 1) is far apart in one slot only; pair (0, 2) is moderately far throughout.
  // Sums: (0,1) 1000, (0,2) 1200, (1,2) 1000. Maxima: 1000, 600, 600.
  std::vector<std::vector<Vec2>> traj{{{0, 0}, {0, 0}}, {{0, 0}, {1000, 0}}, {{600, 0}, {600, 0}}};
  const Scenario s({200.0, 200.0}, {1.0, 1.0, 1.0}, traj);
  EXPECT_EQ(farthest_pair(s, SeparationRule::kSumOverSlots), (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(farthest_pair(s, SeparationRule::kMaxOverSlots), (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(FixedSelection, PermutationEquivariant)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto s = random_instance(seed, 5, 2, 4, 800);
      std::vector<std::size_t> perm{3, 0, 4, 1, 2};
      std::vector<std::vector<Vec2>> relabeled(5);
      for (std::size_t k = 0; k < 5; ++k)
        relabeled[k] = s.trajectories()[perm[k]];
      const Scenario r(s.heights(), s.tx_powers(), relabeled);
      const auto original = farthest_pair(s, SeparationRule::kSumOverSlots);
      const auto mapped = farthest_pair(r, SeparationRule::kSumOverSlots);
      const std::pair<std::size_t, std::size_t> back{perm[mapped.first], perm[mapped.second]};
      EXPECT_EQ(std::minmax(back.first, back.second),
                std::minmax(original.first, original.second))
        << seed;
    }
}

TEST(FixedSelection, NeedsTwoUgvs)
{
  const Scenario one({200.0, 200.0}, {1.0}, {{{0, 0}}});
  EXPECT_THROW(baseline_fixed_selection(one, ChannelParams{}, {}), UsageError);
  EXPECT_THROW(baseline_random_selection(one, ChannelParams{}, {}, 0), UsageError);
}

TEST(RandomSelection, DeterministicPerSeed)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    EXPECT_EQ(random_pair(5, seed), random_pair(5, seed));
}

TEST(RandomSelection, UniformOverPairs)
{
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
      const auto p = random_pair(4, seed);
      ASSERT_LT(p.first, p.second);
      ASSERT_LT(p.second, 4u);
      ++counts[p];
    }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [pair, c] : counts)
    EXPECT_NEAR(c / 1000.0, 1.0 / 6.0, 0.05) << pair.first << "," << pair.second;
}

TEST(Baselines, BinaryFeasibleAndConsistent)
{
  const ChannelParams p;
  const auto s = circle_scenario(TrajectorySpec{});
  const auto fixed = baseline_fixed_selection(s, p, {});
  const auto rnd = baseline_random_selection(s, p, {}, 3);
  for (const auto* b : {&fixed, &rnd})
    {
      EXPECT_TRUE(b->schedule.is_binary_feasible());
      EXPECT_TRUE(b->placement.is_feasible());
      EXPECT_GT(b->objective, 0.0);
      EXPECT_NEAR(b->objective, sum_rate(b->schedule, b->placement, s, p), 1e-9 * b->objective);
      for (std::size_t t = 0; t < s.slots(); ++t)
        {
          EXPECT_EQ(b->schedule(b->pair.first, 0, t), 1.0);
          EXPECT_EQ(b->schedule(b->pair.second, 1, t), 1.0);
        }
      for (std::size_t k = 1; k < b->gd_trace.size(); ++k)
        EXPECT_GE(b->gd_trace[k], b->gd_trace[k - 1] - 1e-9);
    }
}

TEST(Baselines, ExtraUavsStayIdle)
{
  TrajectorySpec spec;
  spec.m_uavs = 3;
  const auto s = circle_scenario(spec);
  const auto b = baseline_fixed_selection(s, ChannelParams{}, {});
  EXPECT_TRUE(b.schedule.is_binary_feasible());
  for (std::size_t i = 0; i < s.ugvs(); ++i)
    for (std::size_t t = 0; t < s.slots(); ++t)
      EXPECT_EQ(b.schedule(i, 2, t), 0.0);
}

TEST(RandomInstance, DeterministicAndBounded)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      const auto a = random_instance(seed, 4, 2, 6, 500);
      const auto b = random_instance(seed, 4, 2, 6, 500);
      EXPECT_EQ(a.trajectories(), b.trajectories());
      EXPECT_EQ(a.ugvs(), 4u);
      EXPECT_EQ(a.uavs(), 2u);
      EXPECT_EQ(a.slots(), 6u);
      for (const auto& tr : a.trajectories())
        {
          for (std::size_t t = 0; t < tr.size(); ++t)
            {
              EXPECT_GE(tr[t].x, 0.0);
              EXPECT_GE(tr[t].y, 0.0);
              EXPECT_LE(tr[t].x, 500.0);
              EXPECT_LE(tr[t].y, 500.0);
              if (t > 0)
                {
                  EXPECT_LE(dist(tr[t - 1], tr[t]), 500.0 * std::numbers::sqrt2);
                }
            }
        }
    }
  EXPECT_NE(random_instance(1, 4, 2, 6, 500).trajectories(),
            random_instance(2, 4, 2, 6, 500).trajectories());
  EXPECT_THROW(random_instance(0, 0, 2, 6, 500), UsageError);
}
