#include "uavnet/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace uavnet
{

namespace
{

constexpr double kJitter = 10.0;
constexpr int kLloydIterations = 20;

std::uint64_t
mix_seed(std::uint64_t seed, std::uint64_t stream)
{
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void
add_warning(std::vector<std::string>& warnings, const std::string& w)
{
  if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
    warnings.push_back(w);
}

void
enumerate_rows(std::size_t row, std::size_t n, std::size_t m, std::vector<double>& current,
               std::vector<char>& col_used, std::vector<std::vector<double>>& out)
{
  if (row == n)
    {
      out.push_back(current);
      return;
    }
  enumerate_rows(row + 1, n, m, current, col_used, out);
  for (std::size_t j = 0; j < m; ++j)
    {
      if (col_used[j])
        continue;
      col_used[j] = 1;
      current[row * m + j] = 1.0;
      enumerate_rows(row + 1, n, m, current, col_used, out);
      current[row * m + j] = 0.0;
      col_used[j] = 0;
    }
}

} // namespace

std::vector<std::string>
AlternatingConfig::violations() const
{
  std::vector<std::string> out;
  if (!(epsilon_outer > 0.0))
    out.emplace_back("epsilon_outer must be > 0");
  if (max_rounds < 1)
    out.emplace_back("max_rounds must be >= 1");
  for (const auto& v : dc.violations())
    out.push_back("dc." + v);
  for (const auto& v : gd.violations())
    out.push_back("gd." + v);
  return out;
}

Placement
initial_placement(const Scenario& scenario, std::uint64_t seed)
{
  const std::size_t n = scenario.ugvs();
  const std::size_t m = scenario.uavs();
  std::vector<Vec2> points(n);
  for (std::size_t i = 0; i < n; ++i)
    points[i] = scenario.position(i, 0);

  // Farthest-point seeding, then Lloyd iterations on the first-slot positions.
  std::vector<Vec2> centers;
  centers.push_back(points[0]);
  while (centers.size() < m)
    {
      std::size_t best = centers.size() % n;
      double best_d = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        {
          double d = std::numeric_limits<double>::infinity();
          for (const auto& c : centers)
            d = std::min(d, squared_distance(points[i], c));
          if (d > best_d)
            {
              best_d = d;
              best = i;
            }
        }
      if (best_d <= 0.0)
        best = centers.size() % n;
      centers.push_back(points[best]);
    }

  for (int it = 0; it < kLloydIterations; ++it)
    {
      std::vector<Vec2> sums(m);
      std::vector<std::size_t> counts(m, 0);
      for (const auto& p : points)
        {
          std::size_t nearest = 0;
          for (std::size_t j = 1; j < m; ++j)
            {
              if (squared_distance(p, centers[j]) < squared_distance(p, centers[nearest]))
                nearest = j;
            }
          sums[nearest].x += p.x;
          sums[nearest].y += p.y;
          ++counts[nearest];
        }
      for (std::size_t j = 0; j < m; ++j)
        {
          if (counts[j] > 0)
            centers[j] = {sums[j].x / static_cast<double>(counts[j]),
                          sums[j].y / static_cast<double>(counts[j])};
        }
    }

  std::mt19937_64 rng(mix_seed(seed, 0x51ac));
  std::uniform_real_distribution<double> jitter(-kJitter, kJitter);
  Placement out;
  for (auto c : centers)
    {
      c.x = std::max(c.x + jitter(rng), 0.0);
      c.y = std::max(c.y + jitter(rng), 0.0);
      out.xy.push_back(c);
    }
  return out;
}

SolveReport
alternate(const Scenario& scenario, const ChannelParams& params, const AlternatingConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  if (auto v = config.violations(); !v.empty())
    throw UsageError("invalid solver configuration: " + v.front());

  const std::size_t n = scenario.ugvs();
  const std::size_t m = scenario.uavs();
  const std::size_t slots = scenario.slots();
  if (n == 0 || m == 0 || slots == 0)
    throw UsageError("alternate: scenario must have UAVs, UGVs and time slots");

  SolveReport report;
  report.config = config;
  Placement placement = initial_placement(scenario, config.seed);
  ReceivedPowers rx = received_powers(placement, scenario, params);
  Schedule schedule(n, m, slots);
  double current = 0.0;

  for (int round = 1; round <= config.max_rounds; ++round)
    {
      RoundRecord record;
      record.round = round;

      std::vector<Schedule> inits;
      inits.push_back(random_feasible_schedule(
          n, m, slots, mix_seed(config.seed, static_cast<std::uint64_t>(round))));
      if (config.greedy_start)
        inits.push_back(greedy_schedule(rx, params));

      Schedule candidate;
      double candidate_value = -1.0;
      for (const auto& init : inits)
        {
          auto dc = dc_solve(init, rx, params, config.dc);
          record.dc_iterations += dc.iterations;
          if (!dc.converged)
            add_warning(report.warnings, "dc_solve hit its iteration cap");
          if (!dc.inner_exact)
            add_warning(report.warnings, "inner solver stopped above its duality-gap tolerance");
          auto rounded = round_schedule(dc.schedule, rx, params);
          const double value = sum_rate(rounded, rx, params);
          if (value > candidate_value)
            {
              candidate = std::move(rounded);
              candidate_value = value;
            }
          report.dc_traces.push_back(std::move(dc.trace));
        }
      const double incumbent_value = sum_rate(schedule, rx, params);
      // Never step back: keep the incumbent when the new schedule scores lower.
      if (round == 1 || candidate_value >= incumbent_value)
        {
          schedule = std::move(candidate);
          record.schedule_objective = candidate_value;
        }
      else
        {
          record.schedule_accepted = false;
          record.schedule_objective = incumbent_value;
        }

      auto gd = gd_solve(placement, schedule, scenario, params, config.gd);
      record.gd_iterations = gd.iterations;
      if (!gd.converged)
        add_warning(report.warnings, "gd_solve hit its iteration cap");
      if (gd.kink)
        add_warning(report.warnings, "placement gradient used finite differences near the elevation threshold");
      placement = gd.placement;
      rx = received_powers(placement, scenario, params);
      const double value = sum_rate(schedule, rx, params);
      report.gd_traces.push_back(std::move(gd.trace));
      record.objective = value;
      report.rounds.push_back(record);
      report.objective_trace.push_back(value);

      const double previous = current;
      current = value;
      if (round > 1 && (value - previous) / std::max(std::abs(previous), 1e-12) < config.epsilon_outer)
        {
          report.converged = true;
          break;
        }
    }
  if (!report.converged)
    add_warning(report.warnings, "alternating optimization hit max_rounds");

  report.final_schedule = schedule;
  report.final_placement = placement;
  report.objective = current;
  report.per_link_rates = link_rates(schedule, rx, params);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::vector<double>>
enumerate_partial_matchings(std::size_t n, std::size_t m)
{
  std::vector<std::vector<double>> out;
  std::vector<double> current(n * m, 0.0);
  std::vector<char> used(m, 0);
  enumerate_rows(0, n, m, current, used, out);
  return out;
}

bool
oracle_within_budget(std::size_t n, std::size_t m, std::size_t t)
{
  return n <= 6 && m <= 3 && t <= 10;
}

OracleResult
brute_force_schedule(const Placement& placement, const Scenario& scenario,
                     const ChannelParams& params)
{
  const std::size_t n = scenario.ugvs();
  const std::size_t m = scenario.uavs();
  if (!oracle_within_budget(n, m, scenario.slots()))
    {
      std::ostringstream os;
      os << "brute-force oracle budget exceeded: N=" << n << ", M=" << m
         << ", T=" << scenario.slots() << " (limits N <= 6, M <= 3, T <= 10)";
      throw OracleBudgetExceeded(os.str());
    }

  const auto rx = received_powers(placement, scenario, params);
  const auto candidates = enumerate_partial_matchings(n, m);
  OracleResult out{Schedule(n, m, scenario.slots()), 0.0};
  for (std::size_t t = 0; t < scenario.slots(); ++t)
    {
      auto slot = out.schedule.slot(t);
      double best = -1.0;
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < candidates.size(); ++k)
        {
          std::copy(candidates[k].begin(), candidates[k].end(), slot.begin());
          const double value = slot_rate(out.schedule, rx, params, t);
          if (value > best)
            {
              best = value;
              best_k = k;
            }
        }
      std::copy(candidates[best_k].begin(), candidates[best_k].end(), slot.begin());
      out.objective += best;
    }
  return out;
}

PolicyEvaluation
evaluate_policy(const Schedule& schedule, const Placement& placement, const Scenario& scenario,
                const ChannelParams& params)
{
  if (schedule.ugvs() != scenario.ugvs() || schedule.uavs() != scenario.uavs() ||
      schedule.slots() != scenario.slots())
    throw ValidationError("schedule shape does not match the scenario");
  if (!schedule.is_binary_feasible())
    throw ValidationError("schedule is not a binary feasible schedule");
  const auto rx = received_powers(placement, scenario, params);
  PolicyEvaluation out;
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    {
      out.per_slot.push_back(slot_rate(schedule, rx, params, t));
      out.total += out.per_slot.back();
    }
  return out;
}

} // namespace uavnet
