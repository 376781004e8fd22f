#include "uavnet/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace uavnet::cli
{

using nlohmann::json;
using nlohmann::ordered_json;

namespace
{

/// Typed access to one JSON object, collecting diagnostics under a field path.
class Fields
{
public:
  Fields(const json& obj, std::string path, std::vector<std::string>& errors,
         std::vector<std::string> allowed)
    : obj_(obj), path_(std::move(path)), errors_(errors)
  {
    if (!obj_.is_object())
      {
        fail(path_.empty() ? "<root>" : path_, "must be an object");
        ok_ = false;
        return;
      }
    for (const auto& [key, value] : obj_.items())
      {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
          fail(at(key), "unknown field");
      }
  }

  bool ok() const { return ok_; }
  bool has(const std::string& key) const { return ok_ && obj_.contains(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& get(const std::string& key) const { return obj_.at(key); }

  void fail(const std::string& field, const std::string& msg) { errors_.push_back(field + ": " + msg); }

  void number(const std::string& key, double& dst)
  {
    if (!has(key))
      return;
    const auto& v = obj_.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      fail(at(key), "must be a finite number");
    else
      dst = v.get<double>();
  }

  void optional_number(const std::string& key, std::optional<double>& dst)
  {
    if (has(key) && obj_.at(key).is_null())
      {
        dst.reset();
        return;
      }
    double v = dst.value_or(0.0);
    const auto before = errors_.size();
    number(key, v);
    if (has(key) && errors_.size() == before)
      dst = v;
  }

  template <class Int>
  void integer(const std::string& key, Int& dst)
  {
    if (!has(key))
      return;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer())
      fail(at(key), "must be an integer");
    else if (std::is_unsigned_v<Int> && v.get<std::int64_t>() < 0 && !v.is_number_unsigned())
      fail(at(key), "must be >= 0");
    else
      dst = v.get<Int>();
  }

  void boolean(const std::string& key, bool& dst)
  {
    if (!has(key))
      return;
    if (!obj_.at(key).is_boolean())
      fail(at(key), "must be true or false");
    else
      dst = obj_.at(key).get<bool>();
  }

  void string(const std::string& key, std::string& dst)
  {
    if (!has(key))
      return;
    if (!obj_.at(key).is_string())
      fail(at(key), "must be a string");
    else
      dst = obj_.at(key).get<std::string>();
  }

  void numbers(const std::string& key, std::vector<double>& dst)
  {
    if (!has(key))
      return;
    const auto& v = obj_.at(key);
    std::vector<double> out;
    if (!v.is_array())
      {
        fail(at(key), "must be an array of numbers");
        return;
      }
    for (const auto& x : v)
      {
        if (!x.is_number() || !std::isfinite(x.get<double>()))
          {
            fail(at(key), "must be an array of numbers");
            return;
          }
        out.push_back(x.get<double>());
      }
    dst = std::move(out);
  }

  template <class Int>
  void integers(const std::string& key, std::vector<Int>& dst)
  {
    if (!has(key))
      return;
    const auto& v = obj_.at(key);
    std::vector<Int> out;
    bool good = v.is_array();
    if (good)
      {
        for (const auto& x : v)
          {
            if (!x.is_number_integer() || (!x.is_number_unsigned() && x.get<std::int64_t>() < 0))
              {
                good = false;
                break;
              }
            out.push_back(x.get<Int>());
          }
      }
    if (!good)
      fail(at(key), "must be an array of nonnegative integers");
    else
      dst = std::move(out);
  }

private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  bool ok_ = true;
};

bool
parse_point(const json& v, Vec2& out)
{
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    return false;
  out = {v[0].get<double>(), v[1].get<double>()};
  return std::isfinite(out.x) && std::isfinite(out.y);
}

ordered_json
point_json(const Vec2& p)
{
  return ordered_json::array({p.x, p.y});
}

/// "name rest" -> "prefix.name: rest"
std::string
qualify(const std::string& prefix, const std::string& message)
{
  const auto space = message.find(' ');
  if (space == std::string::npos)
    return prefix + message;
  return prefix + message.substr(0, space) + ":" + message.substr(space);
}

std::string
separation_name(SeparationRule rule)
{
  return rule == SeparationRule::kMaxOverSlots ? "max" : "sum";
}

void
parse_scenario(const json& v, std::vector<std::string>& errors, TrajectorySpec& spec)
{
  Fields f(v, "scenario", errors,
           {"kind", "n_ugvs", "t_slots", "m_uavs", "length_m", "radius_m", "uav_heights",
            "tx_power_w", "slot_duration_s", "segments", "centers", "phases", "trajectories"});
  if (!f.ok())
    return;
  if (f.has("kind"))
    {
      std::string kind;
      f.string("kind", kind);
      if (f.get("kind").is_string())
        {
          try
            {
              spec.kind = trajectory_kind_from_string(kind);
            }
          catch (const std::exception&)
            {
              f.fail(f.at("kind"), "must be one of line, circle, custom");
            }
        }
    }
  f.integer("n_ugvs", spec.n_ugvs);
  f.integer("t_slots", spec.t_slots);
  f.integer("m_uavs", spec.m_uavs);
  f.number("length_m", spec.length_m);
  f.number("radius_m", spec.radius_m);
  f.numbers("uav_heights", spec.uav_heights);
  f.numbers("tx_power_w", spec.tx_power_w);
  f.number("slot_duration_s", spec.slot_duration_s);
  f.numbers("phases", spec.phases);

  if (f.has("centers"))
    {
      std::vector<Vec2> centers;
      bool good = f.get("centers").is_array();
      for (const auto& c : good ? f.get("centers") : json::array())
        {
          Vec2 p;
          good = good && parse_point(c, p);
          centers.push_back(p);
        }
      if (good)
        spec.centers = std::move(centers);
      else
        f.fail(f.at("centers"), "must be an array of [x, y] points");
    }
  if (f.has("segments"))
    {
      std::vector<Segment> segments;
      bool good = f.get("segments").is_array();
      for (const auto& s : good ? f.get("segments") : json::array())
        {
          Segment seg;
          good = good && s.is_array() && s.size() == 2 && parse_point(s[0], seg.from) &&
                 parse_point(s[1], seg.to);
          segments.push_back(seg);
        }
      if (good)
        spec.segments = std::move(segments);
      else
        f.fail(f.at("segments"), "must be an array of [[x1, y1], [x2, y2]] segments");
    }
  if (f.has("trajectories"))
    {
      std::vector<std::vector<Vec2>> paths;
      bool good = f.get("trajectories").is_array();
      for (const auto& path : good ? f.get("trajectories") : json::array())
        {
          good = good && path.is_array();
          std::vector<Vec2> points;
          for (const auto& p : good ? path : json::array())
            {
              Vec2 q;
              good = good && parse_point(p, q);
              points.push_back(q);
            }
          paths.push_back(std::move(points));
        }
      if (good)
        spec.trajectories = std::move(paths);
      else
        f.fail(f.at("trajectories"), "must be an array of per-UGV arrays of [x, y] points");
    }
  // Custom worlds may leave the sizes implicit.
  if (spec.kind == TrajectoryKind::kCustom && !spec.trajectories.empty())
    {
      if (!f.has("n_ugvs"))
        spec.n_ugvs = spec.trajectories.size();
      if (!f.has("t_slots"))
        spec.t_slots = spec.trajectories.front().size();
    }
}

void
parse_channel(const json& v, std::vector<std::string>& errors, ChannelParams& params)
{
  Fields f(v, "channel", errors,
           {"fc", "c", "g_t", "g_r", "mu_los", "mu_nlos", "alpha_env", "gamma_env", "n0_dbw", "n0_w"});
  if (!f.ok())
    return;
  f.number("fc", params.fc);
  f.number("c", params.c);
  f.number("g_t", params.g_t);
  f.number("g_r", params.g_r);
  f.number("mu_los", params.mu_los);
  f.number("mu_nlos", params.mu_nlos);
  f.number("alpha_env", params.alpha_env);
  f.number("gamma_env", params.gamma_env);
  if (f.has("n0_dbw") && f.has("n0_w"))
    {
      f.fail(f.at("n0_w"), "give either n0_dbw or n0_w, not both");
      return;
    }
  if (f.has("n0_dbw"))
    {
      double dbw = 0.0;
      const auto before = errors.size();
      f.number("n0_dbw", dbw);
      if (errors.size() == before)
        params.n0 = dbw_to_watts(dbw);
    }
  f.number("n0_w", params.n0);
}

void
parse_solver(const json& v, std::vector<std::string>& errors, AlternatingConfig& solver)
{
  Fields f(v, "solver", errors, {"epsilon_outer", "max_rounds", "greedy_start", "dc", "gd"});
  if (!f.ok())
    return;
  f.number("epsilon_outer", solver.epsilon_outer);
  f.integer("max_rounds", solver.max_rounds);
  f.boolean("greedy_start", solver.greedy_start);
  if (f.has("dc"))
    {
      Fields d(f.get("dc"), "solver.dc", errors,
               {"eta", "eta_growth", "eta_max", "eta_max_factor", "epsilon", "max_dc_iters",
                "binary_tol", "inner"});
      if (d.ok())
        {
          auto& dc = solver.dc;
          d.optional_number("eta", dc.eta);
          d.number("eta_growth", dc.eta_growth);
          d.optional_number("eta_max", dc.eta_max);
          d.number("eta_max_factor", dc.eta_max_factor);
          d.number("epsilon", dc.epsilon);
          d.integer("max_dc_iters", dc.max_dc_iters);
          d.number("binary_tol", dc.binary_tol);
          if (d.has("inner"))
            {
              Fields in(d.get("inner"), "solver.dc.inner", errors, {"max_iters", "gap_tol"});
              in.integer("max_iters", dc.inner.max_iters);
              in.number("gap_tol", dc.inner.gap_tol);
            }
        }
    }
  if (f.has("gd"))
    {
      Fields g(f.get("gd"), "solver.gd", errors,
               {"step_init", "backtrack", "armijo_c", "max_backtracks", "max_iters", "grad_tol",
                "fd_step"});
      if (g.ok())
        {
          auto& gd = solver.gd;
          g.number("step_init", gd.step_init);
          g.number("backtrack", gd.backtrack);
          g.number("armijo_c", gd.armijo_c);
          g.integer("max_backtracks", gd.max_backtracks);
          g.integer("max_iters", gd.max_iters);
          g.number("grad_tol", gd.grad_tol);
          g.number("fd_step", gd.fd_step);
        }
    }
}

std::string
format_double(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class Writer>
void
write_file(const std::filesystem::path& path, Writer&& writer)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(os);
  if (!os)
    throw std::runtime_error("failed writing " + path.string());
}

ordered_json
schedule_json(const Schedule& schedule)
{
  auto out = ordered_json::array();
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    {
      auto slot = ordered_json::array();
      for (std::size_t i = 0; i < schedule.ugvs(); ++i)
        for (std::size_t j = 0; j < schedule.uavs(); ++j)
          if (schedule(i, j, t) != 0.0)
            slot.push_back({i, j});
      out.push_back(std::move(slot));
    }
  return out;
}

ordered_json
placement_json(const Placement& placement)
{
  auto out = ordered_json::array();
  for (const auto& p : placement.xy)
    out.push_back(point_json(p));
  return out;
}

std::vector<double>
per_slot(const LinkTensor& rates)
{
  std::vector<double> out(rates.slots(), 0.0);
  for (std::size_t t = 0; t < rates.slots(); ++t)
    for (double r : rates.slot(t))
      out[t] += r;
  return out;
}

/// Writes results.json plus the three CSV files for one binary policy.
void
write_policy(const std::filesystem::path& dir, ordered_json results, const Schedule& schedule,
             const Placement& placement, const Scenario& scenario, const ChannelParams& params,
             double wall_time)
{
  const auto rates = link_rates(schedule, received_powers(placement, scenario, params), params);
  results["per_slot_rates"] = per_slot(rates);
  results["schedule"] = schedule_json(schedule);
  results["placement"] = placement_json(placement);
  results["wall_time_s"] = wall_time;
  write_file(dir / "results.json", [&](std::ostream& os) { os << results.dump(2) << '\n'; });
  write_file(dir / "rates.csv", [&](std::ostream& os) { write_rates_csv(os, schedule, rates); });
  write_file(dir / "links.csv", [&](std::ostream& os) { write_links_csv(os, schedule); });
  write_file(dir / "placement.csv",
             [&](std::ostream& os) { write_placement_csv(os, placement, scenario); });
}

ordered_json
results_header(const RunConfig& config, Command command, const std::string& method)
{
  ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = to_string(command);
  out["method"] = method;
  out["seed"] = config.seed;
  return out;
}

ordered_json
report_json(const SolveReport& report)
{
  ordered_json out;
  out["objective"] = report.objective;
  out["objective_trace"] = report.objective_trace;
  auto rounds = ordered_json::array();
  for (const auto& r : report.rounds)
    {
      rounds.push_back({{"round", r.round},
                        {"schedule_objective", r.schedule_objective},
                        {"objective", r.objective},
                        {"schedule_accepted", r.schedule_accepted},
                        {"dc_iterations", r.dc_iterations},
                        {"gd_iterations", r.gd_iterations}});
    }
  out["rounds"] = std::move(rounds);
  auto dc = ordered_json::array();
  for (const auto& trace : report.dc_traces)
    {
      auto steps = ordered_json::array();
      for (const auto& s : trace)
        {
          steps.push_back({{"stage", s.stage},
                           {"eta", s.eta},
                           {"objective", s.objective},
                           {"residual", s.residual},
                           {"inner_gap", s.inner_gap},
                           {"inner_iterations", s.inner_iterations}});
        }
      dc.push_back(std::move(steps));
    }
  out["dc_traces"] = std::move(dc);
  out["gd_traces"] = report.gd_traces;
  out["converged"] = report.converged;
  out["warnings"] = report.warnings;
  return out;
}

int
run_solve(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log)
{
  const auto scenario = build_scenario(config.scenario);
  auto solver = config.solver;
  solver.seed = config.seed;
  const auto report = alternate(scenario, config.channel, solver);
  auto results = results_header(config, Command::kSolve, "proposed");
  results.update(report_json(report));
  results["config"] = config_to_json(config);
  write_policy(dir, results, report.final_schedule, report.final_placement, scenario,
               config.channel, report.wall_time);
  log << "sum rate " << format_double(report.objective) << " after " << report.rounds.size()
      << " rounds\n";
  for (const auto& w : report.warnings)
    log << "warning: " << w << '\n';
  return kExitOk;
}

int
run_baseline(const RunConfig& config, Command command, const std::filesystem::path& dir,
             std::ostream& log)
{
  const auto start = std::chrono::steady_clock::now();
  const auto scenario = build_scenario(config.scenario);
  BaselineConfig bc{config.solver.gd, config.separation};
  const bool fixed = command == Command::kBaselineFixed;
  const auto result = fixed ? baseline_fixed_selection(scenario, config.channel, bc)
                            : baseline_random_selection(scenario, config.channel, bc, config.seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto results = results_header(config, command, fixed ? "fixed-selection" : "random-selection");
  results["objective"] = result.objective;
  results["pair"] = {result.pair.first, result.pair.second};
  results["gd_trace"] = result.gd_trace;
  results["warnings"] = json::array();
  results["config"] = config_to_json(config);
  write_policy(dir, results, result.schedule, result.placement, scenario, config.channel, wall);
  log << "sum rate " << format_double(result.objective) << " with UGVs " << result.pair.first
      << " and " << result.pair.second << '\n';
  return kExitOk;
}

int
run_oracle(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log)
{
  const auto& s = config.scenario;
  if (!oracle_within_budget(s.n_ugvs, s.m_uavs, s.t_slots))
    {
      log << "error: brute-force oracle budget exceeded: N=" << s.n_ugvs << ", M=" << s.m_uavs
          << ", T=" << s.t_slots << " (limits N <= 6, M <= 3, T <= 10)\n";
      return kExitBudget;
    }
  const auto scenario = build_scenario(config.scenario);
  auto solver = config.solver;
  solver.seed = config.seed;
  const auto report = alternate(scenario, config.channel, solver);
  const auto start = std::chrono::steady_clock::now();
  const auto oracle = brute_force_schedule(report.final_placement, scenario, config.channel);
  const double wall =
      report.wall_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto results = results_header(config, Command::kOracle, "oracle");
  results["objective"] = oracle.objective;
  results["proposed_objective"] = report.objective;
  results["ratio"] = oracle.objective > 0.0 ? report.objective / oracle.objective : 1.0;
  results["warnings"] = report.warnings;
  results["config"] = config_to_json(config);
  write_policy(dir, results, oracle.schedule, report.final_placement, scenario, config.channel,
               wall);
  log << "oracle " << format_double(oracle.objective) << ", proposed "
      << format_double(report.objective) << '\n';
  return kExitOk;
}

int
run_sweep_command(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log)
{
  const auto rows = run_sweep(config);
  write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rows); });
  for (const auto& r : rows)
    log << "N=" << r.n_ugvs << " seed=" << r.seed << ' ' << r.method << ' '
        << format_double(r.sum_rate) << '\n';
  return kExitOk;
}

} // namespace

std::string
to_string(Command command)
{
  switch (command)
    {
    case Command::kSolve:
      return "solve";
    case Command::kBaselineFixed:
      return "baseline-fixed";
    case Command::kBaselineRandom:
      return "baseline-random";
    case Command::kOracle:
      return "oracle";
    case Command::kSweep:
      return "sweep";
    }
  return "unknown";
}

std::optional<Command>
command_from_string(const std::string& s)
{
  for (auto c : {Command::kSolve, Command::kBaselineFixed, Command::kBaselineRandom,
                 Command::kOracle, Command::kSweep})
    {
      if (to_string(c) == s)
        return c;
    }
  return std::nullopt;
}

ParsedConfig
parse_config(const json& doc)
{
  ParsedConfig out;
  auto& cfg = out.config;
  auto& errors = out.violations;
  Fields f(doc, "", errors,
           {"schema_version", "command", "seed", "output_dir", "scenario", "channel", "solver",
            "baseline", "sweep_ugv_counts", "sweep_seeds"});
  if (!f.ok())
    return out;

  if (!f.has("schema_version"))
    f.fail("schema_version", "required");
  f.integer("schema_version", cfg.schema_version);
  if (f.has("schema_version") && f.get("schema_version").is_number_integer() &&
      cfg.schema_version != kSchemaVersion)
    f.fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version) +
                                 " (expected " + std::to_string(kSchemaVersion) + ")");

  if (f.has("command"))
    {
      std::string name;
      f.string("command", name);
      if (f.get("command").is_string())
        {
          cfg.command = command_from_string(name);
          if (!cfg.command)
            f.fail("command",
                   "must be one of solve, baseline-fixed, baseline-random, oracle, sweep");
        }
    }
  f.integer("seed", cfg.seed);
  f.string("output_dir", cfg.output_dir);
  f.integers("sweep_ugv_counts", cfg.sweep_ugv_counts);
  f.integers("sweep_seeds", cfg.sweep_seeds);

  if (f.has("scenario"))
    parse_scenario(f.get("scenario"), errors, cfg.scenario);
  if (f.has("channel"))
    parse_channel(f.get("channel"), errors, cfg.channel);
  if (f.has("solver"))
    parse_solver(f.get("solver"), errors, cfg.solver);
  if (f.has("baseline"))
    {
      Fields b(f.get("baseline"), "baseline", errors, {"separation"});
      std::string rule = separation_name(cfg.separation);
      b.string("separation", rule);
      if (rule == "sum")
        cfg.separation = SeparationRule::kSumOverSlots;
      else if (rule == "max")
        cfg.separation = SeparationRule::kMaxOverSlots;
      else
        b.fail("baseline.separation", "must be sum or max");
    }

  // Fields that failed to parse kept their defaults, so this adds no noise.
  for (auto& v : semantic_violations(cfg))
    errors.push_back(std::move(v));
  return out;
}

ParsedConfig
load_config(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is)
    {
      ParsedConfig out;
      out.violations.push_back("<file>: cannot read " + path.string());
      return out;
    }
  json doc;
  try
    {
      doc = json::parse(is);
    }
  catch (const json::parse_error& e)
    {
      ParsedConfig out;
      out.violations.push_back(std::string("<file>: invalid JSON: ") + e.what());
      return out;
    }
  return parse_config(doc);
}

std::vector<std::string>
semantic_violations(const RunConfig& config)
{
  std::vector<std::string> out = config.scenario.violations();
  for (const auto& v : config.channel.violations())
    out.push_back(qualify("channel.", v));
  for (const auto& v : config.solver.violations())
    out.push_back(qualify("solver.", v));
  if (config.output_dir.empty())
    out.emplace_back("output_dir: must not be empty");

  if (!config.command)
    return out;
  const auto& s = config.scenario;
  switch (*config.command)
    {
    case Command::kBaselineFixed:
    case Command::kBaselineRandom:
      if (s.n_ugvs < 2)
        out.emplace_back("scenario.n_ugvs: baselines need at least 2 UGVs");
      if (s.m_uavs < 2)
        out.emplace_back("scenario.m_uavs: baselines need at least 2 UAVs");
      break;
    case Command::kSweep:
      if (config.sweep_ugv_counts.empty())
        out.emplace_back("sweep_ugv_counts: required for the sweep command");
      for (auto n : config.sweep_ugv_counts)
        {
          if (n < 2)
            {
              out.emplace_back("sweep_ugv_counts: every count must be >= 2");
              break;
            }
        }
      if (config.sweep_seeds.empty())
        out.emplace_back("sweep_seeds: required for the sweep command");
      if (s.kind == TrajectoryKind::kCustom)
        out.emplace_back("scenario.kind: sweep needs the line or circle family");
      if (s.m_uavs < 2)
        out.emplace_back("scenario.m_uavs: baselines need at least 2 UAVs");
      break;
    case Command::kSolve:
    case Command::kOracle:
      break;
    }
  return out;
}

ordered_json
config_to_json(const RunConfig& config)
{
  ordered_json out;
  out["schema_version"] = config.schema_version;
  if (config.command)
    out["command"] = to_string(*config.command);
  out["seed"] = config.seed;
  out["output_dir"] = config.output_dir;

  const auto& s = config.scenario;
  ordered_json scenario;
  scenario["kind"] = to_string(s.kind);
  scenario["n_ugvs"] = s.n_ugvs;
  scenario["t_slots"] = s.t_slots;
  scenario["m_uavs"] = s.m_uavs;
  scenario["length_m"] = s.length_m;
  scenario["radius_m"] = s.radius_m;
  scenario["uav_heights"] = s.uav_heights;
  scenario["tx_power_w"] = s.tx_power_w;
  scenario["slot_duration_s"] = s.slot_duration_s;
  auto segments = ordered_json::array();
  for (const auto& seg : s.segments)
    segments.push_back({point_json(seg.from), point_json(seg.to)});
  scenario["segments"] = std::move(segments);
  auto centers = ordered_json::array();
  for (const auto& c : s.centers)
    centers.push_back(point_json(c));
  scenario["centers"] = std::move(centers);
  scenario["phases"] = s.phases;
  auto paths = ordered_json::array();
  for (const auto& path : s.trajectories)
    {
      auto points = ordered_json::array();
      for (const auto& p : path)
        points.push_back(point_json(p));
      paths.push_back(std::move(points));
    }
  scenario["trajectories"] = std::move(paths);
  out["scenario"] = std::move(scenario);

  const auto& c = config.channel;
  out["channel"] = {{"fc", c.fc},
                    {"c", c.c},
                    {"g_t", c.g_t},
                    {"g_r", c.g_r},
                    {"mu_los", c.mu_los},
                    {"mu_nlos", c.mu_nlos},
                    {"alpha_env", c.alpha_env},
                    {"gamma_env", c.gamma_env},
                    {"n0_w", c.n0}};

  const auto& a = config.solver;
  ordered_json dc;
  dc["eta"] = a.dc.eta ? ordered_json(*a.dc.eta) : ordered_json(nullptr);
  dc["eta_growth"] = a.dc.eta_growth;
  dc["eta_max"] = a.dc.eta_max ? ordered_json(*a.dc.eta_max) : ordered_json(nullptr);
  dc["eta_max_factor"] = a.dc.eta_max_factor;
  dc["epsilon"] = a.dc.epsilon;
  dc["max_dc_iters"] = a.dc.max_dc_iters;
  dc["binary_tol"] = a.dc.binary_tol;
  dc["inner"] = {{"max_iters", a.dc.inner.max_iters}, {"gap_tol", a.dc.inner.gap_tol}};
  ordered_json gd = {{"step_init", a.gd.step_init},
                     {"backtrack", a.gd.backtrack},
                     {"armijo_c", a.gd.armijo_c},
                     {"max_backtracks", a.gd.max_backtracks},
                     {"max_iters", a.gd.max_iters},
                     {"grad_tol", a.gd.grad_tol},
                     {"fd_step", a.gd.fd_step}};
  out["solver"] = {{"epsilon_outer", a.epsilon_outer},
                   {"max_rounds", a.max_rounds},
                   {"greedy_start", a.greedy_start},
                   {"dc", std::move(dc)},
                   {"gd", std::move(gd)}};
  out["baseline"] = {{"separation", separation_name(config.separation)}};
  out["sweep_ugv_counts"] = config.sweep_ugv_counts;
  out["sweep_seeds"] = config.sweep_seeds;
  return out;
}

void
write_rates_csv(std::ostream& os, const Schedule& schedule, const LinkTensor& rates)
{
  os << "t,i,j,a_ij,rate\n";
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    for (std::size_t i = 0; i < schedule.ugvs(); ++i)
      for (std::size_t j = 0; j < schedule.uavs(); ++j)
        os << t << ',' << i << ',' << j << ',' << format_double(schedule(i, j, t)) << ','
           << format_double(rates(i, j, t)) << '\n';
}

void
write_links_csv(std::ostream& os, const Schedule& schedule)
{
  os << "t,kind,ugv,uav\n";
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    {
      for (std::size_t i = 0; i < schedule.ugvs(); ++i)
        for (std::size_t j = 0; j < schedule.uavs(); ++j)
          if (schedule(i, j, t) != 0.0)
            os << t << ",communication," << i << ',' << j << '\n';
      // Every transmitting UGV interferes at every other receiving UAV.
      for (std::size_t j = 0; j < schedule.uavs(); ++j)
        {
          for (std::size_t p = 0; p < schedule.ugvs(); ++p)
            {
              if (schedule(p, j, t) != 0.0 || schedule.ugv_activity(p, t) == 0.0)
                continue;
              bool receiving = false;
              for (std::size_t i = 0; i < schedule.ugvs(); ++i)
                receiving = receiving || (i != p && schedule(i, j, t) != 0.0);
              if (receiving)
                os << t << ",interference," << p << ',' << j << '\n';
            }
        }
    }
}

void
write_placement_csv(std::ostream& os, const Placement& placement, const Scenario& scenario)
{
  os << "uav,x,y,height\n";
  for (std::size_t j = 0; j < placement.xy.size(); ++j)
    os << j << ',' << format_double(placement.xy[j].x) << ',' << format_double(placement.xy[j].y)
       << ',' << format_double(scenario.height(j)) << '\n';
}

std::vector<SweepRow>
run_sweep(const RunConfig& config)
{
  struct Job
  {
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto n : config.sweep_ugv_counts)
    for (auto seed : config.sweep_seeds)
      jobs.push_back({n, seed});

  constexpr std::size_t kMethods = 3;
  std::vector<SweepRow> rows(jobs.size() * kMethods);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs.size() && !failed; k = next++)
      {
        try
          {
            auto spec = config.scenario;
            spec.n_ugvs = jobs[k].n;
            spec.centers.clear();
            spec.phases.clear();
            spec.segments.clear();
            if (spec.tx_power_w.size() != 1)
              spec.tx_power_w = {spec.tx_power_w.front()};
            const auto scenario = build_scenario(spec);
            const auto seed = jobs[k].seed;

            auto solver = config.solver;
            solver.seed = seed;
            const auto report = alternate(scenario, config.channel, solver);
            rows[k * kMethods] = {jobs[k].n, "proposed", report.objective, report.wall_time, seed};

            BaselineConfig bc{config.solver.gd, config.separation};
            auto start = std::chrono::steady_clock::now();
            const auto fixed = baseline_fixed_selection(scenario, config.channel, bc);
            auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            rows[k * kMethods + 1] = {jobs[k].n, "fixed-selection", fixed.objective, wall, seed};

            start = std::chrono::steady_clock::now();
            const auto random = baseline_random_selection(scenario, config.channel, bc, seed);
            wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            rows[k * kMethods + 2] = {jobs[k].n, "random-selection", random.objective, wall, seed};
          }
        catch (...)
          {
            if (!failed.exchange(true))
              error = std::current_exception();
          }
      }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
  return rows;
}

void
write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
  os << "n_ugvs,method,sum_rate,wall_time,seed\n";
  for (const auto& r : rows)
    os << r.n_ugvs << ',' << r.method << ',' << format_double(r.sum_rate) << ','
       << format_double(r.wall_time) << ',' << r.seed << '\n';
}

int
execute(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log)
{
  auto violations = semantic_violations(config);
  if (!config.command)
    violations.insert(violations.begin(), "command: required");
  if (!violations.empty())
    {
      for (const auto& v : violations)
        log << "error: " << v << '\n';
      return kExitConfig;
    }

  try
    {
      std::filesystem::create_directories(out_dir);
      switch (*config.command)
        {
        case Command::kSolve:
          return run_solve(config, out_dir, log);
        case Command::kBaselineFixed:
        case Command::kBaselineRandom:
          return run_baseline(config, *config.command, out_dir, log);
        case Command::kOracle:
          return run_oracle(config, out_dir, log);
        case Command::kSweep:
          return run_sweep_command(config, out_dir, log);
        }
    }
  catch (const UsageError& e)
    {
      log << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  catch (const OracleBudgetExceeded& e)
    {
      log << "error: " << e.what() << '\n';
      return kExitBudget;
    }
  catch (const std::exception& e)
    {
      log << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  return kExitFailure;
}

} // namespace uavnet::cli
