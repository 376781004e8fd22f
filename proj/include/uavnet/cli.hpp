#pragma once

// Batch driver: JSON configuration in, result files out.
//
// Exit codes: 0 success (solver cap hits are reported as warnings), 1 I/O or
// unexpected failure, 2 configuration error, 3 oracle budget exceeded.

#include "uavnet/channel.hpp"
#include "uavnet/optimizer.hpp"
#include "uavnet/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace uavnet::cli
{

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

enum class Command
{
  kSolve,
  kBaselineFixed,
  kBaselineRandom,
  kOracle,
  kSweep,
};

std::string to_string(Command command);
std::optional<Command> command_from_string(const std::string& s);

struct RunConfig
{
  int schema_version = kSchemaVersion;
  std::optional<Command> command;
  TrajectorySpec scenario;
  ChannelParams channel;
  AlternatingConfig solver;
  SeparationRule separation = SeparationRule::kSumOverSlots;
  std::vector<std::size_t> sweep_ugv_counts{2, 3, 4, 5, 6};
  std::vector<std::uint64_t> sweep_seeds{0, 1, 2, 3, 4};
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

struct ParsedConfig
{
  RunConfig config;
  /// "field.path: message" entries; empty when the config is usable.
  std::vector<std::string> violations;
};

/**
 * Reads a configuration document. Missing keys keep their defaults; unknown
 * keys, wrong types and invariant violations are all reported. Noise power is
 * given either as channel.n0_dbw (dB relative to 1 W) or channel.n0_w.
 */
ParsedConfig parse_config(const nlohmann::json& doc);

/// parse_config on a file; unreadable files and syntax errors become violations.
ParsedConfig load_config(const std::filesystem::path& path);

/// Invariant and command-specific checks on an already typed config.
std::vector<std::string> semantic_violations(const RunConfig& config);

/// Full configuration echo; parse_config(config_to_json(c)) reproduces c.
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// rows: t,i,j,a_ij,rate for every link of every slot.
void write_rates_csv(std::ostream& os, const Schedule& schedule, const LinkTensor& rates);

/// rows: t,kind,ugv,uav with kind "communication" or "interference".
void write_links_csv(std::ostream& os, const Schedule& schedule);

/// rows: uav,x,y,height.
void write_placement_csv(std::ostream& os, const Placement& placement, const Scenario& scenario);

struct SweepRow
{
  std::size_t n_ugvs = 0;
  std::string method;
  double sum_rate = 0.0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
};

/// Proposed method and both baselines for every (N, seed); row order is fixed.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// rows: n_ugvs,method,sum_rate,wall_time,seed.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Runs config.command into out_dir. Progress and diagnostics go to log.
int execute(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

} // namespace uavnet::cli
