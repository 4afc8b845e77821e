#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddrom/io.hpp"

namespace ddrom
{

/// Effective settings of one command: built-in defaults (desk or full scale), overlaid
/// with a user JSON document (RFC 7386 merge patch) and the --seed override.
struct ExperimentConfig
{
  std::string experiment;
  bool full_scale = false;
  io::Json params;

  // Hash of {experiment, full_scale, params}; stamped into every output file.
  std::string hash() const;
};

ExperimentConfig make_config(const std::string &experiment, bool full_scale,
                             const io::Json *user = nullptr,
                             std::optional<std::uint64_t> seed = std::nullopt);

/// Defaults for a command; throws on an unknown command name.
io::Json default_params(const std::string &experiment, bool full_scale);

const std::vector<std::string> &command_names();

struct OutputFile
{
  std::string name;
  std::string content;
};

struct CommandResult
{
  std::vector<OutputFile> files;
  // 0 success, 2 informativity failure, 3 non-convergence.
  int exit_code = 0;
  std::string message;

  const OutputFile &file(const std::string &name) const;
};

/// Runs a command without touching the filesystem, except for "file" system or data
/// sources named in the configuration. InformativityError and NonConvergenceError
/// propagate for the caller to map onto exit codes.
CommandResult run_command(const ExperimentConfig &config);

// Builders shared by the commands, exposed for tests.
DiscreteLTI system_from_config(const io::Json &system, std::uint64_t seed);
Vector input_from_config(const io::Json &input, std::uint64_t seed);
/// Sawtooth rising from -amplitude to amplitude, frequency in Hz, k / fs seconds.
Vector sawtooth_input(Index length, double frequency, double amplitude, double fs);
RecoveryOptions recovery_from_config(const io::Json &params);

io::CsvTable cond_vs_radius(const ExperimentConfig &config);
io::CsvTable error_vs_nhat(const ExperimentConfig &config);
io::CsvTable h2_convergence(const ExperimentConfig &config);
io::CsvTable heat_trajectory(const ExperimentConfig &config);

}  // namespace ddrom
