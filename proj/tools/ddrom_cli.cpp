#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddrom/experiments.hpp"

namespace
{

struct Shared
{
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string config_file;
  bool full_scale = false;
};

int run(const std::string &command, const Shared &opts, bool seed_given)
{
  std::optional<ddrom::io::Json> user;
  if (!opts.config_file.empty())
  {
    user = ddrom::io::Json::parse(ddrom::io::read_file(opts.config_file));
  }
  const ddrom::ExperimentConfig config = ddrom::make_config(
    command, opts.full_scale, user ? &*user : nullptr,
    seed_given ? std::optional<std::uint64_t>(opts.seed) : std::nullopt);
  const ddrom::CommandResult result = ddrom::run_command(config);

  std::filesystem::create_directories(opts.out_dir);
  for (const ddrom::OutputFile &f : result.files)
  {
    const std::filesystem::path path = std::filesystem::path(opts.out_dir) / f.name;
    ddrom::io::write_file(path.string(), f.content);
    std::cout << path.string() << "\n";
  }
  if (!result.message.empty())
  {
    std::cerr << result.message << "\n";
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Data-driven H2-optimal reduced-order models"};
  app.require_subcommand(1);

  Shared opts;
  bool seed_given = false;
  std::string chosen;
  for (const std::string &name : ddrom::command_names())
  {
    CLI::App *sub = app.add_subcommand(name);
    sub->add_option("--seed", opts.seed, "Base random seed")
      ->each([&](const std::string &) { seed_given = true; });
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--config", opts.config_file, "JSON merged over the defaults")
      ->check(CLI::ExistingFile);
    sub->add_flag("--full-scale", opts.full_scale, "Use the full-size problem");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try
  {
    return run(chosen, opts, seed_given);
  }
  catch (const ddrom::InformativityError &e)
  {
    std::cerr << "informativity failure: " << e.what() << "\n";
    return 2;
  }
  catch (const ddrom::NonConvergenceError &e)
  {
    std::cerr << "no convergence: " << e.what() << "\n";
    return 3;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
