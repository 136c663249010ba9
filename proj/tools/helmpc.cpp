// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <CLI11.hpp>
#include "helmpc/error.hpp"
#include "helmpc/io.hpp"
#include "helmpc/scenario.hpp"

int main(int argc, char **argv)
{
  using namespace helmpc;

  CLI::App app{"helmpc: preconditioning bounds for Helmholtz finite-element systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir, matrix_dir, d_path, m_path;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
  int threads = 1;

  auto add_common = [&](CLI::App *cmd)
  {
    cmd->add_option("--out-dir", out_dir, "Output directory (overrides output.dir)");
    cmd->add_option("--seed", seed, "Random seed (overrides the config seed)");
    cmd->add_option("--tol-scale", tol_scale, "Multiplier for every solver tolerance")
        ->check(CLI::PositiveNumber);
  };

  auto *verify = app.add_subcommand("verify", "Check all bounds for one configured pair");
  verify->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_common(verify);

  auto *sweep = app.add_subcommand("sweep", "Evaluate the k x alpha x h grid and ladder");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  add_common(sweep);

  auto *exp = app.add_subcommand("export", "Write the configured pair as matrix files");
  exp->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_common(exp);

  auto *imp = app.add_subcommand("import", "Check bounds for an externally supplied pair");
  imp->add_option("--matrix-dir", matrix_dir, "Directory with A1.mtx, A2.mtx, pair.json")
      ->required();
  imp->add_option("--D", d_path, "Gram matrix file (default <matrix-dir>/D.mtx)");
  imp->add_option("--M", m_path, "Mass matrix file (default <matrix-dir>/M.mtx)");
  add_common(imp);

  CLI11_PARSE(app, argc, argv);

  ScenarioOptions opts;
  if (!out_dir.empty())
  {
    opts.out_dir = out_dir;
  }
  opts.seed = seed;
  opts.tol_scale = tol_scale;
  opts.threads = threads;
  opts.log = &std::cout;

  try
  {
    ScenarioResult res;
    if (*imp)
    {
      res = CmdImport(matrix_dir, d_path, m_path, opts);
    }
    else
    {
      const ExperimentConfig cfg = ReadConfigFile(config_path);
      if (*verify)
      {
        res = CmdVerify(cfg, opts);
      }
      else if (*sweep)
      {
        res = CmdSweep(cfg, opts);
      }
      else
      {
        res = CmdExport(cfg, opts);
      }
    }
    return res.exit_status;
  }
  catch (const std::exception &e)
  {
    std::cerr << "helmpc: " << e.what() << "\n";
    return 2;
  }
}
