// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_SCENARIO_HPP
#define HELMPC_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>
#include "helmpc/assemble.hpp"
#include "helmpc/bounds.hpp"
#include "helmpc/io.hpp"
#include "helmpc/solvers.hpp"

namespace helmpc
{

// Command-line overrides applied on top of a config.
struct ScenarioOptions
{
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  // Multiplies solver.estimator_tol, solver.slack and solver.tol.
  double tol_scale = 1.0;
  int threads = 1;
  // Summary lines are echoed here when set.
  std::ostream *log = nullptr;
};

struct ScenarioResult
{
  std::vector<std::string> files;
  std::vector<std::string> summary;
  int exit_status = 0;
};

// Config with overrides applied.
ExperimentConfig ApplyOptions(ExperimentConfig cfg, const ScenarioOptions &opts);

CheckOptions MakeCheckOptions(const ExperimentConfig &cfg);

CoefficientField BuildField(const CoefficientConfig &c, const MeshPtr &mesh, CoefficientRole role);

// Problem of the config at wavenumber k; a given h replaces the configured element counts
// (1D: n = ceil(L/h); 2D: nx = ceil(width/h), ny = ceil(height/h)).
ProblemSpec BuildProblem(const ProblemConfig &p, double k, std::optional<double> h = std::nullopt);

// The preconditioning partner of sys1 under the config's perturbation (alpha overrides
// the configured absorption).
GalerkinSystem BuildPartner(const ExperimentConfig &cfg, const GalerkinSystem &sys1,
                            std::optional<double> alpha = std::nullopt);

// Side data matching BuildPartner.
PairMetadata PairMeta(const ExperimentConfig &cfg, const GalerkinSystem &sys1,
                      const GalerkinSystem &sys2, std::optional<double> alpha = std::nullopt);

BoundReport PairReport(const GalerkinSystem &sys1, const GalerkinSystem &sys2,
                       const PairMetadata &meta, const CheckOptions &opts);

// Fixed-point and D-weighted preconditioned GMRES runs for a pair with right-hand side
// b = SeededVector(n, seed). Returns nullopt traces if A2 is singular.
struct PairTraces
{
  std::optional<IterationTrace> fixed_point;
  std::optional<IterationTrace> gmres;
};

PairTraces RunPairTraces(const GalerkinSystem &sys1, const GalerkinSystem &sys2, double c,
                         const SolverConfig &solver, std::uint64_t seed);

// Envelope checks for a trace with contraction factor c: norms[n] <= c^n norms[0] with the
// multiplicative slack, above a rounding floor relative to norms[0]. GMRES traces also get
// a monotonicity check. Checks are inapplicable when c >= 1.
inline constexpr double kEnvelopeSlack = 1e-8;
inline constexpr double kRoundingFloor = 1e-13;
std::vector<BoundCheck> TraceChecks(const IterationTrace &t, double c);

ScenarioResult CmdVerify(const ExperimentConfig &cfg, const ScenarioOptions &opts);
ScenarioResult CmdSweep(const ExperimentConfig &cfg, const ScenarioOptions &opts);
ScenarioResult CmdExport(const ExperimentConfig &cfg, const ScenarioOptions &opts);
ScenarioResult CmdImport(const std::string &matrix_dir, const std::string &d_path,
                         const std::string &m_path, const ScenarioOptions &opts);

}  // namespace helmpc

#endif  // HELMPC_SCENARIO_HPP
