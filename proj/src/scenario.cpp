// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/scenario.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>
#include "helmpc/error.hpp"

namespace helmpc
{

namespace
{

bool InBox(const std::vector<double> &box, const std::array<double, 2> &x)
{
  if (x[0] < box[0] || x[0] > box[1])
  {
    return false;
  }
  return box.size() < 4 || (x[1] >= box[2] && x[1] <= box[3]);
}

int CellCount(double length, double h)
{
  Require(h > 0.0 && std::isfinite(h), ErrorKind::InvalidArgument, "mesh size must be positive");
  const double n = std::ceil(length / h - 1e-9);
  Require(n >= 1.0 && n < 1e8, ErrorKind::InvalidArgument, "mesh size gives no valid element count");
  return static_cast<int>(n);
}

std::string Path(const std::string &dir, const std::string &name)
{
  return (std::filesystem::path(dir) / name).string();
}

std::string SummaryLine(const BoundCheck &c, const std::string &scope)
{
  std::string status = !c.applicable ? "SKIP" : (c.pass ? "PASS" : "FAIL");
  return status + " " + scope + c.name + " lhs=" + FormatDouble(c.lhs) +
         " rhs=" + FormatDouble(c.rhs) + " margin=" + FormatDouble(c.margin());
}

void Emit(ScenarioResult &res, const ScenarioOptions &opts, const std::string &line)
{
  res.summary.push_back(line);
  if (opts.log)
  {
    *opts.log << line << "\n";
  }
}

bool AllPass(const std::vector<BoundCheck> &checks)
{
  for (const auto &c : checks)
  {
    if (c.applicable && !c.pass)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

ExperimentConfig ApplyOptions(ExperimentConfig cfg, const ScenarioOptions &opts)
{
  if (opts.out_dir)
  {
    cfg.output.dir = *opts.out_dir;
  }
  if (opts.seed)
  {
    cfg.seed = *opts.seed;
  }
  Require(opts.tol_scale > 0.0 && std::isfinite(opts.tol_scale), ErrorKind::InvalidArgument,
          "tolerance scale must be positive");
  cfg.solver.estimator_tol *= opts.tol_scale;
  cfg.solver.slack *= opts.tol_scale;
  cfg.solver.tol *= opts.tol_scale;
  return cfg;
}

CheckOptions MakeCheckOptions(const ExperimentConfig &cfg)
{
  CheckOptions o;
  o.slack = cfg.solver.slack;
  o.estimator.tol = cfg.solver.estimator_tol;
  o.estimator.max_iterations = cfg.solver.max_estimator_iterations;
  o.estimator.krylov_dim = cfg.solver.krylov_dim;
  o.estimator.seed = cfg.seed;
  return o;
}

CoefficientField BuildField(const CoefficientConfig &c, const MeshPtr &mesh, CoefficientRole role)
{
  if (c.regions.empty())
  {
    return ConstantField(mesh, c.value, role);
  }
  return PiecewiseField(
      mesh,
      [&c](const std::array<double, 2> &x)
      {
        CoefficientValue v = c.value;
        for (const auto &r : c.regions)
        {
          if (InBox(r.box, x))
          {
            v = r.value;
          }
        }
        return v;
      },
      role);
}

namespace
{

std::pair<CoefficientField, CoefficientField> BuildFields(const ProblemConfig &p,
                                                          const CoefficientConfig &mu,
                                                          const CoefficientConfig &eps,
                                                          const MeshPtr &mesh, double k)
{
  CoefficientField m = BuildField(mu, mesh, CoefficientRole::MuInv);
  CoefficientField e = BuildField(eps, mesh, CoefficientRole::Eps);
  if (!p.pml)
  {
    return {m, e};
  }
  const auto [pm, pe] = PmlProfile1d(mesh, k, p.pml->start, p.pml->sigma0);
  std::vector<CoefficientValue> mv, ev;
  for (std::size_t i = 0; i < m.size(); i++)
  {
    mv.emplace_back(m[i].scalar() * pm[i].scalar());
    ev.emplace_back(e[i].scalar() * pe[i].scalar());
  }
  return {CoefficientField(mesh, CoefficientRole::MuInv, mv),
          CoefficientField(mesh, CoefficientRole::Eps, ev)};
}

}  // namespace

ProblemSpec BuildProblem(const ProblemConfig &p, double k, std::optional<double> h)
{
  MeshPtr mesh;
  if (p.dimension == 1)
  {
    const int n = h ? CellCount(p.domain[1] - p.domain[0], *h) : p.elements;
    mesh = BuildIntervalMesh(p.domain[0], p.domain[1], n, p.left, p.right);
  }
  else
  {
    const int nx = h ? CellCount(p.domain[0], *h) : p.nx;
    const int ny = h ? CellCount(p.domain[1], *h) : p.ny;
    mesh = BuildRectMesh(p.domain[0], p.domain[1], nx, ny, {p.left, p.right, p.bottom, p.top});
  }
  auto [mu, eps] = BuildFields(p, p.mu_inv, p.eps, mesh, k);
  return ProblemSpec(k, mesh, mu, eps, p.theta);
}

GalerkinSystem BuildPartner(const ExperimentConfig &cfg, const GalerkinSystem &sys1,
                            std::optional<double> alpha)
{
  if (cfg.perturbation.mode == PerturbationMode::Absorption)
  {
    return AbsorptionPartner(sys1, AbsorptionSpec(alpha.value_or(cfg.perturbation.alpha)));
  }
  const ProblemSpec &spec = *sys1.spec;
  auto [mu, eps] =
      BuildFields(cfg.problem, cfg.perturbation.mu_inv, cfg.perturbation.eps, spec.mesh, spec.k);
  return AssembleSystem(spec.with_coefficients(mu, eps));
}

PairMetadata PairMeta(const ExperimentConfig &cfg, const GalerkinSystem &sys1,
                      const GalerkinSystem &sys2, std::optional<double> alpha)
{
  PairMetadata m;
  m.k = sys1.spec->k;
  m.h = sys1.spec->mesh->h();
  if (cfg.perturbation.mode == PerturbationMode::Absorption)
  {
    m.alpha = alpha.value_or(cfg.perturbation.alpha);
    m.delta_mu = 0.0;
    m.delta_eps = m.alpha * sys1.spec->eps.sup_norm();
    m.mu_equal = true;
  }
  else
  {
    m.delta_mu = FieldDiffSupNorm(sys1.spec->mu_inv, sys2.spec->mu_inv);
    m.delta_eps = FieldDiffSupNorm(sys1.spec->eps, sys2.spec->eps);
    m.mu_equal = m.delta_mu == 0.0;
  }
  return m;
}

BoundReport PairReport(const GalerkinSystem &sys1, const GalerkinSystem &sys2,
                       const PairMetadata &meta, const CheckOptions &opts)
{
  BoundReport r = BoundReportFromMatrices(sys1.A, sys2.A, ToComplex(sys1.D), ToComplex(sys1.M),
                                          meta.delta_mu, meta.delta_eps, meta.mu_equal, opts);
  r.k = meta.k;
  r.h = meta.h;
  r.alpha = meta.alpha;
  return r;
}

PairTraces RunPairTraces(const GalerkinSystem &sys1, const GalerkinSystem &sys2, double c,
                         const SolverConfig &solver, std::uint64_t seed)
{
  PairTraces out;
  const LuFactor lu2(sys2.A);
  if (!lu2.ok())
  {
    return out;
  }
  const GramFactor G(sys1.D);
  const ComplexVector b = SeededVector(sys1.n(), seed);
  const std::optional<double> contraction =
      std::isfinite(c) ? std::optional<double>(c) : std::nullopt;
  out.fixed_point = FixedPoint(sys1.A, sys2.A, G, b, ComplexVector::Zero(sys1.n()),
                               solver.max_iterations, solver.tol, contraction);
  const auto op = [&](const ComplexVector &v) -> ComplexVector { return lu2.solve(sys1.A * v); };
  out.gmres = Gmres(op, lu2.solve(b), &G, solver.max_iterations, solver.tol, contraction);
  return out;
}

std::vector<BoundCheck> TraceChecks(const IterationTrace &t, double c)
{
  std::vector<BoundCheck> checks;
  const bool applicable = std::isfinite(c) && c < 1.0 && !t.norms.empty();
  // Largest excess of the relative norm over its envelope; the check is excess <= 0.
  double worst = -std::numeric_limits<double>::infinity();
  if (applicable)
  {
    const double r0 = t.norms.front();
    for (std::size_t n = 0; n < t.norms.size(); n++)
    {
      const double rel = r0 > 0.0 ? t.norms[n] / r0 : 0.0;
      const double env = std::pow(c, static_cast<double>(n)) * (1 + kEnvelopeSlack);
      worst = std::max(worst, rel - std::max(env, kRoundingFloor));
    }
  }
  BoundCheck env{t.kind + "_envelope", applicable, applicable ? worst : 0.0, 0.0,
                 !applicable || worst <= 0.0};
  checks.push_back(env);
  if (t.kind == "gmres")
  {
    double rise = 0.0;
    for (std::size_t n = 1; n < t.norms.size(); n++)
    {
      rise = std::max(rise, (t.norms[n] - t.norms[n - 1]) / std::max(t.norms.front(), 1e-300));
    }
    checks.push_back({"gmres_monotone", !t.norms.empty(), rise, kRoundingFloor,
                      rise <= kRoundingFloor});
  }
  return checks;
}

ScenarioResult CmdVerify(const ExperimentConfig &cfg_in, const ScenarioOptions &opts)
{
  const ExperimentConfig cfg = ApplyOptions(cfg_in, opts);
  const CheckOptions copts = MakeCheckOptions(cfg);
  ScenarioResult res;

  const GalerkinSystem sys1 = AssembleSystem(BuildProblem(cfg.problem, cfg.problem.k));
  const GalerkinSystem sys2 = BuildPartner(cfg, sys1);
  const PairMetadata meta = PairMeta(cfg, sys1, sys2);

  const GardingConstants g{cfg.garding.c_g1, cfg.garding.c_g2};
  const GardingReport garding = GardingCheck(sys1, g, cfg.garding.samples, cfg.seed, copts.slack);
  const NormEquivalenceReport equiv = NormEquivalence(sys1, g, copts);
  const BoundReport report = PairReport(sys1, sys2, meta, copts);

  PairTraces traces;
  std::vector<BoundCheck> trace_checks;
  if (!report.singular2)
  {
    traces = RunPairTraces(sys1, sys2, report.contraction(), cfg.solver, cfg.seed);
    for (const auto *t : {&traces.fixed_point, &traces.gmres})
    {
      if (*t)
      {
        for (auto &c : TraceChecks(**t, report.contraction()))
        {
          trace_checks.push_back(c);
        }
      }
    }
  }

  const std::string &dir = cfg.output.dir;
  Json j;
  j["config"] = ConfigToJson(cfg);
  j["garding"] = ToJson(garding);
  j["norm_equivalence"] = ToJson(equiv);
  j["bound"] = ToJson(report);
  Json tj = Json::object();
  if (traces.fixed_point)
  {
    tj["fixed_point"] = ToJson(*traces.fixed_point);
  }
  if (traces.gmres)
  {
    tj["gmres"] = ToJson(*traces.gmres);
  }
  j["traces"] = tj;
  Json tc = Json::array();
  for (const auto &c : trace_checks)
  {
    tc.push_back(ToJson(c));
  }
  j["trace_checks"] = tc;
  const bool pass = garding.pass() && equiv.pass() && report.pass() && AllPass(trace_checks);
  j["pass"] = pass;

  const std::string json_path = Path(dir, "report.json");
  const std::string csv_path = Path(dir, "report.csv");
  WriteTextFile(json_path, j.dump(2) + "\n");
  WriteTextFile(csv_path, BoundReportCsv(report));
  res.files = {json_path, csv_path};
  if (traces.fixed_point)
  {
    res.files.push_back(Path(dir, "trace_fixed_point.csv"));
    WriteTextFile(res.files.back(), TraceCsv(*traces.fixed_point));
  }
  if (traces.gmres)
  {
    res.files.push_back(Path(dir, "trace_gmres.csv"));
    WriteTextFile(res.files.back(), TraceCsv(*traces.gmres));
  }

  Emit(res, opts,
       std::string(garding.pass() ? "PASS" : "FAIL") + " garding samples=" +
           std::to_string(garding.samples) + " violations=" + std::to_string(garding.violations) +
           " min_margin=" + FormatDouble(garding.min_relative_margin) +
           (garding.identity_checked
                ? " identity_error=" + FormatDouble(garding.identity_max_rel_error)
                : ""));
  for (const auto &c : equiv.checks)
  {
    Emit(res, opts, SummaryLine(c, "norm_equivalence."));
  }
  if (report.singular2)
  {
    Emit(res, opts, "NOTE preconditioner matrix is singular; bound checks skipped");
  }
  for (const auto &c : report.checks)
  {
    Emit(res, opts, SummaryLine(c, "bound."));
  }
  for (const auto &c : trace_checks)
  {
    Emit(res, opts, SummaryLine(c, "trace."));
  }
  for (const auto &f : res.files)
  {
    Emit(res, opts, "wrote " + f);
  }
  Emit(res, opts, pass ? "RESULT PASS" : "RESULT FAIL");
  res.exit_status = pass ? 0 : 1;
  return res;
}

namespace
{

struct SweepPoint
{
  double k;
  double alpha;
  HRule h;
};

std::vector<std::string> SweepColumns()
{
  std::vector<std::string> cols = {"h_scale", "h_power"};
  for (const auto &c : BoundCsvColumns())
  {
    cols.push_back(c);
  }
  for (const char *c : {"fp_iterations", "gmres_iterations", "envelope_pass", "row_pass", "error"})
  {
    cols.push_back(c);
  }
  return cols;
}

struct SweepRow
{
  std::vector<std::string> fields;
  bool pass = false;
};

SweepRow EvaluatePoint(const ExperimentConfig &cfg, const CheckOptions &copts, const SweepPoint &pt)
{
  SweepRow row;
  const bool absorption = cfg.perturbation.mode == PerturbationMode::Absorption;
  const std::optional<double> alpha = absorption ? std::optional<double>(pt.alpha) : std::nullopt;
  try
  {
    const GalerkinSystem sys1 = AssembleSystem(BuildProblem(cfg.problem, pt.k, pt.h(pt.k)));
    const GalerkinSystem sys2 = BuildPartner(cfg, sys1, alpha);
    const BoundReport r = PairReport(sys1, sys2, PairMeta(cfg, sys1, sys2, alpha), copts);
    int fp_it = -1, gm_it = -1;
    bool env_pass = true;
    if (!r.singular2)
    {
      const PairTraces t = RunPairTraces(sys1, sys2, r.contraction(), cfg.solver, cfg.seed);
      if (t.fixed_point)
      {
        fp_it = t.fixed_point->converged ? t.fixed_point->iterations() : -1;
        env_pass = env_pass && AllPass(TraceChecks(*t.fixed_point, r.contraction()));
      }
      if (t.gmres)
      {
        gm_it = t.gmres->converged ? t.gmres->iterations() : -1;
        env_pass = env_pass && AllPass(TraceChecks(*t.gmres, r.contraction()));
      }
    }
    row.pass = r.pass() && env_pass;
    row.fields = {FormatDouble(pt.h.scale), FormatDouble(pt.h.power)};
    for (auto &v : BoundCsvValues(r))
    {
      row.fields.push_back(v);
    }
    for (const auto &v : {std::to_string(fp_it), std::to_string(gm_it),
                          std::string(env_pass ? "1" : "0"), std::string(row.pass ? "1" : "0"),
                          std::string()})
    {
      row.fields.push_back(v);
    }
  }
  catch (const std::exception &e)
  {
    row.pass = false;
    BoundReport empty;
    empty.k = pt.k;
    empty.alpha = absorption ? pt.alpha : std::numeric_limits<double>::quiet_NaN();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    empty.c_dis1 = empty.c_dis2 = empty.mass_ratio = nan;
    empty.lhs_D = empty.lhs_Dinv = empty.lhs_2 = empty.lhs_2p = nan;
    empty.rhs_nearby = empty.cond = empty.rhs_asymptotic = nan;
    row.fields = {FormatDouble(pt.h.scale), FormatDouble(pt.h.power)};
    auto values = BoundCsvValues(empty);
    values.back() = "0";
    for (auto &v : values)
    {
      row.fields.push_back(v);
    }
    for (const auto &v : {std::string("-1"), std::string("-1"), std::string("0"),
                          std::string("0"), std::string(e.what())})
    {
      row.fields.push_back(v);
    }
  }
  return row;
}

}  // namespace

ScenarioResult CmdSweep(const ExperimentConfig &cfg_in, const ScenarioOptions &opts)
{
  const ExperimentConfig cfg = ApplyOptions(cfg_in, opts);
  Require(cfg.sweep.has_value(), ErrorKind::Config, "config has no 'sweep' block");
  const SweepConfig &sw = *cfg.sweep;
  const CheckOptions copts = MakeCheckOptions(cfg);
  ScenarioResult res;

  std::vector<SweepPoint> points;
  const bool absorption = cfg.perturbation.mode == PerturbationMode::Absorption;
  const std::vector<double> alphas =
      absorption ? sw.alpha : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
  for (double k : sw.k)
  {
    for (double a : alphas)
    {
      for (const auto &h : sw.h)
      {
        points.push_back({k, a, h});
      }
    }
  }

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]()
  {
    for (std::size_t i = next++; i < points.size(); i = next++)
    {
      rows[i] = EvaluatePoint(cfg, copts, points[i]);
    }
  };
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(points.size())));
  if (nthreads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; t++)
    {
      pool.emplace_back(worker);
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }

  std::string csv = CsvLine(SweepColumns());
  int failed = 0;
  for (const auto &r : rows)
  {
    csv += CsvLine(r.fields);
    failed += r.pass ? 0 : 1;
  }

  InfSupLadder ladder;
  if (sw.ladder)
  {
    const LadderConfig lc = *sw.ladder;
    ladder = RunInfSupLadder([&](double k, double h) { return BuildProblem(cfg.problem, k, h); },
                             lc.k, [lc](double k) { return lc.h(k); },
                             [lc](double k) { return lc.h(k) / lc.refine; }, copts.estimator);
  }

  const std::string &dir = cfg.output.dir;
  res.files = {Path(dir, "sweep.csv"), Path(dir, "ladder.csv"), Path(dir, "config.json")};
  WriteTextFile(res.files[0], csv);
  WriteTextFile(res.files[1], LadderCsv(ladder));
  WriteTextFile(res.files[2], DumpConfig(cfg));

  Emit(res, opts,
       std::string(failed ? "FAIL" : "PASS") + " sweep points=" + std::to_string(rows.size()) +
           " failed=" + std::to_string(failed));
  for (const auto &e : ladder.entries)
  {
    Emit(res, opts,
         "INFO ladder k=" + FormatDouble(e.k) + " n=" + std::to_string(e.n) +
             " n_ref=" + std::to_string(e.n_ref) + " ratio=" + FormatDouble(e.ratio));
  }
  for (const auto &f : res.files)
  {
    Emit(res, opts, "wrote " + f);
  }
  Emit(res, opts, failed ? "RESULT FAIL" : "RESULT PASS");
  res.exit_status = failed ? 1 : 0;
  return res;
}

ScenarioResult CmdExport(const ExperimentConfig &cfg_in, const ScenarioOptions &opts)
{
  const ExperimentConfig cfg = ApplyOptions(cfg_in, opts);
  ScenarioResult res;
  const GalerkinSystem sys1 = AssembleSystem(BuildProblem(cfg.problem, cfg.problem.k));
  const GalerkinSystem sys2 = BuildPartner(cfg, sys1);
  ExternalSystem ext;
  ext.A1 = sys1.A;
  ext.A2 = sys2.A;
  ext.D = ToComplex(sys1.D);
  ext.M = ToComplex(sys1.M);
  const PairMetadata meta = PairMeta(cfg, sys1, sys2);
  WriteMatrixExchange(cfg.output.dir, ext, meta);
  for (const char *f : {"A1.mtx", "A2.mtx", "D.mtx", "M.mtx", "pair.json"})
  {
    res.files.push_back(Path(cfg.output.dir, f));
    Emit(res, opts, "wrote " + res.files.back());
  }
  return res;
}

ScenarioResult CmdImport(const std::string &matrix_dir, const std::string &d_path,
                         const std::string &m_path, const ScenarioOptions &opts)
{
  ScenarioResult res;
  PairMetadata meta;
  const ExternalSystem ext = ReadMatrixExchange(matrix_dir, d_path, m_path, &meta);
  CheckOptions copts;
  copts.slack *= opts.tol_scale;
  copts.estimator.tol *= opts.tol_scale;
  if (opts.seed)
  {
    copts.estimator.seed = *opts.seed;
  }
  else
  {
    copts.estimator.seed = ExperimentConfig{}.seed;
  }
  BoundReport r = NearbyBoundReport(ext, copts);
  r.k = meta.k;
  r.h = meta.h;
  r.alpha = meta.alpha;

  const std::string dir = opts.out_dir.value_or(matrix_dir);
  res.files = {Path(dir, "report.json"), Path(dir, "report.csv")};
  WriteTextFile(res.files[0], ToJson(r).dump(2) + "\n");
  WriteTextFile(res.files[1], BoundReportCsv(r));
  if (r.singular2)
  {
    Emit(res, opts, "NOTE preconditioner matrix is singular; bound checks skipped");
  }
  for (const auto &c : r.checks)
  {
    Emit(res, opts, SummaryLine(c, "bound."));
  }
  for (const auto &f : res.files)
  {
    Emit(res, opts, "wrote " + f);
  }
  Emit(res, opts, r.pass() ? "RESULT PASS" : "RESULT FAIL");
  res.exit_status = r.pass() ? 0 : 1;
  return res;
}

}  // namespace helmpc
