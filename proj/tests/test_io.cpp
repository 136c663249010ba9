// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <sstream>
#include <doctest.h>
#include "helmpc/error.hpp"
#include "helmpc/io.hpp"
#include "helmpc/scenario.hpp"

using namespace helmpc;

namespace
{

const char *kMinimal = R"({
  "schema_version": 1,
  "problem": {"dimension": 1, "k": 10},
  "perturbation": {"mode": "absorption", "alpha": 0.1}
})";

std::string TempDir(const std::string &name)
{
  auto p = std::filesystem::temp_directory_path() / ("helmpc_test_io_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

template <typename F>
std::string ErrorOf(F &&f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.what();
  }
  return "";
}

long ParseLineOf(const std::string &text)
{
  std::istringstream in(text);
  try
  {
    ParseMatrixMarket(in, "mem");
  }
  catch (const ParseError &e)
  {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config defaults")
{
  const auto cfg = ReadConfig(kMinimal);
  CHECK(cfg.schema_version == 1);
  CHECK(cfg.problem.dimension == 1);
  CHECK(cfg.problem.k == 10.0);
  CHECK(cfg.problem.elements == 100);
  CHECK(cfg.problem.domain == std::array<double, 2>{0.0, 1.0});
  CHECK(cfg.problem.left == BoundaryTag::Impedance);
  CHECK(cfg.problem.theta == 1.0);
  CHECK(cfg.problem.mu_inv.value == CoefficientValue(1.0));
  CHECK(cfg.perturbation.mode == PerturbationMode::Absorption);
  CHECK(cfg.perturbation.alpha == 0.1);
  CHECK(cfg.garding.c_g1 == 1.0);
  CHECK(cfg.garding.c_g2 == 2.0);
  CHECK(cfg.garding.samples == 1000);
  CHECK_FALSE(cfg.sweep.has_value());
  CHECK(cfg.solver.estimator_tol == 1e-10);
  CHECK(cfg.solver.slack == 1e-9);
  CHECK(cfg.output.dir == "out");
  CHECK(cfg.seed == 1);
}

TEST_CASE("config errors")
{
  std::string text = kMinimal;
  text.replace(text.find("\"alpha\""), 7, "\"alpa\"");
  const std::string e1 = ErrorOf([&] { ReadConfig(text); });
  CHECK(e1.find("alpha") != std::string::npos);  // missing mandatory key

  const std::string extra = R"({
    "schema_version": 1,
    "problem": {"dimension": 1, "k": 10, "wavenumber": 3},
    "perturbation": {"mode": "absorption", "alpha": 0.1, "alpa": 0.2}
  })";
  const std::string e2 = ErrorOf([&] { ReadConfig(extra); });
  CHECK(e2.find("unknown keys") != std::string::npos);
  CHECK(e2.find("perturbation.alpa") != std::string::npos);
  CHECK(e2.find("problem.wavenumber") != std::string::npos);

  CHECK(ErrorOf([] { ReadConfig(R"({"schema_version": 1, "perturbation": {"mode": "nearby"}})"); })
            .find("'problem'") != std::string::npos);
  CHECK(ErrorOf([] { ReadConfig(R"({"schema_version": 2, "problem": {}})"); })
            .find("schema_version") != std::string::npos);
  CHECK(ErrorOf([] {
          ReadConfig(R"({"schema_version": 1, "problem": {"dimension": 1, "k": 1},
                         "perturbation": {"mode": "shift"}})");
        }).find("shift") != std::string::npos);
  CHECK(ErrorOf([] {
          ReadConfig(R"({"schema_version": 1, "problem": {"dimension": 1, "k": 1},
                         "perturbation": {"mode": "absorption", "alpha": 0.1},
                         "sweep": {"k": [], "alpha": [0.1]}})");
        }).find("sweep.k") != std::string::npos);

  try
  {
    ReadConfig("{\n  \"schema_version\": 1,\n  oops\n}");
    FAIL("expected parse error");
  }
  catch (const ParseError &e)
  {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("config round trip")
{
  const std::string full = R"({
    "schema_version": 1,
    "problem": {
      "dimension": 2, "domain": [1, 0.5], "nx": 8, "ny": 4,
      "boundary": {"left": "dirichlet", "right": "impedance", "bottom": "neumann", "top": "impedance"},
      "k": 5, "theta": 2,
      "mu_inv": {"value": {"matrix": [[2, 0.5], [0.5, 1]]},
                 "regions": [{"box": [0, 0.5, 0, 0.5], "value": 3}]},
      "eps": {"value": [1, 0.25]}
    },
    "perturbation": {"mode": "nearby", "eps": 1.1},
    "garding": {"c_g1": 0.5, "c_g2": 3, "samples": 10},
    "sweep": {"k": [5, 10], "h": [{"scale": 0.5, "power": 1}],
              "ladder": {"k": [5], "refine": 2}},
    "solver": {"slack": 1e-8, "max_iterations": 50},
    "output": {"dir": "results"},
    "seed": 42
  })";
  const auto cfg = ReadConfig(full);
  CHECK(cfg.problem.nx == 8);
  CHECK(cfg.problem.left == BoundaryTag::Dirichlet);
  CHECK_FALSE(cfg.problem.mu_inv.value.is_scalar());
  CHECK(cfg.problem.eps.value.scalar() == cplx(1.0, 0.25));
  CHECK(cfg.perturbation.mu_inv == cfg.problem.mu_inv);
  CHECK(cfg.perturbation.eps.value == CoefficientValue(1.1));
  CHECK(cfg.sweep->alpha.empty());
  CHECK(cfg.sweep->ladder->refine == 2.0);

  const std::string dump = DumpConfig(cfg);
  const auto again = ReadConfig(dump);
  CHECK(again == cfg);
  CHECK(DumpConfig(again) == dump);

  const auto minimal = ReadConfig(kMinimal);
  CHECK(ReadConfig(DumpConfig(minimal)) == minimal);
}

TEST_CASE("problem construction from config")
{
  const auto cfg = ReadConfig(kMinimal);
  const auto spec = BuildProblem(cfg.problem, 10.0);
  CHECK(spec.mesh->num_elements() == 100);
  CHECK(spec.is_canonical());
  const auto coarse = BuildProblem(cfg.problem, 10.0, 0.25);
  CHECK(coarse.mesh->num_elements() == 4);

  const auto pml = ReadConfig(R"({"schema_version": 1,
    "problem": {"dimension": 1, "k": 4, "elements": 10, "pml": {"start": 0.8, "sigma0": 4},
                "boundary": {"right": "dirichlet"}},
    "perturbation": {"mode": "absorption", "alpha": 0.1}})");
  const auto ps = BuildProblem(pml.problem, 4.0);
  CHECK(ps.mu_inv[0].scalar() == cplx(1.0));
  CHECK(ps.eps[9].scalar().imag() > 0.0);
  CHECK(ps.mu_inv[9].scalar().imag() < 0.0);
}

TEST_CASE("matrix market round trip")
{
  const std::string dir = TempDir("mm");
  ComplexSparse A(3, 3);
  A.insert(0, 0) = cplx(1.0 / 3.0, -2.0 / 7.0);
  A.insert(2, 1) = cplx(1e-300, 3e300);
  A.insert(1, 2) = cplx(-0.1, 0.0);
  A.makeCompressed();
  WriteMatrixMarket(dir + "/A.mtx", A, false);
  const ComplexSparse B = ReadMatrixMarket(dir + "/A.mtx");
  CHECK(B.rows() == 3);
  CHECK(MaxAbs(ComplexSparse(A - B)) == 0.0);

  ComplexSparse H(2, 2);
  H.insert(0, 0) = 2.0;
  H.insert(1, 0) = cplx(0.5, 0.25);
  H.insert(0, 1) = cplx(0.5, -0.25);
  H.insert(1, 1) = 3.0;
  WriteMatrixMarket(dir + "/H.mtx", H, true);
  const ComplexSparse H2 = ReadMatrixMarket(dir + "/H.mtx");
  CHECK(MaxAbs(ComplexSparse(H - H2)) == 0.0);
  CHECK(ReadTextFile(dir + "/H.mtx").find("hermitian") != std::string::npos);
}

TEST_CASE("matrix market parse errors")
{
  const std::string head = "%%MatrixMarket matrix coordinate complex general\n% c\n2 2 2\n";
  CHECK(ParseLineOf(head + "1 1 1 0\n3 1 1 0\n") == 5);
  CHECK(ParseLineOf(head + "0 1 1 0\n1 1 1 0\n") == 4);
  CHECK(ParseLineOf(head + "1 1 1\n") == 4);
  CHECK(ParseLineOf(head + "1 1 1 0\n") == 5);
  CHECK(ParseLineOf(head + "1 1 1 0\n2 2 1 0\n1 2 1 0\n") == 6);
  CHECK(ParseLineOf("%%MatrixMarket matrix array complex general\n") == 1);
  CHECK(ParseLineOf("hello\n") == 1);
  CHECK(ParseLineOf("%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 2 1 0\n") == 3);
  CHECK(ParseLineOf("%%MatrixMarket matrix coordinate complex general\n2 x 1\n") == 2);
  CHECK(ErrorOf([] { ReadMatrixMarket("/nonexistent/A.mtx"); }).find("/nonexistent/A.mtx") !=
        std::string::npos);
}

TEST_CASE("matrix exchange")
{
  const std::string dir = TempDir("exchange");
  auto cfg = ReadConfig(kMinimal);
  cfg.problem.elements = 20;
  cfg.output.dir = dir;
  CmdExport(cfg, {});
  PairMetadata meta;
  const ExternalSystem ext = ReadMatrixExchange(dir, "", "", &meta);
  const auto sys = AssembleSystem(BuildProblem(cfg.problem, 10.0));
  CHECK(MaxAbs(ComplexSparse(ext.A1 - sys.A)) == 0.0);
  CHECK(MaxAbs(ComplexSparse(ext.D - ToComplex(sys.D))) == 0.0);
  CHECK(MaxAbs(ComplexSparse(ext.M - ToComplex(sys.M))) == 0.0);
  CHECK(meta.delta_eps == doctest::Approx(0.1));
  CHECK(meta.alpha == 0.1);
  CHECK(meta.k == 10.0);
  CHECK_NOTHROW(ValidateExternal(ext));

  std::filesystem::remove(dir + "/D.mtx");
  CHECK(ErrorOf([&] { ReadMatrixExchange(dir); }).find(dir + "/D.mtx") != std::string::npos);
}

TEST_CASE("report serialization")
{
  BoundReport r;
  r.n = 3;
  r.k = 10;
  r.h = 0.1;
  r.alpha = 0.2;
  r.lhs_D = 0.5;
  r.checks.push_back(MakeCheck("nearby_D", 0.5, 1.0, 1e-9));
  const std::string csv = BoundReportCsv(r);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("k,h,alpha,n,dmu,deps", 0) == 0);
  for (const char *col : {"cdis1", "cdis2", "lhs_D", "rhs_nearby", "pass"})
  {
    CHECK(header.find(col) != std::string::npos);
  }
  CHECK(csv.find("\n10,0.10000000000000001,0.20000000000000001,3,") != std::string::npos);
  CHECK(BoundReportCsv(r) == csv);

  const Json j = ToJson(r);
  CHECK(j["checks"][0]["name"] == "nearby_D");
  CHECK(j["rhs_nearby_euclid"].is_null());
  CHECK(j["pass"] == true);

  IterationTrace t;
  t.kind = "gmres";
  t.norms = {1.0, 0.5, 0.25};
  t.envelope_c = {1.0, 0.6, 0.36};
  t.envelope_elman = {1.0, 0.9, 0.81};
  const std::string tc = TraceCsv(t);
  CHECK(std::count(tc.begin(), tc.end(), '\n') == 4);
  CHECK(tc.rfind("iteration,norm,relative,envelope_c,envelope_elman\n", 0) == 0);
  CHECK(tc.find("\n2,0.25,0.25,0.35999999999999999,0.81000000000000005\n") != std::string::npos);

  const std::string empty = LadderCsv({});
  CHECK(empty == "k,h,h_ref,n,n_ref,cdis,cdis_ref,ratio,singular\n");

  CHECK(FormatDouble(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(CsvLine({"a,b", "c\"d"}) == "\"a,b\",\"c\"\"d\"\n");
  CHECK(ErrorOf([] { WriteTextFile("/proc/helmpc/forbidden.csv", "x"); }).find("io error") !=
        std::string::npos);
}
