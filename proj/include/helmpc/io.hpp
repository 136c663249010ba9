// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_IO_HPP
#define HELMPC_IO_HPP

#include <array>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <vector>
#include <json.hpp>
#include "helmpc/assemble.hpp"
#include "helmpc/bounds.hpp"
#include "helmpc/coeffs.hpp"
#include "helmpc/linalg.hpp"
#include "helmpc/mesh.hpp"
#include "helmpc/solvers.hpp"

namespace helmpc
{

using Json = nlohmann::ordered_json;

//
// Experiment configuration. A JSON document with the blocks below; see the README for
// the full key list and defaults.
//

struct RegionConfig
{
  // [x0, x1] in 1D, [x0, x1, y0, y1] in 2D; an element belongs to the region if its
  // centroid lies in the closed box.
  std::vector<double> box;
  CoefficientValue value;

  bool operator==(const RegionConfig &) const = default;
};

struct CoefficientConfig
{
  CoefficientValue value = 1.0;
  // Later regions override earlier ones.
  std::vector<RegionConfig> regions;

  bool operator==(const CoefficientConfig &) const = default;
};

struct PmlConfig
{
  double start = 0.0;
  double sigma0 = 0.0;

  bool operator==(const PmlConfig &) const = default;
};

struct ProblemConfig
{
  int dimension = 1;
  // [a, b] in 1D (default [0, 1]), [width, height] in 2D (default [1, 1]).
  std::array<double, 2> domain = {0.0, 1.0};
  int elements = 0;
  int nx = 0;
  int ny = 0;
  BoundaryTag left = BoundaryTag::Impedance;
  BoundaryTag right = BoundaryTag::Impedance;
  BoundaryTag bottom = BoundaryTag::Impedance;
  BoundaryTag top = BoundaryTag::Impedance;
  double k = 0.0;
  double theta = 1.0;
  CoefficientConfig mu_inv;
  CoefficientConfig eps;
  std::optional<PmlConfig> pml;

  bool operator==(const ProblemConfig &) const = default;
};

enum class PerturbationMode
{
  Absorption,
  Nearby
};

const char *ToString(PerturbationMode mode);

struct PerturbationConfig
{
  PerturbationMode mode = PerturbationMode::Absorption;
  double alpha = 0.0;
  // Second coefficient set for nearby mode; defaults to the problem's.
  CoefficientConfig mu_inv;
  CoefficientConfig eps;

  bool operator==(const PerturbationConfig &) const = default;
};

struct GardingConfig
{
  double c_g1 = 1.0;
  double c_g2 = 2.0;
  int samples = 1000;

  bool operator==(const GardingConfig &) const = default;
};

// h(k) = scale * k^{-power}.
struct HRule
{
  double scale = 1.0;
  double power = 1.5;

  double operator()(double k) const;
  bool operator==(const HRule &) const = default;
};

struct LadderConfig
{
  std::vector<double> k;
  HRule h;
  double refine = 4.0;

  bool operator==(const LadderConfig &) const = default;
};

struct SweepConfig
{
  std::vector<double> k;
  // Absorption mode only.
  std::vector<double> alpha;
  std::vector<HRule> h;
  std::optional<LadderConfig> ladder;

  bool operator==(const SweepConfig &) const = default;
};

struct SolverConfig
{
  double estimator_tol = 1e-10;
  long max_estimator_iterations = 50000;
  int krylov_dim = 120;
  double slack = 1e-9;
  int max_iterations = 500;
  double tol = 1e-10;

  bool operator==(const SolverConfig &) const = default;
};

struct OutputConfig
{
  std::string dir = "out";

  bool operator==(const OutputConfig &) const = default;
};

struct ExperimentConfig
{
  int schema_version = 1;
  ProblemConfig problem;
  PerturbationConfig perturbation;
  GardingConfig garding;
  std::optional<SweepConfig> sweep;
  SolverConfig solver;
  OutputConfig output;
  std::uint64_t seed = 1;

  bool operator==(const ExperimentConfig &) const = default;
};

inline constexpr int kSchemaVersion = 1;

// Throws Error(Config) naming unknown or missing keys, Error(Parse) for malformed JSON.
ExperimentConfig ReadConfig(const std::string &text, const std::string &source = "config");
ExperimentConfig ReadConfigFile(const std::string &path);

// Normalized form with every default spelled out.
Json ConfigToJson(const ExperimentConfig &cfg);
std::string DumpConfig(const ExperimentConfig &cfg);

//
// Matrix exchange in Matrix Market coordinate format (complex, general or hermitian,
// 1-based indices). Hermitian files store the lower triangle only.
//
void WriteMatrixMarket(const std::string &path, const ComplexSparse &A, bool hermitian);
ComplexSparse ParseMatrixMarket(std::istream &in, const std::string &source);
ComplexSparse ReadMatrixMarket(const std::string &path);

// Side data of an exported pair: coefficient-difference sizes and problem labels.
struct PairMetadata
{
  double delta_mu = 0.0;
  double delta_eps = 0.0;
  bool mu_equal = true;
  double k = std::numeric_limits<double>::quiet_NaN();
  double h = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
};

// Writes A1.mtx, A2.mtx, D.mtx, M.mtx and pair.json into dir (created if missing).
void WriteMatrixExchange(const std::string &dir, const ExternalSystem &sys,
                         const PairMetadata &meta);

// Reads A1.mtx, A2.mtx and pair.json from dir; D and M from the given paths (defaults
// dir/D.mtx and dir/M.mtx when empty).
ExternalSystem ReadMatrixExchange(const std::string &dir, const std::string &d_path = "",
                                  const std::string &m_path = "", PairMetadata *meta = nullptr);

//
// Report serialization. Field order is fixed; doubles are written with 17 significant
// digits, non-finite values as nan/inf in CSV and null in JSON.
//
std::string FormatDouble(double x);

Json ToJson(const BoundCheck &c);
Json ToJson(const BoundReport &r);
Json ToJson(const GardingReport &r);
Json ToJson(const NormEquivalenceReport &r);
Json ToJson(const IterationTrace &t);
Json ToJson(const InfSupLadder &l);

std::vector<std::string> BoundCsvColumns();
std::vector<std::string> BoundCsvValues(const BoundReport &r);
std::string CsvLine(const std::vector<std::string> &fields);
std::string BoundReportCsv(const BoundReport &r);
std::string TraceCsv(const IterationTrace &t);
std::string LadderCsv(const InfSupLadder &l);

// Whole-file write; throws Error(Io) on failure.
void WriteTextFile(const std::string &path, const std::string &content);
std::string ReadTextFile(const std::string &path);

}  // namespace helmpc

#endif  // HELMPC_IO_HPP
