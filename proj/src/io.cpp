// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include "helmpc/error.hpp"

namespace helmpc
{

namespace
{

//
// A JSON object being read; remembers which keys were consumed so that leftovers can be
// reported as unknown.
//
class Block
{
public:
  Block(const Json &j, std::string path, std::vector<std::string> &unknown)
    : j_(j), path_(std::move(path)), unknown_(unknown)
  {
    if (!j_.is_object())
    {
      throw Error(ErrorKind::Config, "'" + path_ + "' must be an object");
    }
  }

  bool has(const std::string &key) const { return j_.contains(key); }

  const Json &at(const std::string &key)
  {
    if (!j_.contains(key))
    {
      throw Error(ErrorKind::Config, "missing mandatory key '" + name(key) + "'");
    }
    used_.insert(key);
    return j_.at(key);
  }

  std::string name(const std::string &key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string &key)
  {
    const Json &v = at(key);
    if (!v.is_number())
    {
      throw Error(ErrorKind::Config, "'" + name(key) + "' must be a number");
    }
    return v.get<double>();
  }

  double number(const std::string &key, double def) { return has(key) ? number(key) : def; }

  long integer(const std::string &key)
  {
    const Json &v = at(key);
    if (!v.is_number_integer())
    {
      throw Error(ErrorKind::Config, "'" + name(key) + "' must be an integer");
    }
    return v.get<long>();
  }

  long integer(const std::string &key, long def) { return has(key) ? integer(key) : def; }

  std::string string(const std::string &key)
  {
    const Json &v = at(key);
    if (!v.is_string())
    {
      throw Error(ErrorKind::Config, "'" + name(key) + "' must be a string");
    }
    return v.get<std::string>();
  }

  std::string string(const std::string &key, const std::string &def)
  {
    return has(key) ? string(key) : def;
  }

  std::vector<double> numbers(const std::string &key)
  {
    const Json &v = at(key);
    if (!v.is_array())
    {
      throw Error(ErrorKind::Config, "'" + name(key) + "' must be a list of numbers");
    }
    std::vector<double> out;
    for (const auto &x : v)
    {
      if (!x.is_number())
      {
        throw Error(ErrorKind::Config, "'" + name(key) + "' must be a list of numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  Block child(const std::string &key) { return Block(at(key), name(key), unknown_); }

  // Records keys never consumed.
  void finish() const
  {
    for (const auto &item : j_.items())
    {
      if (!used_.count(item.key()))
      {
        unknown_.push_back(name(item.key()));
      }
    }
  }

private:
  const Json &j_;
  std::string path_;
  std::vector<std::string> &unknown_;
  std::set<std::string> used_;
};

cplx ParseComplex(const Json &v, const std::string &where)
{
  if (v.is_number())
  {
    return v.get<double>();
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
  {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorKind::Config, "'" + where + "' must be a number or [re, im]");
}

Json ComplexToJson(cplx c)
{
  if (c.imag() == 0.0)
  {
    return c.real();
  }
  return Json::array({c.real(), c.imag()});
}

CoefficientValue ParseValue(const Json &v, const std::string &where,
                            std::vector<std::string> &unknown)
{
  if (v.is_object())
  {
    Block b(v, where, unknown);
    const Json &m = b.at("matrix");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() ||
        m[0].size() != 2 || m[1].size() != 2)
    {
      throw Error(ErrorKind::Config, "'" + where + ".matrix' must be a 2x2 list");
    }
    Eigen::Matrix2cd M;
    for (int i = 0; i < 2; i++)
    {
      for (int j = 0; j < 2; j++)
      {
        M(i, j) = ParseComplex(m[i][j], where + ".matrix");
      }
    }
    b.finish();
    return CoefficientValue(M);
  }
  return ParseComplex(v, where);
}

Json ValueToJson(const CoefficientValue &v)
{
  if (v.is_scalar())
  {
    return ComplexToJson(v.scalar());
  }
  Json m = Json::array();
  for (int i = 0; i < 2; i++)
  {
    m.push_back(Json::array({ComplexToJson(v.matrix()(i, 0)), ComplexToJson(v.matrix()(i, 1))}));
  }
  return Json{{"matrix", m}};
}

CoefficientConfig ParseCoefficient(const Json &v, const std::string &where, int dim,
                                   std::vector<std::string> &unknown)
{
  CoefficientConfig c;
  if (!v.is_object() || v.contains("matrix"))
  {
    c.value = ParseValue(v, where, unknown);
    return c;
  }
  Block b(v, where, unknown);
  if (b.has("value"))
  {
    c.value = ParseValue(b.at("value"), b.name("value"), unknown);
  }
  if (b.has("regions"))
  {
    const Json &regions = b.at("regions");
    if (!regions.is_array())
    {
      throw Error(ErrorKind::Config, "'" + b.name("regions") + "' must be a list");
    }
    for (std::size_t i = 0; i < regions.size(); i++)
    {
      Block r(regions[i], b.name("regions") + "[" + std::to_string(i) + "]", unknown);
      RegionConfig rc;
      rc.box = r.numbers("box");
      if (rc.box.size() != static_cast<std::size_t>(2 * dim))
      {
        throw Error(ErrorKind::Config, "'" + r.name("box") + "' needs " +
                                           std::to_string(2 * dim) + " numbers");
      }
      rc.value = ParseValue(r.at("value"), r.name("value"), unknown);
      r.finish();
      c.regions.push_back(rc);
    }
  }
  b.finish();
  return c;
}

Json CoefficientToJson(const CoefficientConfig &c)
{
  Json j;
  j["value"] = ValueToJson(c.value);
  Json regions = Json::array();
  for (const auto &r : c.regions)
  {
    regions.push_back(Json{{"box", r.box}, {"value", ValueToJson(r.value)}});
  }
  j["regions"] = regions;
  return j;
}

BoundaryTag ParseTag(Block &b, const std::string &key, BoundaryTag def)
{
  if (!b.has(key))
  {
    return def;
  }
  const std::string s = b.string(key);
  try
  {
    return BoundaryTagFromString(s);
  }
  catch (const Error &)
  {
    throw Error(ErrorKind::Config, "'" + b.name(key) + "' has unknown boundary tag '" + s + "'");
  }
}

HRule ParseHRule(const Json &v, const std::string &where, std::vector<std::string> &unknown)
{
  Block b(v, where, unknown);
  HRule r;
  r.scale = b.number("scale", r.scale);
  r.power = b.number("power", r.power);
  b.finish();
  if (!(r.scale > 0.0) || !std::isfinite(r.power))
  {
    throw Error(ErrorKind::Config, "'" + where + "' needs scale > 0 and a finite power");
  }
  return r;
}

Json HRuleToJson(const HRule &r)
{
  return Json{{"scale", r.scale}, {"power", r.power}};
}

void RequirePositive(const std::vector<double> &v, const std::string &where, bool allow_zero)
{
  if (v.empty())
  {
    throw Error(ErrorKind::Config, "'" + where + "' must not be empty");
  }
  for (double x : v)
  {
    if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0))
    {
      throw Error(ErrorKind::Config, "'" + where + "' has invalid entry " + FormatDouble(x));
    }
  }
}

void ConfigRequire(bool cond, const std::string &what)
{
  if (!cond)
  {
    throw Error(ErrorKind::Config, what);
  }
}

ExperimentConfig ParseConfig(const Json &root)
{
  std::vector<std::string> unknown;
  ExperimentConfig cfg;
  Block top(root, "", unknown);

  cfg.schema_version = static_cast<int>(top.integer("schema_version"));
  ConfigRequire(cfg.schema_version == kSchemaVersion,
                "unsupported schema_version " + std::to_string(cfg.schema_version));

  {
    Block p = top.child("problem");
    ProblemConfig &pc = cfg.problem;
    pc.dimension = static_cast<int>(p.integer("dimension"));
    ConfigRequire(pc.dimension == 1 || pc.dimension == 2, "'problem.dimension' must be 1 or 2");
    pc.k = p.number("k");
    ConfigRequire(pc.k > 0.0 && std::isfinite(pc.k), "'problem.k' must be positive");
    if (pc.dimension == 2)
    {
      pc.domain = {1.0, 1.0};
    }
    if (p.has("domain"))
    {
      const auto d = p.numbers("domain");
      ConfigRequire(d.size() == 2, "'problem.domain' needs two numbers");
      pc.domain = {d[0], d[1]};
    }
    if (pc.dimension == 1)
    {
      ConfigRequire(pc.domain[0] < pc.domain[1], "'problem.domain' must satisfy a < b");
      pc.elements = static_cast<int>(p.integer("elements", 100));
      ConfigRequire(pc.elements >= 1, "'problem.elements' must be at least 1");
    }
    else
    {
      ConfigRequire(pc.domain[0] > 0.0 && pc.domain[1] > 0.0,
                    "'problem.domain' width and height must be positive");
      pc.nx = static_cast<int>(p.integer("nx", 20));
      pc.ny = static_cast<int>(p.integer("ny", pc.nx));
      ConfigRequire(pc.nx >= 1 && pc.ny >= 1, "'problem.nx' and 'problem.ny' must be >= 1");
    }
    if (p.has("boundary"))
    {
      Block b = p.child("boundary");
      pc.left = ParseTag(b, "left", pc.left);
      pc.right = ParseTag(b, "right", pc.right);
      if (pc.dimension == 2)
      {
        pc.bottom = ParseTag(b, "bottom", pc.bottom);
        pc.top = ParseTag(b, "top", pc.top);
      }
      b.finish();
    }
    pc.theta = p.number("theta", pc.theta);
    ConfigRequire(pc.theta > 0.0, "'problem.theta' must be positive");
    if (p.has("mu_inv"))
    {
      pc.mu_inv = ParseCoefficient(p.at("mu_inv"), "problem.mu_inv", pc.dimension, unknown);
    }
    if (p.has("eps"))
    {
      pc.eps = ParseCoefficient(p.at("eps"), "problem.eps", pc.dimension, unknown);
    }
    if (p.has("pml"))
    {
      ConfigRequire(pc.dimension == 1, "'problem.pml' is only available in 1D");
      Block b = p.child("pml");
      PmlConfig pml;
      pml.start = b.number("start");
      pml.sigma0 = b.number("sigma0");
      b.finish();
      ConfigRequire(pml.start > pc.domain[0] && pml.start < pc.domain[1],
                    "'problem.pml.start' must lie inside the domain");
      ConfigRequire(pml.sigma0 >= 0.0, "'problem.pml.sigma0' must be non-negative");
      pc.pml = pml;
    }
    p.finish();
  }

  {
    Block b = top.child("perturbation");
    PerturbationConfig &pc = cfg.perturbation;
    const std::string mode = b.string("mode");
    if (mode == "absorption")
    {
      pc.mode = PerturbationMode::Absorption;
      pc.alpha = b.number("alpha");
      ConfigRequire(pc.alpha >= 0.0, "'perturbation.alpha' must be non-negative");
      pc.mu_inv = cfg.problem.mu_inv;
      pc.eps = cfg.problem.eps;
    }
    else if (mode == "nearby")
    {
      pc.mode = PerturbationMode::Nearby;
      const int dim = cfg.problem.dimension;
      pc.mu_inv = b.has("mu_inv")
                      ? ParseCoefficient(b.at("mu_inv"), "perturbation.mu_inv", dim, unknown)
                      : cfg.problem.mu_inv;
      pc.eps = b.has("eps") ? ParseCoefficient(b.at("eps"), "perturbation.eps", dim, unknown)
                            : cfg.problem.eps;
    }
    else
    {
      throw Error(ErrorKind::Config,
                  "'perturbation.mode' must be \"absorption\" or \"nearby\", got \"" + mode + "\"");
    }
    b.finish();
  }

  if (top.has("garding"))
  {
    Block b = top.child("garding");
    cfg.garding.c_g1 = b.number("c_g1", cfg.garding.c_g1);
    cfg.garding.c_g2 = b.number("c_g2", cfg.garding.c_g2);
    cfg.garding.samples = static_cast<int>(b.integer("samples", cfg.garding.samples));
    ConfigRequire(cfg.garding.samples >= 0, "'garding.samples' must be non-negative");
    b.finish();
  }

  if (top.has("sweep"))
  {
    Block b = top.child("sweep");
    SweepConfig s;
    s.k = b.numbers("k");
    RequirePositive(s.k, "sweep.k", false);
    if (cfg.perturbation.mode == PerturbationMode::Absorption)
    {
      s.alpha = b.numbers("alpha");
      RequirePositive(s.alpha, "sweep.alpha", true);
    }
    if (b.has("h"))
    {
      const Json &h = b.at("h");
      ConfigRequire(h.is_array() && !h.empty(), "'sweep.h' must be a non-empty list");
      for (std::size_t i = 0; i < h.size(); i++)
      {
        s.h.push_back(ParseHRule(h[i], "sweep.h[" + std::to_string(i) + "]", unknown));
      }
    }
    else
    {
      s.h.push_back(HRule{});
    }
    if (b.has("ladder"))
    {
      Block l = b.child("ladder");
      LadderConfig lc;
      lc.k = l.numbers("k");
      RequirePositive(lc.k, "sweep.ladder.k", false);
      if (l.has("h"))
      {
        lc.h = ParseHRule(l.at("h"), "sweep.ladder.h", unknown);
      }
      lc.refine = l.number("refine", lc.refine);
      ConfigRequire(lc.refine >= 1.0, "'sweep.ladder.refine' must be >= 1");
      l.finish();
      s.ladder = lc;
    }
    b.finish();
    cfg.sweep = s;
  }

  if (top.has("solver"))
  {
    Block b = top.child("solver");
    SolverConfig &s = cfg.solver;
    s.estimator_tol = b.number("estimator_tol", s.estimator_tol);
    s.max_estimator_iterations = b.integer("max_estimator_iterations", s.max_estimator_iterations);
    s.krylov_dim = static_cast<int>(b.integer("krylov_dim", s.krylov_dim));
    s.slack = b.number("slack", s.slack);
    s.max_iterations = static_cast<int>(b.integer("max_iterations", s.max_iterations));
    s.tol = b.number("tol", s.tol);
    b.finish();
    ConfigRequire(s.estimator_tol > 0.0 && s.tol > 0.0, "solver tolerances must be positive");
    ConfigRequire(s.max_estimator_iterations >= 1 && s.max_iterations >= 1 && s.krylov_dim >= 2,
                  "solver caps must be positive");
    ConfigRequire(s.slack >= 0.0, "'solver.slack' must be non-negative");
  }

  if (top.has("output"))
  {
    Block b = top.child("output");
    cfg.output.dir = b.string("dir", cfg.output.dir);
    b.finish();
  }

  if (top.has("seed"))
  {
    const Json &v = top.at("seed");
    ConfigRequire(v.is_number_unsigned() || (v.is_number_integer() && v.get<long>() >= 0),
                  "'seed' must be a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }

  top.finish();
  if (!unknown.empty())
  {
    std::string list;
    for (const auto &u : unknown)
    {
      list += (list.empty() ? "" : ", ") + ("'" + u + "'");
    }
    throw Error(ErrorKind::Config, "unknown keys: " + list);
  }
  return cfg;
}

std::string Quote(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

Json NumberOrNull(double x)
{
  return std::isfinite(x) ? Json(x) : Json(nullptr);
}

}  // namespace

const char *ToString(PerturbationMode mode)
{
  return mode == PerturbationMode::Absorption ? "absorption" : "nearby";
}

double HRule::operator()(double k) const
{
  return scale * std::pow(k, -power);
}

ExperimentConfig ReadConfig(const std::string &text, const std::string &source)
{
  Json root;
  try
  {
    root = Json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    // Byte offset to line number.
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + static_cast<long>(std::count(text.begin(), text.begin() + pos, '\n'));
    throw ParseError(source, line, e.what());
  }
  return ParseConfig(root);
}

ExperimentConfig ReadConfigFile(const std::string &path)
{
  return ReadConfig(ReadTextFile(path), path);
}

Json ConfigToJson(const ExperimentConfig &cfg)
{
  Json j;
  j["schema_version"] = cfg.schema_version;

  const ProblemConfig &p = cfg.problem;
  Json pj;
  pj["dimension"] = p.dimension;
  pj["domain"] = Json::array({p.domain[0], p.domain[1]});
  if (p.dimension == 1)
  {
    pj["elements"] = p.elements;
    pj["boundary"] = Json{{"left", ToString(p.left)}, {"right", ToString(p.right)}};
  }
  else
  {
    pj["nx"] = p.nx;
    pj["ny"] = p.ny;
    pj["boundary"] = Json{{"left", ToString(p.left)},
                          {"right", ToString(p.right)},
                          {"bottom", ToString(p.bottom)},
                          {"top", ToString(p.top)}};
  }
  pj["k"] = p.k;
  pj["theta"] = p.theta;
  pj["mu_inv"] = CoefficientToJson(p.mu_inv);
  pj["eps"] = CoefficientToJson(p.eps);
  if (p.pml)
  {
    pj["pml"] = Json{{"start", p.pml->start}, {"sigma0", p.pml->sigma0}};
  }
  j["problem"] = pj;

  const PerturbationConfig &q = cfg.perturbation;
  Json qj;
  qj["mode"] = ToString(q.mode);
  if (q.mode == PerturbationMode::Absorption)
  {
    qj["alpha"] = q.alpha;
  }
  else
  {
    qj["mu_inv"] = CoefficientToJson(q.mu_inv);
    qj["eps"] = CoefficientToJson(q.eps);
  }
  j["perturbation"] = qj;

  j["garding"] = Json{{"c_g1", cfg.garding.c_g1},
                      {"c_g2", cfg.garding.c_g2},
                      {"samples", cfg.garding.samples}};

  if (cfg.sweep)
  {
    const SweepConfig &s = *cfg.sweep;
    Json sj;
    sj["k"] = s.k;
    if (q.mode == PerturbationMode::Absorption)
    {
      sj["alpha"] = s.alpha;
    }
    Json hj = Json::array();
    for (const auto &r : s.h)
    {
      hj.push_back(HRuleToJson(r));
    }
    sj["h"] = hj;
    if (s.ladder)
    {
      sj["ladder"] = Json{
          {"k", s.ladder->k}, {"h", HRuleToJson(s.ladder->h)}, {"refine", s.ladder->refine}};
    }
    j["sweep"] = sj;
  }

  const SolverConfig &s = cfg.solver;
  j["solver"] = Json{{"estimator_tol", s.estimator_tol},
                     {"max_estimator_iterations", s.max_estimator_iterations},
                     {"krylov_dim", s.krylov_dim},
                     {"slack", s.slack},
                     {"max_iterations", s.max_iterations},
                     {"tol", s.tol}};
  j["output"] = Json{{"dir", cfg.output.dir}};
  j["seed"] = cfg.seed;
  return j;
}

std::string DumpConfig(const ExperimentConfig &cfg)
{
  return ConfigToJson(cfg).dump(2) + "\n";
}

void WriteMatrixMarket(const std::string &path, const ComplexSparse &A, bool hermitian)
{
  std::vector<std::tuple<int, int, cplx>> entries;
  for (int j = 0; j < A.outerSize(); j++)
  {
    for (ComplexSparse::InnerIterator it(A, j); it; ++it)
    {
      if (!hermitian || it.row() >= it.col())
      {
        entries.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
  }
  std::string out = std::string("%%MatrixMarket matrix coordinate complex ") +
                    (hermitian ? "hermitian" : "general") + "\n";
  out += std::to_string(A.rows()) + " " + std::to_string(A.cols()) + " " +
         std::to_string(entries.size()) + "\n";
  char buf[96];
  for (const auto &[i, j, v] : entries)
  {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g\n", i + 1, j + 1, v.real(), v.imag());
    out += buf;
  }
  WriteTextFile(path, out);
}

ComplexSparse ParseMatrixMarket(std::istream &in, const std::string &source)
{
  std::string line;
  long lineno = 0;
  auto next_line = [&]() -> bool
  {
    while (std::getline(in, line))
    {
      lineno++;
      if (!line.empty() && line.back() == '\r')
      {
        line.pop_back();
      }
      if (line.empty() || line[0] == '%')
      {
        continue;
      }
      return true;
    }
    return false;
  };

  if (!std::getline(in, line))
  {
    throw ParseError(source, 1, "empty file");
  }
  lineno = 1;
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  for (auto *s : {&object, &format, &field, &symmetry})
  {
    std::transform(s->begin(), s->end(), s->begin(), ::tolower);
  }
  if (banner != "%%MatrixMarket" || object != "matrix")
  {
    throw ParseError(source, 1, "missing %%MatrixMarket matrix header");
  }
  if (format != "coordinate")
  {
    throw ParseError(source, 1, "only coordinate format is supported, got '" + format + "'");
  }
  if (field != "complex" && field != "real")
  {
    throw ParseError(source, 1, "field must be complex or real, got '" + field + "'");
  }
  const bool hermitian = symmetry == "hermitian" || (field == "real" && symmetry == "symmetric");
  if (!hermitian && symmetry != "general")
  {
    throw ParseError(source, 1, "unsupported symmetry '" + symmetry + "'");
  }
  const bool is_complex = field == "complex";

  if (!next_line())
  {
    throw ParseError(source, lineno + 1, "missing size line");
  }
  long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> rows >> cols >> nnz) || (ss >> extra) || rows < 1 || cols < 1 || nnz < 0)
    {
      throw ParseError(source, lineno, "malformed size line '" + line + "'");
    }
  }
  if (hermitian && rows != cols)
  {
    throw ParseError(source, lineno, "hermitian matrix must be square");
  }

  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(hermitian ? 2 * nnz : nnz));
  for (long e = 0; e < nnz; e++)
  {
    if (!next_line())
    {
      throw ParseError(source, lineno + 1,
                       "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
    }
    std::istringstream ss(line);
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    std::string extra;
    const bool ok = is_complex ? static_cast<bool>(ss >> i >> j >> re >> im)
                               : static_cast<bool>(ss >> i >> j >> re);
    if (!ok || (ss >> extra))
    {
      throw ParseError(source, lineno, "malformed entry '" + line + "'");
    }
    if (i == 0 || j == 0)
    {
      throw ParseError(source, lineno, "index 0 in a 1-based coordinate file");
    }
    if (i < 1 || i > rows || j < 1 || j > cols)
    {
      throw ParseError(source, lineno,
                       "index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of range for " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    }
    if (!std::isfinite(re) || !std::isfinite(im))
    {
      throw ParseError(source, lineno, "non-finite value");
    }
    if (hermitian && j > i)
    {
      throw ParseError(source, lineno, "hermitian file must store the lower triangle only");
    }
    if (hermitian && i == j && im != 0.0)
    {
      throw ParseError(source, lineno, "hermitian diagonal entry has nonzero imaginary part");
    }
    trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), cplx(re, im));
    if (hermitian && i != j)
    {
      trips.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), cplx(re, -im));
    }
  }
  if (next_line())
  {
    throw ParseError(source, lineno, "more entries than declared (" + std::to_string(nnz) + ")");
  }
  ComplexSparse A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

ComplexSparse ReadMatrixMarket(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  }
  return ParseMatrixMarket(in, path);
}

void WriteMatrixExchange(const std::string &dir, const ExternalSystem &sys,
                         const PairMetadata &meta)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorKind::Io, "cannot create directory '" + dir + "': " + ec.message());
  }
  const std::filesystem::path d(dir);
  WriteMatrixMarket((d / "A1.mtx").string(), sys.A1, false);
  WriteMatrixMarket((d / "A2.mtx").string(), sys.A2, false);
  WriteMatrixMarket((d / "D.mtx").string(), sys.D, true);
  WriteMatrixMarket((d / "M.mtx").string(), sys.M, true);
  Json j;
  j["delta_mu"] = meta.delta_mu;
  j["delta_eps"] = meta.delta_eps;
  j["mu_equal"] = meta.mu_equal;
  j["k"] = NumberOrNull(meta.k);
  j["h"] = NumberOrNull(meta.h);
  j["alpha"] = NumberOrNull(meta.alpha);
  WriteTextFile((d / "pair.json").string(), j.dump(2) + "\n");
}

ExternalSystem ReadMatrixExchange(const std::string &dir, const std::string &d_path,
                                  const std::string &m_path, PairMetadata *meta)
{
  const std::filesystem::path d(dir);
  const std::string dp = d_path.empty() ? (d / "D.mtx").string() : d_path;
  const std::string mp = m_path.empty() ? (d / "M.mtx").string() : m_path;
  for (const auto &p : {(d / "A1.mtx").string(), (d / "A2.mtx").string(), dp, mp,
                        (d / "pair.json").string()})
  {
    if (!std::filesystem::exists(p))
    {
      throw Error(ErrorKind::Io, "missing file '" + p + "'");
    }
  }
  ExternalSystem sys;
  sys.A1 = ReadMatrixMarket((d / "A1.mtx").string());
  sys.A2 = ReadMatrixMarket((d / "A2.mtx").string());
  sys.D = ReadMatrixMarket(dp);
  sys.M = ReadMatrixMarket(mp);

  const std::string pair_path = (d / "pair.json").string();
  Json j;
  try
  {
    j = Json::parse(ReadTextFile(pair_path));
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ParseError(pair_path, 1, e.what());
  }
  std::vector<std::string> unknown;
  Block b(j, "", unknown);
  PairMetadata m;
  m.delta_mu = b.number("delta_mu");
  m.delta_eps = b.number("delta_eps");
  {
    const Json &v = b.at("mu_equal");
    if (!v.is_boolean())
    {
      throw Error(ErrorKind::Config, "'mu_equal' in " + pair_path + " must be a boolean");
    }
    m.mu_equal = v.get<bool>();
  }
  for (auto [key, slot] : {std::pair{"k", &m.k}, std::pair{"h", &m.h}, std::pair{"alpha", &m.alpha}})
  {
    if (b.has(key) && !b.at(key).is_null())
    {
      *slot = b.number(key);
    }
  }
  b.finish();
  if (!unknown.empty())
  {
    throw Error(ErrorKind::Config, "unknown key '" + unknown.front() + "' in " + pair_path);
  }
  if (!(m.delta_mu >= 0.0) || !(m.delta_eps >= 0.0))
  {
    throw Error(ErrorKind::Config, "coefficient differences in " + pair_path + " must be >= 0");
  }
  sys.delta_mu = m.delta_mu;
  sys.delta_eps = m.delta_eps;
  sys.mu_equal = m.mu_equal;
  if (meta)
  {
    *meta = m;
  }
  return sys;
}

std::string FormatDouble(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json ToJson(const BoundCheck &c)
{
  return Json{{"name", c.name},
              {"applicable", c.applicable},
              {"lhs", NumberOrNull(c.lhs)},
              {"rhs", NumberOrNull(c.rhs)},
              {"margin", NumberOrNull(c.margin())},
              {"pass", c.pass}};
}

Json ToJson(const BoundReport &r)
{
  Json j;
  j["n"] = r.n;
  j["k"] = NumberOrNull(r.k);
  j["h"] = NumberOrNull(r.h);
  j["alpha"] = NumberOrNull(r.alpha);
  j["delta_mu"] = r.delta_mu;
  j["delta_eps"] = r.delta_eps;
  j["mu_equal"] = r.mu_equal;
  j["c_dis1"] = NumberOrNull(r.c_dis1);
  j["c_dis2"] = NumberOrNull(r.c_dis2);
  j["singular1"] = r.singular1;
  j["singular2"] = r.singular2;
  j["mass_ratio"] = NumberOrNull(r.mass_ratio);
  j["lhs_D"] = NumberOrNull(r.lhs_D);
  j["lhs_Dinv"] = NumberOrNull(r.lhs_Dinv);
  j["lhs_2"] = NumberOrNull(r.lhs_2);
  j["lhs_2p"] = NumberOrNull(r.lhs_2p);
  j["rhs_nearby"] = NumberOrNull(r.rhs_nearby);
  j["rhs_nearby_euclid"] = NumberOrNull(r.rhs_nearby_euclid);
  j["cond"] = NumberOrNull(r.cond);
  j["rhs_asymptotic"] = NumberOrNull(r.rhs_asymptotic);
  j["continuous_constant"] = "proxy: measured c_dis1";
  Json checks = Json::array();
  for (const auto &c : r.checks)
  {
    checks.push_back(ToJson(c));
  }
  j["checks"] = checks;
  j["pass"] = r.pass();
  return j;
}

Json ToJson(const GardingReport &r)
{
  return Json{{"c_g1", r.constants.c_g1},
              {"c_g2", r.constants.c_g2},
              {"samples", r.samples},
              {"violations", r.violations},
              {"min_relative_margin", NumberOrNull(r.min_relative_margin)},
              {"identity_checked", r.identity_checked},
              {"identity_max_rel_error", r.identity_max_rel_error},
              {"identity_pass", r.identity_pass},
              {"pass", r.pass()}};
}

Json ToJson(const NormEquivalenceReport &r)
{
  Json checks = Json::array();
  for (const auto &c : r.checks)
  {
    checks.push_back(ToJson(c));
  }
  return Json{{"c_g1", r.constants.c_g1},
              {"c_g2", r.constants.c_g2},
              {"norm_hstar_to_h", NumberOrNull(r.norms.hstar_to_h)},
              {"norm_h0_to_h", NumberOrNull(r.norms.h0_to_h)},
              {"norm_h0_to_h0", NumberOrNull(r.norms.h0_to_h0)},
              {"gamma_dis", NumberOrNull(r.inf_sup.gamma_dis)},
              {"c_dis", NumberOrNull(r.inf_sup.c_dis)},
              {"checks", checks},
              {"pass", r.pass()}};
}

Json ToJson(const IterationTrace &t)
{
  Json norms = Json::array();
  for (double x : t.norms)
  {
    norms.push_back(NumberOrNull(x));
  }
  return Json{{"kind", t.kind},
              {"iterations", t.iterations()},
              {"converged", t.converged},
              {"final_relative", NumberOrNull(t.final_relative)},
              {"contraction", t.contraction ? NumberOrNull(*t.contraction) : Json(nullptr)},
              {"norms", norms}};
}

Json ToJson(const InfSupLadder &l)
{
  Json entries = Json::array();
  for (const auto &e : l.entries)
  {
    entries.push_back(Json{{"k", e.k},
                           {"h", e.h},
                           {"h_ref", e.h_ref},
                           {"n", e.n},
                           {"n_ref", e.n_ref},
                           {"c_dis", NumberOrNull(e.c_dis)},
                           {"c_dis_ref", NumberOrNull(e.c_dis_ref)},
                           {"ratio", NumberOrNull(e.ratio)},
                           {"singular", e.singular}});
  }
  return entries;
}

std::vector<std::string> BoundCsvColumns()
{
  return {"k",         "h",        "alpha",     "n",      "dmu",         "deps",
          "mu_equal",  "cdis1",    "cdis2",     "mass_ratio", "lhs_D",   "lhs_Dinv",
          "lhs_2",     "lhs_2p",   "rhs_nearby", "rhs_nearby_euclid", "cond",   "rhs_asymptotic",
          "singular2", "pass"};
}

std::vector<std::string> BoundCsvValues(const BoundReport &r)
{
  return {FormatDouble(r.k),          FormatDouble(r.h),         FormatDouble(r.alpha),
          std::to_string(r.n),        FormatDouble(r.delta_mu),  FormatDouble(r.delta_eps),
          r.mu_equal ? "1" : "0",     FormatDouble(r.c_dis1),    FormatDouble(r.c_dis2),
          FormatDouble(r.mass_ratio), FormatDouble(r.lhs_D),     FormatDouble(r.lhs_Dinv),
          FormatDouble(r.lhs_2),      FormatDouble(r.lhs_2p),    FormatDouble(r.rhs_nearby),
          FormatDouble(r.rhs_nearby_euclid), FormatDouble(r.cond),     FormatDouble(r.rhs_asymptotic),
          r.singular2 ? "1" : "0",    r.pass() ? "1" : "0"};
}

std::string CsvLine(const std::vector<std::string> &fields)
{
  std::string out;
  for (std::size_t i = 0; i < fields.size(); i++)
  {
    out += (i ? "," : "") + Quote(fields[i]);
  }
  return out + "\n";
}

std::string BoundReportCsv(const BoundReport &r)
{
  return CsvLine(BoundCsvColumns()) + CsvLine(BoundCsvValues(r));
}

std::string TraceCsv(const IterationTrace &t)
{
  std::string out = CsvLine({"iteration", "norm", "relative", "envelope_c", "envelope_elman"});
  const double r0 = t.norms.empty() ? 0.0 : t.norms.front();
  for (std::size_t i = 0; i < t.norms.size(); i++)
  {
    const double rel = r0 > 0.0 ? t.norms[i] / r0 : 0.0;
    out += CsvLine({std::to_string(i), FormatDouble(t.norms[i]), FormatDouble(rel),
                    i < t.envelope_c.size() ? FormatDouble(t.envelope_c[i]) : "",
                    i < t.envelope_elman.size() ? FormatDouble(t.envelope_elman[i]) : ""});
  }
  return out;
}

std::string LadderCsv(const InfSupLadder &l)
{
  std::string out =
      CsvLine({"k", "h", "h_ref", "n", "n_ref", "cdis", "cdis_ref", "ratio", "singular"});
  for (const auto &e : l.entries)
  {
    out += CsvLine({FormatDouble(e.k), FormatDouble(e.h), FormatDouble(e.h_ref),
                    std::to_string(e.n), std::to_string(e.n_ref), FormatDouble(e.c_dis),
                    FormatDouble(e.c_dis_ref), FormatDouble(e.ratio), e.singular ? "1" : "0"});
  }
  return out;
}

void WriteTextFile(const std::string &path, const std::string &content)
{
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty())
  {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  }
  out << content;
  out.close();
  if (!out)
  {
    throw Error(ErrorKind::Io, "write to '" + path + "' failed");
  }
}

std::string ReadTextFile(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace helmpc
