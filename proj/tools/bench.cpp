// Benchmark harness: generate instances, run method comparisons, verify
// trace certificates, and emit CSV plus markdown tables.
//
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 verification
// failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raipp/ag.hpp"
#include "raipp/penalty.hpp"
#include "raipp/problems.hpp"
#include "raipp/raipp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace raipp;

namespace {

enum class Experiment { UnconstrainedQp, PenaltyLc };
enum class VerifyLevel { None, Cheap, Full };

struct RunConfig {
  Experiment experiment = Experiment::UnconstrainedQp;
  Eigen::Index l = 10, n = 8;
  double density = 1.0;
  std::vector<std::pair<double, double>> curvatures;  // (M, m), qp runs
  std::vector<double> L_f;                            // penalty runs
  std::vector<InnerMethod> methods;
  double sigma = 0.3;
  double xi = 1.0;
  double tau = 0.2;
  double rho_bar = 1e-7;
  double eta_bar = 1e-4;
  std::optional<double> lambda0;  // overrides the per-variant default
  Calibration calibration = Calibration::ExactHessian;
  std::vector<std::uint64_t> seeds{1};
  std::string out = "results";
  VerifyLevel verify_level = VerifyLevel::Cheap;
  int jobs = 1;
  long ag_max_iters = 50'000'000;

  SolverParams solver_params() const {
    SolverParams p = SolverParams::from_sigma(sigma, rho_bar);
    p.xi = xi;
    p.tau = tau;
    return p;
  }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

InnerMethod parse_method(const std::string& s) {
  if (s == "AG") return InnerMethod::AG;
  if (s == "AIPPc") return InnerMethod::AIPPc;
  if (s == "AIPPv1") return InnerMethod::AIPPv1;
  if (s == "AIPPv2") return InnerMethod::AIPPv2;
  throw ConfigError("unknown method: " + s);
}

const char* method_name(InnerMethod m) {
  switch (m) {
    case InnerMethod::AG: return "AG";
    case InnerMethod::AIPPc: return "AIPPc";
    case InnerMethod::AIPPv1: return "AIPPv1";
    case InnerMethod::AIPPv2: return "AIPPv2";
  }
  return "?";
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::SuccessStationary: return "success";
    case SolveStatus::FailureStep4: return "failure_step4";
    case SolveStatus::IterationBudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  const std::string exp = j.value("experiment", "unconstrained_qp");
  if (exp == "unconstrained_qp") {
    c.experiment = Experiment::UnconstrainedQp;
    c.sigma = 0.3;
  } else if (exp == "penalty_lc") {
    c.experiment = Experiment::PenaltyLc;
    c.sigma = 1e-3;
  } else {
    throw ConfigError("experiment must be unconstrained_qp or penalty_lc");
  }
  c.l = j.value("l", 10);
  c.n = j.value("n", 8);
  c.density = j.value("density", 1.0);
  if (c.l < 1 || c.n < 1 || !(c.density > 0.0 && c.density <= 1.0))
    throw ConfigError("invalid dimensions or density");
  for (const auto& cell : j.value("curvatures", json::array()))
    c.curvatures.emplace_back(cell.at("M").get<double>(),
                              cell.at("m").get<double>());
  for (const auto& lf : j.value("L_f", json::array()))
    c.L_f.push_back(lf.get<double>());
  if (c.experiment == Experiment::UnconstrainedQp && c.curvatures.empty())
    throw ConfigError("unconstrained_qp requires a nonempty curvatures list");
  if (c.experiment == Experiment::PenaltyLc && c.L_f.empty())
    throw ConfigError("penalty_lc requires a nonempty L_f list");
  for (const auto& m : j.value(
           "methods", json::array({"AG", "AIPPc", "AIPPv1", "AIPPv2"})))
    c.methods.push_back(parse_method(m.get<std::string>()));
  if (c.methods.empty()) throw ConfigError("empty method list");
  c.sigma = j.value("sigma", c.sigma);
  c.xi = j.value("xi", c.xi);
  c.tau = j.value("tau", c.tau);
  c.rho_bar = j.value("rho_bar", c.rho_bar);
  c.eta_bar = j.value("eta_bar", c.eta_bar);
  if (j.contains("lambda0")) c.lambda0 = j["lambda0"].get<double>();
  const std::string cal = j.value("calibration", "exact_hessian");
  if (cal == "exact_hessian") {
    c.calibration = Calibration::ExactHessian;
  } else if (cal == "conservative") {
    c.calibration = Calibration::Conservative;
  } else {
    throw ConfigError("calibration must be exact_hessian or conservative");
  }
  if (j.contains("seeds")) {
    c.seeds.clear();
    for (const auto& s : j["seeds"]) c.seeds.push_back(s.get<std::uint64_t>());
  }
  if (c.seeds.empty()) throw ConfigError("empty seed list");
  c.out = j.value("out", c.out);
  c.jobs = j.value("jobs", c.jobs);
  c.ag_max_iters = j.value("ag_max_iters", c.ag_max_iters);
  const std::string vl = j.value("verify_level", "cheap");
  if (vl == "none") c.verify_level = VerifyLevel::None;
  else if (vl == "cheap") c.verify_level = VerifyLevel::Cheap;
  else if (vl == "full") c.verify_level = VerifyLevel::Full;
  else throw ConfigError("verify_level must be none, cheap or full");
  try {
    c.solver_params().validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid solver parameters: ") + e.what());
  }
  return c;
}

std::string fmt_g(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string qp_archive_name(const RunConfig& c, double M, double m,
                            std::uint64_t seed) {
  return "qp_l" + std::to_string(c.l) + "_n" + std::to_string(c.n) + "_M" +
         fmt_g(M) + "_m" + fmt_g(m) + "_s" + std::to_string(seed) + ".inst";
}

std::string lc_archive_name(const RunConfig& c, double lf, std::uint64_t seed) {
  return "lc_l" + std::to_string(c.l) + "_n" + std::to_string(c.n) + "_Lf" +
         fmt_g(lf) + "_s" + std::to_string(seed) + ".inst";
}

// ---- gen ---------------------------------------------------------------

int cmd_gen(const RunConfig& c) {
  const fs::path dir = fs::path(c.out) / "instances";
  fs::create_directories(dir);
  if (c.experiment == Experiment::UnconstrainedQp) {
    for (const auto& [M, m] : c.curvatures)
      for (std::uint64_t seed : c.seeds) {
        const QpInstance inst = gen_qp_instance(c.l, c.n, c.density, M, m,
                                                seed, c.calibration);
        save_instance(inst, (dir / qp_archive_name(c, M, m, seed)).string());
      }
  } else {
    for (double lf : c.L_f)
      for (std::uint64_t seed : c.seeds) {
        const LcInstance inst = gen_lc_instance(c.l, c.n, c.density, lf, seed);
        save_instance(inst, (dir / lc_archive_name(c, lf, seed)).string());
      }
  }
  std::cout << "wrote instance archives under " << dir.string() << "\n";
  return 0;
}

// ---- run ---------------------------------------------------------------

struct ResultRow {
  double M = 0.0, m = 0.0, L_f = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  std::string status;
  double objective = 0.0;
  long outer = 0;
  long inner = 0;
  double runtime_s = 0.0;
  double residual = 0.0;
  double feasibility = 0.0;  // penalty runs only
  bool agree = true;
  std::string error;
};

struct Cell {
  double M = 0.0, m = 0.0, L_f = 0.0;
  std::uint64_t seed = 0;
  std::string archive;
};

void write_trace_jsonl(const fs::path& path, const RunConfig& c,
                       const std::string& method, const Cell& cell,
                       double oracle_m, double oracle_M, double lambda0,
                       const SolveOutcome& outcome, double rho_scale) {
  std::ofstream out(path, std::ios::trunc);
  const SolverParams p = c.solver_params();
  std::string variant = "none";
  if (method == "AIPPc") variant = "constant";
  if (method == "AIPPv1") variant = "halving";
  if (method == "AIPPv2") variant = "halving_doubling";
  json header = {{"type", "header"},
                 {"method", method},
                 {"scheme", method == "AG" ? "ag" : "gd"},
                 {"variant", variant},
                 {"l", cell.archive.empty() ? c.l : c.l},
                 {"n", c.n},
                 {"seed", cell.seed},
                 {"m", oracle_m},
                 {"M", oracle_M},
                 {"lambda0", lambda0},
                 {"theta1", p.theta1},
                 {"theta2", p.theta2},
                 {"xi", p.xi},
                 {"tau", p.tau},
                 {"rho_bar", c.rho_bar},
                 {"rho_scale", rho_scale},
                 {"phi0", outcome.trace.phi0}};
  out << header.dump() << "\n";
  for (const TraceRecord& r : outcome.trace.records) {
    json rec = {{"type", "record"},
                {"k", r.k},
                {"lambda", r.lambda},
                {"v_norm", r.v_norm},
                {"delta", r.delta},
                {"phi", r.phi},
                {"w_move", r.w_move_norm},
                {"inner", r.inner_iterations},
                {"last_call", r.last_call_iterations},
                {"halvings", r.halvings},
                {"doublings", r.doublings},
                {"inner_bound", r.inner_bound},
                {"aj_ok", r.aj_growth_ok},
                {"Lambda", r.Lambda},
                {"alpha", r.alpha},
                {"beta", r.beta}};
    out << rec.dump() << "\n";
  }
  json footer = {{"type", "final"},
                 {"status", status_name(outcome.status)},
                 {"total_inner", outcome.total_inner_iterations}};
  out << footer.dump() << "\n";
}

// In-process certificate checks after a run.  Cheap: recompute the relative
// residual from (z, v) alone.  Full: additionally replay every accepted
// outer iteration through the GD acceptance conditions.
void verify_outcome(const RunConfig& c, const ProblemOracle& oracle,
                    const SolveOutcome& outcome, double rho_scale,
                    ResultRow& row) {
  if (c.verify_level == VerifyLevel::None) return;
  if (outcome.status == SolveStatus::SuccessStationary) {
    const double res =
        stationarity_residual(outcome.final.v_r, rho_scale - 1.0);
    if (res > c.rho_bar * (1.0 + 1e-10))
      throw std::runtime_error("residual recheck failed: " +
                               std::to_string(res));
  }
  if (c.verify_level == VerifyLevel::Full && row.method != "AG") {
    const SolverParams p = c.solver_params();
    for (std::size_t i = 0; i < outcome.trace.records.size(); ++i) {
      const TraceRecord& r = outcome.trace.records[i];
      const GdCheckResult chk =
          check_gd_conditions(oracle, p, r.lambda, outcome.trace.z_prev(i),
                              r.z, r.w, r.delta);
      if (!chk.descent_ok || !chk.gap_ok)
        throw std::runtime_error("GD replay failed at outer iteration " +
                                 std::to_string(r.k));
    }
  }
}

ResultRow run_qp_cell(const RunConfig& c, const Cell& cell,
                      InnerMethod method) {
  ResultRow row;
  row.M = cell.M;
  row.m = cell.m;
  row.seed = cell.seed;
  row.method = method_name(method);
  const QpInstance inst = load_qp_instance(cell.archive);
  const ProblemOracle oracle = qp_oracle(inst);
  const Vec z0 =
      sym_flatten(Mat::Identity(inst.n, inst.n) / static_cast<double>(inst.n));
  const double rho_scale = oracle.smooth_grad(z0).norm() + 1.0;

  SolverParams params = c.solver_params();
  StepsizePolicy policy;
  switch (method) {
    case InnerMethod::AIPPc: policy = StepsizePolicy::aippc(oracle.m); break;
    case InnerMethod::AIPPv1: policy = StepsizePolicy::aippv1(); break;
    case InnerMethod::AIPPv2: policy = StepsizePolicy::aippv2(oracle.m); break;
    case InnerMethod::AG: break;
  }
  if (c.lambda0 && method != InnerMethod::AG) policy.lambda0 = *c.lambda0;

  const auto t0 = std::chrono::steady_clock::now();
  const SolveOutcome outcome =
      method == InnerMethod::AG
          ? ag_solve(oracle, z0, c.rho_bar, c.ag_max_iters,
                     ResidualNorm::RelativeToInitialGrad)
          : raipp_solve(oracle, z0, params, policy,
                        ResidualNorm::RelativeToInitialGrad);
  row.runtime_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  row.status = status_name(outcome.status);
  row.outer = static_cast<long>(outcome.trace.records.size());
  row.inner = outcome.total_inner_iterations;
  row.objective = oracle.phi(outcome.final.z_r.size() > 0
                                 ? outcome.final.z_r
                                 : z0);
  row.residual = outcome.final.v_r.size() > 0
                     ? stationarity_residual(outcome.final.v_r, rho_scale - 1.0)
                     : std::nan("");

  const fs::path tdir = fs::path(c.out) / "traces";
  fs::create_directories(tdir);
  write_trace_jsonl(tdir / (fs::path(cell.archive).stem().string() + "_" +
                            row.method + ".jsonl"),
                    c, row.method, cell, oracle.m, oracle.M, policy.lambda0,
                    outcome, rho_scale);
  verify_outcome(c, oracle, outcome, rho_scale, row);
  return row;
}

ResultRow run_lc_cell(const RunConfig& c, const Cell& cell,
                      InnerMethod method) {
  ResultRow row;
  row.L_f = cell.L_f;
  row.seed = cell.seed;
  row.method = method_name(method);
  const LcInstance inst = load_lc_instance(cell.archive);
  PenaltyConfig pc;
  pc.inner_method = method;
  pc.rho_bar = c.rho_bar;
  pc.eta_bar = c.eta_bar;
  pc.params = c.solver_params();
  pc.ag_max_iters = c.ag_max_iters;
  const PenaltyReport report = penalty_solve(inst, pc);
  row.runtime_s = report.wall_time_s;
  row.status = report.feasible ? "success" : "infeasible";
  row.outer = static_cast<long>(report.stages.size());
  row.inner = report.total_inner_iterations;
  row.objective = report.objective;
  row.residual = report.stages.empty() ? std::nan("")
                                       : report.stages.back().residual;
  row.feasibility = report.stages.empty() ? std::nan("")
                                          : report.stages.back().feasibility;
  if (!report.feasible) throw std::runtime_error("penalty run left infeasible");
  return row;
}

void write_csv(const fs::path& path, Experiment exp,
               const std::vector<ResultRow>& rows, const RunConfig& c) {
  std::ofstream out(path, std::ios::trunc);
  out << "experiment,l,n,density,seed,M,m,L_f,method,status,objective,"
         "outer_iterations,inner_iterations,runtime_s,residual,feasibility,"
         "objectives_agree,error\n";
  const char* ename =
      exp == Experiment::UnconstrainedQp ? "unconstrained_qp" : "penalty_lc";
  for (const ResultRow& r : rows) {
    out << ename << ',' << c.l << ',' << c.n << ',' << c.density << ','
        << r.seed << ',';
    if (exp == Experiment::UnconstrainedQp)
      out << fmt_g(r.M) << ',' << fmt_g(r.m) << ",,";
    else
      out << ",," << fmt_g(r.L_f) << ',';
    out << r.method << ',' << r.status << ',';
    out.precision(12);
    out << r.objective << ',' << r.outer << ',' << r.inner << ','
        << r.runtime_s << ',' << r.residual << ',' << r.feasibility << ','
        << (r.agree ? "yes" : "no") << ',' << r.error << '\n';
  }
}

// Markdown summary table: one row per curvature cell with
// seed-averaged objective, iteration counts per method, runtimes per method.
void write_markdown(const fs::path& path, Experiment exp,
                    const std::vector<ResultRow>& rows, const RunConfig& c) {
  std::vector<std::string> methods;
  for (InnerMethod m : c.methods) methods.push_back(method_name(m));

  struct Acc {
    double obj = 0.0;
    std::map<std::string, double> inner, time;
    std::map<std::string, int> count;
    int obj_count = 0;
  };
  std::map<std::pair<double, double>, Acc> cells;  // key: (M or L_f, m)
  for (const ResultRow& r : rows) {
    if (!r.error.empty()) continue;
    const auto key = exp == Experiment::UnconstrainedQp
                         ? std::make_pair(r.M, r.m)
                         : std::make_pair(r.L_f, 0.0);
    Acc& a = cells[key];
    a.obj += r.objective;
    ++a.obj_count;
    a.inner[r.method] += static_cast<double>(r.inner);
    a.time[r.method] += r.runtime_s;
    ++a.count[r.method];
  }

  std::ofstream out(path, std::ios::trunc);
  out << "| Size |";
  out << (exp == Experiment::UnconstrainedQp ? " M | m |" : " L_f |");
  out << " objective |";
  for (const auto& m : methods) out << " " << m << " iters |";
  for (const auto& m : methods) out << " " << m << " time (s) |";
  out << "\n|";
  const int ncols = 2 + (exp == Experiment::UnconstrainedQp ? 2 : 1) +
                    2 * static_cast<int>(methods.size());
  for (int i = 0; i < ncols; ++i) out << " --- |";
  out << "\n";
  for (const auto& [key, a] : cells) {
    out << "| (" << c.l << ", " << c.n << ") |";
    if (exp == Experiment::UnconstrainedQp)
      out << " " << fmt_g(key.first) << " | " << fmt_g(key.second) << " |";
    else
      out << " " << fmt_g(key.first) << " |";
    std::ostringstream obj;
    obj.precision(6);
    obj << (a.obj_count > 0 ? a.obj / a.obj_count : std::nan(""));
    out << " " << obj.str() << " |";
    for (const auto& m : methods) {
      const auto it = a.count.find(m);
      if (it == a.count.end() || it->second == 0) {
        out << " - |";
      } else {
        out << " " << std::llround(a.inner.at(m) / it->second) << " |";
      }
    }
    for (const auto& m : methods) {
      const auto it = a.count.find(m);
      if (it == a.count.end() || it->second == 0) {
        out << " - |";
      } else {
        std::ostringstream t;
        t.precision(3);
        t << std::fixed << a.time.at(m) / it->second;
        out << " " << t.str() << " |";
      }
    }
    out << "\n";
  }
}

int cmd_run(const RunConfig& c) {
  const fs::path dir = fs::path(c.out) / "instances";
  std::vector<Cell> cells;
  if (c.experiment == Experiment::UnconstrainedQp) {
    for (const auto& [M, m] : c.curvatures)
      for (std::uint64_t seed : c.seeds) {
        Cell cell;
        cell.M = M;
        cell.m = m;
        cell.seed = seed;
        cell.archive = (dir / qp_archive_name(c, M, m, seed)).string();
        cells.push_back(cell);
      }
  } else {
    for (double lf : c.L_f)
      for (std::uint64_t seed : c.seeds) {
        Cell cell;
        cell.L_f = lf;
        cell.seed = seed;
        cell.archive = (dir / lc_archive_name(c, lf, seed)).string();
        cells.push_back(cell);
      }
  }
  for (const Cell& cell : cells)
    if (!fs::exists(cell.archive))
      throw ConfigError("missing instance archive (run `bench gen` first): " +
                        cell.archive);

  struct Task {
    std::size_t cell;
    InnerMethod method;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (InnerMethod m : c.methods) tasks.push_back({i, m});

  std::vector<ResultRow> rows(tasks.size());
  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};
  bool any_error = false;
  const int jobs = std::max(1, c.jobs);
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Cell& cell = cells[tasks[t].cell];
      ResultRow row;
      try {
        row = c.experiment == Experiment::UnconstrainedQp
                  ? run_qp_cell(c, cell, tasks[t].method)
                  : run_lc_cell(c, cell, tasks[t].method);
      } catch (const std::exception& e) {
        row.method = method_name(tasks[t].method);
        row.M = cell.M;
        row.m = cell.m;
        row.L_f = cell.L_f;
        row.seed = cell.seed;
        row.status = "error";
        row.error = e.what();
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      if (!row.error.empty()) {
        any_error = true;
        std::cerr << "row failed (" << row.method << ", seed " << row.seed
                  << "): " << row.error << "\n";
      }
      rows[t] = std::move(row);
      const ResultRow& done = rows[t];
      std::cout << "done: " << done.method << " seed " << done.seed << " ("
                << done.status << ", " << done.inner << " inner iterations)"
                << std::endl;
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  // Cross-method objective agreement per (curvature, seed) cell.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double lo = kInf, hi = -kInf;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].cell != i || !rows[t].error.empty()) continue;
      lo = std::min(lo, rows[t].objective);
      hi = std::max(hi, rows[t].objective);
    }
    if (lo > hi) continue;
    const bool agree = hi - lo <= 1e-5 * (1.0 + std::abs(lo));
    for (std::size_t t = 0; t < tasks.size(); ++t)
      if (tasks[t].cell == i) rows[t].agree = agree;
    if (!agree) {
      std::cerr << "warning: objectives disagree beyond 1e-5 relative on "
                << fs::path(cells[i].archive).stem().string() << "\n";
    }
  }

  fs::create_directories(c.out);
  write_csv(fs::path(c.out) / "results.csv", c.experiment, rows, c);
  write_markdown(fs::path(c.out) / "results.md", c.experiment, rows, c);
  std::cout << "wrote " << (fs::path(c.out) / "results.csv").string()
            << " and results.md\n";
  return any_error ? 3 : 0;
}

// ---- verify ------------------------------------------------------------

struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool leq_slack(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs));
}

void verify_trace_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw VerifyFailure("empty trace: " + path.string());
  const json header = json::parse(line);
  if (header.value("type", "") != "header")
    throw VerifyFailure("missing header: " + path.string());
  const std::string scheme = header.value("scheme", "gd");
  const std::string variant = header.value("variant", "none");
  const double m = header.at("m").get<double>();
  const double M = header.at("M").get<double>();
  const double lambda0 = header.value("lambda0", 0.0);
  const double theta1 = header.at("theta1").get<double>();
  const double theta2 = header.at("theta2").get<double>();
  const double xi = header.at("xi").get<double>();
  const double phi0 = header.at("phi0").get<double>();

  auto fail = [&](const std::string& invariant, long k) {
    throw VerifyFailure(path.filename().string() + ": " + invariant +
                        " violated at outer iteration " + std::to_string(k));
  };

  const double lambda_floor =
      lambda0 > 0.0 ? std::min(lambda0, 1.0 / (2.0 * m)) : 0.0;
  const long budget = lambda0 > 0.0 ? halving_budget(m, lambda0) : 0;

  double phi_prev = phi0;
  double lambda_max = 0.0;
  long total_halvings = 0;
  bool saw_final = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.value("type", "");
    if (type == "final") {
      saw_final = true;
      continue;
    }
    if (type != "record") continue;
    const long k = j.at("k").get<long>();
    const double lambda = j.at("lambda").get<double>();
    const double phi = j.at("phi").get<double>();
    if (scheme == "ag") {
      phi_prev = phi;
      continue;
    }
    const double w_move = j.at("w_move").get<double>();
    const double delta = j.at("delta").get<double>();
    const double Lambda = j.at("Lambda").get<double>();
    const double alpha = j.at("alpha").get<double>();
    const double beta = j.at("beta").get<double>();
    const int doublings = j.value("doublings", 0);

    // Stepsize floor and halving budget.  The recorded lambda is the
    // accepted value; any end-of-iteration doubling only affects the next
    // record.  The budget lemma assumes a nonincreasing stepsize, so it is
    // skipped for the doubling variant; the floor survives doubling because
    // halvings only ever trigger above 1/m.
    (void)doublings;
    const double lambda_accepted = lambda;
    total_halvings += j.value("halvings", 0);
    if (lambda_floor > 0.0 &&
        lambda_accepted < lambda_floor * (1.0 - 1e-12))
      fail("stepsize floor lambda >= min(lambda0, 1/(2m))", k);
    if (variant == "constant" && total_halvings > 0)
      fail("constant-policy no-halving guarantee", k);
    if (variant == "halving" && total_halvings > budget)
      fail("halving budget", k);

    // Inner-loop contract for the accepting call.
    const long last_call = j.at("last_call").get<long>();
    const long stored_bound = j.at("inner_bound").get<long>();
    const long bound =
        acg_iteration_bound(lambda_accepted * M + 1.0, xi, theta1, theta2);
    if (last_call > bound || last_call > stored_bound)
      fail("inner iteration bound", k);
    if (!j.at("aj_ok").get<bool>()) fail("A_j growth", k);

    // GD acceptance conditions from the stored scalars.  Both sides carry
    // rounding noise at the scale of the phi values whose difference forms
    // the descent bound, so the floor must scale with those magnitudes.
    const double gd_noise = 1e-13 * lambda_accepted *
                            (std::abs(phi_prev) + std::abs(phi) + 1.0);
    if (!leq_slack(w_move * w_move,
                   theta1 * lambda_accepted * (phi_prev - phi) +
                       theta1 * gd_noise))
      fail("descent condition", k);
    if (!leq_slack(delta, theta2 * w_move * w_move + gd_noise))
      fail("gap condition", k);
    if (phi > phi_prev + 1e-12 * (1.0 + std::abs(phi_prev)))
      fail("phi monotonicity", k);

    // Running-diagnostic decay bounds, with phi(z_k) as the lower anchor.
    lambda_max = std::max(lambda_max, lambda_accepted);
    const double ratio = theta1 * (phi0 - phi) / Lambda;
    if (!leq_slack(alpha * alpha, ratio)) fail("alpha decay bound", k);
    const double amp =
        1.0 + 2.0 * std::sqrt(2.0 * theta2 * (lambda_max * M + 1.0));
    if (!leq_slack(beta * beta, amp * amp * ratio)) fail("beta decay bound", k);

    phi_prev = phi;
  }
  if (!saw_final) throw VerifyFailure("truncated trace: " + path.string());
}

int cmd_verify(const std::vector<std::string>& files, const std::string& out) {
  std::vector<fs::path> targets;
  for (const std::string& f : files) targets.emplace_back(f);
  if (targets.empty()) {
    const fs::path tdir = fs::path(out) / "traces";
    if (fs::is_directory(tdir))
      for (const auto& e : fs::directory_iterator(tdir))
        if (e.path().extension() == ".jsonl") targets.push_back(e.path());
  }
  if (targets.empty()) throw ConfigError("no trace files to verify");
  std::sort(targets.begin(), targets.end());
  for (const fs::path& p : targets) {
    verify_trace_file(p);
    std::cout << "ok: " << p.filename().string() << "\n";
  }
  std::cout << targets.size() << " trace(s) verified\n";
  return 0;
}

// ---- report ------------------------------------------------------------

int cmd_report(const RunConfig& c) {
  const fs::path csv = fs::path(c.out) / "results.csv";
  std::ifstream in(csv);
  if (!in) throw ConfigError("missing results: " + csv.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<ResultRow> rows;
  Experiment exp = c.experiment;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    f.resize(18);
    ResultRow r;
    exp = f[0] == "penalty_lc" ? Experiment::PenaltyLc
                               : Experiment::UnconstrainedQp;
    r.seed = f[4].empty() ? 0 : std::stoull(f[4]);
    r.M = f[5].empty() ? 0.0 : std::stod(f[5]);
    r.m = f[6].empty() ? 0.0 : std::stod(f[6]);
    r.L_f = f[7].empty() ? 0.0 : std::stod(f[7]);
    r.method = f[8];
    r.status = f[9];
    r.objective = f[10].empty() ? 0.0 : std::stod(f[10]);
    r.outer = f[11].empty() ? 0 : std::stol(f[11]);
    r.inner = f[12].empty() ? 0 : std::stol(f[12]);
    r.runtime_s = f[13].empty() ? 0.0 : std::stod(f[13]);
    r.error = f[17];
    rows.push_back(std::move(r));
  }
  write_markdown(fs::path(c.out) / "results.md", exp, rows, c);
  std::cout << "wrote " << (fs::path(c.out) / "results.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order method benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_override;
  std::optional<int> jobs_override;
  std::string verify_override;
  std::vector<std::string> verify_files;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file")
                    ->envname("RAIPP_CONFIG");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed_override,
                    "replace the config's seed list with this single seed")
        ->envname("RAIPP_SEED");
    sub->add_option("--out", out_override, "output directory")
        ->envname("RAIPP_OUT");
    sub->add_option("--jobs", jobs_override, "worker pool size")
        ->envname("RAIPP_JOBS");
    sub->add_option("--verify-level", verify_override,
                    "certificate re-checking: none, cheap or full")
        ->envname("RAIPP_VERIFY_LEVEL")
        ->check(CLI::IsMember({"none", "cheap", "full"}));
  };

  auto* gen = app.add_subcommand("gen", "generate instance archives");
  add_common(gen, true);
  auto* run = app.add_subcommand("run", "run the configured sweep");
  add_common(run, true);
  auto* verify = app.add_subcommand("verify", "check run traces");
  add_common(verify, false);
  verify->add_option("files", verify_files, "trace files (.jsonl)");
  auto* report = app.add_subcommand("report", "rebuild markdown from CSV");
  add_common(report, true);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    if (seed_override) c.seeds = {*seed_override};
    if (!out_override.empty()) c.out = out_override;
    if (jobs_override) c.jobs = *jobs_override;
    if (verify_override == "none") c.verify_level = VerifyLevel::None;
    if (verify_override == "cheap") c.verify_level = VerifyLevel::Cheap;
    if (verify_override == "full") c.verify_level = VerifyLevel::Full;

    if (gen->parsed()) return cmd_gen(c);
    if (run->parsed()) return cmd_run(c);
    if (verify->parsed()) return cmd_verify(verify_files, c.out);
    if (report->parsed()) return cmd_report(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const VerifyFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
