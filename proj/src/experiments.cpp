#include "lsgd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lsgd/errors.hpp"
#include "lsgd/io.hpp"

namespace lsgd {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::size_t radius_count(const PolarGrid& g) {
  return static_cast<std::size_t>(std::floor((g.r_max - g.r_min) / g.r_step + 1e-9)) + 1;
}

std::size_t theta_count(const PolarGrid& g) {
  const double span = (g.theta_max_deg - g.theta_min_deg) / g.theta_step_deg;
  return static_cast<std::size_t>(std::ceil(span - 1e-9));
}

FieldRow run_cell(const QuadraticObjective& objective, double r, double theta_deg,
                  const RunConfig& cfg, const SigmaSchedule& sched) {
  FieldRow row;
  row.r = r;
  row.theta_deg = theta_deg;
  const double t = theta_deg * kDegToRad;
  row.x0 = {r * std::cos(t), r * std::sin(t)};
  try {
    const RunResult res = run(objective, Vector{row.x0[0], row.x0[1]}, cfg, sched);
    row.final_distance = res.final_point.norm();
    switch (res.status) {
      case RunStatus::ReachedStationary:
        row.status = CellStatus::ReachedStationary;
        break;
      case RunStatus::MaxIters:
        row.status = CellStatus::MaxIters;
        break;
      case RunStatus::Escaped:
        row.status = CellStatus::Escaped;
        break;
    }
  } catch (const NumericError&) {
    row.final_distance = std::numeric_limits<double>::quiet_NaN();
    row.status = CellStatus::Failed;
  }
  return row;
}

}  // namespace

void PolarGrid::validate() const {
  if (!(r_min > 0.0)) throw DomainError("PolarGrid: r_min must be positive");
  if (!(r_step > 0.0)) throw DomainError("PolarGrid: r_step must be positive");
  if (!(r_max >= r_min)) throw DomainError("PolarGrid: r_max must be at least r_min");
  if (!(theta_step_deg > 0.0)) throw DomainError("PolarGrid: theta step must be positive");
  if (!(theta_max_deg > theta_min_deg)) throw DomainError("PolarGrid: empty theta range");
  if (theta_max_deg - theta_min_deg > 360.0 + 1e-9)
    throw DomainError("PolarGrid: theta range exceeds 360 degrees");
  if (!std::isfinite(r_max) || !std::isfinite(theta_max_deg) || !std::isfinite(theta_min_deg))
    throw DomainError("PolarGrid: non-finite bound");
}

std::vector<double> PolarGrid::radii() const {
  validate();
  std::vector<double> out(radius_count(*this));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r_min + static_cast<double>(i) * r_step;
  return out;
}

std::vector<double> PolarGrid::thetas_deg() const {
  validate();
  std::vector<double> out(theta_count(*this));
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = theta_min_deg + static_cast<double>(j) * theta_step_deg;
  return out;
}

std::string to_string(CellStatus status) {
  switch (status) {
    case CellStatus::ReachedStationary:
      return "ReachedStationary";
    case CellStatus::MaxIters:
      return "MaxIters";
    case CellStatus::Escaped:
      return "Escaped";
    case CellStatus::Failed:
      return "failed";
  }
  return "failed";
}

CellStatus parse_cell_status(const std::string& text) {
  for (auto s : {CellStatus::ReachedStationary, CellStatus::MaxIters, CellStatus::Escaped,
                 CellStatus::Failed})
    if (to_string(s) == text) return s;
  throw DomainError("unknown cell status '" + text + "'");
}

FieldSummary summarize(const DistanceField& field) {
  FieldSummary s;
  s.cells = field.rows.size();
  const FieldRow* best = nullptr;
  double max_d = -1.0;
  double min_d = std::numeric_limits<double>::infinity();
  for (const FieldRow& row : field.rows) {
    if (row.status == CellStatus::Failed) {
      ++s.failed_cells;
      continue;
    }
    min_d = std::min(min_d, row.final_distance);
    max_d = std::max(max_d, row.final_distance);
  }
  if (s.failed_cells == s.cells) throw DomainError("summarize: no successful cells");
  for (const FieldRow& row : field.rows) {
    if (row.status == CellStatus::Failed) continue;
    if (row.final_distance <= min_d * (1.0 + kArgminTieRel)) {
      best = &row;
      break;
    }
  }
  s.min_distance = min_d;
  s.max_distance = max_d;
  s.argmin_r = best->r;
  s.argmin_theta_deg = best->theta_deg;
  return s;
}

std::size_t rows_below(const DistanceField& field, double threshold) {
  return static_cast<std::size_t>(std::count_if(field.rows.begin(), field.rows.end(), [&](const FieldRow& r) {
    return r.status != CellStatus::Failed && r.final_distance < threshold;
  }));
}

std::string optimizer_name(const SigmaSchedule& sched) {
  const bool plain = sched.kind() == SigmaSchedule::Kind::Constant && sched.sigma0() == 0.0;
  return plain ? "gd" : "mlsgd";
}

RunConfig fixed_iterations_config(double eta, std::size_t iterations) {
  RunConfig cfg;
  cfg.eta = eta;
  cfg.max_iters = iterations;
  cfg.eps_stationary = 0.0;
  cfg.escape_radius = std::numeric_limits<double>::infinity();
  cfg.record_trajectory = false;
  return cfg;
}

DistanceField sweep(const QuadraticObjective& objective, const PolarGrid& grid,
                    const RunConfig& cfg, const SigmaSchedule& sched, unsigned threads) {
  if (objective.dim() != 2) throw DomainError("sweep: polar sweeps need a 2-dimensional objective");
  if (cfg.record_trajectory) throw DomainError("sweep: trajectory recording is not supported");
  const auto radii = grid.radii();
  const auto thetas = grid.thetas_deg();

  DistanceField field;
  field.meta = {optimizer_name(sched), cfg.eta, cfg.max_iters, sched.describe(), objective.describe()};
  field.rows.resize(radii.size() * thetas.size());

  const std::size_t total = field.rows.size();
  auto fill = [&](std::size_t idx) {
    const std::size_t ri = idx / thetas.size();
    const std::size_t ti = idx % thetas.size();
    field.rows[idx] = run_cell(objective, radii[ri], thetas[ti], cfg, sched);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) fill(i);
    return field;
  }

  // Workers claim fixed-size chunks; each row slot is written by exactly one
  // worker, so the output order is the grid order.
  constexpr std::size_t kChunk = 1024;
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= total) return;
        const std::size_t end = std::min(total, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) fill(i);
      }
    });
  }
  pool.clear();
  return field;
}

TwoScaleResult two_scale_search(const QuadraticObjective& objective, const PolarGrid& coarse,
                                double refine_halfwidth_deg, double fine_step_deg,
                                const RunConfig& cfg, const SigmaSchedule& sched, unsigned threads) {
  if (!(refine_halfwidth_deg > 0.0)) throw DomainError("two_scale_search: halfwidth must be positive");
  if (!(fine_step_deg > 0.0)) throw DomainError("two_scale_search: fine step must be positive");
  TwoScaleResult out;
  out.coarse = sweep(objective, coarse, cfg, sched, threads);
  out.coarse_summary = summarize(out.coarse);

  PolarGrid fine;
  fine.r_min = fine.r_max = out.coarse_summary.argmin_r;
  fine.r_step = coarse.r_step;
  fine.theta_min_deg = out.coarse_summary.argmin_theta_deg - refine_halfwidth_deg;
  // Half a step past the right end makes the interval closed.
  fine.theta_max_deg = out.coarse_summary.argmin_theta_deg + refine_halfwidth_deg + 0.5 * fine_step_deg;
  fine.theta_step_deg = fine_step_deg;
  out.fine = sweep(objective, fine, cfg, sched, threads);
  out.summary = summarize(out.fine);
  return out;
}

bool RateReport::any_violation() const noexcept {
  return std::any_of(trials.begin(), trials.end(), [](const RateTrial& t) { return t.violated; });
}

RateReport rate_check(const QuadraticObjective& objective, std::size_t trials, double eps,
                      const SigmaSchedule& sched, std::uint64_t seed) {
  if (!(eps > 0.0)) throw DomainError("rate_check: eps must be positive");
  const std::size_t n = objective.dim();
  const auto eig = sym_eigendecompose(objective.hessian_factor());
  const double bnorm = objective.hessian_factor().frobenius_norm();
  if (!(eig.back().value > 1e-12 * bnorm))
    throw DomainError("rate_check: B must be positive definite");

  RateReport report;
  report.ell = objective.scale_c() * eig.front().value;
  report.eta = 1.0 / report.ell;
  report.schedule_bound = sched.bound();
  const double coef = descent_coefficient(report.schedule_bound, report.ell);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (std::size_t t = 0; t < trials; ++t) {
    Vector dir(n);
    do {
      for (std::size_t i = 0; i < n; ++i) dir[i] = normal(rng);
    } while (dir.norm() == 0.0);
    const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(n));
    const Vector x0 = (radius / dir.norm()) * dir;

    RateTrial trial;
    const double f0 = objective.eval_value(x0);
    trial.bound = iteration_bound(report.schedule_bound, report.ell, f0, 0.0, eps);

    RunConfig cfg;
    cfg.eta = report.eta;
    cfg.eps_stationary = eps;
    cfg.escape_radius = std::numeric_limits<double>::infinity();
    cfg.max_iters = static_cast<std::size_t>(std::ceil(trial.bound)) + 10;
    cfg.record_trajectory = true;
    const RunResult res = run(objective, x0, cfg, sched);

    trial.reached = res.status == RunStatus::ReachedStationary;
    trial.empirical_iters = res.iterations_used;
    trial.ratio = trial.bound > 0.0 ? static_cast<double>(trial.empirical_iters) / trial.bound : 0.0;
    trial.violated = !trial.reached || static_cast<double>(trial.empirical_iters) > trial.bound;

    trial.worst_descent_gap = -std::numeric_limits<double>::infinity();
    const auto& traj = *res.trajectory;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      const double gap = objective.eval_value(traj[k + 1]) - objective.eval_value(traj[k]) +
                         coef * res.grad_norms[k] * res.grad_norms[k];
      trial.worst_descent_gap = std::max(trial.worst_descent_gap, gap);
    }
    if (traj.size() < 2) trial.worst_descent_gap = 0.0;
    report.trials.push_back(trial);
  }
  return report;
}

std::string format_csv(const DistanceField& field) {
  std::ostringstream out;
  out << "# optimizer: " << field.meta.optimizer << "\n";
  out << "# eta: " << io::format_double(field.meta.eta) << "\n";
  out << "# iters: " << field.meta.iterations << "\n";
  out << "# schedule: " << field.meta.schedule << "\n";
  out << "# objective: " << field.meta.objective << "\n";
  out << "r,theta_deg,x0_0,x0_1,final_distance,status\n";
  for (const FieldRow& row : field.rows) {
    out << io::format_double(row.r) << ',' << io::format_double(row.theta_deg) << ','
        << io::format_double(row.x0[0]) << ',' << io::format_double(row.x0[1]) << ','
        << io::format_double(row.final_distance) << ',' << to_string(row.status) << '\n';
  }
  return out.str();
}

void emit_csv(const DistanceField& field, const std::filesystem::path& path) {
  io::write_file_atomic(path, format_csv(field));
}

DistanceField parse_csv(const std::string& text) {
  DistanceField field;
  std::istringstream lines(text);
  bool header_seen = false;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = colon + 2 <= line.size() ? line.substr(colon + 2) : "";
      if (key == "optimizer") field.meta.optimizer = value;
      else if (key == "eta") field.meta.eta = io::parse_double(value);
      else if (key == "iters") field.meta.iterations = static_cast<std::size_t>(io::parse_double(value));
      else if (key == "schedule") field.meta.schedule = value;
      else if (key == "objective") field.meta.objective = value;
      continue;
    }
    if (!header_seen) {
      if (line != "r,theta_deg,x0_0,x0_1,final_distance,status")
        throw DomainError("parse_csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream cs(line);
    for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw DomainError("parse_csv: expected 6 columns in '" + line + "'");
    FieldRow row;
    row.r = io::parse_double(cells[0]);
    row.theta_deg = io::parse_double(cells[1]);
    row.x0 = {io::parse_double(cells[2]), io::parse_double(cells[3])};
    row.final_distance = io::parse_double(cells[4]);
    row.status = parse_cell_status(cells[5]);
    field.rows.push_back(row);
  }
  if (!header_seen) throw DomainError("parse_csv: missing header");
  return field;
}

std::string summary_json(const FieldSummary& summary) {
  nlohmann::json j;
  j["min_distance"] = summary.min_distance;
  j["argmin_r"] = summary.argmin_r;
  j["argmin_theta_deg"] = summary.argmin_theta_deg;
  j["max_distance"] = summary.max_distance;
  j["failed_cells"] = summary.failed_cells;
  return j.dump(2) + "\n";
}

}  // namespace lsgd
