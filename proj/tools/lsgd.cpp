// Command-line front end: smoothing solves, optimizer runs, saddle analysis
// and distance-field sweeps.
//
// Exit codes: 0 success, 1 usage, 2 numeric/domain, 3 I/O.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lsgd/errors.hpp"
#include "lsgd/experiments.hpp"
#include "lsgd/io.hpp"
#include "lsgd/optimizers.hpp"
#include "lsgd/quadratic.hpp"
#include "lsgd/saddle.hpp"
#include "lsgd/similar_eigen.hpp"
#include "lsgd/smoothing.hpp"

namespace {

using nlohmann::json;
using namespace lsgd;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& flag, const std::string& why) {
  if (!ok) throw UsageError(flag + ": " + why);
}

// ------------------------------------------------------------- objective

struct ObjectiveFlags {
  std::string kind = "canonical";
  std::size_t n = 2;
  double c = 1.0;
  std::string matrix;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--objective", kind, "Objective kind: canonical or matrix-file")
        ->check(CLI::IsMember({"canonical", "matrix-file"}))
        ->capture_default_str();
    cmd.add_option("--n", n, "Dimension of the canonical objective")->capture_default_str();
    cmd.add_option("--c", c, "Scale c in f(x) = (c/2) x^T B x")->capture_default_str();
    cmd.add_option("--matrix", matrix, "Matrix file for --objective matrix-file (first line n, then n rows)");
  }

  QuadraticObjective build() const {
    require(c > 0.0, "--c", "must be positive");
    if (kind == "canonical") {
      require(n >= 2, "--n", "must be at least 2");
      return canonical_objective(n, c);
    }
    require(!matrix.empty(), "--matrix", "required with --objective matrix-file");
    DenseMatrix b = io::read_matrix_file(matrix);
    require(b.is_symmetric(1e-12), "--matrix", "matrix must be symmetric");
    return QuadraticObjective(std::move(b), c);
  }
};

json vector_json(const Vector& v) { return json(v.entries()); }

// ---------------------------------------------------------------- smooth

struct SmoothCmd {
  std::optional<std::size_t> n;
  double sigma = 0.0;
  std::string input;
  std::string method = "thomas";

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("smooth", "Apply the inverse smoothing operator to a vector");
    cmd->add_option("--n", n, "Expected dimension (checked against the input length)");
    cmd->add_option("--sigma", sigma, "Smoothing parameter sigma >= 0")->capture_default_str();
    cmd->add_option("--input", input, "Vector file, one scalar per line")->required();
    cmd->add_option("--method", method, "Solver: dft, thomas or dense")
        ->check(CLI::IsMember({"dft", "thomas", "dense"}))
        ->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    require(std::isfinite(sigma) && sigma >= 0.0, "--sigma", "must be finite and non-negative");
    const Vector y = io::read_vector_file(input);
    if (n) require(*n == y.size(), "--input", "has " + std::to_string(y.size()) + " entries, expected --n " + std::to_string(*n));
    require(y.size() >= 2, "--input", "needs at least 2 entries");
    const CirculantSmoother s(y.size(), sigma);
    Vector x = method == "dft" ? s.solve_dft(y) : method == "thomas" ? s.solve_thomas(y) : dense_solve(s.dense(), y);
    std::ostringstream out;
    for (std::size_t i = 0; i < x.size(); ++i) out << io::format_double(x[i]) << '\n';
    std::cout << out.str();
  }
};

// -------------------------------------------------------------- optimize

struct OptimizeCmd {
  ObjectiveFlags objective;
  std::string x0;
  double eta = 0.1;
  std::size_t iters = 10000;
  double eps = 0.0;
  double escape_radius = 1e3;
  std::string schedule = "ratio";
  std::size_t offset = 0;
  std::string solver = "thomas";
  std::string trajectory;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("optimize", "Run GD / LSGD / mLSGD and print the result as JSON");
    objective.add_to(*cmd);
    cmd->add_option("--x0", x0, "Starting point file, one scalar per line")->required();
    cmd->add_option("--eta", eta, "Step size")->capture_default_str();
    cmd->add_option("--iters", iters, "Maximum number of iterations")->capture_default_str();
    cmd->add_option("--eps", eps, "Stop when |grad f| <= eps")->capture_default_str();
    cmd->add_option("--escape-radius", escape_radius, "Stop when |x| exceeds this radius")->capture_default_str();
    cmd->add_option("--schedule", schedule, "Sigma schedule: gd, constant:<sigma>, ratio or plateau:<k0>")
        ->capture_default_str();
    cmd->add_option("--schedule-offset", offset, "Counter offset for ratio/plateau schedules")->capture_default_str();
    cmd->add_option("--solver", solver, "Linear solver for A_sigma^{-1}: thomas, dft or paired (reflection-exact)")
        ->check(CLI::IsMember({"thomas", "dft", "paired"}))
        ->capture_default_str();
    cmd->add_option("--trajectory", trajectory, "Write k,x_0..x_{n-1},grad_norm rows to this CSV");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const QuadraticObjective f = objective.build();
    require(eta > 0.0 && std::isfinite(eta), "--eta", "must be positive");
    require(eps >= 0.0, "--eps", "must be non-negative");
    require(escape_radius > 0.0, "--escape-radius", "must be positive");
    SigmaSchedule sched = SigmaSchedule::constant(0.0);
    try {
      sched = SigmaSchedule::parse(schedule, offset);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--schedule: ") + e.what());
    }
    const Vector start = io::read_vector_file(x0);
    require(start.size() == f.dim(), "--x0", "dimension " + std::to_string(start.size()) +
                                                 " does not match the objective (" + std::to_string(f.dim()) + ")");

    RunConfig cfg;
    cfg.eta = eta;
    cfg.max_iters = iters;
    cfg.eps_stationary = eps;
    cfg.escape_radius = escape_radius;
    cfg.record_trajectory = !trajectory.empty();
    cfg.solver = parse_solve_method(solver);
    const RunResult res = lsgd::run(f, start, cfg, sched);

    if (!trajectory.empty()) {
      std::ostringstream csv;
      csv << 'k';
      for (std::size_t i = 0; i < f.dim(); ++i) csv << ",x_" << i;
      csv << ",grad_norm\n";
      for (std::size_t k = 0; k < res.trajectory->size(); ++k) {
        csv << k;
        for (double v : (*res.trajectory)[k].entries()) csv << ',' << io::format_double(v);
        csv << ',' << io::format_double(res.grad_norms[k]) << '\n';
      }
      io::write_file_atomic(trajectory, csv.str());
    }

    json j;
    j["status"] = to_string(res.status);
    j["iterations_used"] = res.iterations_used;
    j["final_point"] = vector_json(res.final_point);
    j["final_distance"] = res.final_point.norm();
    j["final_grad_norm"] = res.final_grad_norm;
    j["schedule"] = sched.describe();
    j["solver"] = solver;
    j["objective"] = f.describe();
    std::cout << j.dump(2) << '\n';
  }
};

// --------------------------------------------------------------- analyze

struct AnalyzeCmd {
  ObjectiveFlags objective;
  std::vector<double> sigmas{0.1, 1.0, 5.0, 50.0};
  std::string report;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("analyze", "Eigenstructure and attraction-region report as JSON");
    objective.add_to(*cmd);
    cmd->add_option("--sigma-list", sigmas, "Comma-separated sigma values")->delimiter(',')->capture_default_str();
    cmd->add_option("--report", report, "Write the JSON report here instead of standard output");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const QuadraticObjective f = objective.build();
    for (double s : sigmas) require(std::isfinite(s) && s >= 0.0, "--sigma-list", "values must be non-negative");
    const std::size_t n = f.dim();
    const bool canonical = f.is_canonical();

    json j;
    j["objective"] = f.describe();
    j["n"] = n;
    j["canonical"] = canonical;

    std::optional<SubspaceBasis> w;
    try {
      w = canonical ? canonical_attraction_basis(n).w : general_attraction_basis(f);
      j["degenerate"] = false;
    } catch (const DegenerateHessianError& e) {
      j["degenerate"] = true;
      j["degenerate_note"] = e.what();
      json checks = json::array();
      for (const auto& p : sym_eigendecompose(f.hessian_factor())) {
        if (std::abs(p.value) > 1e-10 * f.hessian_factor().frobenius_norm()) continue;
        json c;
        c["kernel_direction"] = vector_json(p.vector);
        c["fixed_under_mlsgd"] = degenerate_check(f, p.vector, SigmaSchedule::ratio(), 100);
        checks.push_back(c);
      }
      j["degenerate_check"] = checks;
    }

    bool independent = w.has_value();
    json per_sigma = json::array();
    for (double s : sigmas) {
      const EigenStructure es = eigen_structure(f, s);
      json entry;
      entry["sigma"] = s;
      json values = json::array(), classes = json::array();
      SubspaceBasis sine;
      sine.ambient = n;
      for (const auto& c : es.pairs) {
        values.push_back(c.pair.value);
        classes.push_back(to_string(c.cls));
        if (c.cls == EigenClass::AntisymmetricSine) sine.vectors.push_back(c.pair.vector);
      }
      entry["eigenvalues"] = values;
      entry["classifications"] = classes;
      if (w) {
        // span(W) must stay invariant under A_sigma^{-1} B at every sigma.
        const DenseMatrix a = CirculantSmoother(n, s).dense();
        double worst = 0.0;
        for (const Vector& v : w->vectors) {
          const Vector av = dense_solve(a, f.hessian_factor() * v);
          worst = std::max(worst, (av - w->project(av)).norm());
        }
        entry["w_invariance_residual"] = worst;
        independent = independent && worst <= kPatternTol;
        if (canonical) {
          const double angle = max_principal_angle(sine, *w);
          entry["w_principal_angle"] = angle;
          independent = independent && angle <= 1e-7;
        }
      }
      per_sigma.push_back(entry);
    }
    j["per_sigma"] = per_sigma;
    if (w) {
      j["dim_W"] = w->dim();
      json basis = json::array();
      for (const Vector& v : w->vectors) basis.push_back(vector_json(v));
      j["W_basis"] = basis;
      j["sigma_independent"] = independent;
    }

    const std::string text = j.dump(2) + "\n";
    if (report.empty()) {
      std::cout << text;
    } else {
      io::write_file_atomic(report, text);
    }
  }
};

// ----------------------------------------------------------------- sweep

struct SweepCmd {
  std::string example = "1";
  std::string optimizer = "mlsgd";
  std::string schedule = "ratio";
  std::optional<std::size_t> offset;
  std::string matrix;
  double c = 1.0;
  double eta = 0.1;
  std::size_t iters = 100;
  double r_min = 0.1, r_max = 1.0, r_step = 0.1;
  double coarse_step = 1e-3;
  double fine_step = 1e-5;
  double halfwidth = 1.0;
  std::string out, coarse_out, summary;
  unsigned threads = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Two-scale polar search producing a distance field");
    cmd->add_option("--example", example, "Preset: 1 (x1^2 - x2^2), 2 (x1^2 + 6 x1 x2 + 2 x2^2) or custom")
        ->check(CLI::IsMember({"1", "2", "custom"}))
        ->capture_default_str();
    cmd->add_option("--matrix", matrix, "2x2 matrix file for --example custom");
    cmd->add_option("--c", c, "Scale c for --example custom")->capture_default_str();
    cmd->add_option("--optimizer", optimizer, "gd or mlsgd")
        ->check(CLI::IsMember({"gd", "mlsgd"}))
        ->capture_default_str();
    cmd->add_option("--schedule", schedule, "Sigma schedule used by mlsgd")->capture_default_str();
    cmd->add_option("--schedule-offset", offset,
                    "Counter offset for the schedule (presets: 1, custom: 0)");
    cmd->add_option("--eta", eta, "Step size")->capture_default_str();
    cmd->add_option("--iters", iters, "Iterations K per starting point")->capture_default_str();
    cmd->add_option("--r-min", r_min, "Smallest radius")->capture_default_str();
    cmd->add_option("--r-max", r_max, "Largest radius")->capture_default_str();
    cmd->add_option("--r-step", r_step, "Radius spacing")->capture_default_str();
    cmd->add_option("--coarse-theta-step", coarse_step, "Coarse angular spacing in degrees")->capture_default_str();
    cmd->add_option("--fine-theta-step", fine_step, "Fine angular spacing in degrees")->capture_default_str();
    cmd->add_option("--refine-halfwidth", halfwidth, "Fine search half-width in degrees")->capture_default_str();
    cmd->add_option("--out", out, "CSV file for the fine distance field");
    cmd->add_option("--coarse-out", coarse_out, "CSV file for the coarse distance field");
    cmd->add_option("--summary", summary, "JSON summary file (standard output when omitted)");
    cmd->add_option("--threads", threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::optional<QuadraticObjective> f;
    if (example == "1") {
      f.emplace(canonical_objective(2, 2.0));
    } else if (example == "2") {
      f.emplace(DenseMatrix{{2.0, 6.0}, {6.0, 4.0}}, 1.0, "example 2: x1^2 + 6 x1 x2 + 2 x2^2");
    } else {
      require(!matrix.empty(), "--matrix", "required with --example custom");
      require(c > 0.0, "--c", "must be positive");
      DenseMatrix b = io::read_matrix_file(matrix);
      require(b.rows() == 2, "--matrix", "polar sweeps need a 2x2 matrix");
      require(b.is_symmetric(1e-12), "--matrix", "matrix must be symmetric");
      f.emplace(std::move(b), c);
    }
    const std::size_t off = offset.value_or(example == "custom" ? 0 : 1);
    SigmaSchedule sched = SigmaSchedule::constant(0.0);
    if (optimizer == "mlsgd") {
      try {
        sched = SigmaSchedule::parse(schedule, off);
      } catch (const DomainError& e) {
        throw UsageError(std::string("--schedule: ") + e.what());
      }
    }
    require(eta > 0.0, "--eta", "must be positive");
    require(iters > 0, "--iters", "must be positive");
    PolarGrid grid{r_min, r_max, r_step, -180.0, 180.0, coarse_step};
    try {
      grid.validate();
    } catch (const DomainError& e) {
      throw UsageError(std::string("grid flags: ") + e.what());
    }
    require(fine_step > 0.0, "--fine-theta-step", "must be positive");
    require(halfwidth > 0.0, "--refine-halfwidth", "must be positive");

    const auto res = two_scale_search(*f, grid, halfwidth, fine_step, fixed_iterations_config(eta, iters), sched,
                                      threads);
    if (!out.empty()) emit_csv(res.fine, out);
    if (!coarse_out.empty()) emit_csv(res.coarse, coarse_out);
    const std::string js = summary_json(res.summary);
    if (summary.empty()) {
      std::cout << js;
    } else {
      io::write_file_atomic(summary, js);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplacian-smoothing gradient descent toolkit"};
  app.name("lsgd");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file supplying flag values");

  SmoothCmd smooth;
  OptimizeCmd optimize;
  AnalyzeCmd analyze;
  SweepCmd sweep_cmd;
  smooth.add_to(app);
  optimize.add_to(app);
  analyze.add_to(app);
  sweep_cmd.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "lsgd: usage error: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "lsgd: usage error: " << e.what() << '\n';
    return 1;
  } catch (const FileError& e) {
    std::cerr << "lsgd: i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "lsgd: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
