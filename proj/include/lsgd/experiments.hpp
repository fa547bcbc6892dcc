#pragma once

// Exhaustive polar-grid searches over 2-D starting points and the empirical
// convergence-rate check.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lsgd/optimizers.hpp"
#include "lsgd/quadratic.hpp"

namespace lsgd {

/// Starting points x0 = r (cos theta, sin theta). Radii run r_min, r_min +
/// r_step, ... up to r_max inclusive; angles (degrees) run theta_min,
/// theta_min + step, ... strictly below theta_max.
struct PolarGrid {
  double r_min = 0.1;
  double r_max = 1.0;
  double r_step = 0.1;
  double theta_min_deg = -180.0;
  double theta_max_deg = 180.0;
  double theta_step_deg = 1e-3;

  /// Throws DomainError for an invalid or empty grid.
  void validate() const;
  std::vector<double> radii() const;
  std::vector<double> thetas_deg() const;
  std::size_t size() const { return radii().size() * thetas_deg().size(); }
};

enum class CellStatus : std::uint8_t { ReachedStationary, MaxIters, Escaped, Failed };

std::string to_string(CellStatus status);
/// Inverse of to_string; throws DomainError on unknown text.
CellStatus parse_cell_status(const std::string& text);

struct FieldRow {
  double r = 0.0;
  double theta_deg = 0.0;
  std::array<double, 2> x0{};
  /// |x^K|, NaN for failed cells.
  double final_distance = 0.0;
  CellStatus status = CellStatus::MaxIters;
};

struct FieldMetadata {
  std::string optimizer;
  double eta = 0.0;
  std::size_t iterations = 0;
  std::string schedule;
  std::string objective;
};

struct DistanceField {
  FieldMetadata meta;
  std::vector<FieldRow> rows;
};

struct FieldSummary {
  double min_distance = 0.0;
  double argmin_r = 0.0;
  double argmin_theta_deg = 0.0;
  double max_distance = 0.0;
  std::size_t failed_cells = 0;
  std::size_t cells = 0;
};

/// Relative slack under which two distances count as tied for the argmin;
/// ties resolve to the earliest row in grid order. Linear iterations make
/// the field exactly symmetric under theta -> theta + 180.
inline constexpr double kArgminTieRel = 1e-6;

/// Min/argmin/max over non-failed rows. Throws DomainError when every row
/// failed or the field is empty.
FieldSummary summarize(const DistanceField& field);
std::size_t rows_below(const DistanceField& field, double threshold);

/// "gd" for the zero schedule, "mlsgd" otherwise.
std::string optimizer_name(const SigmaSchedule& sched);

/// One run per grid cell, in grid order (radius-major, then angle). Cells
/// are independent; `threads` = 0 uses the hardware concurrency. The result
/// does not depend on the thread count.
DistanceField sweep(const QuadraticObjective& objective, const PolarGrid& grid,
                    const RunConfig& cfg, const SigmaSchedule& sched, unsigned threads = 1);

struct TwoScaleResult {
  DistanceField coarse;
  DistanceField fine;
  FieldSummary coarse_summary;
  FieldSummary summary;
};

/// Coarse sweep, then a fine angular sweep over [theta0 - halfwidth,
/// theta0 + halfwidth] (inclusive) at the coarse argmin radius.
TwoScaleResult two_scale_search(const QuadraticObjective& objective, const PolarGrid& coarse,
                                double refine_halfwidth_deg, double fine_step_deg,
                                const RunConfig& cfg, const SigmaSchedule& sched,
                                unsigned threads = 1);

/// K-step configuration used by the distance-field experiments: no
/// stationarity stop and no escape stop, so final_distance is |x^K|.
RunConfig fixed_iterations_config(double eta, std::size_t iterations);

struct RateTrial {
  std::size_t empirical_iters = 0;
  double bound = 0.0;
  double ratio = 0.0;
  bool reached = false;
  bool violated = false;
  /// max_k of f(x_{k+1}) - f(x_k) + coef |grad f(x_k)|^2; <= 0 when every
  /// step meets the guaranteed decrease.
  double worst_descent_gap = 0.0;
};

struct RateReport {
  double ell = 0.0;
  double eta = 0.0;
  double schedule_bound = 0.0;
  std::vector<RateTrial> trials;

  bool any_violation() const noexcept;
};

/// For a positive-definite objective: eta = 1/ell with ell the largest
/// eigenvalue of c B; random starts in the unit ball; counts iterations until
/// |grad f| <= eps and compares with iteration_bound (f* = 0).
/// Throws DomainError for a B that is not positive definite.
RateReport rate_check(const QuadraticObjective& objective, std::size_t trials, double eps,
                      const SigmaSchedule& sched, std::uint64_t seed = 1);

/// Writes the field as CSV (17 significant digits, `#` metadata lines,
/// header `r,theta_deg,x0_0,x0_1,final_distance,status`). The file appears
/// atomically; throws FileError on I/O failure.
void emit_csv(const DistanceField& field, const std::filesystem::path& path);
std::string format_csv(const DistanceField& field);
/// Parses what format_csv writes. Throws DomainError on malformed input.
DistanceField parse_csv(const std::string& text);

/// JSON with keys min_distance, argmin_r, argmin_theta_deg, max_distance,
/// failed_cells.
std::string summary_json(const FieldSummary& summary);

}  // namespace lsgd
