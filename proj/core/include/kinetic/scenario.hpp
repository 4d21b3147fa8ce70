#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "kinetic/time_integrator.hpp"

namespace kinetic {

enum class ScenarioKind { shock_tube, homogeneous, free_transport };
enum class CollisionModel { boltzmann, bgk, off };

/// Full description of a run. Parsed from key=value text; every field has a
/// recorded default except the scenario kind, which is required.
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::shock_tube;
  double x_left = -1.0;
  double x_right = 1.0;
  int elements = 8;
  int order_x = 2;
  int order_v = 3;
  CollisionModel collision = CollisionModel::bgk;
  double beta = 0.0;
  double kn = 1.0;
  /// Step size; 0 selects the advective CFL bound of the initial frame.
  double tau = 0.0;
  double t_end = 0.1;
  Scheme scheme = Scheme::frame_euler;
  double smoothing_c = 25.0;
  bool conservation_fix = true;
  bool fixed_frame = false;
  int frame_update_every = 1;
  /// Snapshot times; empty selects {t_end}.
  std::vector<double> snapshots;
  std::string output_dir = "out";
  int plot_points = 200;
};

/// Applies one key=value setting; unknown keys, malformed values, and
/// out-of-range values throw std::invalid_argument naming the key.
void set_config_value(ScenarioConfig& config, const std::string& key,
                      const std::string& value);

/// Parses key=value lines (one per line, `#` starts a comment). Errors name
/// the offending line; an empty file reports the required keys.
ScenarioConfig parse_config(const std::string& text);

/// Cross-field checks (diaphragm alignment, collisionless free transport,
/// snapshot times within the run). Throws std::invalid_argument.
void validate_config(const ScenarioConfig& config);

/// Library version string recorded in run manifests.
const char* version();

/// Macroscopic fields sampled on a uniform grid of plot points.
struct SnapshotRow {
  double x;
  double rho;
  double V1;
  double E;
  double p;
  double T;
  double q1;
  double ansatz_V1;
  double ansatz_T;
};

/// Samples the represented moments and the frame uniformly across the
/// domain (end points included).
std::vector<SnapshotRow> sample_fields(const DGSpace& space,
                                       const VelocityBasis& basis,
                                       const AnsatzFrame& frame,
                                       const State& c, int points);

/// Writes one CSV snapshot (header x,rho,V1,E,p,T,q1,ansatz_V1,ansatz_T,
/// %.17g values). Throws std::runtime_error with the path on I/O failure.
void write_snapshot(const std::vector<SnapshotRow>& rows,
                    const std::string& path);

/// Outcome of a scenario run.
struct RunSummary {
  int steps = 0;
  double t_final = 0.0;
  double tau_effective = 0.0;
  StepReport last;
  Eigen::Matrix<double, 5, 1> totals_initial =
      Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::Matrix<double, 5, 1> totals_final =
      Eigen::Matrix<double, 5, 1>::Zero();
  std::vector<std::string> snapshot_files;
  std::string manifest_file;
};

/// Builds the discretization for `config`, runs it to t_end, and writes the
/// manifest plus one snapshot at t=0 and at every scheduled time.
RunSummary run_scenario(const ScenarioConfig& config);

}  // namespace kinetic
