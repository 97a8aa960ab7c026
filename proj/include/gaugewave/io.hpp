#pragma once

#include <string>
#include <vector>

#include "gaugewave/electrodynamics.hpp"
#include "gaugewave/minimizer.hpp"
#include "gaugewave/nonlinearity.hpp"

namespace gw {

/// Echo of a nonlinearity for run records and reconstruction.
struct ModelEcho {
  std::string family = "saturable";
  double m0 = 1.0;
  double s0 = 1.0;
  double p_growth = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::string table_path;  // when family == tabulated
};

ModelEcho echo_model(const NonlinearityModel& model, const std::string& table_path = "");
NonlinearityModel model_from_echo(const ModelEcho& echo);

/// Self-describing solution container: run record (config + model echo +
/// summary + checks + artifact paths) plus the grid and field arrays.
/// Serialized as canonical JSON: fixed key order, 17 significant digits.
/// save(load(x)) is byte-identical to save(x).
struct SolutionDocument {
  std::string format = "gaugewave-solution";
  std::string tool_version;
  SolverConfig config;
  ModelEcho model;
  double omega2 = 0.0;
  double omega2_pairing = 0.0;
  double sigma2 = 0.0;
  double J = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::string status;
  double rayleigh_min = 0.0;
  double lambda_drift_log10 = 0.0;
  std::vector<SolutionCheck> checks;
  std::vector<std::string> artifact_paths;
  int n_points = 0;
  double r_max = 0.0;
  std::vector<double> u;
  std::vector<double> phi;
};

SolutionDocument make_document(const SolverConfig& config, const ModelEcho& model,
                               const SolitaryWaveSolution& sol);

/// Rebuilds the field-level solution bundle from a document.
SolitaryWaveSolution solution_from_document(const SolutionDocument& doc);

void save_solution(const SolutionDocument& doc, const std::string& path);
SolutionDocument load_solution(const std::string& path);
std::string solution_to_string(const SolutionDocument& doc);

/// Profile CSV: header r,u,phi,energy_density; LF endings, '.' decimal.
void write_profile_csv(const std::string& path, const SolitaryWaveSolution& sol,
                       const NonlinearityModel& model);

struct SweepRow {
  double q = 0.0;
  double omega2 = 0.0;
  double J = 0.0;
  double residual = 0.0;
  bool converged = false;
};

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

/// Deterministic standalone SVG line plot (no plotting runtime).
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

/// Chunked binary frame container: text header, then per-field blocks of
/// little-endian doubles, x1 fastest.
void save_frame(const CartesianFieldFrame& frame, const std::string& path);
CartesianFieldFrame load_frame(const std::string& path);

std::string format_g17(double v);

}  // namespace gw
