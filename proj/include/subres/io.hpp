#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "subres/fields.hpp"
#include "subres/geometry.hpp"
#include "subres/solver.hpp"

namespace subres::io {

using nlohmann::json;

struct ResonatorSpec {
  std::string kind;  // circle | ellipse | star
  Vec2 center{0.0, 0.0};
  double radius = 1.0;               // circle radius or star base radius
  double p = 1.0, q = 1.0;           // ellipse semi-axes
  double rotation = 0.0;             // ellipse
  double amplitude = 0.0;            // star
  int lobes = 0;                     // star
  BoundaryCurve build() const;
};

struct DeltaSweep {
  double start = 1e-4, stop = 1e-9;
  int points = 6;
  bool log_spaced = true;
  std::vector<double> values() const;
};

struct OutputSelection {
  bool resonances = true, modes = false, fields = false, convergence = false;
  bool timings = false;  // wall-clock timings make reports non-reproducible
};

struct FieldSettings {
  std::optional<GridSpec> grid;  // default: bounding box padded by one diameter
  int nx = 101, ny = 101;        // used when no grid is given
  std::vector<int> branches;     // 1-based ids; empty selects all
  int points_per_curve = 1024;
};

struct ConvergenceSettings {
  int F_ref = 6;
  std::vector<int> F_values{0, 1, 2, 3, 4, 5};
};

struct RunConfig {
  std::vector<ResonatorSpec> resonators;
  double delta = 1e-5;
  std::optional<DeltaSweep> sweep;
  int F = 3;
  std::optional<int> Q;  // empty means auto
  SolverSettings solver;
  OutputSelection outputs;
  FieldSettings fields;
  ConvergenceSettings convergence;

  int resolved_Q(int F_override) const;
  /// First sweep value when a sweep is given.
  double primary_delta() const;
  ResonatorSystem system() const;
  ResonatorSystem system(double delta, int F) const;
};

/// Throws ConfigError with the offending field path (and line/column for syntax errors).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
json to_json(const RunConfig& cfg);

json complex_json(cplx z);
cplx complex_from_json(const json& j, const std::string& where);

/// Structured report: every branch with its seed, effective and refined records.
json report_json(const SolverReport& rep, const ResonatorSystem& sys, bool include_timings = false);

/// Field grid as CSV preceded by a one-line JSON header.
std::string field_csv(const FieldGrid& grid);

/// 1-based branch ids of the final stage ordered by |omega|.
std::vector<const ResonanceBranch*> numbered_branches(const SolverReport& rep);

void write_text(const std::string& path, const std::string& text);

}  // namespace subres::io
