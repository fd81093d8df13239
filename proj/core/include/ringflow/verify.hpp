#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringflow/config.hpp"

namespace ringflow {

/// One definition per check id: what it asserts and the default
/// threshold. Thresholds are versioned so a report names the table it
/// was judged against; per-run overrides are recorded in the report.
struct CheckDef {
  std::string id;
  std::string property;
  double threshold;
  char comparison; // 'L': pass iff measured <= threshold, 'G': >=
};

/// The versioned defaults table.
const std::vector<CheckDef>& check_definitions();
int thresholds_version();

enum class CheckStatus { pass, fail, skipped };

struct CheckRecord {
  std::string id;       // instance id, e.g. "subharmonic.p8"
  std::string base_id;  // definition id, e.g. "subharmonic"
  double measured = 0;
  double threshold = 0;
  char comparison = 'L';
  CheckStatus status = CheckStatus::skipped;
  std::string note;
};

struct VerificationReport {
  std::string domain;
  std::vector<double> ps;
  double h = 0;
  int seed_count = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, std::string>> environment;

  int count(CheckStatus s) const;
  /// True only when every check passed; skipped checks block success.
  bool all_pass() const;
};

/// Runs the full pipeline over the configured ring and exponent sweep
/// and evaluates every applicable check. Deterministic for a fixed
/// configuration. Stage failures are recorded and the dependent checks
/// are marked skipped, never silently passed.
VerificationReport run_suite(const RunConfig& config);

/// Structured-text rendering with stable key order.
std::string render_report(const VerificationReport& report);
/// Human-readable table.
std::string render_report_table(const VerificationReport& report);

class RidgeGraph;
struct ScalarField;
struct GradientField;

/// Worst increase across ascending levels of the max interpolated
/// speed on the level arc between a pair of adjacent attracting
/// streamlines that never merge. Finite-exponent maxima are divided by
/// the sublevel bound (1/(1-c))^(1/(p-2)) first, since that growth
/// belongs to the approximation, not to the limit problem. Empty when
/// no suitable pair or level exists. The continuum prediction is a
/// non-positive value.
std::optional<double> level_arc_speed_rise(const ScalarField& field,
                                           const GradientField& grad,
                                           const RidgeGraph& ridge,
                                           const std::vector<double>& levels);

} // namespace ringflow
