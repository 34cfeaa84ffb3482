#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rr/common.hpp"

namespace rr {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How the weighted decoder picks omega for a given agreement setting.
struct OmegaPolicy {
  bool automatic = true;  // choose_weight(agreement)
  double fixed = 1.0;

  double omega_for(double agreement) const;
};

/// Parameters of one Monte Carlo experiment. Every (m, n, p_attack) cell
/// runs `trials` draws; each draw is decoded once per agreement setting
/// (std::nullopt = plain l1 decoder, no prior), so settings are compared on
/// identical systems and attacks.
struct ExperimentConfig {
  std::vector<int> m_values;
  std::vector<int> n_values;
  std::vector<double> p_attacks;
  std::vector<std::optional<double>> agreements{std::nullopt};
  OmegaPolicy omega_policy;
  int trials = 500;
  int horizon = 1;
  double eps = 1.0;
  bool noise = false;
  std::uint64_t seed = 1;
  double rel_tol = 1e-3;
  int threads = 0;
  /// Attacked supports up to this size get the exhaustive sign-pattern
  /// search; larger ones use local ascent with `attack_starts` restarts.
  int attack_exact_limit = 4;
  int attack_starts = 2;

  /// Keys: m_range, n_range ([lo, hi] or [lo, hi, step]), stride,
  /// p_attack (number or array), agreement (null, number or array with
  /// nulls), omega_policy ("auto" or number), trials, horizon, eps, seed,
  /// rel_tol; optional noise, threads, attack_exact_limit, attack_starts.
  /// Throws ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);

  void validate() const;
};

struct CellSpec {
  int m = 0;  // already max(m, n)
  int n = 0;
  double p_attack = 0.0;
};

struct CellOutcome {
  int trials = 0;
  std::vector<int> successes;  // one per agreement setting
  int numerical_failures = 0;  // decoder/attack failures, scored unsuccessful
};

/// Attacked channels per step: floor(m * p_attack).
int attacked_channels(int m, double p_attack);

/// Success of every agreement setting on trial `trial` of cell `cell_index`.
/// The trial stream is derived from (seed, cell_index, trial) only.
std::vector<bool> run_trial(const ExperimentConfig& cfg, const CellSpec& cell,
                            std::uint64_t cell_index, int trial,
                            int* numerical_failures = nullptr);

CellOutcome run_cell(const ExperimentConfig& cfg, const CellSpec& cell,
                     std::uint64_t cell_index);

/// Cells in evaluation order: p_attack outermost, then n, then m.
std::vector<CellSpec> enumerate_cells(const ExperimentConfig& cfg);

struct SweepRow {
  int m = 0;
  int n = 0;
  double p_attack = 0.0;
  std::optional<double> agreement;
  double omega = 1.0;
  int trials = 0;
  int successes = 0;
  double ratio = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::size_t next_cell = 0;
  bool complete = true;
  int numerical_failures = 0;
};

struct SweepControl {
  std::size_t start_cell = 0;
  /// Polled between cells; when set the sweep returns with complete=false.
  const std::atomic<bool>* stop = nullptr;
  /// Called with the rows of each finished cell, in order.
  std::function<void(const std::vector<SweepRow>&)> on_cell;
};

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepControl& control = {});

void write_sweep_header(std::ostream& out);
void write_sweep_rows(std::ostream& out, const std::vector<SweepRow>& rows);

struct ScurveRow {
  double p_attack = 0.0;
  std::optional<double> agreement;
  double ratio = 0.0;
  double stderr_ = 0.0;
};

/// One point per (p_attack, setting) for the first (m, n) of the config.
std::vector<ScurveRow> run_scurve(const ExperimentConfig& cfg);

void write_scurve_csv(std::ostream& out, const std::vector<ScurveRow>& rows);

/// Binomial standard error sqrt(r (1 - r) / trials).
double binomial_stderr(double ratio, int trials);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace rr
