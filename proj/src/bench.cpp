#include "rr/bench.hpp"

#include <charconv>
#include <cmath>
#include <iostream>

#include "rr/attack.hpp"
#include "rr/decode.hpp"
#include "rr/model.hpp"
#include "rr/parallel.hpp"
#include "rr/prior.hpp"
#include "rr/rng.hpp"

namespace rr {

using nlohmann::json;

double OmegaPolicy::omega_for(double agreement) const {
  return automatic ? choose_weight(agreement) : fixed;
}

namespace {

std::vector<int> parse_range(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key: ") + key);
  const json& r = j.at(key);
  if (r.is_number_integer()) return {r.get<int>()};
  if (!r.is_array() || r.size() < 2 || r.size() > 3) {
    throw ConfigError(std::string(key) + " must be [lo, hi] or [lo, hi, step]");
  }
  for (const auto& v : r) {
    if (!v.is_number_integer()) throw ConfigError(std::string(key) + " entries must be integers");
  }
  const int lo = r[0].get<int>();
  const int hi = r[1].get<int>();
  const int step = r.size() == 3 ? r[2].get<int>() : 1;
  if (lo < 1 || hi < lo || step < 1) throw ConfigError(std::string(key) + " is empty or invalid");
  std::vector<int> out;
  for (int v = lo; v <= hi; v += step) out.push_back(v);
  return out;
}

std::vector<int> apply_stride(const std::vector<int>& v, int stride) {
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
  return out;
}

std::optional<double> parse_agreement(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string() && v.get<std::string>() == "none") return std::nullopt;
  if (!v.is_number()) throw ConfigError("agreement entries must be numbers, null or \"none\"");
  return v.get<double>();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for key: ") + key);
  }
}

std::string agreement_label(const std::optional<double>& a) {
  return a ? format_number(*a) : std::string("none");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  const int stride = get_or<int>(j, "stride", 2);
  if (stride < 1) throw ConfigError("stride must be >= 1");
  cfg.m_values = apply_stride(parse_range(j, "m_range"), stride);
  cfg.n_values = apply_stride(parse_range(j, "n_range"), stride);

  if (!j.contains("p_attack")) throw ConfigError("missing key: p_attack");
  const json& pa = j.at("p_attack");
  if (pa.is_number()) {
    cfg.p_attacks = {pa.get<double>()};
  } else if (pa.is_array()) {
    for (const auto& v : pa) {
      if (!v.is_number()) throw ConfigError("p_attack entries must be numbers");
      cfg.p_attacks.push_back(v.get<double>());
    }
  } else {
    throw ConfigError("p_attack must be a number or an array");
  }

  if (j.contains("agreement")) {
    const json& ag = j.at("agreement");
    cfg.agreements.clear();
    if (ag.is_array()) {
      for (const auto& v : ag) cfg.agreements.push_back(parse_agreement(v));
    } else {
      cfg.agreements.push_back(parse_agreement(ag));
    }
  }

  if (j.contains("omega_policy")) {
    const json& op = j.at("omega_policy");
    if (op.is_string() && op.get<std::string>() == "auto") {
      cfg.omega_policy = {};
    } else if (op.is_number()) {
      cfg.omega_policy = {false, op.get<double>()};
    } else {
      throw ConfigError("omega_policy must be \"auto\" or a number");
    }
  }

  cfg.trials = get_or<int>(j, "trials", cfg.trials);
  cfg.horizon = get_or<int>(j, "horizon", cfg.horizon);
  cfg.eps = get_or<double>(j, "eps", cfg.eps);
  cfg.noise = get_or<bool>(j, "noise", cfg.noise);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.rel_tol = get_or<double>(j, "rel_tol", cfg.rel_tol);
  cfg.threads = get_or<int>(j, "threads", cfg.threads);
  cfg.attack_exact_limit = get_or<int>(j, "attack_exact_limit", cfg.attack_exact_limit);
  cfg.attack_starts = get_or<int>(j, "attack_starts", cfg.attack_starts);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (m_values.empty() || n_values.empty()) throw ConfigError("empty (m, n) grid");
  for (int v : m_values) {
    if (v < 1) throw ConfigError("m must be >= 1");
  }
  for (int v : n_values) {
    if (v < 1) throw ConfigError("n must be >= 1");
  }
  if (p_attacks.empty()) throw ConfigError("p_attack list is empty");
  for (double p : p_attacks) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_attack must lie in [0, 1]");
  }
  if (agreements.empty()) throw ConfigError("agreement list is empty");
  for (const auto& a : agreements) {
    if (a && !(*a >= 0.0 && *a <= 1.0)) throw ConfigError("agreement must lie in [0, 1]");
  }
  if (!omega_policy.automatic && !(omega_policy.fixed > 0.0 && omega_policy.fixed <= 1.0)) {
    throw ConfigError("fixed omega must lie in (0, 1]");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (attack_exact_limit < 0 || attack_starts < 1) {
    throw ConfigError("attack_exact_limit must be >= 0 and attack_starts >= 1");
  }
}

int attacked_channels(int m, double p_attack) {
  // The small guard keeps products like 20 * 0.3 from rounding down to 5.
  return static_cast<int>(std::floor(m * p_attack + 1e-9));
}

std::vector<bool> run_trial(const ExperimentConfig& cfg, const CellSpec& cell,
                            std::uint64_t cell_index, int trial, int* numerical_failures) {
  const std::size_t settings = cfg.agreements.size();
  std::vector<bool> ok(settings, false);
  const auto note_failure = [&] {
    if (numerical_failures) ++*numerical_failures;
  };

  const int m = cell.m;
  const int n = cell.n;
  const int T = cfg.horizon;
  const int width = T * m;
  Rng rng(derive_seed(cfg.seed, cell_index, static_cast<std::uint64_t>(trial), 0));

  Matrix h;
  Vector x0(n);
  IndexSet stacked;
  Vector e = Vector::Zero(width);
  try {
    const LtiSystem sys = random_system(m, n, rng, {.horizon = T});
    h = build_observability(sys, T);
    for (int i = 0; i < n; ++i) x0(i) = standard_normal(rng);

    const int k = attacked_channels(m, cell.p_attack);
    const IndexSet step_support = random_subset(m, k, rng);
    stacked = flatten_supports(std::vector<IndexSet>(T, step_support), m);

    if (static_cast<int>(stacked.size()) == width) {
      // Every channel attacked: inject an arbitrary consistent offset.
      Vector shift(n);
      for (int i = 0; i < n; ++i) shift(i) = standard_normal(rng);
      e = h * (cfg.eps * shift / std::max(shift.norm(), 1e-300));
    } else if (!stacked.empty()) {
      SearchOptions so;
      so.exact_limit = cfg.attack_exact_limit;
      so.random_starts = cfg.attack_starts;
      so.seed = derive_seed(cfg.seed, cell_index, static_cast<std::uint64_t>(trial), 0xa77acc);
      so.threads = 1;
      try {
        e = design_attack(h, stacked, cfg.eps, so).e;
      } catch (const RankPreconditionError& rank) {
        // The unattacked rows cannot see this direction: shift along it.
        const Vector x_e = cfg.eps * rank.witness() / rank.witness().norm();
        const Vector hx = h * x_e;
        for (int i : stacked) e(i) = hx(i);
      }
    }

    if (cfg.noise) {
      const IndexSet safe = complement(stacked, width);
      if (!safe.empty()) {
        Vector raw(safe.size());
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = 2.0 * uniform01(rng) - 1.0;
        const double mass = raw.cwiseAbs().sum();
        const double target = uniform01(rng) * cfg.eps;
        if (mass > 0.0) raw *= target / mass;
        for (std::size_t i = 0; i < safe.size(); ++i) e(safe[i]) += raw(static_cast<Eigen::Index>(i));
      }
    }
  } catch (const NumericalError&) {
    note_failure();
    return ok;
  }

  const ObservationWindow window(h, h * x0 + e, T);
  for (std::size_t s = 0; s < settings; ++s) {
    try {
      Estimate est;
      if (!cfg.agreements[s]) {
        est = l1_decode(window);
      } else {
        const double p = *cfg.agreements[s];
        Rng prior_rng(derive_seed(cfg.seed, cell_index, static_cast<std::uint64_t>(trial), 1 + s));
        const SupportPrior prior = simulate_prior(stacked, p, m, T, prior_rng);
        const WeightVector w(prior.stacked, cfg.omega_policy.omega_for(p), width);
        est = weighted_l1_decode(window, w);
      }
      ok[s] = is_successful_recovery(est.x_hat, x0, cfg.rel_tol);
    } catch (const NumericalError&) {
      note_failure();
    }
  }
  return ok;
}

CellOutcome run_cell(const ExperimentConfig& cfg, const CellSpec& cell,
                     std::uint64_t cell_index) {
  const std::size_t settings = cfg.agreements.size();
  const std::size_t chunks = chunk_count(cfg.trials, cfg.threads);
  std::vector<std::vector<int>> hits(chunks, std::vector<int>(settings, 0));
  std::vector<int> failures(chunks, 0);
  parallel_chunks(cfg.trials, cfg.threads, [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t t = b; t < e; ++t) {
      const std::vector<bool> ok =
          run_trial(cfg, cell, cell_index, static_cast<int>(t), &failures[c]);
      for (std::size_t s = 0; s < settings; ++s) hits[c][s] += ok[s] ? 1 : 0;
    }
  });
  CellOutcome out;
  out.trials = cfg.trials;
  out.successes.assign(settings, 0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t s = 0; s < settings; ++s) out.successes[s] += hits[c][s];
    out.numerical_failures += failures[c];
  }
  return out;
}

std::vector<CellSpec> enumerate_cells(const ExperimentConfig& cfg) {
  std::vector<CellSpec> cells;
  for (double p : cfg.p_attacks) {
    for (int n : cfg.n_values) {
      for (int m : cfg.m_values) cells.push_back({std::max(m, n), n, p});
    }
  }
  return cells;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepControl& control) {
  cfg.validate();
  const std::vector<CellSpec> cells = enumerate_cells(cfg);
  SweepResult result;
  result.seed = cfg.seed;
  result.next_cell = control.start_cell;
  for (std::size_t c = control.start_cell; c < cells.size(); ++c) {
    if (control.stop && control.stop->load()) {
      result.complete = false;
      return result;
    }
    const CellSpec& cell = cells[c];
    const CellOutcome outcome = run_cell(cfg, cell, c);
    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < cfg.agreements.size(); ++s) {
      SweepRow row;
      row.m = cell.m;
      row.n = cell.n;
      row.p_attack = cell.p_attack;
      row.agreement = cfg.agreements[s];
      row.omega = row.agreement ? cfg.omega_policy.omega_for(*row.agreement) : 1.0;
      row.trials = outcome.trials;
      row.successes = outcome.successes[s];
      row.ratio = static_cast<double>(row.successes) / row.trials;
      rows.push_back(row);
    }
    result.numerical_failures += outcome.numerical_failures;
    if (control.on_cell) control.on_cell(rows);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    result.next_cell = c + 1;
  }
  return result;
}

void write_sweep_header(std::ostream& out) {
  out << "m,n,p_attack,agreement,omega,trials,successes,ratio\n";
}

void write_sweep_rows(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (const SweepRow& r : rows) {
    out << r.m << ',' << r.n << ',' << format_number(r.p_attack) << ','
        << agreement_label(r.agreement) << ',' << format_number(r.omega) << ',' << r.trials
        << ',' << r.successes << ',' << format_number(r.ratio) << '\n';
  }
}

std::vector<ScurveRow> run_scurve(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_values.front();
  const int m = std::max(cfg.m_values.front(), n);
  std::vector<ScurveRow> rows;
  for (std::size_t i = 0; i < cfg.p_attacks.size(); ++i) {
    const CellSpec cell{m, n, cfg.p_attacks[i]};
    const CellOutcome outcome = run_cell(cfg, cell, i);
    for (std::size_t s = 0; s < cfg.agreements.size(); ++s) {
      ScurveRow row;
      row.p_attack = cell.p_attack;
      row.agreement = cfg.agreements[s];
      row.ratio = static_cast<double>(outcome.successes[s]) / outcome.trials;
      row.stderr_ = binomial_stderr(row.ratio, outcome.trials);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_scurve_csv(std::ostream& out, const std::vector<ScurveRow>& rows) {
  out << "p_attack,setting,ratio,stderr\n";
  for (const ScurveRow& r : rows) {
    out << format_number(r.p_attack) << ',' << agreement_label(r.agreement) << ','
        << format_number(r.ratio) << ',' << format_number(r.stderr_) << '\n';
  }
}

double binomial_stderr(double ratio, int trials) {
  if (trials < 1) return 0.0;
  return std::sqrt(std::max(0.0, ratio * (1.0 - ratio)) / trials);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace rr
