// rr: command-line front end for certification, decoding, attack design,
// bound evaluation and the Monte Carlo experiments.

#include <atomic>
#include <csignal>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rr/attack.hpp"
#include "rr/bench.hpp"
#include "rr/certify.hpp"
#include "rr/csv_io.hpp"
#include "rr/decode.hpp"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json vec(const rr::Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json report_json(const rr::BoundReport& r) {
  json out{{"kind", rr::to_string(r.kind)},
           {"condition_ok", r.condition_ok},
           {"value", num(r.value)},
           {"note", r.note}};
  const std::pair<const char*, double> fields[] = {
      {"beta", r.beta}, {"delta", r.delta}, {"sigma_min", r.sigma_min}, {"mu1", r.mu1},
      {"mu2", r.mu2},   {"a", r.a},         {"tk", r.tk},               {"eps", r.eps},
      {"omega", r.omega}, {"ppv", r.ppv},   {"rho", r.rho},             {"kappa", r.kappa}};
  for (const auto& [name, v] : fields) {
    if (!std::isnan(v)) out[name] = num(v);
  }
  return out;
}

rr::IndexSet support_arg(const std::string& s) {
  if (std::filesystem::is_regular_file(s)) return rr::read_index_csv(s);
  return rr::parse_index_list(s);
}

rr::ExperimentConfig load_config(const std::string& path, int threads, int trials) {
  std::ifstream in(path);
  if (!in) throw rr::ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw rr::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  rr::ExperimentConfig cfg = rr::ExperimentConfig::from_json(j);
  if (threads >= 0) cfg.threads = threads;
  if (trials > 0) cfg.trials = trials;
  cfg.validate();
  return cfg;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient state recovery under sparse sensor attacks"};
  app.require_subcommand(1);
  int threads = -1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // certify
  auto* certify = app.add_subcommand("certify", "CSP, Row-RIP and uniqueness certificates");
  std::string matrix_path;
  int order = 1;
  int rip_k = 0;
  std::string rip_mode = "effective";
  std::vector<int> uniq;
  std::uint64_t seed = 1;
  certify->add_option("--matrix", matrix_path, "H as headerless CSV")->required();
  certify->add_option("--order", order, "CSP order s")->required();
  certify->add_option("--rip", rip_k, "Also compute delta_k for this k");
  certify->add_option("--rip-mode", rip_mode)->check(CLI::IsMember({"effective", "strict"}));
  certify->add_option("--uniqueness", uniq, "k T: check unique recovery")->expected(2);
  certify->add_option("--seed", seed, "Seed for sampled searches");

  // decode
  auto* decode = app.add_subcommand("decode", "l1 or weighted l1 state recovery");
  std::string y_path, prior_path;
  int horizon = 1;
  double omega = 1.0;
  decode->add_option("--matrix", matrix_path)->required();
  decode->add_option("--y", y_path)->required();
  decode->add_option("--horizon", horizon, "Window length T");
  decode->add_option("--prior", prior_path, "0-based flagged channel indices");
  decode->add_option("--omega", omega, "Weight on flagged channels");

  // attack
  auto* attack = app.add_subcommand("attack", "Design a stealthy attack on a support");
  std::string support_text;
  double eps = 1.0;
  int exact_limit = 18;
  attack->add_option("--matrix", matrix_path)->required();
  attack->add_option("--support", support_text, "0-based rows, e.g. 2,5 or a file")->required();
  attack->add_option("--eps", eps, "Stealth budget")->required();
  attack->add_option("--exact-limit", exact_limit, "Largest support searched exhaustively");
  attack->add_option("--seed", seed);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate an error bound");
  std::string kind;
  double beta = 0.0, sigma_min = 0.0, delta = 0.0, a = 2.0, ppv = 0.5, rho = 1.0;
  std::optional<double> mu1;
  int k = 1;
  bounds->add_option("--kind", kind)->required()->check(CLI::IsMember({"csp", "rip", "weighted"}));
  bounds->add_option("--beta", beta);
  bounds->add_option("--sigma-min", sigma_min);
  bounds->add_option("--eps", eps);
  bounds->add_option("--delta", delta);
  bounds->add_option("--a", a);
  bounds->add_option("--horizon", horizon);
  bounds->add_option("--k", k);
  bounds->add_option("--mu1", mu1);
  bounds->add_option("--omega", omega);
  bounds->add_option("--ppv", ppv);
  bounds->add_option("--rho", rho);

  // surface
  auto* surface = app.add_subcommand("surface", "Weighted bound over an (omega, PPV) grid");
  std::string out_path;
  int steps = 19;
  int tk = 50;
  double s_rho = 1.0, s_sigma = 2.0, s_a = 2.0, s_delta = 0.0;
  eps = 1.0;
  surface->add_option("--out", out_path)->required();
  surface->add_option("--steps", steps, "Interior grid points per axis");
  surface->add_option("--rho", s_rho);
  surface->add_option("--sigma-min", s_sigma);
  surface->add_option("--a", s_a);
  surface->add_option("--tk", tk);
  surface->add_option("--delta", s_delta);
  surface->add_option("--mu1", mu1);
  surface->add_option("--eps", eps);

  // sweep / scurve
  auto* sweep = app.add_subcommand("sweep", "Success-ratio heat map over an (m, n) grid");
  std::string config_path;
  int trials = 0;
  std::size_t start_cell = 0;
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_path)->required();
  sweep->add_option("--trials", trials, "Override trials per cell");
  sweep->add_option("--start-cell", start_cell, "Resume from this cell (appends)");
  auto* scurve = app.add_subcommand("scurve", "Success ratio against attack fraction");
  scurve->add_option("--config", config_path)->required();
  scurve->add_option("--out", out_path)->required();
  scurve->add_option("--trials", trials, "Override trials per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const int worker_threads = threads < 0 ? 0 : threads;

  try {
    if (*certify) {
      const rr::Matrix h = rr::read_matrix_csv(matrix_path);
      rr::CspOptions co;
      co.seed = seed;
      co.threads = worker_threads;
      const rr::CspCertificate c = rr::csp_beta(h, order, co);
      json out{{"csp",
                {{"order", c.order},
                 {"beta", num(c.beta)},
                 {"holds", c.holds()},
                 {"exact", c.exact},
                 {"witness_support", c.witness_support}}}};
      if (rip_k > 0) {
        rr::RipOptions ro;
        ro.seed = seed;
        ro.threads = worker_threads;
        const auto mode = rip_mode == "strict" ? rr::RipMode::kStrict : rr::RipMode::kEffective;
        const rr::RipCertificate r = rr::rip_delta(h, rip_k, mode, ro);
        out["rip"] = {{"order", r.order},
                      {"delta", num(r.delta)},
                      {"mode", rip_mode},
                      {"exact", r.exact},
                      {"witness_support", r.witness_support}};
      }
      if (!uniq.empty()) {
        rr::UniquenessOptions uo;
        uo.seed = seed;
        uo.threads = worker_threads;
        const rr::UniquenessResult u = rr::check_uniqueness(h, uniq[0], uniq[1], uo);
        out["uniqueness"] = {{"k", uniq[0]},
                             {"horizon", uniq[1]},
                             {"unique", u.unique},
                             {"exhaustive", u.exhaustive},
                             {"witness_deletion", u.witness_deletion}};
      }
      print(out);
    } else if (*decode) {
      const rr::Matrix h = rr::read_matrix_csv(matrix_path);
      const rr::ObservationWindow window(h, rr::read_vector_csv(y_path), horizon);
      rr::Estimate est;
      if (prior_path.empty()) {
        est = rr::l1_decode(window);
      } else {
        const rr::WeightVector w(rr::read_index_csv(prior_path), omega, window.rows());
        est = rr::weighted_l1_decode(window, w);
      }
      print({{"x_hat", vec(est.x_hat)},
             {"residual", vec(est.residual)},
             {"objective", num(est.objective)},
             {"weighted", !prior_path.empty()}});
    } else if (*attack) {
      const rr::Matrix h = rr::read_matrix_csv(matrix_path);
      rr::SearchOptions so;
      so.exact_limit = exact_limit;
      so.seed = seed;
      so.threads = worker_threads;
      const rr::AttackDesign d = rr::design_attack(h, support_arg(support_text), eps, so);
      const rr::AlphaBound ab = rr::alpha_bound(h, d.support, eps, d.sigma1);
      print({{"support", d.support},
             {"sigma1", num(d.sigma1)},
             {"exact", d.exact},
             {"eps", num(eps)},
             {"x_e", vec(d.x_e)},
             {"e", vec(d.e)},
             {"alpha", {{"guaranteed", ab.guaranteed},
                        {"value", num(ab.value)},
                        {"sigma_max_support", num(ab.sigma_max_support)},
                        {"sigma_min_complement", num(ab.sigma_min_complement)},
                        {"reason", ab.reason}}}});
    } else if (*bounds) {
      rr::BoundReport r;
      if (kind == "csp") {
        r = rr::bound_csp_error(beta, sigma_min, eps);
      } else if (kind == "rip") {
        r = rr::bound_rip_error({sigma_min, delta, a, horizon, k, eps, mu1});
      } else {
        rr::WeightedBoundInputs in;
        in.mu1 = mu1.value_or(rr::proof_maximal_mu1(sigma_min, delta, a));
        in.omega = omega;
        in.ppv = ppv;
        in.rho = rho;
        in.a = a;
        in.delta = delta;
        in.horizon = horizon;
        in.k = k;
        in.eps = eps;
        if (sigma_min > 0.0) in.sigma_min = sigma_min;
        r = rr::bound_weighted_error(in);
      }
      print(report_json(r));
    } else if (*surface) {
      if (steps < 1) throw rr::ConfigError("--steps must be >= 1");
      rr::SurfaceParams p;
      p.rho = s_rho;
      p.sigma_min = s_sigma;
      p.a = s_a;
      p.tk = tk;
      p.eps = eps;
      p.delta = s_delta;
      p.mu1 = mu1;
      p.omegas = rr::interior_grid(steps, true);
      p.ppvs = rr::interior_grid(steps, false);
      const auto cells = rr::weight_surface(p);
      std::ofstream out(out_path);
      if (!out) throw rr::ConfigError("cannot write " + out_path);
      rr::write_surface_csv(out, cells);
    } else if (*sweep) {
      const rr::ExperimentConfig cfg = load_config(config_path, threads, trials);
      std::ofstream out(out_path, start_cell > 0 ? std::ios::app : std::ios::trunc);
      if (!out) throw rr::ConfigError("cannot write " + out_path);
      if (start_cell == 0) rr::write_sweep_header(out);
      std::signal(SIGINT, on_sigint);
      rr::SweepControl control;
      control.start_cell = start_cell;
      control.stop = &g_stop;
      control.on_cell = [&](const std::vector<rr::SweepRow>& rows) {
        rr::write_sweep_rows(out, rows);
        out.flush();
      };
      const rr::SweepResult res = rr::run_sweep(cfg, control);
      if (!res.complete) {
        out << "# incomplete: resume with --start-cell " << res.next_cell << '\n';
        std::cerr << "interrupted; resume with --start-cell " << res.next_cell << '\n';
        return 130;
      }
      if (res.numerical_failures > 0) {
        std::cerr << res.numerical_failures << " trial decodes failed numerically (scored as "
                  << "unsuccessful)\n";
      }
    } else if (*scurve) {
      const rr::ExperimentConfig cfg = load_config(config_path, threads, trials);
      const auto rows = rr::run_scurve(cfg);
      std::ofstream out(out_path);
      if (!out) throw rr::ConfigError("cannot write " + out_path);
      rr::write_scurve_csv(out, rows);
    }
  } catch (const rr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rr::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rr::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
