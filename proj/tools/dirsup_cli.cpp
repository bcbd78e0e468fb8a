// Command-line front end: sieve, psi, rho, bounds, esup, experiment.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dirsup/bounds.hpp"
#include "dirsup/dickman.hpp"
#include "dirsup/experiment.hpp"
#include "dirsup/montecarlo.hpp"
#include "dirsup/numbertheory.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kSandwichViolation = 3;
constexpr dirsup::Int kExactPsiLimit = 100'000'000;

std::string report_json(const dirsup::BoundReport& r) {
  using dirsup::format_double;
  std::ostringstream o;
  o << "{\"formula\":\"" << dirsup::to_string(r.formula) << "\",\"N\":" << format_double(r.N)
    << ",\"tau\":" << format_double(r.tau) << ",\"sigma\":" << format_double(r.sigma)
    << ",\"value\":" << format_double(r.value) << ",\"constant\":" << format_double(r.constant);
  if (r.khintchine > 0.0) o << ",\"khintchine\":" << format_double(r.khintchine);
  if (r.thm11_case > 0) o << ",\"case\":" << r.thm11_case;
  for (const auto& [k, v] : r.auxiliary) o << ",\"" << k << "\":" << format_double(v);
  o << ",\"valid\":" << (r.valid ? "true" : "false");
  if (r.degenerate) o << ",\"degenerate\":true";
  if (!r.note.empty()) o << ",\"note\":\"" << r.note << "\"";
  o << "}";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Dirichlet polynomial suprema: smooth numbers, Dickman rho, bounds, Monte Carlo"};
  app.require_subcommand(1);

  dirsup::Int limit = 0;
  bool count_only = false;
  auto* sieve = app.add_subcommand("sieve", "list primes up to a limit");
  sieve->add_option("--limit", limit, "sieve limit (>= 2)")->required();
  sieve->add_flag("--count", count_only, "print pi(limit) only");

  dirsup::Int n = 0, m = 0;
  bool exact = false, dickman = false, members = false;
  auto* psi = app.add_subcommand("psi", "count M-smooth integers in [2, N]");
  psi->add_option("--n", n)->required();
  psi->add_option("--m", m)->required();
  psi->add_flag("--exact", exact, "exact count (default)");
  psi->add_flag("--dickman", dickman, "print N rho(log N / log M) instead");
  psi->add_flag("--members", members, "list S(N, M)");

  double u = 0.0, u_max = 50.0;
  bool log_space = false;
  auto* rho = app.add_subcommand("rho", "Dickman function");
  rho->add_option("--u", u)->required();
  rho->add_option("--u-max", u_max, "table range");
  rho->add_flag("--log", log_space, "print log rho(u)");

  std::size_t tau = 0;
  double sigma = 0.0;
  double psi_star = -1.0;
  auto* bounds = app.add_subcommand("bounds", "evaluate the bound formulas at (N, tau, sigma)");
  bounds->add_option("--n", n)->required();
  bounds->add_option("--tau", tau)->required();
  bounds->add_option("--sigma", sigma)->default_val(0.0);
  bounds->add_option("--psi-star", psi_star, "override Psi*(N/p_tau, p_{tau/2})");

  std::string method = "z-exact";
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  dirsup::EstimateOptions options;
  auto* esup = app.add_subcommand("esup", "Monte Carlo estimate of E sup over E_tau(N)");
  esup->add_option("--n", n)->required();
  esup->add_option("--tau", tau)->required();
  esup->add_option("--sigma", sigma)->default_val(0.0);
  esup->add_option("--method", method)->check(CLI::IsMember({"torus-grid", "z-exact", "line-grid"}));
  esup->add_option("--reps", reps)->default_val(100);
  esup->add_option("--seed", seed)->default_val(0);
  esup->add_option("--grid-budget", options.grid_budget)->default_val(options.grid_budget);
  esup->add_option("--refine-steps", options.refine_steps)->default_val(options.refine_steps);
  esup->add_option("--threads", threads)->default_val(1);

  std::string config_path;
  auto* experiment = app.add_subcommand("experiment", "run an experiment grid from a JSON config");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--threads", threads)->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*sieve) {
      const dirsup::PrimeTable table(limit);
      if (count_only) {
        std::cout << table.size() << '\n';
      } else {
        for (std::size_t i = 0; i < table.size(); ++i) std::cout << (i ? " " : "") << table.primes()[i];
        std::cout << '\n';
      }
    } else if (*psi) {
      if (exact && dickman) throw std::invalid_argument("--exact and --dickman are exclusive");
      if (dickman) {
        const dirsup::DickmanTable table(u_max);
        std::cout << dirsup::format_double(static_cast<double>(n) * dirsup::psi_star_dickman(n, m, table)) << '\n';
      } else if (members) {
        const auto set = dirsup::smooth_set(n, m);
        for (std::size_t i = 0; i < set.members.size(); ++i) std::cout << (i ? " " : "") << set.members[i];
        std::cout << '\n';
      } else {
        std::cout << dirsup::psi_count(n, m) << '\n';
      }
    } else if (*rho) {
      const dirsup::DickmanTable table(std::max(u_max, std::ceil(u)));
      std::cout << dirsup::format_double(log_space ? table.log_rho(u) : table.rho(u)) << '\n';
    } else if (*bounds) {
      if (n > kExactPsiLimit) throw std::invalid_argument("bounds needs N <= 1e8 for exact counts");
      const dirsup::PrimeTable table(n);
      if (tau < 1 || tau > table.size()) throw std::invalid_argument("tau must lie in [1, pi(N)]");
      const auto N = static_cast<double>(n);
      const auto t = static_cast<double>(tau);
      const double lower_psi = psi_star >= 0.0 ? psi_star : dirsup::psi_star_lower_exact(n, tau, table);
      const double upper_psi = dirsup::psi_star_upper_exact(n, tau, table);
      std::cout << report_json(dirsup::upper_thm11(N, t, sigma)) << '\n';
      std::cout << report_json(dirsup::lower_thm11(N, t, sigma, lower_psi)) << '\n';
      const auto [lo12, up12] = dirsup::bounds_thm12(N, t, sigma, lower_psi, upper_psi);
      std::cout << report_json(lo12) << '\n' << report_json(up12) << '\n';
      std::cout << report_json(dirsup::l1_bound(n, tau, sigma, table)) << '\n';
    } else if (*esup) {
      const dirsup::PrimeTable table(std::max<dirsup::Int>(n, 2));
      const auto spec = dirsup::DirichletSpec::on_e_tau(n, tau, sigma, table);
      options.threads = threads;
      const auto rec = dirsup::estimate_esup(spec, tau, dirsup::parse_method(method), reps, seed, options);
      std::cout << dirsup::to_json_line(rec) << '\n';
      if (rec.violations > 0) {
        std::cerr << "sandwich violated in " << rec.violations << " draws\n";
        return kSandwichViolation;
      }
    } else if (*experiment) {
      const auto config = dirsup::ExperimentConfig::load(config_path);
      const auto rows = dirsup::run_experiment(config, threads);
      std::ostringstream payload;
      try {
        dirsup::write_rows(payload, rows, config.format);
      } catch (const dirsup::SandwichViolation& v) {
        std::cerr << "sandwich violated: " << dirsup::to_json_line(v.row()) << '\n';
        return kSandwichViolation;
      }
      if (config.output.empty()) {
        std::cout << payload.str();
      } else {
        std::ofstream out(config.output);
        if (!out) throw std::runtime_error("cannot write '" + config.output + "'");
        out << payload.str();
      }
      if (!config.plot_output.empty()) {
        std::ofstream plot(config.plot_output);
        if (!plot) throw std::runtime_error("cannot write '" + config.plot_output + "'");
        dirsup::write_plot_data(plot, rows);
      }
    }
  } catch (const dirsup::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
