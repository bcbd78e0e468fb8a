#include "dirsup/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace dirsup {

namespace {

void check_sigma(double sigma) {
  if (!(sigma >= 0.0 && sigma < 0.5)) throw std::invalid_argument("sigma must lie in [0, 1/2)");
}

void check_n_tau(double N, double tau) {
  if (!(N >= 2.0)) throw std::invalid_argument("N must be >= 2");
  if (!(tau >= 1.0 && tau <= N)) throw std::invalid_argument("tau must satisfy 1 <= tau <= N");
}

BoundReport base_report(BoundFormula f, double N, double tau, double sigma, const ConstantPolicy& policy) {
  BoundReport r;
  r.formula = f;
  r.N = N;
  r.tau = tau;
  r.sigma = sigma;
  r.constant = policy.constant;
  return r;
}

}  // namespace

std::string_view to_string(BoundFormula f) {
  switch (f) {
    case BoundFormula::thm11_upper: return "thm11_upper";
    case BoundFormula::thm11_lower: return "thm11_lower";
    case BoundFormula::thm12_lower: return "thm12_lower";
    case BoundFormula::thm12_upper: return "thm12_upper";
    case BoundFormula::l1: return "l1";
    case BoundFormula::prop32_lower: return "prop32_lower";
    case BoundFormula::prop32_upper: return "prop32_upper";
    case BoundFormula::prop34_lower: return "prop34_lower";
    case BoundFormula::prop35_lower: return "prop35_lower";
  }
  return "unknown";
}

int thm11_case(double N, double tau) {
  const double root = std::sqrt(N);
  if (tau >= root) return 1;
  if (tau >= root / std::log(N)) return 2;
  return 3;
}

BoundReport upper_thm11(double N, double tau, double sigma, const ConstantPolicy& policy) {
  check_sigma(sigma);
  check_n_tau(N, tau);
  BoundReport r = base_report(BoundFormula::thm11_upper, N, tau, sigma, policy);
  r.thm11_case = thm11_case(N, tau);
  const double log_n = std::log(N);
  double v = 0.0;
  switch (r.thm11_case) {
    case 1: v = std::pow(N, 0.5 - sigma) * std::sqrt(tau / log_n); break;
    case 2: v = std::pow(N, 0.75 - sigma) / std::sqrt(log_n); break;
    default: v = std::pow(N, 0.5 - sigma) * std::sqrt(tau); break;
  }
  r.value = policy.constant * v;
  return r;
}

BoundReport lower_thm11(double N, double tau, double sigma, double psi_star,
                        const ConstantPolicy& policy) {
  check_sigma(sigma);
  check_n_tau(N, tau);
  if (!(psi_star >= 0.0 && psi_star <= 1.0)) throw std::invalid_argument("psi_star must lie in [0, 1]");
  BoundReport r = base_report(BoundFormula::thm11_lower, N, tau, sigma, policy);
  r.thm11_case = thm11_case(N, tau);
  r.auxiliary["psi_star"] = psi_star;
  if (tau < 2.0) {
    // log tau = 0: the bound carries no information.
    r.degenerate = true;
    r.note = "tau < 2";
    return r;
  }
  r.value = policy.constant * std::pow(N, 0.5 - sigma) * std::sqrt(tau / std::log(tau)) *
            std::sqrt(psi_star);
  return r;
}

GapRatio gap_ratio_thm11(double N, double tau) {
  check_n_tau(N, tau);
  if (tau < 2.0) throw std::invalid_argument("gap ratio needs tau >= 2");
  GapRatio g;
  g.thm11_case = thm11_case(N, tau);
  const double log_n = std::log(N);
  const double upper = upper_thm11(N, tau, 0.0).value;
  const double log_factor = g.thm11_case == 3 ? std::log(tau) : log_n;
  const double lower = std::sqrt(N) * std::sqrt(tau / log_factor);
  g.ratio = upper / lower;
  switch (g.thm11_case) {
    case 1: g.ceiling = 1.0; break;
    case 2: g.ceiling = std::sqrt(log_n); break;
    default: g.ceiling = std::sqrt(std::log(tau)); break;
  }
  return g;
}

bool thm12_valid(double N, double tau) {
  if (N <= std::exp(1.0)) return false;
  const double ll = std::log(std::log(N));
  return std::log(tau) > ll * ll;
}

std::pair<BoundReport, BoundReport> bounds_thm12(double N, double tau, double sigma,
                                                 double psi_star_lower, double psi_star_upper,
                                                 const ConstantPolicy& policy) {
  check_sigma(sigma);
  check_n_tau(N, tau);
  if (!(psi_star_upper >= 0.0 && psi_star_upper <= 1.0)) {
    throw std::invalid_argument("psi_star_upper must lie in [0, 1]");
  }
  const bool valid = thm12_valid(N, tau);
  BoundReport lower = lower_thm11(N, tau, sigma, psi_star_lower, policy);
  lower.formula = BoundFormula::thm12_lower;
  lower.thm11_case = 0;
  lower.valid = valid;

  BoundReport upper = base_report(BoundFormula::thm12_upper, N, tau, sigma, policy);
  upper.auxiliary["psi_star"] = psi_star_upper;
  upper.valid = valid;
  upper.value = policy.constant * std::pow(N, 0.5 - sigma) * std::sqrt(tau) * std::sqrt(psi_star_upper);
  return {lower, upper};
}

double psi_star_exact(double x, Int y) {
  if (x < 2.0 || y < 2) return 0.0;
  const auto fx = static_cast<Int>(std::floor(x));
  return static_cast<double>(psi_count(fx, y)) / x;
}

double psi_star_lower_exact(Int N, std::size_t tau, const PrimeTable& table) {
  const Int p_tau = table.prime(tau);
  const Int y = tau / 2 == 0 ? 1 : table.prime(tau / 2);
  return psi_star_exact(static_cast<double>(N) / static_cast<double>(p_tau), y);
}

double psi_star_upper_exact(Int N, std::size_t tau, const PrimeTable& table) {
  const auto p_tau = static_cast<double>(table.prime(tau));
  return psi_star_exact(static_cast<double>(N) / (p_tau * p_tau), table.prime(tau));
}

BoundReport l1_bound(Int N, std::size_t tau, double sigma, const PrimeTable& table) {
  check_sigma(sigma);
  const SmoothSet set = e_tau(N, tau, table);
  BoundReport r = base_report(BoundFormula::l1, static_cast<double>(N), static_cast<double>(tau), sigma, {});
  r.constant = 1.0;
  double s = 0.0;
  for (Int n : set.members) s += std::pow(static_cast<double>(n), -sigma);
  r.value = s;
  r.auxiliary["psi"] = static_cast<double>(set.psi());
  return r;
}

double rudin_shapiro_log_tau(double log_n) {
  if (!(log_n >= std::log(16.0))) throw std::invalid_argument("Rudin-Shapiro tau needs N >= 16");
  return std::sqrt(0.5 * log_n * std::log(log_n));
}

double rudin_shapiro_tau(double N) {
  if (!(N >= 16.0)) throw std::invalid_argument("Rudin-Shapiro tau needs N >= 16");
  return std::exp(rudin_shapiro_log_tau(std::log(N)));
}

double rudin_shapiro_envelope_exponent(double log_n, const DickmanTable& table) {
  const double log_tau = rudin_shapiro_log_tau(log_n);
  const double log_p = log_tau + std::log(log_tau);
  const double u_upper = (log_n - 2.0 * log_p) / log_p;
  const double u_l1 = log_n / log_p;
  if (u_upper < 0.0) throw std::invalid_argument("N / p_tau^2 < 1 at this scale");
  return 0.5 * log_tau + 0.5 * table.log_rho(u_upper) - table.log_rho(u_l1);
}

namespace {

std::vector<double> l_set_square_sums(const DirichletSpec& spec, std::size_t tau) {
  if (tau < 1 || tau > spec.dimension()) throw std::invalid_argument("tau must satisfy 1 <= tau <= spec dimension");
  std::vector<double> sq(tau + 1, 0.0);
  for (const Term& t : spec.terms()) {
    const std::size_t j = l_set_index(t.exponents, tau);
    if (j > 0) sq[j] += t.coeff * t.coeff;
  }
  return sq;
}

}  // namespace

BoundReport prop32_lower(const DirichletSpec& spec, std::size_t tau, const ConstantPolicy& policy) {
  BoundReport r = prop32_upper(spec, tau);
  r.formula = BoundFormula::prop32_lower;
  r.khintchine = policy.khintchine;
  r.value *= policy.khintchine;
  return r;
}

BoundReport prop32_upper(const DirichletSpec& spec, std::size_t tau) {
  const auto sq = l_set_square_sums(spec, tau);
  BoundReport r;
  r.formula = BoundFormula::prop32_upper;
  r.N = static_cast<double>(spec.n_max());
  r.tau = static_cast<double>(tau);
  r.sigma = spec.sigma();
  double s = 0.0;
  for (std::size_t j = tau / 2 + 1; j <= tau; ++j) s += std::sqrt(sq[j]);
  r.value = s;
  return r;
}

double b_sum(Int m, const WeightFn& weight) {
  double s = 0.0;
  for (Int n = 2; n <= m; ++n) {
    const double d = weight(n);
    s += d * d;
  }
  return s;
}

BoundReport prop34_lower(Int N, double sigma, const WeightFn& weight, const PrimeTable& table,
                         const ConstantPolicy& policy) {
  check_sigma(sigma);
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (!weight) throw std::invalid_argument("weight function required");
  const std::size_t mu = table.pi(N);
  BoundReport r = base_report(BoundFormula::prop34_lower, static_cast<double>(N),
                              static_cast<double>(mu), sigma, policy);

  // Multiplicativity spot check on coprime pairs.
  const Int probe = std::min<Int>(N, 60);
  for (Int a = 2; a <= probe && !r.warning; ++a) {
    for (Int b = a + 1; b <= probe && a * b <= N; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const double lhs = weight(a * b);
      const double rhs = weight(a) * weight(b);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
        r.warning = true;
        r.note = "weights fail multiplicativity at (" + std::to_string(a) + ", " + std::to_string(b) + ")";
        break;
      }
    }
  }

  const std::size_t first = mu / 2 + 1;
  const Int m_max = first <= mu ? N / table.prime(first) : 0;
  std::vector<double> prefix(static_cast<std::size_t>(std::max<Int>(m_max, 1)) + 1, 0.0);
  for (Int n = 2; n <= m_max; ++n) {
    const double d = weight(n);
    prefix[static_cast<std::size_t>(n)] = prefix[static_cast<std::size_t>(n - 1)] + d * d;
  }
  double s = 0.0;
  for (std::size_t j = first; j <= mu; ++j) {
    const Int p = table.prime(j);
    const Int m = N / p;
    s += weight(p) * std::sqrt(prefix[static_cast<std::size_t>(m)]);
  }
  r.value = policy.constant * std::pow(static_cast<double>(N), -sigma) * s;
  r.auxiliary["terms"] = static_cast<double>(mu + 1 - first);
  return r;
}

BoundReport prop35_lower(const std::vector<Int>& moduli, double sigma, const ConstantPolicy& policy) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (moduli.empty() || moduli.size() > 30) throw std::invalid_argument("need 1..30 moduli");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] < 2) throw std::invalid_argument("moduli must be >= 2");
    for (std::size_t k = i + 1; k < moduli.size(); ++k) {
      if (std::gcd(moduli[i], moduli[k]) != 1) {
        throw std::invalid_argument("moduli " + std::to_string(moduli[i]) + " and " +
                                    std::to_string(moduli[k]) + " are not coprime");
      }
    }
  }
  const std::size_t m = moduli.size();
  std::vector<double> x(m), log_c(m);
  double log_prod = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double p = static_cast<double>(moduli[k]);
    x[k] = std::pow(p, -sigma);
    log_c[k] = 0.5 * std::log1p(std::pow(p, -2.0 * sigma));
    log_prod += log_c[k];
  }
  BoundReport r = base_report(BoundFormula::prop35_lower, 0.0, static_cast<double>(m), sigma, policy);
  r.N = 1.0;
  for (Int p : moduli) r.N *= static_cast<double>(p);
  if (m == 1) {
    r.degenerate = true;
    r.note = "no split of K into two nonempty parts";
    return r;
  }

  // Gray-code walk over subsets G; G must be nonempty and proper.
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  double sum = 0.0;
  double log_den = 0.0;
  std::uint64_t gray = 0;
  double best = 0.0;
  std::uint64_t best_set = 0;
  for (std::uint64_t i = 1; i <= full; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    gray ^= std::uint64_t{1} << bit;
    if (gray & (std::uint64_t{1} << bit)) {
      sum += x[bit];
      log_den += log_c[bit];
    } else {
      sum -= x[bit];
      log_den -= log_c[bit];
    }
    if (gray == full) continue;
    const double v = sum * std::exp(-log_den);
    if (v > best) {
      best = v;
      best_set = gray;
    }
  }
  r.value = policy.constant * std::exp(log_prod) * best;
  r.auxiliary["best_subset_size"] = static_cast<double>(std::popcount(best_set));
  r.auxiliary["inner_sup"] = best;
  return r;
}

}  // namespace dirsup
