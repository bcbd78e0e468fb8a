#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dirsup/dickman.hpp"
#include "dirsup/numbertheory.hpp"
#include "dirsup/polynomial.hpp"

namespace dirsup {

enum class BoundFormula {
  thm11_upper,
  thm11_lower,
  thm12_lower,
  thm12_upper,
  l1,
  prop32_lower,
  prop32_upper,
  prop34_lower,
  prop35_lower,
};

std::string_view to_string(BoundFormula f);

/// Multiplicative constants the theory leaves unspecified. Every report
/// states which were used.
struct ConstantPolicy {
  double constant = 1.0;
  /// Sharp L1-L2 Rademacher constant.
  double khintchine = 1.0 / std::sqrt(2.0);
};

struct BoundReport {
  BoundFormula formula = BoundFormula::thm11_upper;
  double N = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  std::map<std::string, double> auxiliary;
  double value = 0.0;
  double constant = 1.0;
  double khintchine = 0.0;  // 0 when the formula does not use it
  int thm11_case = 0;       // 1, 2 or 3 for the *_thm11 evaluators
  bool valid = true;        // inside the hypothesis range of the formula
  bool degenerate = false;
  bool warning = false;
  std::string note;
};

/// Case I: sqrt(N) <= tau; Case II: sqrt(N)/log N <= tau < sqrt(N); Case III below.
int thm11_case(double N, double tau);

BoundReport upper_thm11(double N, double tau, double sigma, const ConstantPolicy& policy = {});

/// N^{1/2-sigma} tau^{1/2} (log tau)^{-1/2} psi_star^{1/2}; degenerate (0) at tau = 1.
BoundReport lower_thm11(double N, double tau, double sigma, double psi_star,
                        const ConstantPolicy& policy = {});

/// upper_thm11 over lower_thm11, with psi* = 1 and unit constants, in
/// the form the case-by-case sharpness comparison uses: Cases I and II write
/// the lower bound with (log N)^{1/2}, Case III with (log tau)^{1/2}.
struct GapRatio {
  int thm11_case = 0;
  double ratio = 0.0;
  /// 1 in Case I, (log N)^{1/2} in Case II, (log tau)^{1/2} in Case III.
  double ceiling = 0.0;
};
GapRatio gap_ratio_thm11(double N, double tau);

/// tau > exp((log log N)^2).
bool thm12_valid(double N, double tau);

/// (lower, upper) bounds for tau > exp((log log N)^2). psi_star_lower is Psi*(N/p_tau, p_{tau/2}),
/// psi_star_upper is Psi*(N/p_tau^2, p_tau).
std::pair<BoundReport, BoundReport> bounds_thm12(double N, double tau, double sigma,
                                                 double psi_star_lower, double psi_star_upper,
                                                 const ConstantPolicy& policy = {});

/// Psi(floor(x), y) / x by exact enumeration; 0 when x < 2.
double psi_star_exact(double x, Int y);

/// Exact Psi*(N/p_tau, p_{floor(tau/2)}) (with p_0 = 1) for the lower bounds.
double psi_star_lower_exact(Int N, std::size_t tau, const PrimeTable& table);
/// Exact Psi*(N/p_tau^2, p_tau) for the bounds_thm12 upper bound.
double psi_star_upper_exact(Int N, std::size_t tau, const PrimeTable& table);

/// L(N, tau) = sum over E_tau of n^{-sigma}.
BoundReport l1_bound(Int N, std::size_t tau, double sigma, const PrimeTable& table);

/// log tau = ((log N) / 2 * log log N)^{1/2}.
double rudin_shapiro_log_tau(double log_n);
double rudin_shapiro_tau(double N);

/// Exponent E of exp(E) in E sup / (sum |a_n| / sqrt N) implied by the
/// bounds_thm12 upper bound at the Rudin-Shapiro tau, with Psi* replaced by
/// Dickman values and p_tau by tau log tau. Works from log N alone.
double rudin_shapiro_envelope_exponent(double log_n, const DickmanTable& table);

/// khintchine * sum_j (sum_{L_j} w_n^2)^{1/2} and the matching Cauchy-Schwarz
/// upper value, bracketing E sup_Z |Q'|.
BoundReport prop32_lower(const DirichletSpec& spec, std::size_t tau,
                         const ConstantPolicy& policy = {});
BoundReport prop32_upper(const DirichletSpec& spec, std::size_t tau);

/// B_m = sum_{2 <= n <= m} d_n^2.
double b_sum(Int m, const WeightFn& weight);

BoundReport prop34_lower(Int N, double sigma, const WeightFn& weight, const PrimeTable& table,
                         const ConstantPolicy& policy = {});

BoundReport prop35_lower(const std::vector<Int>& moduli, double sigma,
                         const ConstantPolicy& policy = {});

}  // namespace dirsup
