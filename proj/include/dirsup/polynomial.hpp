#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dirsup/numbertheory.hpp"

namespace dirsup {

using Complex = std::complex<double>;

/// One term d_n n^{-sigma} of a Dirichlet polynomial.
struct Term {
  Int n = 0;
  double weight = 0.0;  // d_n
  double coeff = 0.0;   // w_n = d_n n^{-sigma}
  double log_n = 0.0;
  ExponentVector exponents;
};

using WeightFn = std::function<double(Int)>;

// sum_n d_n n^{-sigma - it} over an ascending support, with every term
// factored over the first `dimension` primes.
class DirichletSpec {
 public:
  DirichletSpec(std::vector<Int> support, std::vector<double> weights, double sigma,
                const PrimeTable& table, std::size_t dimension, Int n_max = 0);

  /// Support E_tau(N) with weights d_n = weight(n) (default 1).
  static DirichletSpec on_e_tau(Int N, std::size_t tau, double sigma, const PrimeTable& table,
                                const WeightFn& weight = {});

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::span<const Term> terms() const { return terms_; }
  const Term& term(std::size_t i) const { return terms_[i]; }
  double sigma() const { return sigma_; }
  std::size_t dimension() const { return primes_.size(); }
  /// p_1 .. p_dimension.
  std::span<const Int> primes() const { return primes_; }
  Int n_max() const { return n_max_; }
  /// sum |w_n|, the trivial bound on the supremum.
  double l1_norm() const { return l1_; }

 private:
  std::vector<Term> terms_;
  std::vector<Int> primes_;
  double sigma_;
  Int n_max_;
  double l1_ = 0.0;
};

/// Rademacher signs, indexed like the spec's terms.
struct SignAssignment {
  std::vector<std::int8_t> signs;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  static SignAssignment all_plus(std::size_t n) { return {std::vector<std::int8_t>(n, 1)}; }
};

/// A point of the torus T^dim with coordinates reduced to [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords);
  static TorusPoint origin(std::size_t dim) { return TorusPoint(std::vector<double>(dim, 0.0)); }

  std::size_t dimension() const { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  std::span<const double> coords() const { return coords_; }
  void set(std::size_t j, double value);

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Distance on R/Z.
double circle_distance(double a, double b);

Complex eval_line(const DirichletSpec& spec, const SignAssignment& signs, double t);

/// z_j = (-t log p_j / 2 pi) mod 1 for j = 1..dim.
TorusPoint bohr_lift_point(double t, const PrimeTable& table, std::size_t dim);

Complex eval_torus(const DirichletSpec& spec, const SignAssignment& signs, const TorusPoint& z);

/// 2 pi sum_n |w_n| sum_j a_j(n) dist(z_j, z'_j) >= |Q(z) - Q(z')|.
double lipschitz_certificate(const DirichletSpec& spec, const SignAssignment& signs,
                             const TorusPoint& z, const TorusPoint& zp);

struct TorusSupResult {
  /// |Q| at `argmax`; a lower bound on the supremum.
  double value = 0.0;
  /// sup |Q| <= value + gap.
  double gap = 0.0;
  TorusPoint argmax;
  /// Lattice maximum and its covering bound, before refinement and the l1 cap.
  double lattice_max = 0.0;
  double lattice_gap = 0.0;
  std::size_t lattice_points = 0;
};

TorusSupResult sup_torus(const DirichletSpec& spec, const SignAssignment& signs,
                         std::size_t grid_budget, std::size_t refine_steps);

/// Ordinal j when the term lies in L_j for this tau, otherwise 0.
std::size_t l_set_index(const ExponentVector& a, std::size_t tau);

/// sup over the sign lattice Z of |Q'|, in closed form.
double exact_sup_Z(const DirichletSpec& spec, const SignAssignment& signs, std::size_t tau);

/// The point of Z attaining exact_sup_Z.
TorusPoint z_lattice_maximizer(const DirichletSpec& spec, const SignAssignment& signs,
                               std::size_t tau);

double sup_line_grid(const DirichletSpec& spec, const SignAssignment& signs, double t_min,
                     double t_max, std::size_t steps);

}  // namespace dirsup
