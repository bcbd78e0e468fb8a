#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dirsup/numbertheory.hpp"

namespace dirsup {

/// Thrown when rho is requested beyond the tabulated range.
class TableRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// The Dickman function on [0, u_max], one power series per unit interval
// [k, k+1] in v = k + 1 - u. Each piece stores rho / rho(k + 1) so that values
// far below double range are still representable through log_rho().
class DickmanTable {
 public:
  static constexpr std::size_t kTerms = 64;

  explicit DickmanTable(double u_max = 50.0, double tolerance = 1e-9);

  double u_max() const { return u_max_; }
  double tolerance() const { return tolerance_; }

  double rho(double u) const;
  double log_rho(double u) const;
  /// Derivative of the truncated series (not of the delay equation) at u.
  double derivative(double u) const;
  /// |u rho'(u) + rho(u - 1)| for u > 1.
  double residual(double u) const;
  /// 16 evenly spaced check points per unit interval above u = 1.
  std::vector<double> nodes() const;

 private:
  struct Piece {
    double lo = 0.0;
    double log_scale = 0.0;
    std::vector<double> coeffs;
  };

  const Piece& piece_for(double u) const;
  double scaled(const Piece& piece, double u) const;

  double u_max_;
  double tolerance_;
  std::vector<Piece> pieces_;
};

double rho(double u, const DickmanTable& table);

/// Dickman approximation rho(log N / log M) to Psi(N, M) / N.
double psi_star_dickman(Int N, Int M, const DickmanTable& table);

struct AlphaResult {
  double alpha = 0.0;
  /// y > log x, the range where 2/3 <= alpha <= 1 is asserted for large x.
  bool in_zone = false;
};

/// alpha(x, y) = log(1 + y / log x) / log y.
AlphaResult semiasymptotic_alpha(double x, double y);

struct SemiasymptoticReport {
  Int x = 0;
  Int a = 0;
  Int y = 0;
  Int psi_ax = 0;
  Int psi_x = 0;
  double alpha = 0.0;
  bool in_zone = false;
  /// Psi(a x, y) / (a^alpha Psi(x, y)).
  double ratio = 0.0;
  /// 1 / ubar = log y / min(log x, y).
  double inv_ubar = 0.0;
};

using SmoothCounter = std::function<Int(Int, Int)>;

SemiasymptoticReport check_semiasymptotic(Int x, Int a, Int y,
                                          const SmoothCounter& count = psi_count);

}  // namespace dirsup
