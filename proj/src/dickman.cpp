#include "dirsup/dickman.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dirsup {

DickmanTable::DickmanTable(double u_max, double tolerance) : u_max_(u_max), tolerance_(tolerance) {
  if (!(u_max >= 1.0)) throw std::invalid_argument("u_max must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

  // Piece 0 is rho == 1 on [0, 1].
  Piece base;
  base.coeffs = {1.0};
  pieces_.push_back(base);

  const auto last = static_cast<std::size_t>(std::ceil(u_max_));
  for (std::size_t k = 1; k < last; ++k) {
    const Piece& prev = pieces_.back();
    // With rho(u - 1) = sum c_i v^i and u = k + 1 - v, the delay equation
    // gives (k + 1)(i + 1) d_{i+1} = i d_i + c_i, so d_i for i >= 1 does not
    // depend on d_0. Then (k + 1) rho(k + 1) = int_k^{k+1} rho fixes
    // d_0 = sum_{i>=1} d_i / (i + 1) / k. Every term is positive, so nothing
    // cancels even where rho is tiny.
    const double kp1 = static_cast<double>(k + 1);
    std::vector<double> d(kTerms, 0.0);
    for (std::size_t i = 0; i + 1 < kTerms; ++i) {
      const double c = i < prev.coeffs.size() ? prev.coeffs[i] : 0.0;
      const double di = static_cast<double>(i);
      d[i + 1] = (di * d[i] + c) / (kp1 * (di + 1.0));
    }
    double integral = 0.0;
    for (std::size_t i = kTerms; i-- > 1;) integral += d[i] / static_cast<double>(i + 1);
    const double d0 = integral / static_cast<double>(k);

    Piece piece;
    piece.lo = static_cast<double>(k);
    piece.log_scale = prev.log_scale + std::log(d0);
    piece.coeffs.resize(kTerms);
    for (std::size_t i = 0; i < kTerms; ++i) piece.coeffs[i] = d[i] / d0;
    piece.coeffs[0] = 1.0;
    pieces_.push_back(std::move(piece));
  }
}

const DickmanTable::Piece& DickmanTable::piece_for(double u) const {
  if (std::isnan(u) || u < 0.0) throw std::invalid_argument("rho needs u >= 0");
  if (u > u_max_) {
    throw TableRange("u = " + std::to_string(u) + " beyond table u_max = " + std::to_string(u_max_));
  }
  auto k = static_cast<std::size_t>(std::floor(u));
  if (k >= pieces_.size()) k = pieces_.size() - 1;
  return pieces_[k];
}

double DickmanTable::scaled(const Piece& piece, double u) const {
  const double v = piece.lo + 1.0 - u;
  double s = 0.0;
  for (std::size_t i = piece.coeffs.size(); i-- > 0;) s = s * v + piece.coeffs[i];
  return s;
}

double DickmanTable::rho(double u) const {
  const Piece& p = piece_for(u);
  return std::exp(p.log_scale) * scaled(p, u);
}

double DickmanTable::log_rho(double u) const {
  const Piece& p = piece_for(u);
  return p.log_scale + std::log(scaled(p, u));
}

double DickmanTable::derivative(double u) const {
  const Piece& p = piece_for(u);
  const double v = p.lo + 1.0 - u;
  double s = 0.0;
  for (std::size_t i = p.coeffs.size(); i-- > 1;) s = s * v + static_cast<double>(i) * p.coeffs[i];
  return -std::exp(p.log_scale) * s;
}

double DickmanTable::residual(double u) const {
  if (u <= 1.0) throw std::invalid_argument("residual defined for u > 1");
  return std::abs(u * derivative(u) + rho(u - 1.0));
}

std::vector<double> DickmanTable::nodes() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    for (int i = 0; i < 16; ++i) {
      const double u = static_cast<double>(k) + (i + 0.5) / 16.0;
      if (u <= u_max_) out.push_back(u);
    }
  }
  return out;
}

double rho(double u, const DickmanTable& table) { return table.rho(u); }

double psi_star_dickman(Int N, Int M, const DickmanTable& table) {
  if (M < 2 || N < M) throw std::invalid_argument("psi_star_dickman needs N >= M >= 2");
  const double u = std::log(static_cast<double>(N)) / std::log(static_cast<double>(M));
  return table.rho(u);
}

AlphaResult semiasymptotic_alpha(double x, double y) {
  if (!(x > std::numbers::e) || !(y > 1.0)) {
    throw std::invalid_argument("semiasymptotic_alpha needs x > e and y > 1");
  }
  const double lx = std::log(x);
  return {std::log1p(y / lx) / std::log(y), y > lx};
}

SemiasymptoticReport check_semiasymptotic(Int x, Int a, Int y, const SmoothCounter& count) {
  if (x < 3 || a < 1 || y < 2) throw std::invalid_argument("check_semiasymptotic needs x >= 3, a >= 1, y >= 2");
  if (a > kMaxN / x) throw std::overflow_error("a * x exceeds 2^62");
  SemiasymptoticReport r;
  r.x = x;
  r.a = a;
  r.y = y;
  const auto alpha = semiasymptotic_alpha(static_cast<double>(x), static_cast<double>(y));
  r.alpha = alpha.alpha;
  r.in_zone = alpha.in_zone;
  r.psi_x = count(x, y);
  r.psi_ax = a == 1 ? r.psi_x : count(a * x, y);
  r.ratio = a == 1 ? 1.0
                   : static_cast<double>(r.psi_ax) /
                         (std::pow(static_cast<double>(a), r.alpha) * static_cast<double>(r.psi_x));
  const double lx = std::log(static_cast<double>(x));
  r.inv_ubar = std::log(static_cast<double>(y)) / std::min(lx, static_cast<double>(y));
  return r;
}

}  // namespace dirsup
