#include "dirsup/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace dirsup {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kCompensatedThreshold = 100'000;

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

/// e(x) = exp(2 pi i x).
Complex unit(double x) { return std::polar(1.0, kTwoPi * frac(x)); }

// Neumaier summation for long supports.
class ComplexSum {
 public:
  explicit ComplexSum(bool compensated) : compensated_(compensated) {}
  void add(Complex v) {
    if (!compensated_) {
      sum_ += v;
      return;
    }
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  Complex value() const { return compensated_ ? Complex(re_ + cre_, im_ + cim_) : sum_; }

 private:
  static void add_part(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  bool compensated_;
  Complex sum_{};
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

void check_signs(const DirichletSpec& spec, const SignAssignment& signs) {
  if (signs.signs.size() != spec.size()) {
    throw std::invalid_argument("sign assignment does not match the spec's support");
  }
}

void check_point(const DirichletSpec& spec, const TorusPoint& z) {
  if (z.dimension() != spec.dimension()) {
    throw std::invalid_argument("torus point dimension " + std::to_string(z.dimension()) +
                                " != spec dimension " + std::to_string(spec.dimension()));
  }
}

double phase_of(const ExponentVector& a, std::span<const double> z) {
  double s = 0.0;
  for (auto [j, b] : a.exponents) s += b * z[j - 1];
  return s;
}

// Signed coefficients and per-coordinate incidence lists for repeated
// evaluation of Q on the torus.
struct TorusEvaluator {
  std::vector<double> c;                                            // eps_n w_n
  std::vector<std::vector<std::pair<std::size_t, int>>> touching;  // coord -> (term, a_j)
  std::vector<int> max_exp;
  std::vector<double> weight_by_coord;                              // K_j = sum a_j |w_n|

  TorusEvaluator(const DirichletSpec& spec, const SignAssignment& signs) {
    const std::size_t dim = spec.dimension();
    touching.resize(dim);
    max_exp.assign(dim, 0);
    weight_by_coord.assign(dim, 0.0);
    c.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Term& t = spec.term(i);
      c.push_back(signs.signs[i] * t.coeff);
      for (auto [j, b] : t.exponents.exponents) {
        touching[j - 1].emplace_back(i, b);
        max_exp[j - 1] = std::max(max_exp[j - 1], b);
        weight_by_coord[j - 1] += b * std::abs(t.coeff);
      }
    }
  }
};

// Coordinate ascent from a start point; every coordinate update is a global
// maximization of a one-variable trigonometric polynomial.
class Ascent {
 public:
  Ascent(const DirichletSpec& spec, const TorusEvaluator& ev) : spec_(spec), ev_(ev) {}

  TorusPoint run(TorusPoint z, std::size_t sweeps) {
    std::vector<double> coords(z.coords().begin(), z.coords().end());
    const std::size_t dim = coords.size();
    std::vector<Complex> phase(spec_.size());
    std::vector<Complex> coeff_by_power;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
      Complex q{};
      for (std::size_t i = 0; i < spec_.size(); ++i) {
        phase[i] = unit(phase_of(spec_.term(i).exponents, coords));
        q += ev_.c[i] * phase[i];
      }
      bool moved = false;
      for (std::size_t j = 0; j < dim; ++j) {
        const auto& touch = ev_.touching[j];
        if (touch.empty()) continue;
        const int top = ev_.max_exp[j];
        coeff_by_power.assign(static_cast<std::size_t>(top) + 1, Complex{});
        Complex rest = q;
        for (auto [i, b] : touch) {
          const Complex v = ev_.c[i] * phase[i];
          rest -= v;
          coeff_by_power[static_cast<std::size_t>(b)] += v * unit(-b * coords[j]);
        }
        coeff_by_power[0] = rest;
        const double current = std::abs(q);
        const double theta = best_angle(coeff_by_power, coords[j]);
        const Complex candidate = poly(coeff_by_power, theta);
        if (std::abs(candidate) > current * (1.0 + 1e-15)) {
          const double delta = theta - coords[j];
          for (auto [i, b] : touch) phase[i] *= unit(b * delta);
          coords[j] = frac(theta);
          q = candidate;
          moved = true;
        }
      }
      if (!moved) break;
    }
    return TorusPoint(std::move(coords));
  }

 private:
  static Complex poly(const std::vector<Complex>& cb, double theta) {
    Complex s = cb[0];
    for (std::size_t b = 1; b < cb.size(); ++b) s += cb[b] * unit(static_cast<double>(b) * theta);
    return s;
  }

  static double best_angle(const std::vector<Complex>& cb, double current) {
    if (cb.size() == 2) {
      if (std::abs(cb[1]) == 0.0) return current;
      return frac((std::arg(cb[0]) - std::arg(cb[1])) / kTwoPi);
    }
    const std::size_t samples = 16 * cb.size();
    double best = current;
    double best_val = std::abs(poly(cb, current));
    for (std::size_t k = 0; k < samples; ++k) {
      const double theta = static_cast<double>(k) / static_cast<double>(samples);
      const double v = std::abs(poly(cb, theta));
      if (v > best_val) {
        best_val = v;
        best = theta;
      }
    }
    // golden-section on the bracket around the best sample
    const double h = 1.0 / static_cast<double>(samples);
    double lo = best - h;
    double hi = best + h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = std::abs(poly(cb, x1));
    double f2 = std::abs(poly(cb, x2));
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = std::abs(poly(cb, x2));
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = std::abs(poly(cb, x1));
      }
    }
    const double mid = 0.5 * (lo + hi);
    return std::abs(poly(cb, mid)) > best_val ? frac(mid) : best;
  }

  const DirichletSpec& spec_;
  const TorusEvaluator& ev_;
};

}  // namespace

DirichletSpec::DirichletSpec(std::vector<Int> support, std::vector<double> weights, double sigma,
                             const PrimeTable& table, std::size_t dimension, Int n_max)
    : sigma_(sigma) {
  if (support.size() != weights.size()) {
    throw std::invalid_argument("support and weights differ in length");
  }
  if (!(sigma >= 0.0 && sigma < 0.5)) throw std::invalid_argument("sigma must lie in [0, 1/2)");
  if (dimension > table.size()) throw TableTooSmall("dimension exceeds prime table size");
  primes_.assign(table.primes().begin(), table.primes().begin() + static_cast<std::ptrdiff_t>(dimension));

  terms_.reserve(support.size());
  Int prev = 1;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Int n = support[i];
    if (n <= prev) throw std::invalid_argument("support must be strictly ascending integers >= 2");
    check_magnitude(n, "support element");
    prev = n;
    Term t;
    t.n = n;
    t.weight = weights[i];
    t.log_n = std::log(static_cast<double>(n));
    t.coeff = weights[i] * std::exp(-sigma * t.log_n);
    if (!std::isfinite(t.coeff)) throw std::invalid_argument("non-finite coefficient");
    t.exponents = factor_exponents(n, table);
    if (t.exponents.top_ordinal() > dimension) {
      throw std::invalid_argument("support element " + std::to_string(n) +
                                  " has a prime factor beyond p_dimension");
    }
    l1_ += std::abs(t.coeff);
    terms_.push_back(std::move(t));
  }
  n_max_ = n_max > 0 ? n_max : (terms_.empty() ? 0 : terms_.back().n);
}

DirichletSpec DirichletSpec::on_e_tau(Int N, std::size_t tau, double sigma, const PrimeTable& table,
                                      const WeightFn& weight) {
  const SmoothSet set = e_tau(N, tau, table);
  std::vector<double> weights;
  weights.reserve(set.members.size());
  for (Int n : set.members) weights.push_back(weight ? weight(n) : 1.0);
  return DirichletSpec(set.members, std::move(weights), sigma, table, tau, N);
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double& x : coords_) x = frac(x);
}

void TorusPoint::set(std::size_t j, double value) { coords_.at(j) = frac(value); }

double circle_distance(double a, double b) {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

Complex eval_line(const DirichletSpec& spec, const SignAssignment& signs, double t) {
  check_signs(spec, signs);
  ComplexSum sum(spec.size() > kCompensatedThreshold);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Term& term = spec.term(i);
    sum.add(std::polar(signs.signs[i] * term.coeff, -t * term.log_n));
  }
  return sum.value();
}

TorusPoint bohr_lift_point(double t, const PrimeTable& table, std::size_t dim) {
  if (dim > table.size()) throw TableTooSmall("dimension exceeds prime table size");
  std::vector<double> z(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    z[j] = -t * std::log(static_cast<double>(table.primes()[j])) / kTwoPi;
  }
  return TorusPoint(std::move(z));
}

Complex eval_torus(const DirichletSpec& spec, const SignAssignment& signs, const TorusPoint& z) {
  check_signs(spec, signs);
  check_point(spec, z);
  ComplexSum sum(spec.size() > kCompensatedThreshold);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Term& term = spec.term(i);
    sum.add(signs.signs[i] * term.coeff * unit(phase_of(term.exponents, z.coords())));
  }
  return sum.value();
}

double lipschitz_certificate(const DirichletSpec& spec, const SignAssignment& signs,
                             const TorusPoint& z, const TorusPoint& zp) {
  check_signs(spec, signs);
  check_point(spec, z);
  check_point(spec, zp);
  std::vector<double> dist(spec.dimension());
  for (std::size_t j = 0; j < dist.size(); ++j) dist[j] = circle_distance(z[j], zp[j]);
  double total = 0.0;
  for (const Term& term : spec.terms()) {
    double s = 0.0;
    for (auto [j, b] : term.exponents.exponents) s += b * dist[j - 1];
    total += std::abs(term.coeff) * s;
  }
  return kTwoPi * total;
}

TorusSupResult sup_torus(const DirichletSpec& spec, const SignAssignment& signs,
                         std::size_t grid_budget, std::size_t refine_steps) {
  if (grid_budget < 1) throw std::invalid_argument("grid_budget must be >= 1");
  check_signs(spec, signs);
  const std::size_t dim = spec.dimension();
  TorusSupResult out;
  out.argmax = TorusPoint::origin(dim);
  if (spec.empty()) {
    out.lattice_points = 1;
    return out;
  }
  const TorusEvaluator ev(spec, signs);

  // Dyadic mesh: each level doubles the coordinate with the largest K_j / m_j,
  // so the lattices for increasing budgets are nested.
  std::vector<std::size_t> mesh(dim, 1);
  std::vector<std::size_t> level_coord;
  {
    std::size_t points = 1;
    while (points * 2 <= grid_budget) {
      std::size_t best = dim;
      double best_score = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double score = ev.weight_by_coord[j] / static_cast<double>(mesh[j]);
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      if (best == dim) break;
      mesh[best] *= 2;
      points *= 2;
      level_coord.push_back(best);
    }
  }
  const std::size_t levels = level_coord.size();

  std::vector<std::size_t> varying;
  for (std::size_t j = 0; j < dim; ++j) {
    if (mesh[j] > 1) varying.push_back(j);
  }
  // level_at[v][r]: level at which coordinate varying[v] reached mesh 2^r
  std::vector<std::vector<std::size_t>> level_at(varying.size(), std::vector<std::size_t>{0});
  for (std::size_t l = 0; l < levels; ++l) {
    const auto v = static_cast<std::size_t>(
        std::find(varying.begin(), varying.end(), level_coord[l]) - varying.begin());
    level_at[v].push_back(l + 1);
  }

  // Every term is summed in support order, whatever the mesh, so that a
  // lattice point gets bit-identical values under every budget.
  std::vector<int> varying_index(dim, -1);
  for (std::size_t v = 0; v < varying.size(); ++v) varying_index[varying[v]] = static_cast<int>(v);
  struct Active {
    double c;
    std::vector<std::pair<std::size_t, int>> parts;  // (varying index, exponent)
  };
  std::vector<Active> active;
  active.reserve(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    Active a{ev.c[i], {}};
    for (auto [j, b] : spec.term(i).exponents.exponents) {
      if (varying_index[j - 1] >= 0) a.parts.emplace_back(static_cast<std::size_t>(varying_index[j - 1]), b);
    }
    active.push_back(std::move(a));
  }
  // powers[v][k * (top + 1) + b] = e(b k / m)
  std::vector<std::vector<Complex>> powers(varying.size());
  for (std::size_t v = 0; v < varying.size(); ++v) {
    const std::size_t m = mesh[varying[v]];
    const auto top = static_cast<std::size_t>(ev.max_exp[varying[v]]);
    powers[v].resize(m * (top + 1));
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t b = 0; b <= top; ++b) {
        powers[v][k * (top + 1) + b] = unit(static_cast<double>(b * k) / static_cast<double>(m));
      }
    }
  }

  std::vector<double> level_best(levels + 1, -1.0);
  std::vector<std::vector<std::size_t>> level_point(levels + 1);
  std::vector<std::size_t> digits(varying.size(), 0);
  std::size_t count = 0;
  while (true) {
    Complex q{};
    for (const Active& a : active) {
      Complex ph = 1.0;
      for (auto [v, b] : a.parts) {
        const auto top = static_cast<std::size_t>(ev.max_exp[varying[v]]);
        ph *= powers[v][digits[v] * (top + 1) + static_cast<std::size_t>(b)];
      }
      q += a.c * ph;
    }
    ++count;
    std::size_t first_level = 0;
    for (std::size_t v = 0; v < varying.size(); ++v) {
      if (digits[v] == 0) continue;
      const std::size_t m = mesh[varying[v]];
      const auto e = static_cast<std::size_t>(std::countr_zero(m));
      const auto r = e - static_cast<std::size_t>(std::countr_zero(digits[v]));
      first_level = std::max(first_level, level_at[v][r]);
    }
    const double value = std::abs(q);
    if (value > level_best[first_level]) {
      level_best[first_level] = value;
      level_point[first_level] = digits;
    }
    // odometer, first varying coordinate most significant
    if (varying.empty()) break;
    bool carry = true;
    for (std::size_t v = varying.size(); carry && v-- > 0;) {
      if (++digits[v] < mesh[varying[v]]) {
        carry = false;
      } else {
        digits[v] = 0;
      }
    }
    if (carry) break;
  }
  out.lattice_points = count;

  auto to_point = [&](const std::vector<std::size_t>& d) {
    std::vector<double> z(dim, 0.0);
    for (std::size_t v = 0; v < varying.size(); ++v) {
      z[varying[v]] = static_cast<double>(d[v]) / static_cast<double>(mesh[varying[v]]);
    }
    return TorusPoint(std::move(z));
  };

  // Best lattice point of each nested level, as refinement starts.
  std::vector<TorusPoint> starts;
  double running = -1.0;
  std::vector<std::size_t> running_point;
  for (std::size_t l = 0; l <= levels; ++l) {
    if (level_best[l] > running) {
      running = level_best[l];
      running_point = level_point[l];
    }
    if (running >= 0.0) {
      TorusPoint p = to_point(running_point);
      if (std::find(starts.begin(), starts.end(), p) == starts.end()) starts.push_back(std::move(p));
    }
  }
  out.lattice_max = running;
  out.argmax = starts.back();
  out.value = running;
  {
    double g = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      g += ev.weight_by_coord[j] / static_cast<double>(mesh[j]);
    }
    out.lattice_gap = std::numbers::pi * g;
  }

  TorusPoint z_seed = z_lattice_maximizer(spec, signs, dim);
  if (std::find(starts.begin(), starts.end(), z_seed) == starts.end()) starts.push_back(z_seed);

  if (refine_steps > 0) {
    Ascent ascent(spec, ev);
    for (const TorusPoint& s : starts) {
      TorusPoint p = ascent.run(s, refine_steps);
      const double v = std::abs(eval_torus(spec, signs, p));
      if (v > out.value) {
        out.value = v;
        out.argmax = std::move(p);
      }
    }
  } else {
    const double v = std::abs(eval_torus(spec, signs, z_seed));
    if (v > out.value) {
      out.value = v;
      out.argmax = z_seed;
    }
  }

  const double upper = std::min(out.lattice_max + out.lattice_gap, spec.l1_norm());
  out.gap = std::max(0.0, upper - out.value);
  return out;
}

std::size_t l_set_index(const ExponentVector& a, std::size_t tau) {
  if (a.exponents.empty()) return 0;
  const std::size_t half = tau / 2;
  const auto [j, b] = a.exponents.back();
  if (j <= half || j > tau || b != 1) return 0;
  for (std::size_t k = 0; k + 1 < a.exponents.size(); ++k) {
    if (a.exponents[k].first > half) return 0;
  }
  return j;
}

namespace {

std::vector<double> l_set_sums(const DirichletSpec& spec, const SignAssignment& signs,
                               std::size_t tau) {
  check_signs(spec, signs);
  if (tau < 1 || tau > spec.dimension()) {
    throw std::invalid_argument("tau must satisfy 1 <= tau <= spec dimension");
  }
  std::vector<double> sums(tau + 1, 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::size_t j = l_set_index(spec.term(i).exponents, tau);
    if (j > 0) sums[j] += signs.signs[i] * spec.term(i).coeff;
  }
  return sums;
}

}  // namespace

double exact_sup_Z(const DirichletSpec& spec, const SignAssignment& signs, std::size_t tau) {
  const auto sums = l_set_sums(spec, signs, tau);
  double total = 0.0;
  for (std::size_t j = tau / 2 + 1; j <= tau; ++j) total += std::abs(sums[j]);
  return total;
}

TorusPoint z_lattice_maximizer(const DirichletSpec& spec, const SignAssignment& signs,
                               std::size_t tau) {
  const auto sums = l_set_sums(spec, signs, tau);
  TorusPoint z = TorusPoint::origin(spec.dimension());
  for (std::size_t j = tau / 2 + 1; j <= tau; ++j) {
    if (sums[j] < 0.0) z.set(j - 1, 0.5);
  }
  return z;
}

double sup_line_grid(const DirichletSpec& spec, const SignAssignment& signs, double t_min,
                     double t_max, std::size_t steps) {
  if (steps < 2 || !(t_min < t_max)) {
    throw std::invalid_argument("sup_line_grid needs steps >= 2 and t_min < t_max");
  }
  double best = 0.0;
  const double h = (t_max - t_min) / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    best = std::max(best, std::abs(eval_line(spec, signs, t_min + static_cast<double>(k) * h)));
  }
  return best;
}

}  // namespace dirsup
