#include "dirsup/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace dirsup {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  const auto n = static_cast<double>(v.size());
  m.mean = pairwise_sum(v) / n;
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m.mean) * (v[i] - m.mean);
    m.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  }
  return m;
}

// Runs body(r) for r in [0, count) over contiguous chunks.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t r = lo; r < hi; ++r) body(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool exceeds(double lhs, double rhs, double scale) { return lhs > rhs + 1e-9 * scale + 1e-12; }

}  // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  return splitmix64(h ^ splitmix64(counter));
}

SignAssignment sample_signs(const DirichletSpec& spec, std::uint64_t seed, std::uint64_t replicate) {
  SignAssignment s;
  s.seed = seed;
  s.replicate = replicate;
  s.signs.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto n = static_cast<std::uint64_t>(spec.term(i).n);
    s.signs[i] = (counter_hash(seed, replicate, n) >> 63) ? std::int8_t{-1} : std::int8_t{1};
  }
  return s;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::torus_grid: return "torus-grid";
    case Method::z_exact: return "z-exact";
    case Method::line_grid: return "line-grid";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  if (s == "torus-grid") return Method::torus_grid;
  if (s == "z-exact") return Method::z_exact;
  if (s == "line-grid") return Method::line_grid;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

double pairwise_sum(const std::vector<double>& values) { return pairwise(values.data(), values.size()); }

EstimateRecord estimate_esup(const DirichletSpec& spec, std::size_t tau, Method method,
                             std::size_t replicates, std::uint64_t seed,
                             const EstimateOptions& options) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  EstimateRecord rec;
  rec.method = method;
  rec.N = spec.n_max();
  rec.tau = tau;
  rec.sigma = spec.sigma();
  rec.replicates = replicates;
  rec.seed = seed;
  rec.l1 = spec.l1_norm();
  if (spec.empty()) return rec;
  if (tau < 1 || tau > spec.dimension()) throw std::invalid_argument("tau must satisfy 1 <= tau <= spec dimension");

  std::vector<double> value(replicates), gap(replicates), lower_z(replicates);
  std::vector<char> violated(replicates, 0);
  const double l1 = rec.l1;
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const SignAssignment signs = sample_signs(spec, seed, r);
    const double z = exact_sup_Z(spec, signs, tau);
    lower_z[r] = z;
    bool bad = exceeds(z, l1, l1);
    switch (method) {
      case Method::z_exact:
        value[r] = z;
        gap[r] = 0.0;
        break;
      case Method::torus_grid: {
        const TorusSupResult t = sup_torus(spec, signs, options.grid_budget, options.refine_steps);
        value[r] = t.value;
        gap[r] = t.gap;
        bad = bad || exceeds(z, t.value + t.gap, l1) || exceeds(t.value + t.gap, l1, l1);
        break;
      }
      case Method::line_grid: {
        const double v = sup_line_grid(spec, signs, 0.0, options.line_t_max, options.line_steps);
        value[r] = v;
        gap[r] = std::max(0.0, l1 - v);
        bad = bad || exceeds(v, l1, l1);
        break;
      }
    }
    violated[r] = bad ? 1 : 0;
  });

  const Moments m = moments(value);
  rec.estimate = m.mean;
  rec.std_error = m.std_error;
  rec.mean_gap = pairwise_sum(gap) / static_cast<double>(replicates);
  rec.mean_lower_z = pairwise_sum(lower_z) / static_cast<double>(replicates);
  rec.violations = static_cast<std::size_t>(std::count(violated.begin(), violated.end(), 1));
  return rec;
}

namespace {

void check_families(const RademacherFamily& x, const RademacherFamily& y) {
  if (x.index_count() == 0 || x.index_count() != y.index_count()) {
    throw std::invalid_argument("families must share a nonempty index set");
  }
  for (const auto& row : x.rows) {
    if (row.size() != x.term_count()) throw std::invalid_argument("ragged X family");
  }
  for (const auto& row : y.rows) {
    if (row.size() != y.term_count()) throw std::invalid_argument("ragged Y family");
  }
}

double sup_abs(const RademacherFamily& x, const std::vector<int>& ex, const RademacherFamily* y,
               const std::vector<int>& ey) {
  double best = 0.0;
  for (std::size_t z = 0; z < x.index_count(); ++z) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.term_count(); ++i) s += x.rows[z][i] * ex[i];
    if (y != nullptr) {
      for (std::size_t i = 0; i < y->term_count(); ++i) s += y->rows[z][i] * ey[i];
    }
    best = std::max(best, std::abs(s));
  }
  return best;
}

}  // namespace

Lemma31Report lemma31_check(const RademacherFamily& x, const RademacherFamily& y,
                            std::size_t replicates, std::uint64_t seed) {
  check_families(x, y);
  if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");
  std::vector<double> with(replicates), without(replicates);
  std::vector<int> ex(x.term_count()), ey(y.term_count());
  for (std::size_t r = 0; r < replicates; ++r) {
    for (std::size_t i = 0; i < ex.size(); ++i) ex[i] = (counter_hash(seed, 2 * r, i) >> 63) ? -1 : 1;
    for (std::size_t i = 0; i < ey.size(); ++i) ey[i] = (counter_hash(seed, 2 * r + 1, i) >> 63) ? -1 : 1;
    with[r] = sup_abs(x, ex, &y, ey);
    without[r] = sup_abs(x, ex, nullptr, ey);
  }
  const Moments a = moments(with);
  const Moments b = moments(without);
  Lemma31Report rep;
  rep.replicates = replicates;
  rep.mean_with_y = a.mean;
  rep.mean_without_y = b.mean;
  rep.stderr_with_y = a.std_error;
  rep.stderr_without_y = b.std_error;
  const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  rep.flagged = a.mean < b.mean - 3.0 * combined;
  return rep;
}

Lemma31Exact lemma31_exact(const RademacherFamily& x, const RademacherFamily& y) {
  check_families(x, y);
  const std::size_t nx = x.term_count();
  const std::size_t ny = y.term_count();
  if (nx + ny > 24) throw std::invalid_argument("exhaustive enumeration limited to 24 signs");
  std::vector<int> ex(nx), ey(ny);
  double with = 0.0;
  double without = 0.0;
  const std::uint64_t total = std::uint64_t{1} << (nx + ny);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < nx; ++i) ex[i] = (mask >> i) & 1 ? -1 : 1;
    for (std::size_t i = 0; i < ny; ++i) ey[i] = (mask >> (nx + i)) & 1 ? -1 : 1;
    with += sup_abs(x, ex, &y, ey);
    without += sup_abs(x, ex, nullptr, ey);
  }
  Lemma31Exact out;
  out.e_with_y = with / static_cast<double>(total);
  out.e_without_y = without / static_cast<double>(total);
  out.holds = out.e_with_y >= out.e_without_y - 1e-12 * std::max(1.0, out.e_without_y);
  return out;
}

std::pair<RademacherFamily, RademacherFamily> z_lattice_families(const DirichletSpec& spec,
                                                                 std::size_t tau) {
  if (tau < 1 || tau > spec.dimension()) throw std::invalid_argument("tau must satisfy 1 <= tau <= spec dimension");
  const std::size_t half = tau / 2;
  const std::size_t free_coords = tau - half;
  if (free_coords > 16) throw std::invalid_argument("Z lattice too large to tabulate");
  std::vector<std::size_t> in_l, rest;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    (l_set_index(spec.term(i).exponents, tau) > 0 ? in_l : rest).push_back(i);
  }
  // On Z every phase is (-1)^{sum over free coordinates of a_j(n) * bit_j}.
  auto sign_at = [&](std::size_t term, std::uint64_t bits) {
    int parity = 0;
    for (auto [j, b] : spec.term(term).exponents.exponents) {
      if (j > half && j <= tau && ((bits >> (j - half - 1)) & 1)) parity += b;
    }
    return parity % 2 == 0 ? 1.0 : -1.0;
  };
  RademacherFamily x, y;
  const std::uint64_t points = std::uint64_t{1} << free_coords;
  for (std::uint64_t bits = 0; bits < points; ++bits) {
    std::vector<double> rx, ry;
    for (std::size_t i : in_l) rx.push_back(spec.term(i).coeff * sign_at(i, bits));
    for (std::size_t i : rest) ry.push_back(spec.term(i).coeff * sign_at(i, bits));
    x.rows.push_back(std::move(rx));
    y.rows.push_back(std::move(ry));
  }
  return {std::move(x), std::move(y)};
}

std::size_t TauRule::resolve(Int N, std::size_t grid_index, const PrimeTable& table) const {
  const std::size_t pi_n = table.pi(N);
  switch (kind) {
    case TauRuleKind::pi_n:
      return pi_n;
    case TauRuleKind::sqrt_n:
      return std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(N)))), 1, pi_n);
    case TauRuleKind::rs_optimal:
      return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(rudin_shapiro_tau(static_cast<double>(N)))), 1, pi_n);
    case TauRuleKind::explicit_list: {
      if (values.empty()) throw std::invalid_argument("explicit tau rule without values");
      const std::size_t tau = values.size() == 1 ? values[0] : values.at(grid_index);
      if (tau < 1 || tau > pi_n) {
        throw std::invalid_argument("tau " + std::to_string(tau) + " outside [1, pi(" + std::to_string(N) + ")]");
      }
      return tau;
    }
  }
  return pi_n;
}

std::vector<RatioRow> ratio_table(const std::vector<Int>& n_grid, const TauRule& rule,
                                  double sigma, Method method, std::size_t replicates,
                                  std::uint64_t seed, const EstimateOptions& options) {
  if (n_grid.empty()) throw std::invalid_argument("empty N grid");
  const Int n_top = *std::max_element(n_grid.begin(), n_grid.end());
  const PrimeTable table(std::max<Int>(n_top, 2));
  std::vector<RatioRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const Int N = n_grid[g];
    RatioRow row;
    row.N = N;
    row.tau = rule.resolve(N, g, table);
    row.sigma = sigma;
    const DirichletSpec spec = DirichletSpec::on_e_tau(N, row.tau, sigma, table);
    row.record = estimate_esup(spec, row.tau, method, replicates, seed, options);
    const auto n = static_cast<double>(N);
    row.rate = std::pow(n, 1.0 - sigma) / std::log(n);
    row.ratio = row.record.estimate / row.rate;
    row.thm11_upper = upper_thm11(n, static_cast<double>(row.tau), sigma).value;
    row.thm11_lower =
        lower_thm11(n, static_cast<double>(row.tau), sigma, psi_star_lower_exact(N, row.tau, table)).value;
    row.l1 = spec.l1_norm();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dirsup
