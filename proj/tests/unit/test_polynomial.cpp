#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dirsup/polynomial.hpp"

using namespace dirsup;

namespace {

const PrimeTable& primes() {
  static const PrimeTable t(400000);
  return t;
}

struct Instance {
  Int N;
  std::size_t tau;
  DirichletSpec spec;
  SignAssignment signs;
};

SignAssignment random_signs(std::size_t n, std::mt19937_64& rng) {
  SignAssignment s;
  for (std::size_t i = 0; i < n; ++i) s.signs.push_back(rng() & 1 ? 1 : -1);
  return s;
}

Instance random_instance(std::mt19937_64& rng, Int n_max, std::size_t tau_max) {
  const Int N = std::uniform_int_distribution<Int>(2, n_max)(rng);
  const std::size_t mu = primes().pi(N);
  const std::size_t tau = std::uniform_int_distribution<std::size_t>(1, std::min(mu, tau_max))(rng);
  const double sigma = std::uniform_real_distribution<double>(0.0, 0.49)(rng);
  const auto members = e_tau(N, tau, primes()).members;
  std::vector<double> w;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t i = 0; i < members.size(); ++i) w.push_back(unif(rng));
  DirichletSpec spec(members, w, sigma, primes(), tau, N);
  auto signs = random_signs(spec.size(), rng);
  return {N, tau, std::move(spec), std::move(signs)};
}

double abs_weight_sum(const DirichletSpec& spec) {
  double s = 0.0;
  for (const Term& t : spec.terms()) s += std::abs(t.coeff);
  return s;
}

// Brute force over the sign lattice, using L_j sets from the number theory
// module and plain torus evaluation.
struct ZBrute {
  double sup = 0.0;
  double max_imag = 0.0;
};

ZBrute brute_force_Z(const Instance& in) {
  std::vector<Int> support;
  std::vector<double> w;
  std::vector<std::int8_t> eps;
  std::vector<Int> lset;
  for (std::size_t j = in.tau / 2 + 1; j <= in.tau; ++j) {
    const auto l = l_j(in.N, in.tau, j, primes());
    lset.insert(lset.end(), l.begin(), l.end());
  }
  std::sort(lset.begin(), lset.end());
  for (std::size_t i = 0; i < in.spec.size(); ++i) {
    const Term& t = in.spec.term(i);
    if (std::binary_search(lset.begin(), lset.end(), t.n)) {
      support.push_back(t.n);
      w.push_back(t.weight);
      eps.push_back(in.signs.signs[i]);
    }
  }
  ZBrute out;
  if (support.empty()) return out;
  const DirichletSpec restricted(support, w, in.spec.sigma(), primes(), in.tau, in.N);
  SignAssignment s;
  s.signs = eps;
  const std::size_t lo = in.tau / 2;
  const std::size_t free = in.tau - lo;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free); ++mask) {
    std::vector<double> z(in.tau, 0.0);
    for (std::size_t k = 0; k < free; ++k) {
      if (mask >> k & 1) z[lo + k] = 0.5;
    }
    const Complex q = eval_torus(restricted, s, TorusPoint(z));
    out.sup = std::max(out.sup, std::abs(q.real()));
    out.max_imag = std::max(out.max_imag, std::abs(q.imag()));
  }
  return out;
}

DirichletSpec unit_spec(std::vector<Int> support, std::size_t dim, double sigma = 0.0) {
  std::vector<double> w(support.size(), 1.0);
  return DirichletSpec(std::move(support), w, sigma, primes(), dim);
}

}  // namespace

TEST_CASE("spec construction") {
  const auto spec = DirichletSpec::on_e_tau(10, 2, 0.0, primes());
  CHECK(spec.size() == 6);
  CHECK(spec.dimension() == 2);
  CHECK(spec.l1_norm() == 6.0);
  CHECK(spec.term(2).n == 4);
  const auto weighted = DirichletSpec::on_e_tau(10, 2, 0.25, primes(), [](Int n) { return double(n % 3); });
  CHECK(weighted.term(0).weight == 2.0);
  CHECK(weighted.term(0).coeff == doctest::Approx(2.0 * std::pow(2.0, -0.25)));
  CHECK(weighted.term(1).coeff == 0.0);

  CHECK_THROWS_AS(unit_spec({2, 5}, 2), std::invalid_argument);  // P+(5) > p_2
  CHECK_THROWS_AS(unit_spec({3, 2}, 2), std::invalid_argument);  // not ascending
  CHECK_THROWS_AS(unit_spec({2}, 1, 0.5), std::invalid_argument);
  CHECK_THROWS(DirichletSpec({2}, {1.0, 2.0}, 0.0, primes(), 1));
  CHECK_THROWS(DirichletSpec({2}, {std::nan("")}, 0.0, primes(), 1));
}

TEST_CASE("torus points reduce mod 1") {
  const TorusPoint p({1.25, -0.25, 3.0});
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.75);
  CHECK(p[2] == 0.0);
  CHECK(circle_distance(0.9, 0.1) == doctest::Approx(0.2));
  CHECK(circle_distance(0.3, 0.3) == 0.0);
  CHECK(circle_distance(0.0, 0.5) == 0.5);
}

TEST_CASE("eval_line examples") {
  const auto one = unit_spec({2}, 1);
  const auto plus = SignAssignment::all_plus(1);
  for (double t : {-7.0, 0.0, 0.3, 1e3}) CHECK(std::abs(eval_line(one, plus, t)) == doctest::Approx(1.0));

  std::mt19937_64 rng(11);
  const auto in = random_instance(rng, 300, 20);
  const Complex at0 = eval_line(in.spec, in.signs, 0.0);
  double direct = 0.0;
  for (std::size_t i = 0; i < in.spec.size(); ++i) direct += in.signs.signs[i] * in.spec.term(i).coeff;
  CHECK(at0.imag() == 0.0);
  CHECK(at0.real() == doctest::Approx(direct).epsilon(1e-13));

  const DirichletSpec two({2, 4}, {0.7, -1.3}, 0.0, primes(), 1);
  SignAssignment s;
  s.signs = {1, -1};
  const double t = std::numbers::pi / std::log(2.0);
  const Complex expect = 0.7 * std::exp(Complex(0.0, -t * std::log(2.0))) +
                         (-1.0) * (-1.3) * std::exp(Complex(0.0, -t * std::log(4.0)));
  const Complex got = eval_line(two, s, t);
  CHECK(std::abs(got - expect) <= 1e-14);
  CHECK(got.real() == doctest::Approx(-0.7 + 1.3));
}

TEST_CASE("bohr lift examples") {
  const auto o = bohr_lift_point(0.0, primes(), 5);
  CHECK(o == TorusPoint::origin(5));
  const double t = 2.0 * std::numbers::pi / std::log(2.0);
  const auto z = bohr_lift_point(t, primes(), 2);
  CHECK(circle_distance(z[0], 0.0) <= 1e-14);
  const double z2 = -std::log(3.0) / std::log(2.0);
  CHECK(circle_distance(z[1], z2 - std::floor(z2)) <= 1e-14);
}

TEST_CASE("bohr identity on random inputs") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> tdist(-1000.0, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_instance(rng, 500, 95);
    const double t = tdist(rng);
    const Complex line = eval_line(in.spec, in.signs, t);
    const Complex torus = eval_torus(in.spec, in.signs, bohr_lift_point(t, primes(), in.spec.dimension()));
    CHECK(std::abs(line - torus) <= 1e-10 * abs_weight_sum(in.spec));
  }
}

TEST_CASE("eval_torus examples") {
  std::mt19937_64 rng(5);
  const auto in = random_instance(rng, 200, 10);
  const Complex at0 = eval_torus(in.spec, in.signs, TorusPoint::origin(in.spec.dimension()));
  CHECK(at0 == eval_line(in.spec, in.signs, 0.0));

  const DirichletSpec one({2}, {1.5}, 0.3, primes(), 1);
  SignAssignment minus;
  minus.signs = {-1};
  const Complex half = eval_torus(one, minus, TorusPoint({0.5}));
  CHECK(half.real() == doctest::Approx(1.5 * std::pow(2.0, -0.3)));
  CHECK(std::abs(half.imag()) <= 1e-15);
}

TEST_CASE("lipschitz certificate") {
  const DirichletSpec one({2}, {2.0}, 0.25, primes(), 1);
  const auto plus = SignAssignment::all_plus(1);
  CHECK(lipschitz_certificate(one, plus, TorusPoint({0.3}), TorusPoint({0.3})) == 0.0);
  const double w = 2.0 * std::pow(2.0, -0.25);
  for (double d : {0.01, 0.1, 0.3, 0.5}) {
    const TorusPoint a({0.2}), b({0.2 + d});
    const double bound = lipschitz_certificate(one, plus, a, b);
    CHECK(bound == doctest::Approx(2.0 * std::numbers::pi * w * d));
    const double actual = std::abs(eval_torus(one, plus, a) - eval_torus(one, plus, b));
    CHECK(actual == doctest::Approx(2.0 * w * std::sin(std::numbers::pi * d)));
    CHECK(actual <= bound);
  }

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 300, 12);
    std::vector<double> z(in.tau), zp(in.tau);
    const double scale = u01(rng) < 0.5 ? 0.01 : 1.0;
    for (std::size_t j = 0; j < in.tau; ++j) {
      z[j] = u01(rng);
      zp[j] = z[j] + scale * (u01(rng) - 0.5);
    }
    const double actual = std::abs(eval_torus(in.spec, in.signs, TorusPoint(z)) -
                                   eval_torus(in.spec, in.signs, TorusPoint(zp)));
    CHECK(actual <= lipschitz_certificate(in.spec, in.signs, TorusPoint(z), TorusPoint(zp)) + 1e-12);
  }
}

TEST_CASE("sup_torus examples") {
  const DirichletSpec one({6}, {-0.8}, 0.2, primes(), 2);
  const auto r1 = sup_torus(one, SignAssignment::all_plus(1), 64, 2);
  CHECK(r1.value == doctest::Approx(0.8 * std::pow(6.0, -0.2)).epsilon(1e-14));
  CHECK(r1.gap <= r1.lattice_gap);

  const auto two = unit_spec({2, 3}, 2);
  const auto r2 = sup_torus(two, SignAssignment::all_plus(2), 16, 0);
  CHECK(r2.value == doctest::Approx(2.0));
  CHECK(r2.gap == doctest::Approx(0.0).epsilon(1e-12));

  const auto empty = unit_spec({}, 1);
  CHECK(sup_torus(empty, SignAssignment{}, 4, 1).value == 0.0);
  CHECK_THROWS_AS(sup_torus(two, SignAssignment::all_plus(2), 0, 1), std::invalid_argument);
  CHECK_THROWS(sup_torus(two, SignAssignment::all_plus(3), 4, 1));
}

TEST_CASE("sup_torus monotone in budget and bracketed") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto in = random_instance(rng, 300, 10);
    const double l1 = in.spec.l1_norm();
    const double zsup = exact_sup_Z(in.spec, in.signs, in.tau);
    for (std::size_t refine : {0u, 2u}) {
      double prev = -1.0;
      std::size_t prev_points = 0;
      for (std::size_t budget : {1u, 2u, 3u, 8u, 50u, 64u, 256u, 1000u, 4096u}) {
        const auto r = sup_torus(in.spec, in.signs, budget, refine);
        CHECK(r.value >= prev);
        CHECK(r.lattice_points <= budget);
        CHECK(r.lattice_points >= prev_points);
        CHECK(r.value <= l1 * (1 + 1e-12));
        CHECK(r.value + r.gap <= l1 * (1 + 1e-12));
        CHECK(zsup <= r.value + r.gap + 1e-12 * l1);
        CHECK(std::abs(eval_torus(in.spec, in.signs, r.argmax)) == doctest::Approx(r.value));
        prev = r.value;
        prev_points = r.lattice_points;
      }
    }
  }
}

TEST_CASE("lattice maximum plus covering bound dominates dense sampling") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = random_instance(rng, 60, 4);
    const auto r = sup_torus(in.spec, in.signs, 256, 0);
    for (int k = 0; k < 2000; ++k) {
      std::vector<double> z(in.tau);
      for (auto& c : z) c = u01(rng);
      CHECK(std::abs(eval_torus(in.spec, in.signs, TorusPoint(z))) <= r.value + r.gap + 1e-12);
    }
  }
}

TEST_CASE("exact sup over Z examples") {
  const auto spec = unit_spec({3, 6}, 2);
  for (std::int8_t a : {-1, 1}) {
    for (std::int8_t b : {-1, 1}) {
      SignAssignment s;
      s.signs = {a, b};
      CHECK(exact_sup_Z(spec, s, 2) == std::abs(a + b));
    }
  }
  // N = 10, tau = 2 on the full E_2: only L_2 = {3, 6} counts.
  const auto full = DirichletSpec::on_e_tau(10, 2, 0.0, primes());
  SignAssignment s;
  s.signs = {1, 1, 1, -1, 1, 1};  // n = 2, 3, 4, 6, 8, 9
  CHECK(exact_sup_Z(full, s, 2) == 0.0);
  s.signs[3] = 1;
  CHECK(exact_sup_Z(full, s, 2) == 2.0);

  const DirichletSpec zero({2, 3, 6}, {0.0, 0.0, 0.0}, 0.0, primes(), 2);
  CHECK(exact_sup_Z(zero, SignAssignment::all_plus(3), 2) == 0.0);
  CHECK_THROWS(exact_sup_Z(full, s, 0));
  CHECK_THROWS(exact_sup_Z(full, s, 3));
}

TEST_CASE("exact sup over Z matches lattice enumeration") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto in = random_instance(rng, 200, 8);
    const double exact = exact_sup_Z(in.spec, in.signs, in.tau);
    const auto brute = brute_force_Z(in);
    CHECK(std::abs(exact - brute.sup) <= 1e-12 * std::max(1.0, brute.sup));
    CHECK(brute.max_imag <= 1e-10 * std::max(1.0, abs_weight_sum(in.spec)));
    const auto zp = z_lattice_maximizer(in.spec, in.signs, in.tau);
    double on_z = 0.0;
    for (std::size_t i = 0; i < in.spec.size(); ++i) {
      if (l_set_index(in.spec.term(i).exponents, in.tau) == 0) continue;
      double phase = 0.0;
      for (auto [j, b] : in.spec.term(i).exponents.exponents) phase += b * zp[j - 1];
      on_z += in.signs.signs[i] * in.spec.term(i).coeff * std::cos(2.0 * std::numbers::pi * phase);
    }
    CHECK(std::abs(on_z) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("l_set_index") {
  const PrimeTable& t = primes();
  CHECK(l_set_index(factor_exponents(45, t), 4) == 3);  // 5 * 9
  CHECK(l_set_index(factor_exponents(25, t), 4) == 0);  // 5^2
  CHECK(l_set_index(factor_exponents(35, t), 4) == 0);  // 5 * 7
  CHECK(l_set_index(factor_exponents(6, t), 4) == 0);   // P+ = 3 <= p_2
  CHECK(l_set_index(factor_exponents(7, t), 4) == 4);
  CHECK(l_set_index(factor_exponents(2, t), 1) == 1);
}

TEST_CASE("sup_line_grid") {
  const DirichletSpec one({3}, {-2.0}, 0.1, primes(), 2);
  CHECK(sup_line_grid(one, SignAssignment::all_plus(1), -5.0, 5.0, 11) ==
        doctest::Approx(2.0 * std::pow(3.0, -0.1)));
  CHECK_THROWS(sup_line_grid(one, SignAssignment::all_plus(1), 1.0, 1.0, 11));
  CHECK_THROWS(sup_line_grid(one, SignAssignment::all_plus(1), 0.0, 1.0, 1));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = random_instance(rng, 300, 12);
    double prev = 0.0;
    for (std::size_t steps : {3u, 5u, 9u, 17u, 33u, 65u, 129u, 257u, 513u, 1025u}) {
      const double v = sup_line_grid(in.spec, in.signs, 0.0, 200.0, steps);
      CHECK(v >= prev);
      prev = v;
    }
    const auto r = sup_torus(in.spec, in.signs, 512, 2);
    CHECK(prev <= r.value + r.gap + 1e-12);
  }
}

TEST_CASE("large support uses compensated sums") {
  const auto spec = DirichletSpec::on_e_tau(300000, primes().pi(300000), 0.0, primes());
  REQUIRE(spec.size() == 299999);
  const auto plus = SignAssignment::all_plus(spec.size());
  CHECK(eval_line(spec, plus, 0.0).real() == 299999.0);
  const double t = 0.731;
  long double re = 0.0L, im = 0.0L;
  for (const Term& term : spec.terms()) {
    re += std::cos(static_cast<long double>(t) * term.log_n);
    im -= std::sin(static_cast<long double>(t) * term.log_n);
  }
  const Complex q = eval_line(spec, plus, t);
  CHECK(std::abs(q.real() - static_cast<double>(re)) <= 1e-9);
  CHECK(std::abs(q.imag() - static_cast<double>(im)) <= 1e-9);
}
