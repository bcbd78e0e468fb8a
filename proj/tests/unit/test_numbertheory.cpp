#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "dirsup/numbertheory.hpp"

using namespace dirsup;

namespace {

bool is_prime_trial(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Int lpf_trial(Int n) {
  Int best = 1;
  for (Int d = 2; d <= n; ++d) {
    if (n % d == 0 && is_prime_trial(d)) best = d;
  }
  return best;
}

std::vector<Int> smooth_brute(Int N, Int M) {
  std::vector<Int> out;
  for (Int n = 2; n <= N; ++n) {
    if (lpf_trial(n) <= M) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("sieve small limits") {
  const PrimeTable t10(10);
  CHECK(std::vector<Int>(t10.primes().begin(), t10.primes().end()) == std::vector<Int>{2, 3, 5, 7});
  const PrimeTable t2(2);
  CHECK(t2.size() == 1);
  CHECK(t2.prime(1) == 2);
  CHECK_THROWS_AS(PrimeTable(1), std::invalid_argument);
}

TEST_CASE("sieve matches trial division") {
  for (Int limit : {100, 997, 65536, 65537, 200003}) {
    const PrimeTable t(limit);
    std::size_t count = 0;
    for (Int n = 2; n <= std::min<Int>(limit, 20000); ++n) {
      if (is_prime_trial(n)) {
        ++count;
        CHECK(t.prime(count) == n);
        CHECK(t.ordinal(n) == count);
      } else {
        CHECK(t.ordinal(n) == 0);
      }
    }
  }
  CHECK(PrimeTable(100).size() == 25);
  CHECK(PrimeTable(1000000).size() == 78498);
  // Segment boundary: 65537 is prime, 65536 = 2^16 is the segment length.
  CHECK(PrimeTable(65537).primes().back() == 65537);
}

TEST_CASE("pi and ordinal lookups") {
  const PrimeTable t(1000);
  CHECK(t.pi(0) == 0);
  CHECK(t.pi(1) == 0);
  CHECK(t.pi(2) == 1);
  CHECK(t.pi(100) == 25);
  CHECK(t.pi(1000) == 168);
  CHECK_THROWS(t.prime(0));
  CHECK_THROWS(t.prime(169));
  CHECK_THROWS(t.pi(1001));
}

TEST_CASE("largest prime factor") {
  CHECK(largest_prime_factor(12) == 3);
  CHECK(largest_prime_factor(97) == 97);
  CHECK(largest_prime_factor(1) == 1);
  CHECK(largest_prime_factor(1024) == 2);
  CHECK(largest_prime_factor(2 * 3 * 1000003) == 1000003);
  CHECK_THROWS_AS(largest_prime_factor(0), std::invalid_argument);
  for (Int n = 1; n <= 500; ++n) CHECK(largest_prime_factor(n) == lpf_trial(n));
}

TEST_CASE("largest factor sieve agrees with trial division") {
  const LargestFactorSieve s(5000);
  for (Int n = 2; n <= 5000; ++n) CHECK(s(n) == largest_prime_factor(n));
}

TEST_CASE("exponent vectors") {
  const PrimeTable t(1000);
  const auto a12 = factor_exponents(12, t);
  CHECK(a12.exponents == std::vector<std::pair<std::size_t, int>>{{1, 2}, {2, 1}});
  const auto a360 = factor_exponents(360, t);
  CHECK(a360.exponents == std::vector<std::pair<std::size_t, int>>{{1, 3}, {2, 2}, {3, 1}});
  CHECK(a360.exponent(4) == 0);
  CHECK(a360.top_ordinal() == 3);
  for (std::size_t k = 1; k <= t.size(); ++k) {
    const auto a = factor_exponents(t.prime(k), t);
    REQUIRE(a.exponents.size() == 1);
    CHECK(a.exponents[0] == std::pair<std::size_t, int>{k, 1});
  }
  CHECK_THROWS_AS(factor_exponents(1009, t), TableTooSmall);
  CHECK_THROWS_AS(factor_exponents(1, t), std::invalid_argument);
}

TEST_CASE("factorization round trip and divisor identity") {
  const PrimeTable t(100000);
  for (Int n = 2; n <= 100000; ++n) {
    const auto a = factor_exponents(n, t);
    REQUIRE(a.recompose(t) == n);
    Int d = 1;
    for (const auto& [j, e] : a.exponents) d *= e + 1;
    REQUIRE(divisor_count(n) == d);
  }
  CHECK(divisor_count(1) == 1);
  CHECK(divisor_count(12) == 6);
  CHECK(divisor_count(97) == 2);
}

TEST_CASE("smooth set examples") {
  const auto s = smooth_set(20, 3);
  CHECK(s.members == std::vector<Int>{2, 3, 4, 6, 8, 9, 12, 16, 18});
  CHECK(s.psi() == 9);
  CHECK(smooth_set(10, 2).members == std::vector<Int>{2, 4, 8});
  for (Int N : {2, 3, 17, 100, 331}) CHECK(smooth_set(N, N).psi() == static_cast<std::size_t>(N - 1));
  CHECK_THROWS_AS(smooth_set(10, 1), std::invalid_argument);
}

TEST_CASE("smooth sets against brute force, partition and monotonicity") {
  for (Int N = 2; N <= 500; N += 7) {
    std::size_t prev = 0;
    for (Int M = 2; M <= 60; ++M) {
      const auto s = smooth_set(N, M);
      REQUIRE(s.members == smooth_brute(N, M));
      CHECK(s.psi() >= prev);
      prev = s.psi();
      // cells partition the members and carry the right largest factor
      std::vector<Int> joined;
      const PrimeTable t(std::max<Int>(N, 2));
      for (const auto& [j, cell] : s.partition) {
        for (Int n : cell) CHECK(largest_prime_factor(n) == t.prime(j));
        joined.insert(joined.end(), cell.begin(), cell.end());
      }
      std::sort(joined.begin(), joined.end());
      CHECK(joined == s.members);
    }
  }
}

TEST_CASE("psi counting routes agree") {
  for (Int N : {2, 10, 1000, 12345, 100000}) {
    for (Int M : {2, 3, 7, 50, 317}) CHECK(psi_count(N, M) == psi_count_scan(N, M));
  }
  CHECK(psi_count(1000000, 1000) == 344298);
}

TEST_CASE("E_tau examples") {
  const PrimeTable t(100);
  CHECK(e_tau(10, 2, t).members == std::vector<Int>{2, 3, 4, 6, 8, 9});
  CHECK(e_tau(10, 1, t).members == std::vector<Int>{2, 4, 8});
  const auto full = e_tau(100, t.pi(100), t);
  CHECK(full.psi() == 99);
  CHECK(full.members.front() == 2);
  CHECK(full.members.back() == 100);
  CHECK_THROWS(e_tau(10, 0, t));
  CHECK_THROWS(e_tau(10, 5, t));  // p_5 = 11 > 10
}

TEST_CASE("L_j examples") {
  const PrimeTable t(100);
  CHECK(l_j(50, 4, 3, t) == std::vector<Int>{5, 10, 15, 20, 30, 40, 45});
  CHECK(l_j(10, 2, 2, t) == std::vector<Int>{3, 6});
  CHECK(l_j(10, 4, 4, t) == std::vector<Int>{7});
  CHECK(l_j(20, 10, 9, t).empty());  // p_9 = 23 > 20
  CHECK_THROWS(l_j(50, 4, 2, t));    // j must exceed floor(tau/2)
  CHECK(l_j(10, 1, 1, t) == std::vector<Int>{2});
}

TEST_CASE("L_j sets are disjoint subsets of E_j") {
  const PrimeTable t(500);
  for (Int N : {30, 100, 257, 500}) {
    const std::size_t mu = t.pi(N);
    for (std::size_t tau = 1; tau <= mu; ++tau) {
      const auto e = e_tau(N, tau, t);
      std::set<Int> seen;
      for (std::size_t j = tau / 2 + 1; j <= tau; ++j) {
        for (Int n : l_j(N, tau, j, t)) {
          CHECK(largest_prime_factor(n) == t.prime(j));
          CHECK(n <= N);
          CHECK(seen.insert(n).second);
          CHECK(std::binary_search(e.members.begin(), e.members.end(), n));
        }
      }
    }
  }
}

TEST_CASE("magnitude guard") {
  CHECK_THROWS_AS(check_magnitude(kMaxN + 1, "n"), std::overflow_error);
  CHECK_NOTHROW(check_magnitude(kMaxN, "n"));
}
