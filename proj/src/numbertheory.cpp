#include "dirsup/numbertheory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace dirsup {

namespace {

Int isqrt(Int n) {
  auto r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<Int> simple_sieve(Int limit) {
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  std::vector<Int> out;
  for (Int i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (Int m = i * i; m <= limit; m += i) composite[static_cast<std::size_t>(m)] = true;
  }
  return out;
}

// Visits every n in [2, N] with all prime factors in `primes` exactly once,
// passing n and the index of its largest prime factor.
template <typename Visit>
void enumerate_products(Int N, std::span<const Int> primes, Visit&& visit) {
  auto walk = [&](auto& self, Int cur, std::size_t start) -> void {
    for (std::size_t i = start; i < primes.size(); ++i) {
      const Int p = primes[i];
      const Int room = N / p;
      if (cur > room) break;
      Int v = cur * p;
      while (true) {
        visit(v, i);
        self(self, v, i + 1);
        if (v > room) break;
        v *= p;
      }
    }
  };
  walk(walk, 1, 0);
}

}  // namespace

void check_magnitude(Int n, const char* what) {
  if (n > kMaxN) {
    throw std::overflow_error(std::string(what) + " exceeds 2^62");
  }
}

PrimeTable::PrimeTable(Int limit) : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2");
  check_magnitude(limit, "sieve limit");

  // Segmented Eratosthenes over [2, limit].
  const Int root = isqrt(limit);
  const std::vector<Int> base = simple_sieve(root);
  constexpr Int kSegment = Int{1} << 16;
  std::vector<char> composite;
  for (Int lo = 2; lo <= limit; lo += kSegment) {
    const Int hi = std::min(limit, lo + kSegment - 1);
    composite.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (Int p : base) {
      if (p * p > hi) break;
      Int start = std::max(p * p, (lo + p - 1) / p * p);
      for (Int m = start; m <= hi; m += p) composite[static_cast<std::size_t>(m - lo)] = 1;
    }
    for (Int n = lo; n <= hi; ++n) {
      if (!composite[static_cast<std::size_t>(n - lo)]) primes_.push_back(n);
    }
  }
}

Int PrimeTable::prime(std::size_t j) const {
  if (j == 0 || j > primes_.size()) {
    throw std::out_of_range("prime ordinal " + std::to_string(j) + " outside table of size " +
                            std::to_string(primes_.size()));
  }
  return primes_[j - 1];
}

std::size_t PrimeTable::ordinal(Int p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return 0;
  return static_cast<std::size_t>(it - primes_.begin()) + 1;
}

std::size_t PrimeTable::pi(Int x) const {
  if (x > limit_) throw std::out_of_range("pi(x) queried beyond table limit");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) -
                                  primes_.begin());
}

PrimeTable sieve_primes(Int limit) { return PrimeTable(limit); }

Int largest_prime_factor(Int n) {
  if (n <= 0) throw std::invalid_argument("largest_prime_factor needs n >= 1");
  if (n == 1) return 1;
  Int largest = 1;
  for (Int p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      largest = p;
      n /= p;
    }
  }
  return n > 1 ? n : largest;
}

int ExponentVector::exponent(std::size_t j) const {
  auto it = std::lower_bound(exponents.begin(), exponents.end(), j,
                             [](const auto& e, std::size_t k) { return e.first < k; });
  return (it != exponents.end() && it->first == j) ? it->second : 0;
}

Int ExponentVector::recompose(const PrimeTable& table) const {
  Int out = 1;
  for (auto [j, a] : exponents) {
    for (int k = 0; k < a; ++k) out *= table.prime(j);
  }
  return out;
}

ExponentVector factor_exponents(Int n, const PrimeTable& table) {
  if (n < 2) throw std::invalid_argument("factor_exponents needs n >= 2");
  ExponentVector out;
  out.n = n;
  Int rest = n;
  const auto primes = table.primes();
  for (std::size_t i = 0; i < primes.size() && rest > 1; ++i) {
    const Int p = primes[i];
    if (p > rest / p) {
      // rest is prime now
      const std::size_t j = table.ordinal(rest);
      if (j == 0) break;
      out.exponents.emplace_back(j, 1);
      rest = 1;
      break;
    }
    int a = 0;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    if (a > 0) out.exponents.emplace_back(i + 1, a);
  }
  if (rest > 1) {
    throw TableTooSmall("prime factor of " + std::to_string(n) + " exceeds table limit " +
                        std::to_string(table.limit()));
  }
  return out;
}

SmoothSet smooth_set(Int N, Int M, const PrimeTable& table) {
  if (N < 2 || M < 2) throw std::invalid_argument("smooth_set needs N >= 2 and M >= 2");
  check_magnitude(N, "N");
  const Int cap = std::min(N, M);
  if (cap > table.limit()) throw TableTooSmall("prime table does not reach min(N, M)");

  const auto all = table.primes();
  const auto count = table.pi(cap);
  SmoothSet out;
  out.N = N;
  out.M = M;
  std::vector<std::vector<Int>> cells(count);
  if (N <= (Int{1} << 16)) {
    // small N: bucket by value, which yields every list already sorted
    std::vector<std::uint32_t> owner(static_cast<std::size_t>(N) + 1, 0);
    enumerate_products(N, all.first(count), [&](Int n, std::size_t i) { owner[n] = static_cast<std::uint32_t>(i + 1); });
    for (Int n = 2; n <= N; ++n) {
      if (owner[n] == 0) continue;
      out.members.push_back(n);
      cells[owner[n] - 1].push_back(n);
    }
  } else {
    enumerate_products(N, all.first(count), [&](Int n, std::size_t i) {
      out.members.push_back(n);
      cells[i].push_back(n);
    });
    std::sort(out.members.begin(), out.members.end());
    for (auto& cell : cells) std::sort(cell.begin(), cell.end());
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!cells[i].empty()) out.partition.emplace_hint(out.partition.end(), i + 1, std::move(cells[i]));
  }
  return out;
}

SmoothSet smooth_set(Int N, Int M) {
  if (N < 2 || M < 2) throw std::invalid_argument("smooth_set needs N >= 2 and M >= 2");
  check_magnitude(N, "N");
  return smooth_set(N, M, PrimeTable(std::min(N, M)));
}

SmoothSet e_tau(Int N, std::size_t tau, const PrimeTable& table) {
  if (tau < 1 || tau > table.size() || table.prime(tau) > N) {
    throw std::invalid_argument("e_tau needs 1 <= tau <= pi(N)");
  }
  return smooth_set(N, table.prime(tau), table);
}

std::vector<Int> l_j(Int N, std::size_t tau, std::size_t j, const PrimeTable& table) {
  const std::size_t half = tau / 2;
  if (tau < 1 || tau > table.size() || j <= half || j > tau) {
    throw std::invalid_argument("l_j needs floor(tau/2) < j <= tau <= table size");
  }
  check_magnitude(N, "N");
  const Int pj = table.prime(j);
  std::vector<Int> out;
  if (pj > N) return out;
  const Int cofactor_max = N / pj;
  out.push_back(pj);
  if (half > 0) {
    enumerate_products(cofactor_max, table.primes().first(half),
                       [&](Int m, std::size_t) { out.push_back(pj * m); });
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int divisor_count(Int n) {
  if (n <= 0) throw std::invalid_argument("divisor_count needs n >= 1");
  Int count = 1;
  for (Int p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    int a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    count *= a + 1;
  }
  if (n > 1) count *= 2;
  return count;
}

Int psi_count(Int N, Int M) {
  if (N < 2 || M < 2) throw std::invalid_argument("psi_count needs N >= 2 and M >= 2");
  check_magnitude(N, "N");
  const PrimeTable table(std::min(N, M));
  Int count = 0;
  enumerate_products(N, table.primes(), [&](Int, std::size_t) { ++count; });
  return count;
}

LargestFactorSieve::LargestFactorSieve(Int limit) {
  if (limit < 1) throw std::invalid_argument("sieve limit must be >= 1");
  if (limit > Int{4'000'000'000}) throw std::overflow_error("scan sieve limit too large");
  lpf_.assign(static_cast<std::size_t>(limit) + 1, 1);
  for (Int p = 2; p <= limit; ++p) {
    if (lpf_[static_cast<std::size_t>(p)] != 1) continue;
    for (Int m = p; m <= limit; m += p) lpf_[static_cast<std::size_t>(m)] = static_cast<std::uint32_t>(p);
  }
}

Int psi_count_scan(Int N, Int M) {
  if (N < 2 || M < 2) throw std::invalid_argument("psi_count_scan needs N >= 2 and M >= 2");
  const LargestFactorSieve lpf(N);
  Int count = 0;
  for (Int n = 2; n <= N; ++n) count += lpf(n) <= M ? 1 : 0;
  return count;
}

}  // namespace dirsup
