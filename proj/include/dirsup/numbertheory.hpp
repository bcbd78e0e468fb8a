#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dirsup {

using Int = std::int64_t;

/// Largest N accepted anywhere in the library.
inline constexpr Int kMaxN = Int{1} << 62;

/// Thrown when a factorization needs a prime beyond the table limit.
class TableTooSmall : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

void check_magnitude(Int n, const char* what);

/// All primes up to `limit`, with 1-based ordinals: prime(1) == 2.
class PrimeTable {
 public:
  explicit PrimeTable(Int limit);

  Int limit() const { return limit_; }
  std::size_t size() const { return primes_.size(); }
  std::span<const Int> primes() const { return primes_; }

  /// p_j for 1 <= j <= size().
  Int prime(std::size_t j) const;
  /// Ordinal j of p, or 0 when p is not a prime <= limit.
  std::size_t ordinal(Int p) const;
  /// pi(x) for 0 <= x <= limit.
  std::size_t pi(Int x) const;

 private:
  Int limit_;
  std::vector<Int> primes_;
};

PrimeTable sieve_primes(Int limit);

/// P+(n). P+(1) is 1 by convention.
Int largest_prime_factor(Int n);

/// Sparse exponent vector a(n): pairs (ordinal j, a_j(n)) sorted by j.
struct ExponentVector {
  Int n = 1;
  std::vector<std::pair<std::size_t, int>> exponents;

  int exponent(std::size_t j) const;
  /// Largest ordinal with a nonzero exponent (0 for n == 1).
  std::size_t top_ordinal() const { return exponents.empty() ? 0 : exponents.back().first; }
  Int recompose(const PrimeTable& table) const;
};

ExponentVector factor_exponents(Int n, const PrimeTable& table);

/// S(N, M) together with its partition by largest prime factor.
struct SmoothSet {
  Int N = 0;
  Int M = 0;
  std::vector<Int> members;
  /// ordinal j -> { n in members : P+(n) = p_j }, each cell ascending.
  std::map<std::size_t, std::vector<Int>> partition;

  std::size_t psi() const { return members.size(); }
};

SmoothSet smooth_set(Int N, Int M);
SmoothSet smooth_set(Int N, Int M, const PrimeTable& table);

/// E_tau(N): integers in [2, N] whose largest prime factor is at most p_tau.
SmoothSet e_tau(Int N, std::size_t tau, const PrimeTable& table);

/// L_j = { p_j * m : m <= N / p_j, P+(m) <= p_{floor(tau/2)} }, ascending.
/// m = 1 is admitted; when floor(tau/2) == 0 only m = 1 qualifies.
std::vector<Int> l_j(Int N, std::size_t tau, std::size_t j, const PrimeTable& table);

Int divisor_count(Int n);

/// Psi(N, M) by enumerating products of primes <= M. Excludes 1.
Int psi_count(Int N, Int M);
/// Psi(N, M) by scanning a largest-prime-factor sieve over [2, N].
Int psi_count_scan(Int N, Int M);

/// Largest-prime-factor table for every n <= limit (entry for 0 and 1 is 1).
class LargestFactorSieve {
 public:
  explicit LargestFactorSieve(Int limit);
  Int limit() const { return static_cast<Int>(lpf_.size()) - 1; }
  Int operator()(Int n) const { return lpf_.at(static_cast<std::size_t>(n)); }

 private:
  std::vector<std::uint32_t> lpf_;
};

}  // namespace dirsup
