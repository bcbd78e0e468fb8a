#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "dirsup/bounds.hpp"
#include "dirsup/polynomial.hpp"

namespace dirsup {

/// Stateless keyed mixer: the same key always yields the same 64 bits.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// eps_n for term n drawn from key (seed, replicate, n).
SignAssignment sample_signs(const DirichletSpec& spec, std::uint64_t seed, std::uint64_t replicate);

enum class Method { torus_grid, z_exact, line_grid };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct EstimateOptions {
  std::size_t grid_budget = 1024;
  std::size_t refine_steps = 3;
  double line_t_max = 1000.0;
  std::size_t line_steps = 20001;
  unsigned threads = 1;
};

struct EstimateRecord {
  Method method = Method::z_exact;
  Int N = 0;
  std::size_t tau = 0;
  double sigma = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  /// Mean of the per-draw supremum values under `method`.
  double estimate = 0.0;
  /// Sample standard deviation / sqrt(R).
  double std_error = 0.0;
  /// Mean certificate gap (torus-grid), 0 for z-exact, l1 - estimate for line-grid.
  double mean_gap = 0.0;
  /// Mean of exact_sup_Z over the same draws.
  double mean_lower_z = 0.0;
  double l1 = 0.0;
  std::size_t violations = 0;
};

/// Sum computed by a fixed pairwise tree over the index, independent of
/// how values were produced.
double pairwise_sum(const std::vector<double>& values);

EstimateRecord estimate_esup(const DirichletSpec& spec, std::size_t tau, Method method,
                             std::size_t replicates, std::uint64_t seed,
                             const EstimateOptions& options = {});

/// A finite family {X_z} with X_z = sum_i rows[z][i] eps_i.
struct RademacherFamily {
  std::vector<std::vector<double>> rows;

  std::size_t index_count() const { return rows.size(); }
  std::size_t term_count() const { return rows.empty() ? 0 : rows.front().size(); }
};

struct Lemma31Report {
  double mean_with_y = 0.0;
  double mean_without_y = 0.0;
  double stderr_with_y = 0.0;
  double stderr_without_y = 0.0;
  std::size_t replicates = 0;
  /// mean_with_y < mean_without_y - 3 * combined standard error.
  bool flagged = false;
};

/// Monte Carlo comparison of E sup_z |X_z + Y_z| and E sup_z |X_z|.
Lemma31Report lemma31_check(const RademacherFamily& x, const RademacherFamily& y,
                            std::size_t replicates, std::uint64_t seed);

struct Lemma31Exact {
  double e_with_y = 0.0;
  double e_without_y = 0.0;
  bool holds = false;
};

/// Exact expectations by enumerating all sign patterns (<= 24 signs total).
Lemma31Exact lemma31_exact(const RademacherFamily& x, const RademacherFamily& y);

/// X = Q' and Y = Q - Q' restricted to the sign lattice Z, as Rademacher families.
std::pair<RademacherFamily, RademacherFamily> z_lattice_families(const DirichletSpec& spec,
                                                                 std::size_t tau);

enum class TauRuleKind { explicit_list, pi_n, sqrt_n, rs_optimal };

struct TauRule {
  TauRuleKind kind = TauRuleKind::pi_n;
  /// One value for every N, or one per grid entry.
  std::vector<std::size_t> values;

  std::size_t resolve(Int N, std::size_t grid_index, const PrimeTable& table) const;
};

struct RatioRow {
  Int N = 0;
  std::size_t tau = 0;
  double sigma = 0.0;
  EstimateRecord record;
  /// N^{1-sigma} / log N.
  double rate = 0.0;
  double ratio = 0.0;
  double thm11_upper = 0.0;
  double thm11_lower = 0.0;
  double l1 = 0.0;
};

std::vector<RatioRow> ratio_table(const std::vector<Int>& n_grid, const TauRule& rule,
                                  double sigma, Method method, std::size_t replicates,
                                  std::uint64_t seed, const EstimateOptions& options = {});

}  // namespace dirsup
