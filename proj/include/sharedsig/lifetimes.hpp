#pragma once

#include <sharedsig/levels.hpp>
#include <sharedsig/system_model.hpp>

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace sharedsig
{

/*! \brief Failure-time distribution of one component type.

  Exponential(rate), Weibull(shape, scale) or an empirical CDF given by
  breakpoints. Empirical CDFs are right-continuous steps by default; with
  `interpolate` they are piecewise linear, starting from (0, 0) when the
  first breakpoint is after time zero. Beyond the last breakpoint the CDF
  stays at its last value, which may be below one.
*/
class lifetime_distribution
{
public:
  enum class kind
  {
    exponential,
    weibull,
    empirical
  };

  static lifetime_distribution exponential( double rate );
  static lifetime_distribution weibull( double shape, double scale );
  static lifetime_distribution empirical( std::vector<std::pair<double, double>> points, bool interpolate = false );

  kind distribution_kind() const { return kind_; }
  double rate() const { return a_; }
  double shape() const { return a_; }
  double scale() const { return b_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  bool interpolated() const { return interpolate_; }

  /// F(t); throws negative_time for t < 0.
  double cdf( double t ) const;

  /// Generalized inverse inf{t : F(t) >= u}; +infinity when u exceeds the CDF's supremum.
  double quantile( double u ) const;

private:
  kind kind_ = kind::exponential;
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<std::pair<double, double>> points_;
  bool interpolate_ = false;
};

inline double cdf( const lifetime_distribution& d, double t ) { return d.cdf( t ); }

/// Probability that exactly `level` of `n` iid components survive past a time with CDF value `f`.
double binomial_survival( unsigned n, unsigned level, double f );

/*! \brief Probability of a survivor chain in one group.

  `chain` lists survivor counts at increasing observation times (nonincreasing
  values); `cdf_values` are the CDF at those times (nondecreasing). Returns
  n! / ((n - L1)! (L1 - L2)! ... Lm!) F1^(n - L1) (F2 - F1)^(L1 - L2) ... (1 - Fm)^Lm.
*/
double chain_probability( unsigned n, std::span<const unsigned> chain, std::span<const double> cdf_values );

/// Single-system kernel: product over types of binomial survival probabilities at time t.
double count_kernel_single( std::span<const lifetime_distribution> dists, std::span<const unsigned> counts,
                            std::span<const unsigned> levels, double t );

/// Two systems, one type. `counts` = (n_1, n_2, n_12), `levels` = (l_1, l_2, l_[1]2, l_1[2]).
double count_kernel_two( const lifetime_distribution& dist, const std::array<unsigned, 3>& counts,
                         const std::array<unsigned, 4>& levels, double t1, double t2 );

/// Two systems, K types: product of per-type two-system kernels. `levels` holds 4 entries per type.
double count_kernel_two_multitype( std::span<const lifetime_distribution> dists, const group_counts& counts,
                                   std::span<const unsigned> levels, double t1, double t2 );

/// Three systems, one type. `counts` = (n_1, n_2, n_3, n_12, n_13, n_23, n_123), `levels` the 12-entry vector.
double count_kernel_three( const lifetime_distribution& dist, const std::array<unsigned, 7>& counts,
                           const std::array<unsigned, 12>& levels, double t1, double t2, double t3 );

/// Kernel of any feasible cell of a joint layout at per-system times; types use `dists`.
double cell_kernel( const table_layout& layout, std::span<const unsigned> cell,
                    std::span<const lifetime_distribution> dists, std::span<const double> times );

/// CDF values indexed [type][system] for a set of per-system times.
std::vector<std::vector<double>> cdf_grid( std::span<const lifetime_distribution> dists,
                                           std::span<const double> times );

/// Kernel with precomputed CDF values, see `cdf_grid`.
double cell_kernel( const table_layout& layout, std::span<const unsigned> cell,
                    const std::vector<std::vector<double>>& cdf_values );

} // namespace sharedsig
