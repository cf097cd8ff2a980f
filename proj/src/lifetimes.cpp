#include <sharedsig/lifetimes.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sharedsig
{

lifetime_distribution lifetime_distribution::exponential( double rate )
{
  if ( !( rate > 0.0 ) || !std::isfinite( rate ) )
  {
    throw invalid_distribution( "exponential rate must be positive" );
  }
  lifetime_distribution d;
  d.kind_ = kind::exponential;
  d.a_ = rate;
  return d;
}

lifetime_distribution lifetime_distribution::weibull( double shape, double scale )
{
  if ( !( shape > 0.0 ) || !( scale > 0.0 ) || !std::isfinite( shape ) || !std::isfinite( scale ) )
  {
    throw invalid_distribution( "weibull shape and scale must be positive" );
  }
  lifetime_distribution d;
  d.kind_ = kind::weibull;
  d.a_ = shape;
  d.b_ = scale;
  return d;
}

lifetime_distribution lifetime_distribution::empirical( std::vector<std::pair<double, double>> points,
                                                        bool interpolate )
{
  if ( points.empty() )
  {
    throw invalid_distribution( "empirical CDF needs at least one breakpoint" );
  }
  for ( std::size_t i = 0; i < points.size(); ++i )
  {
    const auto [t, f] = points[i];
    if ( !( t >= 0.0 ) || !std::isfinite( t ) || !( f >= 0.0 && f <= 1.0 ) )
    {
      throw invalid_distribution( "empirical breakpoints need t >= 0 and F in [0, 1]" );
    }
    if ( i && ( t <= points[i - 1].first || f < points[i - 1].second ) )
    {
      throw invalid_distribution( "empirical breakpoints must have increasing times and nondecreasing F" );
    }
  }
  lifetime_distribution d;
  d.kind_ = kind::empirical;
  d.points_ = std::move( points );
  d.interpolate_ = interpolate;
  return d;
}

double lifetime_distribution::cdf( double t ) const
{
  if ( !( t >= 0.0 ) )
  {
    throw negative_time( "time must be nonnegative" );
  }
  switch ( kind_ )
  {
  case kind::exponential:
    return -std::expm1( -a_ * t );
  case kind::weibull:
    return -std::expm1( -std::pow( t / b_, a_ ) );
  case kind::empirical:
    break;
  }
  const auto it = std::upper_bound( points_.begin(), points_.end(), t,
                                    []( double x, const auto& p ) { return x < p.first; } );
  if ( it == points_.end() )
  {
    return points_.back().second;
  }
  if ( !interpolate_ )
  {
    return it == points_.begin() ? 0.0 : std::prev( it )->second;
  }
  const auto [t1, f1] = *it;
  const auto [t0, f0] = it == points_.begin() ? std::pair{ 0.0, 0.0 } : *std::prev( it );
  return f0 + ( f1 - f0 ) * ( t - t0 ) / ( t1 - t0 );
}

double lifetime_distribution::quantile( double u ) const
{
  switch ( kind_ )
  {
  case kind::exponential:
    return -std::log1p( -u ) / a_;
  case kind::weibull:
    return b_ * std::pow( -std::log1p( -u ), 1.0 / a_ );
  case kind::empirical:
    break;
  }
  if ( u > points_.back().second )
  {
    return std::numeric_limits<double>::infinity();
  }
  const auto it = std::lower_bound( points_.begin(), points_.end(), u,
                                    []( const auto& p, double x ) { return p.second < x; } );
  if ( !interpolate_ || u <= 0.0 )
  {
    return it->first;
  }
  const auto [t1, f1] = *it;
  const auto [t0, f0] = it == points_.begin() ? std::pair{ 0.0, 0.0 } : *std::prev( it );
  if ( f1 <= f0 )
  {
    return t1;
  }
  return t0 + ( t1 - t0 ) * ( u - f0 ) / ( f1 - f0 );
}

/* kernels */

namespace
{

double binomial_double( unsigned n, unsigned k )
{
  if ( k > n )
  {
    return 0.0;
  }
  k = std::min( k, n - k );
  double out = 1.0;
  for ( unsigned i = 1; i <= k; ++i )
  {
    out = out * ( n - k + i ) / i;
  }
  return out;
}

/// Factor of one group: members observed at `ranks` with CDF values `f` see `levels` survivors.
double group_term( unsigned n, std::span<const unsigned> levels, std::span<const unsigned> ranks,
                   std::span<const double> f )
{
  std::vector<std::size_t> idx( levels.size() );
  std::iota( idx.begin(), idx.end(), 0 );
  std::sort( idx.begin(), idx.end(), [&]( auto a, auto b ) { return ranks[a] < ranks[b]; } );
  std::vector<unsigned> chain;
  std::vector<double> values;
  for ( std::size_t i = 0; i < idx.size(); ++i )
  {
    const auto level = levels[idx[i]];
    if ( level > n )
    {
      throw level_out_of_range( "level " + std::to_string( level ) + " exceeds group size " + std::to_string( n ) );
    }
    if ( i && ranks[idx[i]] == ranks[idx[i - 1]] )
    {
      if ( level != chain.back() )
      {
        throw infeasible_levels( "systems observed at the same time must see the same survivors" );
      }
      continue;
    }
    if ( i && level > chain.back() )
    {
      throw infeasible_levels( "a later observation cannot see more survivors than an earlier one" );
    }
    chain.push_back( level );
    values.push_back( f[idx[i]] );
  }
  return chain_probability( n, chain, values );
}

std::vector<unsigned> ranks_of( std::span<const double> times )
{
  return order_tag::from_times( times ).ranks;
}

} // namespace

double binomial_survival( unsigned n, unsigned level, double f )
{
  if ( level > n )
  {
    throw level_out_of_range( "level " + std::to_string( level ) + " exceeds " + std::to_string( n ) );
  }
  return binomial_double( n, level ) * std::pow( f, n - level ) * std::pow( 1.0 - f, level );
}

double chain_probability( unsigned n, std::span<const unsigned> chain, std::span<const double> cdf_values )
{
  double p = 1.0;
  unsigned above = n;
  double f_prev = 0.0;
  for ( std::size_t i = 0; i < chain.size(); ++i )
  {
    const auto level = chain[i];
    if ( level > above )
    {
      throw infeasible_levels( "survivor counts must be nonincreasing over time" );
    }
    const double increment = i == 0 ? cdf_values[0] : std::max( 0.0, cdf_values[i] - f_prev );
    p *= binomial_double( above, level ) * std::pow( increment, above - level );
    f_prev = cdf_values[i];
    above = level;
  }
  return p * std::pow( 1.0 - f_prev, above );
}

double count_kernel_single( std::span<const lifetime_distribution> dists, std::span<const unsigned> counts,
                            std::span<const unsigned> levels, double t )
{
  if ( dists.size() != counts.size() || counts.size() != levels.size() )
  {
    throw std::invalid_argument( "one distribution, count and level per type is required" );
  }
  double p = 1.0;
  for ( std::size_t k = 0; k < counts.size(); ++k )
  {
    p *= binomial_survival( counts[k], levels[k], dists[k].cdf( t ) );
  }
  return p;
}

double count_kernel_two( const lifetime_distribution& dist, const std::array<unsigned, 3>& counts,
                         const std::array<unsigned, 4>& levels, double t1, double t2 )
{
  const std::array<double, 2> times{ t1, t2 };
  const auto ranks = ranks_of( times );
  const std::array<double, 2> f{ dist.cdf( t1 ), dist.cdf( t2 ) };
  return binomial_survival( counts[0], levels[0], f[0] ) * binomial_survival( counts[1], levels[1], f[1] ) *
         group_term( counts[2], std::array{ levels[2], levels[3] }, ranks, f );
}

double count_kernel_two_multitype( std::span<const lifetime_distribution> dists, const group_counts& counts,
                                   std::span<const unsigned> levels, double t1, double t2 )
{
  if ( counts.systems() != 2 || dists.size() != counts.types() || levels.size() != 4 * counts.types() )
  {
    throw std::invalid_argument( "two-system kernel needs one distribution and four levels per type" );
  }
  double p = 1.0;
  for ( std::size_t k = 0; k < counts.types(); ++k )
  {
    p *= count_kernel_two( dists[k], { counts( k, 1 ), counts( k, 2 ), counts( k, 3 ) },
                           { levels[4 * k], levels[4 * k + 1], levels[4 * k + 2], levels[4 * k + 3] }, t1, t2 );
  }
  return p;
}

double count_kernel_three( const lifetime_distribution& dist, const std::array<unsigned, 7>& counts,
                           const std::array<unsigned, 12>& levels, double t1, double t2, double t3 )
{
  const std::array<double, 3> times{ t1, t2, t3 };
  const auto ranks = ranks_of( times );
  const std::array<double, 3> f{ dist.cdf( t1 ), dist.cdf( t2 ), dist.cdf( t3 ) };
  auto pair = [&]( unsigned n, unsigned a, unsigned b, std::size_t i, std::size_t j ) {
    return group_term( n, std::array{ a, b }, std::array{ ranks[i], ranks[j] }, std::array{ f[i], f[j] } );
  };
  return binomial_survival( counts[0], levels[0], f[0] ) * binomial_survival( counts[1], levels[1], f[1] ) *
         binomial_survival( counts[2], levels[2], f[2] ) * pair( counts[3], levels[3], levels[4], 0, 1 ) *
         pair( counts[4], levels[5], levels[6], 0, 2 ) * pair( counts[5], levels[7], levels[8], 1, 2 ) *
         group_term( counts[6], std::array{ levels[9], levels[10], levels[11] }, ranks, f );
}

std::vector<std::vector<double>> cdf_grid( std::span<const lifetime_distribution> dists,
                                           std::span<const double> times )
{
  std::vector<std::vector<double>> out;
  for ( const auto& d : dists )
  {
    std::vector<double> row;
    for ( auto t : times )
    {
      row.push_back( d.cdf( t ) );
    }
    out.push_back( std::move( row ) );
  }
  return out;
}

double cell_kernel( const table_layout& layout, std::span<const unsigned> cell,
                    const std::vector<std::vector<double>>& cdf_values )
{
  double p = 1.0;
  std::vector<unsigned> levels, ranks;
  std::vector<double> f;
  for ( const auto& b : layout.blocks() )
  {
    levels.clear();
    ranks.clear();
    f.clear();
    for ( std::size_t x = 0; x < b.members.size(); ++x )
    {
      levels.push_back( cell[b.coords[x]] );
      ranks.push_back( layout.order().ranks[b.members[x]] );
      f.push_back( cdf_values[b.type][b.members[x]] );
    }
    p *= group_term( b.size, levels, ranks, f );
    if ( p == 0.0 )
    {
      break;
    }
  }
  return p;
}

double cell_kernel( const table_layout& layout, std::span<const unsigned> cell,
                    std::span<const lifetime_distribution> dists, std::span<const double> times )
{
  if ( times.size() != layout.systems() || dists.size() != layout.type_names().size() )
  {
    throw std::invalid_argument( "one time per system and one distribution per type is required" );
  }
  if ( order_tag::from_times( times ) != layout.order() )
  {
    throw infeasible_levels( "times do not match the table ordering " + layout.order().to_string() );
  }
  return cell_kernel( layout, cell, cdf_grid( dists, times ) );
}

} // namespace sharedsig
