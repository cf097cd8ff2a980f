#include <doctest.h>

#include "fixtures.hpp"

#include <sharedsig/errors.hpp>
#include <sharedsig/lifetimes.hpp>
#include <sharedsig/oracle.hpp>

#include <cmath>
#include <random>

using namespace sharedsig;
using namespace fixtures;

namespace
{

const double ln2 = std::log( 2.0 );

} // namespace

TEST_CASE( "distribution CDFs" )
{
  const auto e = lifetime_distribution::exponential( 1.0 );
  CHECK( e.cdf( ln2 ) == doctest::Approx( 0.5 ).epsilon( 1e-15 ) );
  CHECK( e.cdf( 0.0 ) == 0.0 );
  CHECK_THROWS_AS( e.cdf( -1.0 ), negative_time );

  const auto w = lifetime_distribution::weibull( 1.0, 1.0 / 3.0 );
  const auto e3 = lifetime_distribution::exponential( 3.0 );
  for ( double t : { 0.0, 0.1, 0.7, 2.5 } )
  {
    CHECK( std::abs( w.cdf( t ) - e3.cdf( t ) ) < 1e-15 );
  }
  CHECK( lifetime_distribution::weibull( 2.0, 1.0 ).cdf( 1.0 ) == doctest::Approx( 1.0 - std::exp( -1.0 ) ) );
}

TEST_CASE( "empirical CDFs" )
{
  const std::vector<std::pair<double, double>> points{ { 1.0, 0.2 }, { 2.0, 0.5 } };
  const auto step = lifetime_distribution::empirical( points );
  CHECK( step.cdf( 0.5 ) == 0.0 );
  CHECK( step.cdf( 1.0 ) == 0.2 );
  CHECK( step.cdf( 1.5 ) == 0.2 );
  CHECK( step.cdf( 3.0 ) == 0.5 );
  CHECK( step.quantile( 0.2 ) == 1.0 );
  CHECK( step.quantile( 0.3 ) == 2.0 );
  CHECK( std::isinf( step.quantile( 0.6 ) ) );

  const auto linear = lifetime_distribution::empirical( points, true );
  CHECK( linear.cdf( 0.5 ) == doctest::Approx( 0.1 ) );
  CHECK( linear.cdf( 1.5 ) == doctest::Approx( 0.35 ) );
  CHECK( linear.cdf( 5.0 ) == 0.5 );
  CHECK( linear.quantile( 0.35 ) == doctest::Approx( 1.5 ) );

  const auto at_zero = lifetime_distribution::empirical( { { 0.0, 0.1 }, { 1.0, 1.0 } } );
  CHECK( at_zero.cdf( 0.0 ) == 0.1 );
}

TEST_CASE( "invalid distributions" )
{
  CHECK_THROWS_AS( lifetime_distribution::exponential( 0.0 ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::weibull( -1.0, 1.0 ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::weibull( 1.0, 0.0 ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::empirical( {} ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::empirical( { { 1.0, 0.5 }, { 2.0, 0.4 } } ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::empirical( { { 1.0, 0.5 }, { 1.0, 0.6 } } ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::empirical( { { 1.0, 1.5 } } ), invalid_distribution );
  CHECK_THROWS_AS( lifetime_distribution::empirical( { { -1.0, 0.5 } } ), invalid_distribution );
}

TEST_CASE( "quantile inverts the CDF" )
{
  for ( const auto& d : { lifetime_distribution::exponential( 2.0 ), lifetime_distribution::weibull( 0.7, 1.3 ) } )
  {
    for ( double u : { 0.01, 0.3, 0.5, 0.99 } )
    {
      CHECK( d.cdf( d.quantile( u ) ) == doctest::Approx( u ).epsilon( 1e-12 ) );
    }
  }
}

TEST_CASE( "single-system kernel" )
{
  const auto d = unit_exponential();
  const std::vector<unsigned> n2{ 2 }, l2{ 2 }, n1{ 1 }, l1{ 1 };
  CHECK( count_kernel_single( d, n2, l2, 0.0 ) == 1.0 );
  CHECK( count_kernel_single( d, n1, l1, ln2 ) == doctest::Approx( 0.5 ).epsilon( 1e-15 ) );
  double sum = 0.0;
  for ( unsigned l = 0; l <= 5; ++l )
  {
    const std::vector<unsigned> n{ 5 }, lv{ l };
    sum += count_kernel_single( d, n, lv, 0.8 );
  }
  CHECK( std::abs( sum - 1.0 ) < 1e-14 );
  const std::vector<unsigned> too_many{ 3 };
  CHECK_THROWS_AS( count_kernel_single( d, n2, too_many, 1.0 ), level_out_of_range );
}

TEST_CASE( "two-system kernel" )
{
  const auto d = lifetime_distribution::exponential( 1.0 );
  CHECK( count_kernel_two( d, { 0, 0, 1 }, { 0, 0, 1, 1 }, ln2, std::log( 4.0 ) ) ==
         doctest::Approx( 0.25 ).epsilon( 1e-15 ) );
  CHECK_THROWS_AS( count_kernel_two( d, { 0, 0, 2 }, { 0, 0, 1, 2 }, 0.5, 1.0 ), infeasible_levels );
  CHECK_THROWS_AS( count_kernel_two( d, { 0, 0, 2 }, { 0, 0, 1, 0 }, 1.0, 1.0 ), infeasible_levels );
  CHECK_THROWS_AS( count_kernel_two( d, { 1, 0, 2 }, { 2, 0, 1, 1 }, 1.0, 1.0 ), level_out_of_range );

  // SAME kernel is the limit of the ordered kernel
  const std::array<unsigned, 3> n{ 2, 1, 3 };
  for ( unsigned a = 0; a <= 2; ++a )
  {
    for ( unsigned s = 0; s <= 3; ++s )
    {
      const std::array<unsigned, 4> l{ a, 1, s, s };
      const double tied = count_kernel_two( d, n, l, 0.7, 0.7 );
      CHECK( std::abs( count_kernel_two( d, n, l, 0.7, 0.7 + 1e-8 ) - tied ) < 1e-6 );
      CHECK( std::abs( count_kernel_two( d, n, l, 0.7 + 1e-8, 0.7 ) - tied ) < 1e-6 );
    }
  }
}

TEST_CASE( "multi-type and three-system kernels" )
{
  group_counts counts( 2, 2 );
  counts.at( 0, 0b11 ) = 1;
  counts.at( 1, 0b11 ) = 1;
  const auto d = unit_exponential( 2 );
  const std::vector<unsigned> levels{ 0, 0, 1, 1, 0, 0, 1, 1 };
  CHECK( count_kernel_two_multitype( d, counts, levels, ln2, ln2 ) == doctest::Approx( 0.25 ).epsilon( 1e-15 ) );

  const std::array<unsigned, 7> n{ 0, 0, 1, 1, 1, 1, 1 };
  const std::array<unsigned, 12> l{ 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1 };
  CHECK( count_kernel_three( d[0], n, l, ln2, ln2, ln2 ) == doctest::Approx( 0.03125 ).epsilon( 1e-15 ) );
  CHECK( count_kernel_three( d[0], n, l, 0.0, 0.0, 0.0 ) == 1.0 );
}

TEST_CASE( "kernel sums to one over a layout" )
{
  const auto model = example4();
  const auto d = unit_exponential();
  std::mt19937_64 rng( 5 );
  std::uniform_real_distribution<double> time( 0.0, 2.0 );
  for ( const auto& o : order_tag::all( 3 ) )
  {
    std::vector<double> t( 3 );
    // draw times consistent with the ordering
    std::vector<double> by_rank{ time( rng ), time( rng ), time( rng ) };
    std::sort( by_rank.begin(), by_rank.end() );
    for ( std::size_t i = 0; i < 3; ++i )
    {
      t[i] = by_rank[o.ranks[i]];
    }
    const auto layout = table_layout::joint( model, o );
    double sum = 0.0;
    for ( const auto& cell : layout.feasible_cells() )
    {
      sum += cell_kernel( layout, cell, d, t );
    }
    CHECK( std::abs( sum - 1.0 ) < 1e-12 );
  }
}

TEST_CASE( "kernel matches level-count frequencies" )
{
  // Example 2 groups (1, 1, 2) at t1 < t2: count survivors per group in simulated lifetimes
  const auto model = example2();
  const auto d = lifetime_distribution::exponential( 1.0 );
  const double t1 = 0.4, t2 = 0.9;
  const auto layout = table_layout::joint( model, order_tag::earlier() );
  std::vector<std::size_t> hits( layout.dense_size(), 0 );
  std::mt19937_64 rng( 99 );
  const std::size_t samples = 200'000;
  for ( std::size_t s = 0; s < samples; ++s )
  {
    level_vector cell( 4, 0 );
    for ( std::size_t c = 0; c < 4; ++c )
    {
      const double life = d.quantile( ( static_cast<double>( rng() >> 11 ) + 0.5 ) * 0x1.0p-53 );
      const auto g = model.component_group( c );
      if ( g == 0b01 && life > t1 )
        ++cell[0];
      if ( g == 0b10 && life > t2 )
        ++cell[1];
      if ( g == 0b11 && life > t1 )
        ++cell[2];
      if ( g == 0b11 && life > t2 )
        ++cell[3];
    }
    ++hits[layout.dense_index( cell )];
  }
  for ( const auto& cell : layout.feasible_cells() )
  {
    const double p = count_kernel_two( d, { 1, 1, 2 }, { cell[0], cell[1], cell[2], cell[3] }, t1, t2 );
    const double freq = static_cast<double>( hits[layout.dense_index( cell )] ) / samples;
    const double se = std::sqrt( p * ( 1.0 - p ) / samples );
    CAPTURE( cell );
    CHECK( std::abs( freq - p ) <= 4.0 * se + 1e-12 );
  }
}
