#include <sharedsig/reliability.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>

namespace sharedsig
{

reliability_engine::reliability_engine( shared_model model, std::vector<lifetime_distribution> distributions,
                                        std::uint64_t budget )
    : model_( std::move( model ) ), dists_( std::move( distributions ) ), budget_( budget )
{
  if ( dists_.size() != model_.types().size() )
  {
    throw invalid_distribution( "expected one distribution per component type (" +
                                std::to_string( model_.types().size() ) + "), got " +
                                std::to_string( dists_.size() ) );
  }
}

std::shared_ptr<const signature_table> reliability_engine::table( const order_tag& order, event_kind event ) const
{
  const auto key = std::pair{ order, event };
  {
    std::lock_guard lock( mutex_ );
    if ( auto it = cache_.find( key ); it != cache_.end() )
    {
      return it->second;
    }
  }
  auto computed = std::make_shared<const signature_table>( variant_signature( model_, order, event, budget_ ) );
  std::lock_guard lock( mutex_ );
  return cache_.emplace( key, std::move( computed ) ).first->second;
}

double reliability_engine::event_probability( event_kind event, std::span<const double> times ) const
{
  if ( times.size() != model_.system_count() )
  {
    throw wrong_arity( "expected one time per system" );
  }
  for ( auto t : times )
  {
    if ( !( t >= 0.0 ) )
    {
      throw negative_time( "times must be nonnegative" );
    }
  }
  const auto tab = table( order_tag::from_times( times ), event );
  const auto f = cdf_grid( dists_, times );
  double p = 0.0;
  for ( std::size_t i = 0; i < tab->size(); ++i )
  {
    if ( tab->favourable( i ) != 0 )
    {
      p += tab->value_double( i ) * cell_kernel( tab->layout(), tab->cell( i ), f );
    }
  }
  return std::clamp( p, 0.0, 1.0 );
}

double reliability_engine::joint_survival( std::span<const double> times ) const
{
  return event_probability( event_kind::both, times );
}

double reliability_engine::marginal_survival( std::size_t system, double t ) const
{
  if ( system >= model_.system_count() )
  {
    throw unknown_system( "system index out of range" );
  }
  if ( !( t >= 0.0 ) )
  {
    throw negative_time( "time must be nonnegative" );
  }
  order_tag order;
  order.ranks.assign( model_.system_count(), 0u );
  order.ranks[system] = 1;
  const auto tab = table( order, event_kind::both );

  std::vector<double> f;
  for ( const auto& d : dists_ )
  {
    f.push_back( d.cdf( t ) );
  }
  double p = 0.0;
  for ( std::size_t i = 0; i < tab->size(); ++i )
  {
    const auto& cell = tab->cell( i );
    double kernel = 1.0;
    for ( const auto& b : tab->layout().blocks() )
    {
      for ( std::size_t x = 0; x < b.members.size(); ++x )
      {
        if ( b.members[x] != system && cell[b.coords[x]] != b.size )
        {
          kernel = 0.0;
        }
        else if ( b.members[x] == system )
        {
          kernel *= binomial_survival( b.size, cell[b.coords[x]], f[b.type] );
        }
      }
    }
    if ( kernel != 0.0 && tab->favourable( i ) != 0 )
    {
      p += tab->value_double( i ) * kernel;
    }
  }
  return std::clamp( p, 0.0, 1.0 );
}

double joint_survival_two( const reliability_engine& engine, double t1, double t2 )
{
  if ( engine.model().system_count() != 2 )
  {
    throw wrong_arity( "joint_survival_two needs a two-system model" );
  }
  const std::array times{ t1, t2 };
  return engine.joint_survival( times );
}

double joint_survival_three( const reliability_engine& engine, double t1, double t2, double t3 )
{
  if ( engine.model().system_count() != 3 )
  {
    throw wrong_arity( "joint_survival_three needs a three-system model" );
  }
  const std::array times{ t1, t2, t3 };
  return engine.joint_survival( times );
}

double marginal_survival( const reliability_engine& engine, std::size_t system, double t )
{
  return engine.marginal_survival( system, t );
}

double marginal_survival_single_route( const shared_model& model, std::span<const lifetime_distribution> dists,
                                       std::size_t system, double t )
{
  const auto tab = survival_signature_single( model, system, false );
  std::vector<unsigned> counts;
  for ( std::size_t k = 0; k < model.types().size(); ++k )
  {
    counts.push_back( model.counts().system_total( k, system ) );
  }
  double p = 0.0;
  for ( std::size_t i = 0; i < tab.size(); ++i )
  {
    p += tab.value_double( i ) * count_kernel_single( dists, counts, tab.cell( i ), t );
  }
  return std::clamp( p, 0.0, 1.0 );
}

namespace
{

void check_pair( const reliability_engine& engine, std::size_t target, std::size_t given )
{
  const auto n = engine.model().system_count();
  if ( target >= n || given >= n )
  {
    throw unknown_system( "system index out of range" );
  }
  if ( target == given )
  {
    throw std::invalid_argument( "target and conditioning system must differ" );
  }
}

/// P(T_target > t_target, T_given <= t_given) on the pair's own model.
double target_survives_given_fails( const reliability_engine& engine, double t_target, double t_given,
                                    std::size_t target, std::size_t given )
{
  if ( engine.model().system_count() == 2 )
  {
    std::array<double, 2> times{};
    times[target] = t_target;
    times[given] = t_given;
    return engine.event_probability( target == 0 ? event_kind::s1_functions_s2_fails
                                                 : event_kind::s2_functions_s1_fails,
                                     times );
  }
  const reliability_engine pair( engine.model().induced( { target, given } ), engine.distributions(), engine.budget() );
  const std::array times{ t_target, t_given };
  return pair.event_probability( event_kind::s1_functions_s2_fails, times );
}

double pair_joint( const reliability_engine& engine, double t_target, double t_given, std::size_t target,
                   std::size_t given )
{
  if ( engine.model().system_count() == 2 )
  {
    std::array<double, 2> times{};
    times[target] = t_target;
    times[given] = t_given;
    return engine.joint_survival( times );
  }
  const reliability_engine pair( engine.model().induced( { target, given } ), engine.distributions(), engine.budget() );
  const std::array times{ t_target, t_given };
  return pair.joint_survival( times );
}

} // namespace

double conditional_survival_given_functioning( const reliability_engine& engine, double t_target, double t_given,
                                               std::size_t target, std::size_t given )
{
  check_pair( engine, target, given );
  const double condition = engine.marginal_survival( given, t_given );
  if ( condition <= 0.0 )
  {
    throw conditioning_on_null_event( "the conditioning system cannot function at the given time" );
  }
  return std::clamp( pair_joint( engine, t_target, t_given, target, given ) / condition, 0.0, 1.0 );
}

double conditional_survival_given_failed( const reliability_engine& engine, double t_target, double t_given,
                                          std::size_t target, std::size_t given )
{
  check_pair( engine, target, given );
  const double condition = 1.0 - engine.marginal_survival( given, t_given );
  if ( condition <= 0.0 )
  {
    throw conditioning_on_null_event( "the conditioning system cannot have failed by the given time" );
  }
  return std::clamp( target_survives_given_fails( engine, t_target, t_given, target, given ) / condition, 0.0, 1.0 );
}

double conditional_joint_survival( const reliability_engine& engine, double t, double t_given, std::size_t target,
                                   std::size_t given )
{
  check_pair( engine, target, given );
  if ( !( t > t_given ) )
  {
    throw invalid_time_order( "the joint time must be after the conditioning time" );
  }
  const double condition = engine.marginal_survival( given, t_given );
  if ( condition <= 0.0 )
  {
    throw conditioning_on_null_event( "the conditioning system cannot function at the given time" );
  }
  return std::clamp( pair_joint( engine, t, t, target, given ) / condition, 0.0, 1.0 );
}

} // namespace sharedsig
