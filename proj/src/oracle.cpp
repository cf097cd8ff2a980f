#include <sharedsig/oracle.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace sharedsig
{

std::uint64_t splitmix64( std::uint64_t x )
{
  x += 0x9E3779B97F4A7C15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBull;
  return x ^ ( x >> 31 );
}

double system_failure_time( const shared_model& model, std::size_t system, std::span<const double> lifetimes )
{
  std::vector<std::size_t> used;
  for ( std::size_t c = 0; c < model.components().size(); ++c )
  {
    if ( ( model.component_group( c ) >> system ) & 1u )
    {
      used.push_back( c );
    }
  }
  std::sort( used.begin(), used.end(), [&]( auto a, auto b ) { return lifetimes[a] < lifetimes[b]; } );

  std::uint64_t state = 0;
  for ( auto c : used )
  {
    state |= std::uint64_t{ 1 } << c;
  }
  const auto& phi = model.phi( system );
  for ( std::size_t i = 0; i < used.size(); )
  {
    const double t = lifetimes[used[i]];
    for ( ; i < used.size() && lifetimes[used[i]] == t; ++i )
    {
      state &= ~( std::uint64_t{ 1 } << used[i] );
    }
    if ( !phi( state ) )
    {
      return t;
    }
  }
  return std::numeric_limits<double>::infinity();
}

simulation_run simulate_failure_times( const shared_model& model, std::span<const lifetime_distribution> dists,
                                       std::uint64_t seed, std::size_t samples, unsigned threads )
{
  if ( samples == 0 )
  {
    throw std::invalid_argument( "sample count must be positive" );
  }
  if ( dists.size() != model.types().size() )
  {
    throw invalid_distribution( "expected one distribution per component type" );
  }
  simulation_run run;
  run.seed = seed;
  run.samples = samples;
  for ( const auto& s : model.systems() )
  {
    run.systems.push_back( s.name );
  }
  const auto n_sys = model.system_count();
  const auto n_comp = model.components().size();
  run.failure_times.assign( samples * n_sys, 0.0 );

  const std::size_t chunks = ( samples + simulation_run::chunk_size - 1 ) / simulation_run::chunk_size;
  auto work = [&]( std::size_t first_chunk, std::size_t stride ) {
    std::vector<double> lifetimes( n_comp );
    for ( std::size_t c = first_chunk; c < chunks; c += stride )
    {
      std::mt19937_64 rng( splitmix64( seed + ( c + 1 ) * 0x9E3779B97F4A7C15ull ) );
      const auto begin = c * simulation_run::chunk_size;
      const auto end = std::min( samples, begin + simulation_run::chunk_size );
      for ( auto s = begin; s < end; ++s )
      {
        for ( std::size_t k = 0; k < n_comp; ++k )
        {
          const double u = ( static_cast<double>( rng() >> 11 ) + 0.5 ) * 0x1.0p-53;
          lifetimes[k] = dists[model.component_type( k )].quantile( u );
        }
        for ( std::size_t i = 0; i < n_sys; ++i )
        {
          run.failure_times[s * n_sys + i] = system_failure_time( model, i, lifetimes );
        }
      }
    }
  };

  if ( threads == 0 )
  {
    threads = std::max( 1u, std::thread::hardware_concurrency() );
  }
  threads = static_cast<unsigned>( std::min<std::size_t>( threads, chunks ) );
  if ( threads <= 1 )
  {
    work( 0, 1 );
  }
  else
  {
    std::vector<std::jthread> pool;
    for ( unsigned t = 0; t < threads; ++t )
    {
      pool.emplace_back( work, t, threads );
    }
  }
  return run;
}

estimate estimate_event( const simulation_run& run, std::span<const requirement> requirements,
                         std::span<const double> times )
{
  if ( requirements.size() != run.systems.size() || times.size() != run.systems.size() )
  {
    throw wrong_arity( "expected one requirement and one time per simulated system" );
  }
  std::size_t hits = 0;
  for ( std::size_t s = 0; s < run.samples; ++s )
  {
    bool ok = true;
    for ( std::size_t i = 0; i < times.size() && ok; ++i )
    {
      const bool alive = run.time( s, i ) > times[i];
      ok = requirements[i] == requirement::any || ( requirements[i] == requirement::functions ) == alive;
    }
    hits += ok ? 1u : 0u;
  }
  const double p = static_cast<double>( hits ) / static_cast<double>( run.samples );
  return { p, std::sqrt( p * ( 1.0 - p ) / static_cast<double>( run.samples ) ) };
}

estimate estimate_joint_survival( const simulation_run& run, std::span<const double> times )
{
  const std::vector<requirement> all( run.systems.size(), requirement::functions );
  return estimate_event( run, all, times );
}

signature_table exhaustive_signature( const shared_model& model, const order_tag& order, event_kind event )
{
  std::vector<std::size_t> used;
  for ( std::size_t c = 0; c < model.components().size(); ++c )
  {
    if ( model.component_group( c ) )
    {
      used.push_back( c );
    }
  }
  if ( used.size() > max_exhaustive_model_components )
  {
    throw too_large( "exhaustive enumeration is limited to " + std::to_string( max_exhaustive_model_components ) +
                     " components" );
  }
  const auto reqs = requirements( event, model.system_count() );
  const auto layout = table_layout::joint( model, order );
  const auto n_sys = model.system_count();

  // For each used component: the distinct observation ranks of its systems, and
  // the coordinate that counts it for each observing system.
  struct slot
  {
    std::size_t component;
    std::vector<unsigned> ranks;             // distinct, ascending
    std::vector<std::size_t> system_rank;    // per system: index into ranks, or npos
    std::vector<std::size_t> system_coord;   // per system: coordinate, or npos
  };
  constexpr auto npos = static_cast<std::size_t>( -1 );
  std::vector<slot> slots;
  for ( auto c : used )
  {
    slot s{ c, {}, std::vector<std::size_t>( n_sys, npos ), std::vector<std::size_t>( n_sys, npos ) };
    std::set<unsigned> distinct;
    for ( std::size_t i = 0; i < n_sys; ++i )
    {
      if ( ( model.component_group( c ) >> i ) & 1u )
      {
        distinct.insert( order.ranks[i] );
      }
    }
    s.ranks.assign( distinct.begin(), distinct.end() );
    for ( std::size_t i = 0; i < n_sys; ++i )
    {
      if ( ( model.component_group( c ) >> i ) & 1u )
      {
        s.system_rank[i] = static_cast<std::size_t>(
            std::find( s.ranks.begin(), s.ranks.end(), order.ranks[i] ) - s.ranks.begin() );
      }
    }
    for ( const auto& b : layout.blocks() )
    {
      if ( b.type == model.component_type( c ) && b.group == model.component_group( c ) )
      {
        for ( std::size_t x = 0; x < b.members.size(); ++x )
        {
          s.system_coord[b.members[x]] = b.coords[x];
        }
      }
    }
    slots.push_back( std::move( s ) );
  }

  // Each component's history is a 0/1 vector over its observation ranks with
  // no repair: alive at rank r implies alive at every earlier rank.
  std::vector<std::vector<std::vector<bool>>> histories;
  for ( const auto& s : slots )
  {
    std::vector<std::vector<bool>> valid;
    const auto m = s.ranks.size();
    for ( std::uint64_t bits = 0; bits < ( std::uint64_t{ 1 } << m ); ++bits )
    {
      std::vector<bool> h( m );
      bool ok = true;
      for ( std::size_t r = 0; r < m; ++r )
      {
        h[r] = ( bits >> r ) & 1u;
        if ( r && h[r] && !h[r - 1] )
        {
          ok = false;
        }
      }
      if ( ok )
      {
        valid.push_back( std::move( h ) );
      }
    }
    histories.push_back( std::move( valid ) );
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts( layout.dense_size(), { 0, 0 } );
  std::vector<std::size_t> choice( slots.size(), 0 );
  level_vector cell( layout.dimension() );
  while ( true )
  {
    std::fill( cell.begin(), cell.end(), 0u );
    std::vector<std::uint64_t> state( n_sys, 0 );
    for ( std::size_t j = 0; j < slots.size(); ++j )
    {
      const auto& h = histories[j][choice[j]];
      for ( std::size_t i = 0; i < n_sys; ++i )
      {
        if ( slots[j].system_rank[i] != npos && h[slots[j].system_rank[i]] )
        {
          state[i] |= std::uint64_t{ 1 } << slots[j].component;
          ++cell[slots[j].system_coord[i]];
        }
      }
    }
    bool favourable = true;
    for ( std::size_t i = 0; i < n_sys; ++i )
    {
      const bool works = model.phi( i )( state[i] );
      if ( reqs[i] == requirement::functions )
      {
        favourable = favourable && works;
      }
      else if ( reqs[i] == requirement::fails )
      {
        favourable = favourable && !works;
      }
    }
    auto& entry = counts[layout.dense_index( cell )];
    entry.first += favourable ? 1u : 0u;
    entry.second += 1;

    std::size_t k = 0;
    while ( k < choice.size() && ++choice[k] == histories[k].size() )
    {
      choice[k++] = 0;
    }
    if ( k == choice.size() )
    {
      break;
    }
  }

  std::vector<std::string> names;
  for ( const auto& s : model.systems() )
  {
    names.push_back( s.name );
  }
  signature_table table( event, layout, names );
  for ( std::uint64_t index = 0; index < counts.size(); ++index )
  {
    if ( counts[index].second )
    {
      table.push( layout.decode( index ), counts[index].first, counts[index].second );
    }
  }
  return table;
}

} // namespace sharedsig
