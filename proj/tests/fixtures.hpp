#pragma once

#include <sharedsig/lifetimes.hpp>
#include <sharedsig/model_io.hpp>
#include <sharedsig/structure.hpp>
#include <sharedsig/system_model.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace fixtures
{

using sharedsig::structure_function;

inline structure_function at( const char* name )
{
  return structure_function::atom( name );
}

inline structure_function all( std::vector<structure_function> c )
{
  return structure_function::all_of( std::move( c ) );
}

inline structure_function any( std::vector<structure_function> c )
{
  return structure_function::any_of( std::move( c ) );
}

inline std::vector<sharedsig::component_decl> one_type( const std::vector<std::string>& ids )
{
  std::vector<sharedsig::component_decl> out;
  for ( const auto& id : ids )
  {
    out.push_back( { id, "T" } );
  }
  return out;
}

/// phi1 = (C & D) | (E & (A | B | C)), phi2 = (A & G) | (F & (B | C)).
inline sharedsig::shared_model example1()
{
  return sharedsig::shared_model::build(
      { { "S1", any( { all( { at( "C" ), at( "D" ) } ), all( { at( "E" ), any( { at( "A" ), at( "B" ), at( "C" ) } ) } ) } ) },
        { "S2", any( { all( { at( "A" ), at( "G" ) } ), all( { at( "F" ), any( { at( "B" ), at( "C" ) } ) } ) } ) } },
      one_type( { "A", "B", "C", "D", "E", "F", "G" } ), { "T" } );
}

inline structure_function example2_s1()
{
  return any( { at( "B" ), all( { at( "A" ), at( "C" ) } ) } );
}

inline structure_function example2_s2()
{
  return all( { at( "B" ), any( { at( "A" ), at( "D" ) } ) } );
}

inline structure_function example4_s3()
{
  return all( { at( "D" ), any( { at( "A" ), all( { at( "C" ), at( "E" ) } ) } ) } );
}

inline sharedsig::shared_model example2()
{
  return sharedsig::shared_model::build( { { "S1", example2_s1() }, { "S2", example2_s2() } },
                                         one_type( { "A", "B", "C", "D" } ), { "T" } );
}

inline sharedsig::shared_model example4()
{
  return sharedsig::shared_model::build(
      { { "S1", example2_s1() }, { "S2", example2_s2() }, { "S3", example4_s3() } },
      one_type( { "A", "B", "C", "D", "E" } ), { "T" } );
}

/// Bridge with path sets {A,D}, {B,E}, {A,C,E}, {B,C,D}.
inline structure_function bridge()
{
  return any( { all( { at( "A" ), at( "D" ) } ), all( { at( "B" ), at( "E" ) } ),
                all( { at( "A" ), at( "C" ), at( "E" ) } ), all( { at( "B" ), at( "C" ), at( "D" ) } ) } );
}

inline std::vector<sharedsig::lifetime_distribution> unit_exponential( std::size_t types = 1 )
{
  return std::vector<sharedsig::lifetime_distribution>( types, sharedsig::lifetime_distribution::exponential( 1.0 ) );
}

inline std::string data_path( const std::string& name )
{
  return std::string( SHAREDSIG_DATA_DIR ) + "/" + name;
}

/* random monotone models */

/// Random monotone structure over `comps` (nonempty): a negation-free
/// expression tree, or a truth table given by random path sets.
inline structure_function random_structure( std::vector<std::string> comps, std::mt19937_64& rng )
{
  auto coin = [&]( double p ) { return std::uniform_real_distribution<double>( 0.0, 1.0 )( rng ) < p; };
  if ( comps.size() == 1 )
  {
    return structure_function::atom( comps.front() );
  }
  if ( comps.size() <= 5 && coin( 0.2 ) )
  {
    const auto m = comps.size();
    const std::uint32_t full = ( 1u << m ) - 1u;
    std::vector<std::uint32_t> paths;
    const auto count = 1 + rng() % 3;
    for ( std::size_t i = 0; i < count; ++i )
    {
      paths.push_back( 1u + static_cast<std::uint32_t>( rng() % full ) );
    }
    std::vector<bool> outputs( std::size_t{ 1 } << m );
    for ( std::uint32_t x = 0; x <= full; ++x )
    {
      outputs[x] = std::any_of( paths.begin(), paths.end(), [&]( auto p ) { return ( x & p ) == p; } );
    }
    return structure_function::truth_table( comps, outputs );
  }
  std::shuffle( comps.begin(), comps.end(), rng );
  const std::size_t parts = std::min<std::size_t>( comps.size(), 2 + rng() % 2 );
  std::vector<std::vector<std::string>> chunks( parts );
  for ( std::size_t i = 0; i < comps.size(); ++i )
  {
    chunks[i < parts ? i : rng() % parts].push_back( comps[i] );
  }
  // occasionally reuse a component in a second branch
  if ( coin( 0.3 ) )
  {
    const auto& extra = comps[rng() % comps.size()];
    auto& target = chunks[rng() % parts];
    if ( std::find( target.begin(), target.end(), extra ) == target.end() )
    {
      target.push_back( extra );
    }
  }
  std::vector<structure_function> children;
  for ( auto& c : chunks )
  {
    children.push_back( random_structure( c, rng ) );
  }
  switch ( rng() % 3 )
  {
  case 0:
    return structure_function::all_of( std::move( children ) );
  case 1:
    return structure_function::any_of( std::move( children ) );
  default:
  {
    const auto k = 1 + static_cast<unsigned>( rng() % children.size() );
    return structure_function::k_of_n( k, std::move( children ) );
  }
  }
}

/// Random model with `systems` systems over at most `max_components`
/// components of `types` types; every system uses at least one component.
inline sharedsig::shared_model random_model( std::mt19937_64& rng, std::size_t systems, std::size_t max_components,
                                             std::size_t types = 1 )
{
  const std::size_t n = std::max<std::size_t>( systems, 2 + rng() % ( max_components - 1 ) );
  std::vector<std::string> type_names;
  for ( std::size_t k = 0; k < types; ++k )
  {
    type_names.push_back( "T" + std::to_string( k ) );
  }
  std::vector<sharedsig::component_decl> comps;
  std::vector<std::vector<std::string>> used( systems );
  const unsigned all_mask = ( 1u << systems ) - 1u;
  for ( std::size_t c = 0; c < n; ++c )
  {
    const auto id = "c" + std::to_string( c );
    comps.push_back( { id, type_names[rng() % types] } );
    unsigned mask = c < systems ? ( 1u << c ) | static_cast<unsigned>( rng() % ( all_mask + 1 ) )
                                : 1u + static_cast<unsigned>( rng() % all_mask );
    for ( std::size_t i = 0; i < systems; ++i )
    {
      if ( ( mask >> i ) & 1u )
      {
        used[i].push_back( id );
      }
    }
  }
  std::vector<sharedsig::system_decl> decls;
  for ( std::size_t i = 0; i < systems; ++i )
  {
    decls.push_back( { "S" + std::to_string( i + 1 ), random_structure( used[i], rng ) } );
  }
  return sharedsig::shared_model::build( std::move( decls ), std::move( comps ), std::move( type_names ) );
}

inline std::vector<sharedsig::lifetime_distribution> random_distributions( std::mt19937_64& rng, std::size_t types )
{
  std::vector<sharedsig::lifetime_distribution> out;
  for ( std::size_t k = 0; k < types; ++k )
  {
    const double a = std::uniform_real_distribution<double>( 0.5, 2.0 )( rng );
    const double b = std::uniform_real_distribution<double>( 0.5, 2.0 )( rng );
    out.push_back( k % 2 ? sharedsig::lifetime_distribution::weibull( a, b )
                         : sharedsig::lifetime_distribution::exponential( a ) );
  }
  return out;
}

} // namespace fixtures
