#include <sharedsig/system_model.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace sharedsig
{

std::vector<group_mask> canonical_groups( std::size_t systems )
{
  std::vector<group_mask> out;
  for ( unsigned size = 1; size <= systems; ++size )
  {
    for ( group_mask g = 1; g < ( 1u << systems ); ++g )
    {
      if ( static_cast<unsigned>( std::popcount( g ) ) == size )
      {
        out.push_back( g );
      }
    }
  }
  return out;
}

std::string group_label( group_mask g )
{
  std::string out;
  for ( unsigned i = 0; i < 8; ++i )
  {
    if ( ( g >> i ) & 1u )
    {
      out += static_cast<char>( '1' + i );
    }
  }
  return out;
}

group_counts::group_counts( std::size_t systems, std::size_t types )
    : systems_( systems ), counts_( types, std::vector<unsigned>( std::size_t{ 1 } << systems, 0u ) )
{
}

unsigned group_counts::system_total( std::size_t type, std::size_t system ) const
{
  unsigned total = 0;
  for ( group_mask g = 1; g < counts_.at( type ).size(); ++g )
  {
    if ( ( g >> system ) & 1u )
    {
      total += counts_[type][g];
    }
  }
  return total;
}

unsigned group_counts::type_total( std::size_t type ) const
{
  unsigned total = 0;
  for ( group_mask g = 1; g < counts_.at( type ).size(); ++g )
  {
    total += counts_[type][g];
  }
  return total;
}

shared_model shared_model::build( std::vector<system_decl> systems, std::vector<component_decl> components,
                                  std::vector<std::string> types )
{
  if ( systems.size() < 2 || systems.size() > 3 )
  {
    throw wrong_arity( "a shared model needs 2 or 3 systems, got " + std::to_string( systems.size() ) );
  }
  if ( components.size() > max_components )
  {
    throw too_large( "at most " + std::to_string( max_components ) + " components are supported" );
  }

  shared_model m;
  std::set<std::string> seen;
  for ( const auto& t : types )
  {
    if ( t.empty() || !seen.insert( t ).second )
    {
      throw duplicate_name( "duplicate or empty type name '" + t + "'" );
    }
  }
  seen.clear();
  for ( const auto& s : systems )
  {
    if ( s.name.empty() || !seen.insert( s.name ).second )
    {
      throw duplicate_name( "duplicate or empty system name '" + s.name + "'" );
    }
  }

  std::map<component_id, std::size_t> index;
  for ( const auto& c : components )
  {
    if ( !is_valid_component_id( c.id ) )
    {
      throw invalid_structure( "invalid component identifier '" + c.id + "'" );
    }
    if ( !index.emplace( c.id, index.size() ).second )
    {
      throw duplicate_name( "component '" + c.id + "' declared twice" );
    }
    const auto it = std::find( types.begin(), types.end(), c.type );
    if ( it == types.end() )
    {
      throw unknown_type( "component '" + c.id + "' has undeclared type '" + c.type + "'" );
    }
    m.component_types_.push_back( static_cast<std::size_t>( it - types.begin() ) );
  }

  m.component_groups_.assign( components.size(), 0u );
  for ( std::size_t i = 0; i < systems.size(); ++i )
  {
    for ( const auto& c : systems[i].structure.components() )
    {
      const auto it = index.find( c );
      if ( it == index.end() )
      {
        throw unknown_component( "system '" + systems[i].name + "' references undeclared component '" + c + "'" );
      }
      m.component_groups_[it->second] |= 1u << i;
    }
    ensure_coherent( systems[i].structure );
  }

  for ( const auto& s : systems )
  {
    m.compiled_.emplace_back( s.structure, [&]( const component_id& c ) {
      return static_cast<unsigned>( index.at( c ) );
    } );
  }

  m.counts_ = group_counts( systems.size(), types.size() );
  for ( std::size_t c = 0; c < components.size(); ++c )
  {
    if ( m.component_groups_[c] )
    {
      ++m.counts_.at( m.component_types_[c], m.component_groups_[c] );
    }
  }

  m.systems_ = std::move( systems );
  m.components_ = std::move( components );
  m.types_ = std::move( types );
  return m;
}

std::size_t shared_model::system_index( const std::string& name ) const
{
  for ( std::size_t i = 0; i < systems_.size(); ++i )
  {
    if ( systems_[i].name == name )
    {
      return i;
    }
  }
  throw unknown_system( "no system named '" + name + "'" );
}

std::size_t shared_model::component_index( const component_id& id ) const
{
  for ( std::size_t i = 0; i < components_.size(); ++i )
  {
    if ( components_[i].id == id )
    {
      return i;
    }
  }
  throw unknown_component( "no component named '" + id + "'" );
}

std::size_t shared_model::type_index( const std::string& name ) const
{
  const auto it = std::find( types_.begin(), types_.end(), name );
  if ( it == types_.end() )
  {
    throw unknown_type( "no type named '" + name + "'" );
  }
  return static_cast<std::size_t>( it - types_.begin() );
}

std::vector<std::size_t> shared_model::members( std::size_t type, group_mask g ) const
{
  std::vector<std::size_t> out;
  for ( std::size_t c = 0; c < components_.size(); ++c )
  {
    if ( component_types_[c] == type && component_groups_[c] == g )
    {
      out.push_back( c );
    }
  }
  return out;
}

bool shared_model::independent() const
{
  return std::none_of( component_groups_.begin(), component_groups_.end(),
                       []( group_mask g ) { return std::popcount( g ) >= 2; } );
}

std::vector<component_id> shared_model::unused_components() const
{
  std::vector<component_id> out;
  for ( std::size_t c = 0; c < components_.size(); ++c )
  {
    if ( !component_groups_[c] )
    {
      out.push_back( components_[c].id );
    }
  }
  return out;
}

shared_model shared_model::induced( const std::vector<std::size_t>& systems ) const
{
  std::vector<system_decl> chosen;
  for ( auto i : systems )
  {
    chosen.push_back( systems_.at( i ) );
  }
  return build( std::move( chosen ), components_, types_ );
}

} // namespace sharedsig
