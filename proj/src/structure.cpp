#include <sharedsig/structure.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace sharedsig
{

bool is_valid_component_id( const std::string& name )
{
  return !name.empty() && std::all_of( name.begin(), name.end(), []( unsigned char c ) {
    return std::isalnum( c ) || c == '_';
  } );
}

struct structure_function::node
{
  kind k;
  component_id name;
  unsigned threshold = 0;
  std::vector<structure_function> children;
  std::vector<component_id> table_components;
  std::vector<bool> outputs;
};

structure_function::structure_function( std::shared_ptr<const node> n ) : node_( std::move( n ) ) {}

structure_function structure_function::atom( component_id name )
{
  if ( !is_valid_component_id( name ) )
  {
    throw invalid_structure( "invalid component identifier '" + name + "'" );
  }
  auto n = std::make_shared<node>();
  n->k = kind::atom;
  n->name = std::move( name );
  return structure_function( std::move( n ) );
}

structure_function structure_function::all_of( std::vector<structure_function> children )
{
  if ( children.size() < 2 )
  {
    throw invalid_structure( "'and' needs at least two children" );
  }
  auto n = std::make_shared<node>();
  n->k = kind::all_of;
  n->threshold = static_cast<unsigned>( children.size() );
  n->children = std::move( children );
  return structure_function( std::move( n ) );
}

structure_function structure_function::any_of( std::vector<structure_function> children )
{
  if ( children.size() < 2 )
  {
    throw invalid_structure( "'or' needs at least two children" );
  }
  auto n = std::make_shared<node>();
  n->k = kind::any_of;
  n->threshold = 1;
  n->children = std::move( children );
  return structure_function( std::move( n ) );
}

structure_function structure_function::k_of_n( unsigned k, std::vector<structure_function> children )
{
  if ( k == 0 )
  {
    throw invalid_structure( "'k_of_n' needs a positive k" );
  }
  if ( children.size() < k )
  {
    throw invalid_structure( "'k_of_n' with k = " + std::to_string( k ) + " has only " +
                             std::to_string( children.size() ) + " children" );
  }
  auto n = std::make_shared<node>();
  n->k = kind::k_of_n;
  n->threshold = k;
  n->children = std::move( children );
  return structure_function( std::move( n ) );
}

structure_function structure_function::truth_table( std::vector<component_id> components, std::vector<bool> outputs )
{
  if ( components.empty() )
  {
    throw invalid_structure( "truth table needs at least one component" );
  }
  if ( components.size() > max_exhaustive_components )
  {
    throw too_large( "truth table over " + std::to_string( components.size() ) + " components exceeds the limit of " +
                     std::to_string( max_exhaustive_components ) );
  }
  for ( const auto& c : components )
  {
    if ( !is_valid_component_id( c ) )
    {
      throw invalid_structure( "invalid component identifier '" + c + "'" );
    }
  }
  auto sorted = components;
  std::sort( sorted.begin(), sorted.end() );
  if ( std::adjacent_find( sorted.begin(), sorted.end() ) != sorted.end() )
  {
    throw invalid_structure( "truth table lists a component twice" );
  }
  if ( outputs.size() != ( std::size_t{ 1 } << components.size() ) )
  {
    throw invalid_structure( "truth table over " + std::to_string( components.size() ) + " components needs " +
                             std::to_string( std::size_t{ 1 } << components.size() ) + " outputs, got " +
                             std::to_string( outputs.size() ) );
  }
  auto n = std::make_shared<node>();
  n->k = kind::truth_table;
  n->table_components = std::move( components );
  n->outputs = std::move( outputs );
  return structure_function( std::move( n ) );
}

structure_function::kind structure_function::node_kind() const { return node_->k; }
const component_id& structure_function::name() const { return node_->name; }
unsigned structure_function::threshold() const { return node_->threshold; }
const std::vector<structure_function>& structure_function::children() const { return node_->children; }
const std::vector<component_id>& structure_function::table_components() const { return node_->table_components; }
const std::vector<bool>& structure_function::table_outputs() const { return node_->outputs; }

namespace
{

void collect( const structure_function& f, std::vector<component_id>& out )
{
  switch ( f.node_kind() )
  {
  case structure_function::kind::atom:
    out.push_back( f.name() );
    break;
  case structure_function::kind::truth_table:
    out.insert( out.end(), f.table_components().begin(), f.table_components().end() );
    break;
  default:
    for ( const auto& c : f.children() )
    {
      collect( c, out );
    }
  }
}

} // namespace

std::vector<component_id> structure_function::components() const
{
  std::vector<component_id> out;
  collect( *this, out );
  std::sort( out.begin(), out.end() );
  out.erase( std::unique( out.begin(), out.end() ), out.end() );
  return out;
}

bool structure_function::evaluate( const std::map<component_id, bool>& state ) const
{
  const auto names = components();
  for ( const auto& c : names )
  {
    if ( !state.count( c ) )
    {
      throw unassigned_component( "component '" + c + "' has no assigned state" );
    }
  }
  if ( names.size() > 64 )
  {
    throw too_large( "structure references more than 64 components" );
  }
  std::uint64_t mask = 0;
  for ( unsigned i = 0; i < names.size(); ++i )
  {
    if ( state.at( names[i] ) )
    {
      mask |= std::uint64_t{ 1 } << i;
    }
  }
  compiled_structure compiled( *this, [&]( const component_id& c ) {
    return static_cast<unsigned>( std::lower_bound( names.begin(), names.end(), c ) - names.begin() );
  } );
  return compiled( mask );
}

std::string structure_function::to_string() const
{
  std::ostringstream os;
  auto join = [&]( const char* sep ) {
    os << '(';
    for ( std::size_t i = 0; i < children().size(); ++i )
    {
      if ( i )
      {
        os << sep;
      }
      os << children()[i].to_string();
    }
    os << ')';
  };
  switch ( node_kind() )
  {
  case kind::atom:
    os << name();
    break;
  case kind::all_of:
    join( " & " );
    break;
  case kind::any_of:
    join( " | " );
    break;
  case kind::k_of_n:
    os << threshold() << "-of";
    join( ", " );
    break;
  case kind::truth_table:
    os << "table[";
    for ( std::size_t i = 0; i < table_components().size(); ++i )
    {
      os << ( i ? "," : "" ) << table_components()[i];
    }
    os << ']';
    break;
  }
  return os.str();
}

/* compiled_structure */

compiled_structure::compiled_structure( const structure_function& f,
                                        const std::function<unsigned( const component_id& )>& bit_of )
{
  root_ = add( f, bit_of );
}

unsigned compiled_structure::add( const structure_function& f,
                                  const std::function<unsigned( const component_id& )>& bit_of )
{
  cnode n;
  n.kind = f.node_kind();
  switch ( n.kind )
  {
  case structure_function::kind::atom:
    n.bit = bit_of( f.name() );
    support_ |= std::uint64_t{ 1 } << n.bit;
    break;
  case structure_function::kind::truth_table:
    for ( const auto& c : f.table_components() )
    {
      n.table_bits.push_back( bit_of( c ) );
      support_ |= std::uint64_t{ 1 } << n.table_bits.back();
    }
    n.outputs = f.table_outputs();
    break;
  default:
    n.k = f.threshold();
    for ( const auto& c : f.children() )
    {
      n.children.push_back( add( c, bit_of ) );
    }
  }
  nodes_.push_back( std::move( n ) );
  return static_cast<unsigned>( nodes_.size() - 1 );
}

bool compiled_structure::eval( unsigned index, std::uint64_t state ) const
{
  const auto& n = nodes_[index];
  switch ( n.kind )
  {
  case structure_function::kind::atom:
    return ( state >> n.bit ) & 1u;
  case structure_function::kind::truth_table:
  {
    std::size_t row = 0;
    for ( std::size_t i = 0; i < n.table_bits.size(); ++i )
    {
      row |= static_cast<std::size_t>( ( state >> n.table_bits[i] ) & 1u ) << i;
    }
    return n.outputs[row];
  }
  case structure_function::kind::any_of:
    for ( auto c : n.children )
    {
      if ( eval( c, state ) )
      {
        return true;
      }
    }
    return false;
  case structure_function::kind::all_of:
    for ( auto c : n.children )
    {
      if ( !eval( c, state ) )
      {
        return false;
      }
    }
    return true;
  case structure_function::kind::k_of_n:
  {
    unsigned up = 0, remaining = static_cast<unsigned>( n.children.size() );
    for ( auto c : n.children )
    {
      up += eval( c, state ) ? 1u : 0u;
      --remaining;
      if ( up >= n.k )
      {
        return true;
      }
      if ( up + remaining < n.k )
      {
        return false;
      }
    }
    return false;
  }
  }
  return false;
}

/* coherence and path sets */

namespace
{

struct local_view
{
  std::vector<component_id> names;
  compiled_structure phi;

  explicit local_view( const structure_function& f ) : names( f.components() )
  {
    phi = compiled_structure( f, [&]( const component_id& c ) {
      return static_cast<unsigned>( std::lower_bound( names.begin(), names.end(), c ) - names.begin() );
    } );
  }

  std::vector<component_id> members( std::uint64_t mask ) const
  {
    std::vector<component_id> out;
    for ( unsigned i = 0; i < names.size(); ++i )
    {
      if ( ( mask >> i ) & 1u )
      {
        out.push_back( names[i] );
      }
    }
    return out;
  }
};

} // namespace

coherence_report verify_coherent( const structure_function& f )
{
  coherence_report report;
  if ( f.components().size() > 64 )
  {
    throw too_large( "structure references more than 64 components" );
  }
  const local_view view( f );
  const auto n = static_cast<unsigned>( view.names.size() );

  if ( !f.is_expression() )
  {
    const std::uint64_t states = std::uint64_t{ 1 } << n;
    for ( std::uint64_t x = 0; x < states; ++x )
    {
      if ( !view.phi( x ) )
      {
        continue;
      }
      for ( unsigned i = 0; i < n; ++i )
      {
        const auto y = x | ( std::uint64_t{ 1 } << i );
        if ( y != x && !view.phi( y ) )
        {
          report.result = coherence_report::status::non_monotone;
          report.witness.emplace( view.members( x ), view.members( y ) );
          report.message = "structure is decreasing in component '" + view.names[i] + "'";
          return report;
        }
      }
    }
  }

  const std::uint64_t all = n == 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << n ) - 1;
  if ( view.phi( 0 ) )
  {
    report.result = coherence_report::status::boundary_violation;
    report.message = "system functions with every component failed";
  }
  else if ( !view.phi( all ) )
  {
    report.result = coherence_report::status::boundary_violation;
    report.message = "system fails with every component functioning";
  }
  return report;
}

void ensure_coherent( const structure_function& f )
{
  const auto report = verify_coherent( f );
  switch ( report.result )
  {
  case coherence_report::status::pass:
    return;
  case coherence_report::status::non_monotone:
    throw non_monotone( report.message );
  case coherence_report::status::boundary_violation:
    throw boundary_violation( report.message );
  }
}

std::vector<std::vector<component_id>> minimal_path_sets( const structure_function& f )
{
  const local_view view( f );
  const auto n = static_cast<unsigned>( view.names.size() );
  if ( n > max_exhaustive_components )
  {
    throw too_large( "path-set extraction over " + std::to_string( n ) + " components exceeds the limit of " +
                     std::to_string( max_exhaustive_components ) );
  }

  std::vector<std::uint64_t> minimal;
  for ( std::uint64_t x = 0; x < ( std::uint64_t{ 1 } << n ); ++x )
  {
    if ( !view.phi( x ) )
    {
      continue;
    }
    bool is_minimal = true;
    for ( auto rest = x; rest && is_minimal; rest &= rest - 1 )
    {
      const auto without = x & ~( rest & -rest );
      is_minimal = !view.phi( without );
    }
    if ( is_minimal )
    {
      minimal.push_back( x );
    }
  }

  std::vector<std::vector<component_id>> out;
  for ( auto m : minimal )
  {
    out.push_back( view.members( m ) );
  }
  std::sort( out.begin(), out.end(), []( const auto& a, const auto& b ) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  } );
  return out;
}

} // namespace sharedsig
