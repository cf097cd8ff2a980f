#include <sharedsig/model_io.hpp>

#include <sharedsig/errors.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sharedsig
{

namespace
{

[[noreturn]] void schema_error( const std::string& path, const std::string& what )
{
  throw model_file_error( path + ": " + what );
}

const json& member( const json& j, const char* key, const std::string& path )
{
  if ( !j.is_object() )
  {
    schema_error( path, "expected an object" );
  }
  const auto it = j.find( key );
  if ( it == j.end() )
  {
    schema_error( path, std::string( "missing key \"" ) + key + "\"" );
  }
  return *it;
}

const json& array_member( const json& j, const char* key, const std::string& path )
{
  const auto& a = member( j, key, path );
  if ( !a.is_array() )
  {
    schema_error( path + "." + key, "expected an array" );
  }
  return a;
}

std::string string_member( const json& j, const char* key, const std::string& path )
{
  const auto& s = member( j, key, path );
  if ( !s.is_string() )
  {
    schema_error( path + "." + key, "expected a string" );
  }
  return s.get<std::string>();
}

double number_member( const json& j, const char* key, const std::string& path )
{
  const auto& v = member( j, key, path );
  if ( !v.is_number() )
  {
    schema_error( path + "." + key, "expected a number" );
  }
  return v.get<double>();
}

std::vector<structure_function> children_from_json( const json& a, const std::string& path )
{
  if ( !a.is_array() )
  {
    schema_error( path, "expected an array of sub-structures" );
  }
  std::vector<structure_function> out;
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    out.push_back( structure_from_json( a[i], path + "[" + std::to_string( i ) + "]" ) );
  }
  return out;
}

} // namespace

structure_function structure_from_json( const json& j, const std::string& path )
{
  if ( !j.is_object() || j.size() != 1 )
  {
    schema_error( path, "a structure node is an object with exactly one key" );
  }
  const auto& [key, value] = *j.items().begin();
  try
  {
    if ( key == "atom" )
    {
      if ( !value.is_string() )
      {
        schema_error( path + ".atom", "expected a component identifier" );
      }
      return structure_function::atom( value.get<std::string>() );
    }
    if ( key == "and" )
    {
      return structure_function::all_of( children_from_json( value, path + ".and" ) );
    }
    if ( key == "or" )
    {
      return structure_function::any_of( children_from_json( value, path + ".or" ) );
    }
    if ( key == "k_of_n" )
    {
      const auto& k = member( value, "k", path + ".k_of_n" );
      if ( !k.is_number_integer() || k.get<long long>() < 1 )
      {
        schema_error( path + ".k_of_n.k", "expected a positive integer" );
      }
      return structure_function::k_of_n( k.get<unsigned>(),
                                         children_from_json( member( value, "of", path + ".k_of_n" ),
                                                             path + ".k_of_n.of" ) );
    }
    if ( key == "truth_table" )
    {
      const auto p = path + ".truth_table";
      std::vector<component_id> comps;
      for ( const auto& c : array_member( value, "of", p ) )
      {
        if ( !c.is_string() )
        {
          schema_error( p + ".of", "expected component identifiers" );
        }
        comps.push_back( c.get<std::string>() );
      }
      std::vector<bool> outputs;
      for ( const auto& v : array_member( value, "values", p ) )
      {
        if ( !( v.is_number_integer() && ( v == 0 || v == 1 ) ) && !v.is_boolean() )
        {
          schema_error( p + ".values", "expected 0/1 entries" );
        }
        outputs.push_back( v.is_boolean() ? v.get<bool>() : v.get<int>() == 1 );
      }
      return structure_function::truth_table( std::move( comps ), std::move( outputs ) );
    }
  }
  catch ( const invalid_structure& e )
  {
    schema_error( path, e.what() );
  }
  schema_error( path, "unknown structure node \"" + key + "\"" );
}

json structure_to_json( const structure_function& f )
{
  using k = structure_function::kind;
  auto children = [&] {
    json a = json::array();
    for ( const auto& c : f.children() )
    {
      a.push_back( structure_to_json( c ) );
    }
    return a;
  };
  switch ( f.node_kind() )
  {
  case k::atom:
    return { { "atom", f.name() } };
  case k::all_of:
    return { { "and", children() } };
  case k::any_of:
    return { { "or", children() } };
  case k::k_of_n:
    return { { "k_of_n", { { "k", f.threshold() }, { "of", children() } } } };
  case k::truth_table:
  {
    json values = json::array();
    for ( bool b : f.table_outputs() )
    {
      values.push_back( b ? 1 : 0 );
    }
    return { { "truth_table", { { "of", f.table_components() }, { "values", values } } } };
  }
  }
  return {};
}

lifetime_distribution distribution_from_json( const json& j, const std::string& path )
{
  const auto kind = string_member( j, "kind", path );
  try
  {
    if ( kind == "exponential" )
    {
      return lifetime_distribution::exponential( number_member( j, "rate", path ) );
    }
    if ( kind == "weibull" )
    {
      return lifetime_distribution::weibull( number_member( j, "shape", path ), number_member( j, "scale", path ) );
    }
    if ( kind == "empirical" )
    {
      std::vector<std::pair<double, double>> points;
      for ( const auto& p : array_member( j, "points", path ) )
      {
        if ( !p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number() )
        {
          schema_error( path + ".points", "expected [t, F] pairs" );
        }
        points.emplace_back( p[0].get<double>(), p[1].get<double>() );
      }
      bool interpolate = false;
      if ( j.contains( "interpolate" ) )
      {
        if ( !j["interpolate"].is_boolean() )
        {
          schema_error( path + ".interpolate", "expected a boolean" );
        }
        interpolate = j["interpolate"].get<bool>();
      }
      return lifetime_distribution::empirical( std::move( points ), interpolate );
    }
  }
  catch ( const invalid_distribution& e )
  {
    schema_error( path, e.what() );
  }
  schema_error( path + ".kind", "unknown distribution kind \"" + kind + "\"" );
}

json distribution_to_json( const lifetime_distribution& d )
{
  switch ( d.distribution_kind() )
  {
  case lifetime_distribution::kind::exponential:
    return { { "kind", "exponential" }, { "rate", d.rate() } };
  case lifetime_distribution::kind::weibull:
    return { { "kind", "weibull" }, { "shape", d.shape() }, { "scale", d.scale() } };
  case lifetime_distribution::kind::empirical:
  {
    json points = json::array();
    for ( const auto& [t, f] : d.points() )
    {
      points.push_back( { t, f } );
    }
    return { { "kind", "empirical" }, { "points", points }, { "interpolate", d.interpolated() } };
  }
  }
  return {};
}

model_file parse_model( const std::string& text )
{
  json doc;
  try
  {
    doc = json::parse( text );
  }
  catch ( const json::parse_error& e )
  {
    std::size_t line = 1, column = 1;
    for ( std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i )
    {
      if ( text[i] == '\n' )
      {
        ++line;
        column = 1;
      }
      else
      {
        ++column;
      }
    }
    throw model_file_error( "line " + std::to_string( line ) + ", column " + std::to_string( column ) +
                            ": invalid JSON (" + e.what() + ")" );
  }
  if ( !doc.is_object() )
  {
    schema_error( "$", "the model must be a JSON object" );
  }

  std::vector<std::string> types;
  std::vector<lifetime_distribution> dists;
  const auto& jtypes = array_member( doc, "types", "$" );
  for ( std::size_t i = 0; i < jtypes.size(); ++i )
  {
    const auto p = "types[" + std::to_string( i ) + "]";
    types.push_back( string_member( jtypes[i], "name", p ) );
    dists.push_back( distribution_from_json( member( jtypes[i], "distribution", p ), p + ".distribution" ) );
  }

  std::vector<component_decl> components;
  const auto& jcomps = array_member( doc, "components", "$" );
  for ( std::size_t i = 0; i < jcomps.size(); ++i )
  {
    const auto p = "components[" + std::to_string( i ) + "]";
    components.push_back( { string_member( jcomps[i], "id", p ), string_member( jcomps[i], "type", p ) } );
  }

  std::vector<system_decl> systems;
  const auto& jsys = array_member( doc, "systems", "$" );
  for ( std::size_t i = 0; i < jsys.size(); ++i )
  {
    const auto p = "systems[" + std::to_string( i ) + "]";
    systems.push_back( { string_member( jsys[i], "name", p ),
                         structure_from_json( member( jsys[i], "structure", p ), p + ".structure" ) } );
  }

  return { shared_model::build( std::move( systems ), std::move( components ), std::move( types ) ),
           std::move( dists ) };
}

model_file load_model( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw model_file_error( "cannot open model file '" + path + "'" );
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model( buffer.str() );
}

json model_to_json( const model_file& m )
{
  json doc;
  doc["types"] = json::array();
  for ( std::size_t k = 0; k < m.model.types().size(); ++k )
  {
    doc["types"].push_back(
        { { "name", m.model.types()[k] }, { "distribution", distribution_to_json( m.distributions.at( k ) ) } } );
  }
  doc["components"] = json::array();
  for ( const auto& c : m.model.components() )
  {
    doc["components"].push_back( { { "id", c.id }, { "type", c.type } } );
  }
  doc["systems"] = json::array();
  for ( const auto& s : m.model.systems() )
  {
    doc["systems"].push_back( { { "name", s.name }, { "structure", structure_to_json( s.structure ) } } );
  }
  return doc;
}

/* tables */

std::string format_fraction( const rational& r )
{
  const auto num = boost::multiprecision::numerator( r );
  const auto den = boost::multiprecision::denominator( r );
  if ( den == 1 )
  {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

std::string format_probability( double p )
{
  char buffer[32];
  std::snprintf( buffer, sizeof buffer, "%.12g", p );
  return buffer;
}

json table_to_json( const signature_table& table )
{
  const auto& layout = table.layout();
  json j;
  j["event"] = to_string( table.event() );
  j["order"] = layout.order().to_string();
  j["ranks"] = layout.order().ranks;
  j["systems"] = table.system_names();
  j["types"] = layout.type_names();
  j["coordinates"] = layout.coordinate_names();
  j["blocks"] = json::array();
  for ( const auto& b : layout.blocks() )
  {
    j["blocks"].push_back( { { "type", b.type },
                             { "group", group_label( b.group ) },
                             { "size", b.size },
                             { "members", b.members },
                             { "coords", b.coords } } );
  }
  j["cells"] = json::array();
  for ( std::size_t i = 0; i < table.size(); ++i )
  {
    j["cells"].push_back( { { "levels", table.cell( i ) },
                            { "favourable", table.favourable( i ).str() },
                            { "total", table.total( i ).str() },
                            { "fraction", format_fraction( table.value( i ) ) },
                            { "decimal", table.value_double( i ) } } );
  }
  return j;
}

signature_table table_from_json( const json& j )
{
  try
  {
    std::vector<layout_block> blocks;
    for ( const auto& b : j.at( "blocks" ) )
    {
      group_mask g = 0;
      for ( char c : b.at( "group" ).get<std::string>() )
      {
        g |= 1u << ( c - '1' );
      }
      blocks.push_back( { b.at( "type" ).get<std::size_t>(), g, b.at( "size" ).get<unsigned>(),
                          b.at( "members" ).get<std::vector<std::size_t>>(),
                          b.at( "coords" ).get<std::vector<std::size_t>>() } );
    }
    order_tag order{ j.at( "ranks" ).get<std::vector<unsigned>>() };
    table_layout layout( j.at( "types" ).get<std::vector<std::string>>(), order.systems(), order, std::move( blocks ),
                         j.at( "coordinates" ).get<std::vector<std::string>>() );
    signature_table table( parse_event( j.at( "event" ).get<std::string>() ), std::move( layout ),
                           j.at( "systems" ).get<std::vector<std::string>>() );
    for ( const auto& c : j.at( "cells" ) )
    {
      table.push( c.at( "levels" ).get<level_vector>(), big_int( c.at( "favourable" ).get<std::string>() ),
                  big_int( c.at( "total" ).get<std::string>() ) );
    }
    return table;
  }
  catch ( const json::exception& e )
  {
    throw model_file_error( std::string( "malformed signature table: " ) + e.what() );
  }
}

void write_table_csv( std::ostream& os, const signature_table& table, bool header )
{
  if ( header )
  {
    os << "order";
    for ( const auto& name : table.layout().coordinate_names() )
    {
      os << ',' << name;
    }
    os << ",favourable,total,fraction,decimal\n";
  }
  const auto order = table.order().to_string();
  for ( std::size_t i = 0; i < table.size(); ++i )
  {
    os << order;
    for ( auto level : table.cell( i ) )
    {
      os << ',' << level;
    }
    os << ',' << table.favourable( i ) << ',' << table.total( i ) << ',' << format_fraction( table.value( i ) ) << ','
       << format_probability( table.value_double( i ) ) << '\n';
  }
}

} // namespace sharedsig
