#include <doctest.h>

#include "fixtures.hpp"

#include <sharedsig/errors.hpp>
#include <sharedsig/oracle.hpp>
#include <sharedsig/signature.hpp>

using namespace sharedsig;
using namespace fixtures;

namespace
{

rational single_value( const structure_function& f, unsigned level )
{
  std::map<component_id, std::string> types;
  for ( const auto& c : f.components() )
  {
    types[c] = "T";
  }
  const auto table = survival_signature_single( f, { "T" }, types );
  const level_vector cell{ level };
  return table.at( cell );
}

struct reference_row
{
  level_vector cell;
  rational value;
};

// (l_1, l_2, l_[1]2, l_1[2]) -> value
const std::vector<reference_row> reference_rows{
    { { 0, 1, 1, 1 }, rational( 1, 2 ) }, { { 1, 0, 1, 1 }, 0 }, { { 1, 1, 1, 1 }, rational( 1, 2 ) },
    { { 0, 0, 1, 1 }, 0 },                { { 0, 0, 2, 1 }, 0 }, { { 0, 1, 2, 1 }, rational( 1, 2 ) },
    { { 1, 0, 2, 1 }, 0 },                { { 1, 1, 2, 1 }, rational( 1, 2 ) },
    { { 0, 0, 1, 2 }, rational( 1, 2 ) }, { { 0, 1, 1, 2 }, rational( 1, 2 ) },
    { { 1, 0, 1, 2 }, 1 },                { { 1, 1, 1, 2 }, 1 },
    { { 1, 1, 2, 2 }, 1 } };

order_tag order_of( const level_vector& cell )
{
  return cell[2] > cell[3] ? order_tag::earlier() : cell[2] < cell[3] ? order_tag::later() : order_tag::same();
}

} // namespace

TEST_CASE( "series, parallel and bridge signatures" )
{
  const auto series = all( { at( "A" ), at( "B" ) } );
  CHECK( single_value( series, 0 ) == 0 );
  CHECK( single_value( series, 1 ) == 0 );
  CHECK( single_value( series, 2 ) == 1 );

  const auto parallel = any( { at( "A" ), at( "B" ) } );
  CHECK( single_value( parallel, 0 ) == 0 );
  CHECK( single_value( parallel, 1 ) == 1 );

  CHECK( single_value( bridge(), 1 ) == 0 );
  CHECK( single_value( bridge(), 2 ) == rational( 2, 10 ) );
  CHECK( single_value( bridge(), 3 ) == rational( 8, 10 ) );
  CHECK( single_value( bridge(), 4 ) == 1 );

  const auto two_of_three = structure_function::k_of_n( 2, { at( "A" ), at( "B" ), at( "C" ) } );
  CHECK( single_value( two_of_three, 1 ) == 0 );
  CHECK( single_value( two_of_three, 2 ) == 1 );
}

TEST_CASE( "single-system signature with two types" )
{
  // (A | B) & C, A and B of type X, C of type Y
  const auto f = all( { any( { at( "A" ), at( "B" ) } ), at( "C" ) } );
  const auto table = survival_signature_single( f, { "X", "Y" }, { { "A", "X" }, { "B", "X" }, { "C", "Y" } } );
  CHECK( table.size() == 6 );
  CHECK( table.at( level_vector{ 1, 1 } ) == 1 );
  CHECK( table.at( level_vector{ 2, 0 } ) == 0 );
  CHECK( table.at( level_vector{ 0, 1 } ) == 0 );
  CHECK( table.total( *table.find( level_vector{ 1, 1 } ) ) == 2 );
}

TEST_CASE( "joint signature of Example 1" )
{
  const auto model = example1();
  const auto table = joint_signature_two( model, order_tag::earlier() );
  const level_vector cell{ 1, 1, 2, 1 };
  CHECK( table.at( cell ) == rational( 10, 24 ) );
  const auto i = *table.find( cell );
  CHECK( table.total( i ) == 24 );
  CHECK( table.favourable( i ) == 10 );
}

TEST_CASE( "reference cell values of Example 2" )
{
  const auto model = example2();
  std::map<order_tag, signature_table> tables;
  for ( const auto& o : order_tag::all( 2 ) )
  {
    tables.emplace( o, joint_signature_two( model, o ) );
  }
  for ( const auto& row : reference_rows )
  {
    CAPTURE( row.cell );
    CHECK( tables.at( order_of( row.cell ) ).at( row.cell ) == row.value );
    if ( row.cell[2] == row.cell[3] )
    {
      for ( const auto& [o, t] : tables )
      {
        CHECK( t.at( row.cell ) == row.value );
      }
    }
  }
  CHECK( tables.at( order_tag::later() ).at( level_vector{ 1, 0, 1, 2 } ) == 1 );
  // five of the rows are feasible under the same time
  const auto same_rows =
      std::count_if( reference_rows.begin(), reference_rows.end(), []( const auto& r ) { return r.cell[2] == r.cell[3]; } );
  CHECK( same_rows == 5 );
}

TEST_CASE( "feasibility follows the ordering" )
{
  const auto model = example2();
  const auto earlier = joint_signature_two( model, order_tag::earlier() );
  CHECK_FALSE( earlier.find( level_vector{ 1, 1, 1, 2 } ) );
  CHECK( earlier.find( level_vector{ 1, 1, 2, 2 } ) );
  CHECK_THROWS_AS( earlier.at( level_vector{ 1, 1, 1, 2 } ), infeasible_query );
  const auto same = joint_signature_two( model, order_tag::same() );
  CHECK_FALSE( same.find( level_vector{ 1, 1, 2, 1 } ) );
  // 2 * 2 * (3 + 2 + 1) feasible cells under EARLIER, 2 * 2 * 3 under SAME
  CHECK( earlier.size() == 24 );
  CHECK( same.size() == 12 );
}

TEST_CASE( "boundary cells and denominators" )
{
  for ( auto model : { example1(), example2() } )
  {
    for ( const auto& o : order_tag::all( 2 ) )
    {
      const auto table = joint_signature_two( model, o );
      const auto& layout = table.layout();
      level_vector top( layout.dimension() ), bottom( layout.dimension(), 0 );
      for ( std::size_t c = 0; c < top.size(); ++c )
      {
        top[c] = layout.coordinate_max( c );
      }
      CHECK( table.at( top ) == 1 );
      CHECK( table.at( bottom ) == 0 );
      for ( std::size_t i = 0; i < table.size(); ++i )
      {
        CHECK( table.total( i ) == layout.configurations( table.cell( i ) ) );
        const auto& c = table.cell( i );
        const auto n1 = layout.coordinate_max( 0 ), n2 = layout.coordinate_max( 1 ), n12 = layout.coordinate_max( 2 );
        const auto hi = std::max( c[2], c[3] ), lo = std::min( c[2], c[3] );
        const auto expected = binomial( n1, c[0] ) * binomial( n2, c[1] ) * binomial( n12, hi ) *
                              ( o == order_tag::same() ? big_int( 1 ) : binomial( hi, lo ) );
        CHECK( table.total( i ) == expected );
      }
    }
  }
}

TEST_CASE( "variant events" )
{
  const auto model = example2();
  const auto s1not2 = variant_signature( model, order_tag::same(), event_kind::s1_functions_s2_fails );
  CHECK( s1not2.at( level_vector{ 1, 0, 1, 1 } ) == 1 );
  CHECK( s1not2.at( level_vector{ 1, 1, 2, 2 } ) == 0 );

  for ( const auto& o : order_tag::all( 2 ) )
  {
    const auto both = variant_signature( model, o, event_kind::both );
    const auto a = variant_signature( model, o, event_kind::s1_functions_s2_fails );
    const auto b = variant_signature( model, o, event_kind::s2_functions_s1_fails );
    const auto n = variant_signature( model, o, event_kind::neither );
    const auto s1 = variant_signature( model, o, event_kind::s1_only );
    const auto s2 = variant_signature( model, o, event_kind::s2_only );
    REQUIRE( both.size() == a.size() );
    for ( std::size_t i = 0; i < both.size(); ++i )
    {
      CHECK( both.value( i ) + a.value( i ) + b.value( i ) + n.value( i ) == 1 );
      CHECK( both.value( i ) + a.value( i ) == s1.value( i ) );
      CHECK( both.value( i ) + b.value( i ) == s2.value( i ) );
    }
  }
}

TEST_CASE( "S2-centric events mirror S1-centric events" )
{
  const auto model = example2();
  const auto swapped = model.induced( { 1, 0 } );
  const auto a = variant_signature( model, order_tag::earlier(), event_kind::s2_functions_s1_fails );
  const auto b = variant_signature( swapped, order_tag::later(), event_kind::s1_functions_s2_fails );
  REQUIRE( a.size() == b.size() );
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    const auto& c = a.cell( i );
    const level_vector mirrored{ c[1], c[0], c[3], c[2] };
    CHECK( a.value( i ) == b.at( mirrored ) );
  }
}

TEST_CASE( "marginal reduction" )
{
  for ( auto model : { example1(), example2() } )
  {
    const auto joint = joint_signature_two( model, order_tag::later() );
    const auto single = survival_signature_single( model, 0, true );
    const auto n2 = model.counts()( 0, 0b10 ), n12 = model.counts()( 0, 0b11 );
    for ( std::size_t i = 0; i < single.size(); ++i )
    {
      const auto& c = single.cell( i ); // (l_1, l_[1]2)
      CHECK( joint.at( level_vector{ c[0], n2, c[1], n12 } ) == single.value( i ) );
    }
  }
}

TEST_CASE( "three systems of Example 4" )
{
  const auto model = example4();
  const auto same = joint_signature_three( model, order_tag{ { 0, 0, 0 } } );
  // groups (3, 12, 13, 23, 123) each hold one component: E, B, C, D, A
  const auto cell = [&]( unsigned e, unsigned b, unsigned c, unsigned d, unsigned a ) {
    return level_vector{ 0, 0, e, b, b, c, c, d, d, a, a, a };
  };
  CHECK( same.at( cell( 1, 1, 1, 1, 1 ) ) == 1 );
  CHECK( same.at( cell( 1, 0, 1, 1, 1 ) ) == 0 );
  CHECK( same.at( cell( 1, 1, 1, 1, 0 ) ) == 1 );
  CHECK( same.at( cell( 0, 1, 1, 1, 0 ) ) == 0 );
  CHECK( same.size() == 32 );
  CHECK( order_tag::all( 3 ).size() == 13 );
  CHECK_THROWS_AS( joint_signature_three( example2(), order_tag::same() ), wrong_arity );
  CHECK_THROWS_AS( joint_signature_two( model, order_tag::same() ), wrong_arity );
}

TEST_CASE( "multi-type tables reduce to one type" )
{
  const auto model = example1();
  CHECK( joint_signature_two_multitype( model, order_tag::earlier() ) ==
         joint_signature_two( model, order_tag::earlier() ) );
}

TEST_CASE( "multi-type table against brute force" )
{
  // shared components of type X, own components of type Y
  const auto model = shared_model::build(
      { { "S1", any( { all( { at( "A" ), at( "B" ) } ), all( { at( "C" ), at( "D" ) } ) } ) },
        { "S2", all( { any( { at( "A" ), at( "B" ) } ), at( "E" ) } ) } },
      { { "A", "X" }, { "B", "X" }, { "C", "Y" }, { "D", "Y" }, { "E", "Y" } }, { "X", "Y" } );
  for ( const auto& o : order_tag::all( 2 ) )
  {
    const auto table = joint_signature_two_multitype( model, o );
    CHECK( table == exhaustive_signature( model, o, event_kind::both ) );
    CHECK( table.layout().dimension() == 8 );
  }
}

TEST_CASE( "budget" )
{
  CHECK_THROWS_AS( joint_signature_two( example1(), order_tag::earlier(), 10 ), too_large );
  CHECK( estimated_work( example1(), order_tag::earlier() ) > 10 );
}

TEST_CASE( "bounds from a partial table" )
{
  const auto full = joint_signature_two( example2(), order_tag::later() );
  partial_signature partial( event_kind::both, full.layout() );
  partial.insert( { 1, 0, 1, 2 }, 1 );
  partial.insert( { 0, 0, 1, 1 }, 0 );
  const auto [lo, hi] = signature_bounds( partial, level_vector{ 1, 1, 1, 2 } );
  CHECK( lo == 1 );
  CHECK( hi == 1 );

  std::vector<std::size_t> everything( full.size() );
  std::iota( everything.begin(), everything.end(), 0 );
  const auto complete = partial_signature::from_table( full, everything );
  for ( std::size_t i = 0; i < full.size(); ++i )
  {
    const auto [l, u] = signature_bounds( complete, full.cell( i ) );
    CHECK( l == full.value( i ) );
    CHECK( u == full.value( i ) );
  }

  partial_signature corners( event_kind::both, full.layout() );
  corners.insert( { 0, 0, 0, 0 }, 0 );
  corners.insert( { 1, 1, 2, 2 }, 1 );
  const auto [l, u] = signature_bounds( corners, level_vector{ 1, 0, 1, 2 } );
  CHECK( l == 0 );
  CHECK( u == 1 );

  CHECK_THROWS_AS( signature_bounds( partial, level_vector{ 1, 1, 2, 1 } ), infeasible_query );
  CHECK_THROWS_AS( partial.insert( { 1, 1, 2, 1 }, 0 ), infeasible_query );
  partial_signature non_monotone( event_kind::s1_functions_s2_fails, full.layout() );
  CHECK_THROWS_AS( signature_bounds( non_monotone, level_vector{ 1, 1, 1, 2 } ), std::invalid_argument );
}

TEST_CASE( "event names" )
{
  for ( auto e : { event_kind::both, event_kind::s1_functions_s2_fails, event_kind::s2_functions_s1_fails,
                   event_kind::s1_only, event_kind::s2_only, event_kind::neither, event_kind::single_system } )
  {
    CHECK( parse_event( to_string( e ) ) == e );
  }
  CHECK_THROWS_AS( parse_event( "sometimes" ), std::invalid_argument );
}

TEST_CASE( "order tags" )
{
  CHECK( order_tag::parse( "earlier", 2 ) == order_tag::earlier() );
  CHECK( order_tag::parse( "2<1=3", 3 ) == order_tag{ { 1, 0, 1 } } );
  CHECK( order_tag{ { 1, 0, 1 } }.to_string() == "2<1=3" );
  for ( const auto& o : order_tag::all( 3 ) )
  {
    CHECK( order_tag::parse( o.to_string(), 3 ) == o );
  }
  CHECK_THROWS_AS( order_tag::parse( "1<1", 2 ), std::invalid_argument );
  const std::array times{ 0.5, 0.5, 0.1 };
  CHECK( order_tag::from_times( times ) == order_tag{ { 1, 1, 0 } } );
}
