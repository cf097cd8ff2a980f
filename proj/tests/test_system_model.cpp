#include <doctest.h>

#include "fixtures.hpp"

#include <sharedsig/errors.hpp>
#include <sharedsig/system_model.hpp>

using namespace sharedsig;
using namespace fixtures;

TEST_CASE( "sharing counts of the examples" )
{
  const auto m2 = example2();
  CHECK( m2.counts()( 0, 0b01 ) == 1 );
  CHECK( m2.counts()( 0, 0b10 ) == 1 );
  CHECK( m2.counts()( 0, 0b11 ) == 2 );
  CHECK( m2.counts().system_total( 0, 0 ) == 3 );
  CHECK_FALSE( m2.independent() );

  const auto m1 = example1();
  CHECK( m1.counts()( 0, 0b01 ) == 2 );
  CHECK( m1.counts()( 0, 0b10 ) == 2 );
  CHECK( m1.counts()( 0, 0b11 ) == 3 );

  // A in all three, B in S1,S2, C in S1,S3, D in S2,S3, E in S3 only
  const auto m4 = example4();
  const std::vector<std::pair<group_mask, unsigned>> expected{
      { 0b001, 0 }, { 0b010, 0 }, { 0b100, 1 }, { 0b011, 1 }, { 0b101, 1 }, { 0b110, 1 }, { 0b111, 1 } };
  for ( auto [g, n] : expected )
  {
    CHECK( m4.counts()( 0, g ) == n );
  }
  CHECK( m4.component_group( m4.component_index( "A" ) ) == 0b111u );
  CHECK( m4.members( 0, 0b110 ) == std::vector<std::size_t>{ m4.component_index( "D" ) } );
}

TEST_CASE( "canonical group order and labels" )
{
  CHECK( canonical_groups( 2 ) == std::vector<group_mask>{ 1, 2, 3 } );
  CHECK( canonical_groups( 3 ) == std::vector<group_mask>{ 1, 2, 4, 3, 5, 6, 7 } );
  CHECK( group_label( 0b101 ) == "13" );
}

TEST_CASE( "disjoint systems are independent" )
{
  const auto m = shared_model::build( { { "S1", all( { at( "A" ), at( "B" ) } ) }, { "S2", at( "C" ) } },
                                      one_type( { "A", "B", "C", "X" } ), { "T" } );
  CHECK( m.independent() );
  CHECK( m.unused_components() == std::vector<component_id>{ "X" } );
  CHECK( m.component_group( m.component_index( "X" ) ) == 0u );
}

TEST_CASE( "model validation" )
{
  const auto s = example2_s1();
  CHECK_THROWS_AS( shared_model::build( { { "S1", s } }, one_type( { "A", "B", "C" } ), { "T" } ), wrong_arity );
  CHECK_THROWS_AS( shared_model::build( { { "S1", s }, { "S1", s } }, one_type( { "A", "B", "C" } ), { "T" } ),
                   duplicate_name );
  CHECK_THROWS_AS( shared_model::build( { { "S1", s }, { "S2", s } }, one_type( { "A", "B" } ), { "T" } ),
                   unknown_component );
  CHECK_THROWS_AS( shared_model::build( { { "S1", s }, { "S2", s } }, one_type( { "A", "B", "C", "A" } ), { "T" } ),
                   duplicate_name );
  CHECK_THROWS_AS( shared_model::build( { { "S1", s }, { "S2", s } }, { { "A", "T" }, { "B", "T" }, { "C", "U" } },
                                        { "T" } ),
                   unknown_type );
  const auto bad = structure_function::truth_table( { "A", "B" }, { false, true, false, false } );
  CHECK_THROWS_AS( shared_model::build( { { "S1", s }, { "S2", bad } }, one_type( { "A", "B", "C" } ), { "T" } ),
                   non_monotone );
  CHECK_THROWS_AS( example2().system_index( "S9" ), unknown_system );
}

TEST_CASE( "induced model recomputes sharing" )
{
  const auto pair = example4().induced( { 0, 2 } );
  CHECK( pair.system_count() == 2 );
  CHECK( pair.systems()[1].name == "S3" );
  // S1 = {A,B,C}, S3 = {A,C,D,E}: shared A,C
  CHECK( pair.counts()( 0, 0b01 ) == 1 );
  CHECK( pair.counts()( 0, 0b10 ) == 2 );
  CHECK( pair.counts()( 0, 0b11 ) == 2 );
}
