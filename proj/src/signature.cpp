#include <sharedsig/signature.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <bit>
#include <set>

namespace sharedsig
{

/* events */

std::string to_string( event_kind e )
{
  switch ( e )
  {
  case event_kind::both:
    return "both";
  case event_kind::s1_functions_s2_fails:
    return "s1not2";
  case event_kind::s2_functions_s1_fails:
    return "s2not1";
  case event_kind::s1_only:
    return "s1only";
  case event_kind::s2_only:
    return "s2only";
  case event_kind::neither:
    return "neither";
  case event_kind::single_system:
    return "single";
  }
  return "?";
}

event_kind parse_event( const std::string& text )
{
  for ( auto e : { event_kind::both, event_kind::s1_functions_s2_fails, event_kind::s2_functions_s1_fails,
                   event_kind::s1_only, event_kind::s2_only, event_kind::neither, event_kind::single_system } )
  {
    if ( to_string( e ) == text )
    {
      return e;
    }
  }
  throw std::invalid_argument( "unknown event '" + text + "'" );
}

std::vector<requirement> requirements( event_kind e, std::size_t systems )
{
  using r = requirement;
  std::vector<requirement> out;
  switch ( e )
  {
  case event_kind::both:
    out = { r::functions, r::functions, r::functions };
    break;
  case event_kind::s1_functions_s2_fails:
    out = { r::functions, r::fails, r::any };
    break;
  case event_kind::s2_functions_s1_fails:
    out = { r::fails, r::functions, r::any };
    break;
  case event_kind::s1_only:
    out = { r::functions, r::any, r::any };
    break;
  case event_kind::s2_only:
    out = { r::any, r::functions, r::any };
    break;
  case event_kind::neither:
    out = { r::fails, r::fails, r::any };
    break;
  case event_kind::single_system:
    throw std::invalid_argument( "the single-system event has no joint requirements" );
  }
  out.resize( systems );
  return out;
}

bool is_monotone_event( event_kind e )
{
  return e == event_kind::both || e == event_kind::s1_only || e == event_kind::s2_only ||
         e == event_kind::single_system;
}

/* signature_table */

signature_table::signature_table( event_kind event, table_layout layout, std::vector<std::string> system_names )
    : event_( event ), layout_( std::move( layout ) ), system_names_( std::move( system_names ) )
{
}

std::optional<std::size_t> signature_table::find( std::span<const unsigned> cell ) const
{
  if ( cell.size() != layout_.dimension() )
  {
    return std::nullopt;
  }
  for ( std::size_t c = 0; c < cell.size(); ++c )
  {
    if ( cell[c] > layout_.coordinate_max( c ) )
    {
      return std::nullopt;
    }
  }
  const auto index = layout_.dense_index( cell );
  const auto it = std::lower_bound( dense_.begin(), dense_.end(), index );
  if ( it == dense_.end() || *it != index )
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>( it - dense_.begin() );
}

rational signature_table::at( std::span<const unsigned> cell ) const
{
  const auto i = find( cell );
  if ( !i )
  {
    throw infeasible_query( "cell is not a feasible level vector of this table" );
  }
  return value( *i );
}

void signature_table::push( level_vector cell, big_int favourable, big_int total )
{
  if ( !layout_.feasible( cell ) )
  {
    throw infeasible_levels( "cell is infeasible for ordering " + layout_.order().to_string() );
  }
  const auto index = layout_.dense_index( cell );
  if ( !dense_.empty() && dense_.back() >= index )
  {
    throw std::invalid_argument( "cells must be appended in dense order" );
  }
  if ( total <= 0 || favourable < 0 || favourable > total )
  {
    throw std::invalid_argument( "signature value outside [0, 1]" );
  }
  value_doubles_.push_back( static_cast<double>( rational( favourable, total ) ) );
  dense_.push_back( index );
  cells_.push_back( std::move( cell ) );
  favourable_.push_back( std::move( favourable ) );
  total_.push_back( std::move( total ) );
}

bool signature_table::operator==( const signature_table& other ) const
{
  return event_ == other.event_ && layout_ == other.layout_ && system_names_ == other.system_names_ &&
         cells_ == other.cells_ && favourable_ == other.favourable_ && total_ == other.total_;
}

namespace
{

constexpr std::uint64_t max_tabulated_cells = std::uint64_t{ 1 } << 22;

using u128 = unsigned __int128;

big_int to_big( u128 v )
{
  big_int hi = static_cast<std::uint64_t>( v >> 64 );
  return ( hi << 64 ) + static_cast<std::uint64_t>( v );
}

std::uint64_t saturating_pow( std::uint64_t base, unsigned exponent )
{
  std::uint64_t out = 1;
  for ( unsigned i = 0; i < exponent; ++i )
  {
    if ( out > ( std::uint64_t{ 1 } << 62 ) / base )
    {
      return std::uint64_t{ 1 } << 62;
    }
    out *= base;
  }
  return out;
}

std::uint64_t saturating_add( std::uint64_t a, std::uint64_t b )
{
  return std::min<std::uint64_t>( a + b, std::uint64_t{ 1 } << 62 );
}

std::uint64_t saturating_mul( std::uint64_t a, std::uint64_t b )
{
  if ( a && b > ( std::uint64_t{ 1 } << 62 ) / a )
  {
    return std::uint64_t{ 1 } << 62;
  }
  return a * b;
}

std::vector<std::string> system_names_of( const shared_model& model )
{
  std::vector<std::string> names;
  for ( const auto& s : model.systems() )
  {
    names.push_back( s.name );
  }
  return names;
}

std::uint64_t bits_of( const std::vector<std::size_t>& components )
{
  std::uint64_t mask = 0;
  for ( auto c : components )
  {
    mask |= std::uint64_t{ 1 } << c;
  }
  return mask;
}

/// What one system sees: its shared components (local bit order) and own blocks.
struct system_view
{
  std::vector<std::size_t> shared;     // global component indices
  std::vector<std::uint64_t> own_mask; // per own block (one per type)
  std::vector<std::size_t> own_coord;  // coordinate of each own block
  std::vector<unsigned> own_size;
  std::size_t own_combos = 1;
  std::uint64_t own_all = 0;
};

/// Shared block as enumerated: each component gets a survival depth in [0, ranks].
struct shared_block_view
{
  std::vector<std::size_t> components;
  unsigned ranks = 0;
  std::vector<std::size_t> members;
  std::vector<unsigned> member_depth; // component seen by member iff depth >= member_depth
  std::vector<std::size_t> coords;
};

struct joint_plan
{
  std::vector<system_view> systems;
  std::vector<shared_block_view> shared;
  std::uint64_t work = 0;
};

joint_plan make_plan( const shared_model& model, const table_layout& layout )
{
  joint_plan plan;
  plan.systems.resize( model.system_count() );
  for ( const auto& b : layout.blocks() )
  {
    const auto comps = model.members( b.type, b.group );
    if ( b.members.size() == 1 )
    {
      auto& v = plan.systems[b.members[0]];
      v.own_mask.push_back( bits_of( comps ) );
      v.own_coord.push_back( b.coords[0] );
      v.own_size.push_back( b.size );
      v.own_combos *= b.size + 1u;
      v.own_all |= bits_of( comps );
      continue;
    }
    if ( comps.empty() )
    {
      continue;
    }
    shared_block_view s;
    s.components = comps;
    std::set<unsigned> distinct;
    for ( auto m : b.members )
    {
      distinct.insert( layout.order().ranks[m] );
    }
    s.ranks = static_cast<unsigned>( distinct.size() );
    s.members = b.members;
    s.coords = b.coords;
    for ( auto m : b.members )
    {
      s.member_depth.push_back(
          static_cast<unsigned>( std::distance( distinct.begin(), distinct.find( layout.order().ranks[m] ) ) ) + 1u );
      auto& shared = plan.systems[m].shared;
      shared.insert( shared.end(), comps.begin(), comps.end() );
    }
    plan.shared.push_back( std::move( s ) );
  }

  std::uint64_t configurations = 1, own_product = 1;
  for ( const auto& s : plan.shared )
  {
    configurations = saturating_mul( configurations, saturating_pow( s.ranks + 1u, s.components.size() ) );
  }
  for ( const auto& v : plan.systems )
  {
    const auto bits = static_cast<unsigned>( v.shared.size() + std::popcount( v.own_all ) );
    plan.work = saturating_add( plan.work, bits >= 62 ? std::uint64_t{ 1 } << 62 : std::uint64_t{ 1 } << bits );
    own_product = saturating_mul( own_product, v.own_combos );
  }
  plan.work = saturating_add( plan.work, saturating_mul( configurations, own_product ) );
  return plan;
}

/// Iterates the subsets of `mask` (including 0 and `mask`).
template<typename Fn>
void for_each_subset( std::uint64_t mask, Fn&& fn )
{
  std::uint64_t sub = 0;
  do
  {
    fn( sub );
    sub = ( sub - mask ) & mask;
  } while ( sub != 0 );
}

/// Per shared state of one system: number of own-component subsets, per own-level
/// combination, for which the system meets its requirement.
std::vector<std::uint64_t> system_counts( const shared_model& model, std::size_t i, const system_view& v,
                                          requirement req )
{
  const std::size_t shared_states = std::size_t{ 1 } << v.shared.size();
  std::vector<std::uint64_t> counts( shared_states * v.own_combos, 0 );

  // number of own subsets per own-level combination
  std::vector<std::uint64_t> subsets( v.own_combos, 0 );
  auto own_index = [&]( std::uint64_t sub ) {
    std::size_t index = 0;
    for ( std::size_t b = 0; b < v.own_mask.size(); ++b )
    {
      index = index * ( v.own_size[b] + 1u ) + static_cast<std::size_t>( std::popcount( sub & v.own_mask[b] ) );
    }
    return index;
  };
  for_each_subset( v.own_all, [&]( std::uint64_t sub ) { ++subsets[own_index( sub )]; } );

  for ( std::size_t local = 0; local < shared_states; ++local )
  {
    auto* row = &counts[local * v.own_combos];
    if ( req == requirement::any )
    {
      std::copy( subsets.begin(), subsets.end(), row );
      continue;
    }
    std::uint64_t state = 0;
    for ( std::size_t j = 0; j < v.shared.size(); ++j )
    {
      if ( ( local >> j ) & 1u )
      {
        state |= std::uint64_t{ 1 } << v.shared[j];
      }
    }
    for_each_subset( v.own_all, [&]( std::uint64_t sub ) {
      if ( model.phi( i )( state | sub ) )
      {
        ++row[own_index( sub )];
      }
    } );
    if ( req == requirement::fails )
    {
      for ( std::size_t o = 0; o < v.own_combos; ++o )
      {
        row[o] = subsets[o] - row[o];
      }
    }
  }
  return counts;
}

signature_table joint_table( const shared_model& model, const order_tag& order, event_kind event,
                             std::uint64_t budget )
{
  const auto reqs = requirements( event, model.system_count() );
  auto layout = table_layout::joint( model, order );
  if ( layout.dense_size() > max_tabulated_cells )
  {
    throw too_large( "level lattice of " + std::to_string( layout.dense_size() ) + " cells is too large to tabulate" );
  }
  const auto plan = make_plan( model, layout );
  if ( plan.work > budget )
  {
    throw too_large( "joint signature needs about " + std::to_string( plan.work ) +
                     " evaluations, above the budget of " + std::to_string( budget ) );
  }

  const auto n_sys = model.system_count();
  std::vector<std::vector<std::uint64_t>> counts;
  for ( std::size_t i = 0; i < n_sys; ++i )
  {
    counts.push_back( system_counts( model, i, plan.systems[i], reqs[i] ) );
  }

  // strides of the dense index
  std::vector<std::uint64_t> stride( layout.dimension(), 1 );
  for ( std::size_t c = layout.dimension(); c-- > 1; )
  {
    stride[c - 1] = stride[c] * ( layout.coordinate_max( c ) + 1u );
  }

  // dense offset contributed by each own-level combination of each system
  std::vector<std::vector<std::uint64_t>> own_offset( n_sys );
  for ( std::size_t i = 0; i < n_sys; ++i )
  {
    const auto& v = plan.systems[i];
    for ( std::size_t o = 0; o < v.own_combos; ++o )
    {
      std::uint64_t offset = 0;
      auto rest = o;
      for ( std::size_t b = v.own_mask.size(); b-- > 0; )
      {
        offset += ( rest % ( v.own_size[b] + 1u ) ) * stride[v.own_coord[b]];
        rest /= v.own_size[b] + 1u;
      }
      own_offset[i].push_back( offset );
    }
  }

  // local bit of each shared component in each system's view
  std::vector<std::vector<int>> local_bit( n_sys, std::vector<int>( model.components().size(), -1 ) );
  for ( std::size_t i = 0; i < n_sys; ++i )
  {
    for ( std::size_t j = 0; j < plan.systems[i].shared.size(); ++j )
    {
      local_bit[i][plan.systems[i].shared[j]] = static_cast<int>( j );
    }
  }

  std::vector<u128> favourable( layout.dense_size(), 0 );

  std::vector<std::pair<std::size_t, std::size_t>> digits; // (block, component position)
  for ( std::size_t b = 0; b < plan.shared.size(); ++b )
  {
    for ( std::size_t p = 0; p < plan.shared[b].components.size(); ++p )
    {
      digits.emplace_back( b, p );
    }
  }
  std::vector<unsigned> depth( digits.size(), 0 );
  std::vector<std::size_t> local( n_sys );
  std::vector<const std::uint64_t*> rows( n_sys );

  while ( true )
  {
    std::fill( local.begin(), local.end(), 0 );
    std::uint64_t base = 0;
    std::size_t d = 0;
    for ( const auto& s : plan.shared )
    {
      for ( std::size_t x = 0; x < s.members.size(); ++x )
      {
        const auto m = s.members[x];
        unsigned level = 0;
        for ( std::size_t p = 0; p < s.components.size(); ++p )
        {
          if ( depth[d + p] >= s.member_depth[x] )
          {
            ++level;
            local[m] |= std::size_t{ 1 } << local_bit[m][s.components[p]];
          }
        }
        base += level * stride[s.coords[x]];
      }
      d += s.components.size();
    }

    bool any_zero_row = false;
    for ( std::size_t i = 0; i < n_sys && !any_zero_row; ++i )
    {
      rows[i] = &counts[i][local[i] * plan.systems[i].own_combos];
      any_zero_row = std::all_of( rows[i], rows[i] + plan.systems[i].own_combos,
                                  []( std::uint64_t c ) { return c == 0; } );
    }

    if ( !any_zero_row )
    {
      const auto& o0 = own_offset[0];
      const auto& o1 = own_offset[1];
      for ( std::size_t a = 0; a < o0.size(); ++a )
      {
        if ( !rows[0][a] )
        {
          continue;
        }
        for ( std::size_t b = 0; b < o1.size(); ++b )
        {
          if ( !rows[1][b] )
          {
            continue;
          }
          const u128 ab = static_cast<u128>( rows[0][a] ) * rows[1][b];
          if ( n_sys == 2 )
          {
            favourable[base + o0[a] + o1[b]] += ab;
            continue;
          }
          const auto& o2 = own_offset[2];
          for ( std::size_t c = 0; c < o2.size(); ++c )
          {
            if ( rows[2][c] )
            {
              favourable[base + o0[a] + o1[b] + o2[c]] += ab * rows[2][c];
            }
          }
        }
      }
    }

    std::size_t k = 0;
    while ( k < digits.size() && ++depth[k] > plan.shared[digits[k].first].ranks )
    {
      depth[k++] = 0;
    }
    if ( k == digits.size() )
    {
      break;
    }
  }

  signature_table table( event, layout, system_names_of( model ) );
  for ( std::uint64_t index = 0; index < layout.dense_size(); ++index )
  {
    auto cell = layout.decode( index );
    if ( layout.feasible( cell ) )
    {
      auto total = layout.configurations( cell );
      table.push( std::move( cell ), to_big( favourable[index] ), std::move( total ) );
    }
  }
  return table;
}

} // namespace

std::uint64_t estimated_work( const shared_model& model, const order_tag& order )
{
  return make_plan( model, table_layout::joint( model, order ) ).work;
}

signature_table joint_signature_two( const shared_model& model, const order_tag& order, std::uint64_t budget )
{
  if ( model.system_count() != 2 )
  {
    throw wrong_arity( "joint_signature_two needs exactly 2 systems" );
  }
  return joint_table( model, order, event_kind::both, budget );
}

signature_table joint_signature_two_multitype( const shared_model& model, const order_tag& order,
                                               std::uint64_t budget )
{
  return joint_signature_two( model, order, budget );
}

signature_table joint_signature_three( const shared_model& model, const order_tag& order, std::uint64_t budget )
{
  if ( model.system_count() != 3 )
  {
    throw wrong_arity( "joint_signature_three needs exactly 3 systems" );
  }
  return joint_table( model, order, event_kind::both, budget );
}

signature_table variant_signature( const shared_model& model, const order_tag& order, event_kind event,
                                   std::uint64_t budget )
{
  if ( event == event_kind::single_system )
  {
    throw std::invalid_argument( "use survival_signature_single for single-system signatures" );
  }
  return joint_table( model, order, event, budget );
}

/* single system */

namespace
{

signature_table single_table( const compiled_structure& phi, std::uint64_t support, table_layout layout,
                              const std::vector<std::uint64_t>& block_masks, std::vector<std::string> names,
                              std::uint64_t budget )
{
  const auto n = std::popcount( support );
  if ( n >= 62 || ( std::uint64_t{ 1 } << n ) > budget )
  {
    throw too_large( "single-system signature over " + std::to_string( n ) + " components exceeds the budget" );
  }
  if ( layout.dense_size() > max_tabulated_cells )
  {
    throw too_large( "level lattice is too large to tabulate" );
  }
  std::vector<std::uint64_t> favourable( layout.dense_size(), 0 );
  for_each_subset( support, [&]( std::uint64_t state ) {
    if ( phi( state ) )
    {
      std::uint64_t index = 0;
      for ( std::size_t b = 0; b < block_masks.size(); ++b )
      {
        index = index * ( layout.coordinate_max( b ) + 1u ) +
                static_cast<std::uint64_t>( std::popcount( state & block_masks[b] ) );
      }
      ++favourable[index];
    }
  } );

  signature_table table( event_kind::single_system, layout, std::move( names ) );
  for ( std::uint64_t index = 0; index < layout.dense_size(); ++index )
  {
    auto cell = layout.decode( index );
    big_int total = 1;
    for ( std::size_t b = 0; b < cell.size(); ++b )
    {
      total *= binomial( layout.coordinate_max( b ), cell[b] );
    }
    table.push( std::move( cell ), favourable[index], std::move( total ) );
  }
  return table;
}

} // namespace

signature_table survival_signature_single( const structure_function& structure, const std::vector<std::string>& types,
                                           const std::map<component_id, std::string>& component_type,
                                           std::uint64_t budget )
{
  const auto names = structure.components();
  if ( names.size() > 62 )
  {
    throw too_large( "structure references too many components" );
  }
  std::vector<std::uint64_t> masks( types.size(), 0 );
  for ( std::size_t c = 0; c < names.size(); ++c )
  {
    const auto it = component_type.find( names[c] );
    if ( it == component_type.end() )
    {
      throw unknown_component( "component '" + names[c] + "' has no declared type" );
    }
    const auto t = std::find( types.begin(), types.end(), it->second );
    if ( t == types.end() )
    {
      throw unknown_type( "component '" + names[c] + "' has undeclared type '" + it->second + "'" );
    }
    masks[static_cast<std::size_t>( t - types.begin() )] |= std::uint64_t{ 1 } << c;
  }
  ensure_coherent( structure );

  const bool typed = types.size() > 1;
  std::vector<layout_block> blocks;
  std::vector<std::string> coords;
  for ( std::size_t k = 0; k < types.size(); ++k )
  {
    blocks.push_back( { k, 1u, static_cast<unsigned>( std::popcount( masks[k] ) ), { 0 }, { k } } );
    coords.push_back( ( typed ? types[k] + ":" : std::string() ) + "l" );
  }
  table_layout layout( types, 1, order_tag::single(), std::move( blocks ), std::move( coords ) );
  compiled_structure phi( structure, [&]( const component_id& c ) {
    return static_cast<unsigned>( std::lower_bound( names.begin(), names.end(), c ) - names.begin() );
  } );
  const auto support = names.size() == 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << names.size() ) - 1;
  return single_table( phi, support, std::move( layout ), masks, { "system" }, budget );
}

signature_table survival_signature_single( const shared_model& model, std::size_t system, bool split,
                                           std::uint64_t budget )
{
  auto layout = table_layout::single( model, system, split );
  std::vector<std::uint64_t> masks;
  std::uint64_t support = 0;
  for ( const auto& b : layout.blocks() )
  {
    std::uint64_t mask = 0;
    for ( auto g : canonical_groups( model.system_count() ) )
    {
      const bool in_block = split ? g == b.group : ( ( g >> system ) & 1u ) != 0;
      if ( in_block )
      {
        mask |= bits_of( model.members( b.type, g ) );
      }
    }
    masks.push_back( mask );
    support |= mask;
  }
  return single_table( model.phi( system ), support, std::move( layout ), masks, { model.systems()[system].name },
                       budget );
}

/* bounds */

partial_signature::partial_signature( event_kind event, table_layout layout )
    : event_( event ), layout_( std::move( layout ) )
{
}

partial_signature partial_signature::from_table( const signature_table& table, std::span<const std::size_t> positions )
{
  partial_signature partial( table.event(), table.layout() );
  for ( auto p : positions )
  {
    partial.insert( table.cell( p ), table.value( p ) );
  }
  return partial;
}

void partial_signature::insert( level_vector cell, rational value )
{
  if ( !layout_.feasible( cell ) )
  {
    throw infeasible_query( "evaluated cell is infeasible for ordering " + layout_.order().to_string() );
  }
  values_.emplace_back( std::move( cell ), std::move( value ) );
}

std::pair<rational, rational> signature_bounds( const partial_signature& partial, std::span<const unsigned> query )
{
  if ( !is_monotone_event( partial.event_ ) )
  {
    throw std::invalid_argument( "bounds need a signature that is monotone in its levels" );
  }
  if ( !partial.layout_.feasible( query ) )
  {
    throw infeasible_query( "query is infeasible for ordering " + partial.layout_.order().to_string() );
  }
  rational lower = 0, upper = 1;
  for ( const auto& [cell, value] : partial.values_ )
  {
    bool below = true, above = true;
    for ( std::size_t c = 0; c < query.size(); ++c )
    {
      below = below && cell[c] <= query[c];
      above = above && cell[c] >= query[c];
    }
    if ( below )
    {
      lower = std::max( lower, value );
    }
    if ( above )
    {
      upper = std::min( upper, value );
    }
  }
  return { lower, upper };
}

} // namespace sharedsig
