#include <sharedsig/levels.hpp>

#include <sharedsig/errors.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace sharedsig
{

big_int binomial( unsigned n, unsigned k )
{
  if ( k > n )
  {
    return 0;
  }
  k = std::min( k, n - k );
  big_int result = 1;
  for ( unsigned i = 1; i <= k; ++i )
  {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

/* order_tag */

order_tag order_tag::from_times( std::span<const double> times )
{
  std::set<double> distinct( times.begin(), times.end() );
  order_tag tag;
  for ( auto t : times )
  {
    tag.ranks.push_back( static_cast<unsigned>( std::distance( distinct.begin(), distinct.find( t ) ) ) );
  }
  return tag;
}

order_tag order_tag::parse( const std::string& text, std::size_t systems )
{
  if ( systems == 2 )
  {
    if ( text == "earlier" )
    {
      return earlier();
    }
    if ( text == "same" )
    {
      return same();
    }
    if ( text == "later" )
    {
      return later();
    }
  }
  order_tag tag;
  tag.ranks.assign( systems, ~0u );
  unsigned rank = 0;
  bool expect_digit = true;
  for ( char c : text )
  {
    if ( expect_digit )
    {
      const auto s = static_cast<unsigned>( c - '1' );
      if ( c < '1' || s >= systems || tag.ranks[s] != ~0u )
      {
        throw std::invalid_argument( "invalid ordering '" + text + "'" );
      }
      tag.ranks[s] = rank;
    }
    else if ( c == '<' )
    {
      ++rank;
    }
    else if ( c != '=' )
    {
      throw std::invalid_argument( "invalid ordering '" + text + "'" );
    }
    expect_digit = !expect_digit;
  }
  if ( expect_digit || std::count( tag.ranks.begin(), tag.ranks.end(), ~0u ) )
  {
    throw std::invalid_argument( "ordering '" + text + "' must mention every system exactly once" );
  }
  return tag;
}

std::vector<order_tag> order_tag::all( std::size_t systems )
{
  std::vector<order_tag> out;
  std::vector<unsigned> r( systems, 0 );
  while ( true )
  {
    const auto top = *std::max_element( r.begin(), r.end() );
    bool dense = true;
    for ( unsigned v = 0; v <= top; ++v )
    {
      dense = dense && std::find( r.begin(), r.end(), v ) != r.end();
    }
    if ( dense )
    {
      out.push_back( { r } );
    }
    std::size_t i = 0;
    while ( i < systems && ++r[i] == systems )
    {
      r[i++] = 0;
    }
    if ( i == systems )
    {
      break;
    }
  }
  std::sort( out.begin(), out.end() );
  return out;
}

std::string order_tag::to_string() const
{
  if ( ranks.size() == 1 )
  {
    return "single";
  }
  if ( ranks.size() == 2 )
  {
    return ranks[0] == ranks[1] ? "same" : ( ranks[0] < ranks[1] ? "earlier" : "later" );
  }
  std::vector<std::size_t> idx( ranks.size() );
  std::iota( idx.begin(), idx.end(), 0 );
  std::stable_sort( idx.begin(), idx.end(), [&]( auto a, auto b ) { return ranks[a] < ranks[b]; } );
  std::string out;
  for ( std::size_t i = 0; i < idx.size(); ++i )
  {
    if ( i )
    {
      out += ranks[idx[i]] == ranks[idx[i - 1]] ? '=' : '<';
    }
    out += static_cast<char>( '1' + idx[i] );
  }
  return out;
}

/* table_layout */

std::string joint_coordinate_name( group_mask group, std::size_t member )
{
  std::string out = "l_";
  const bool shared = std::popcount( group ) > 1;
  for ( unsigned i = 0; i < 8; ++i )
  {
    if ( ( group >> i ) & 1u )
    {
      const char digit = static_cast<char>( '1' + i );
      if ( shared && i == member )
      {
        out += '[';
        out += digit;
        out += ']';
      }
      else
      {
        out += digit;
      }
    }
  }
  return out;
}

table_layout::table_layout( std::vector<std::string> type_names, std::size_t systems, order_tag order,
                            std::vector<layout_block> blocks, std::vector<std::string> coordinate_names )
    : type_names_( std::move( type_names ) ),
      systems_( systems ),
      order_( std::move( order ) ),
      blocks_( std::move( blocks ) ),
      names_( std::move( coordinate_names ) )
{
  if ( order_.systems() != systems_ )
  {
    throw wrong_arity( "ordering does not match the number of systems" );
  }
  finish();
}

void table_layout::finish()
{
  max_.assign( names_.size(), 0u );
  std::vector<bool> covered( names_.size(), false );
  dense_size_ = 1;
  for ( const auto& b : blocks_ )
  {
    if ( b.members.size() != b.coords.size() || b.members.empty() )
    {
      throw std::invalid_argument( "malformed layout block" );
    }
    for ( auto c : b.coords )
    {
      if ( c >= names_.size() || covered[c] )
      {
        throw std::invalid_argument( "layout coordinates must be covered exactly once" );
      }
      covered[c] = true;
      max_[c] = b.size;
    }
    for ( auto m : b.members )
    {
      if ( m >= systems_ )
      {
        throw std::invalid_argument( "layout block refers to an unknown system" );
      }
    }
  }
  for ( std::size_t c = 0; c < names_.size(); ++c )
  {
    if ( !covered[c] )
    {
      throw std::invalid_argument( "layout coordinates must be covered exactly once" );
    }
    const std::uint64_t radix = max_[c] + 1u;
    if ( dense_size_ > ( std::uint64_t{ 1 } << 40 ) / radix )
    {
      throw too_large( "level lattice is too large to tabulate" );
    }
    dense_size_ *= radix;
  }
}

table_layout table_layout::joint( const shared_model& model, const order_tag& order )
{
  if ( order.systems() != model.system_count() )
  {
    throw wrong_arity( "ordering over " + std::to_string( order.systems() ) + " systems used with a " +
                       std::to_string( model.system_count() ) + "-system model" );
  }
  const bool typed = model.types().size() > 1;
  std::vector<layout_block> blocks;
  std::vector<std::string> names;
  for ( std::size_t k = 0; k < model.types().size(); ++k )
  {
    for ( auto g : canonical_groups( model.system_count() ) )
    {
      layout_block b;
      b.type = k;
      b.group = g;
      b.size = model.counts()( k, g );
      for ( std::size_t i = 0; i < model.system_count(); ++i )
      {
        if ( ( g >> i ) & 1u )
        {
          b.members.push_back( i );
          b.coords.push_back( names.size() );
          names.push_back( ( typed ? model.types()[k] + ":" : std::string() ) + joint_coordinate_name( g, i ) );
        }
      }
      blocks.push_back( std::move( b ) );
    }
  }
  return table_layout( model.types(), model.system_count(), order, std::move( blocks ), std::move( names ) );
}

table_layout table_layout::single( const shared_model& model, std::size_t system, bool split )
{
  if ( system >= model.system_count() )
  {
    throw unknown_system( "system index out of range" );
  }
  const bool typed = model.types().size() > 1;
  std::vector<layout_block> blocks;
  std::vector<std::string> names;
  for ( std::size_t k = 0; k < model.types().size(); ++k )
  {
    const std::string prefix = typed ? model.types()[k] + ":" : std::string();
    if ( !split )
    {
      blocks.push_back( { k, 1u << system, model.counts().system_total( k, system ), { 0 }, { names.size() } } );
      names.push_back( prefix + "l" );
      continue;
    }
    for ( auto g : canonical_groups( model.system_count() ) )
    {
      if ( ( g >> system ) & 1u )
      {
        blocks.push_back( { k, g, model.counts()( k, g ), { 0 }, { names.size() } } );
        names.push_back( prefix + "l_" + group_label( g ) );
      }
    }
  }
  return table_layout( model.types(), 1, order_tag::single(), std::move( blocks ), std::move( names ) );
}

bool table_layout::feasible( std::span<const unsigned> cell ) const
{
  if ( cell.size() != names_.size() )
  {
    return false;
  }
  for ( std::size_t c = 0; c < cell.size(); ++c )
  {
    if ( cell[c] > max_[c] )
    {
      return false;
    }
  }
  for ( const auto& b : blocks_ )
  {
    for ( std::size_t x = 0; x < b.members.size(); ++x )
    {
      for ( std::size_t y = 0; y < b.members.size(); ++y )
      {
        const auto rx = order_.ranks[b.members[x]], ry = order_.ranks[b.members[y]];
        const auto lx = cell[b.coords[x]], ly = cell[b.coords[y]];
        if ( ( rx == ry && lx != ly ) || ( rx < ry && lx < ly ) )
        {
          return false;
        }
      }
    }
  }
  return true;
}

std::uint64_t table_layout::dense_index( std::span<const unsigned> cell ) const
{
  std::uint64_t index = 0;
  for ( std::size_t c = 0; c < names_.size(); ++c )
  {
    index = index * ( max_[c] + 1u ) + cell[c];
  }
  return index;
}

level_vector table_layout::decode( std::uint64_t index ) const
{
  level_vector cell( names_.size() );
  for ( std::size_t c = names_.size(); c-- > 0; )
  {
    cell[c] = static_cast<unsigned>( index % ( max_[c] + 1u ) );
    index /= max_[c] + 1u;
  }
  return cell;
}

std::vector<level_vector> table_layout::feasible_cells() const
{
  std::vector<level_vector> out;
  for ( std::uint64_t i = 0; i < dense_size_; ++i )
  {
    auto cell = decode( i );
    if ( feasible( cell ) )
    {
      out.push_back( std::move( cell ) );
    }
  }
  return out;
}

std::vector<unsigned> table_layout::chain( const layout_block& block, std::span<const unsigned> cell ) const
{
  std::vector<std::pair<unsigned, unsigned>> by_rank;
  for ( std::size_t x = 0; x < block.members.size(); ++x )
  {
    by_rank.emplace_back( order_.ranks[block.members[x]], cell[block.coords[x]] );
  }
  std::sort( by_rank.begin(), by_rank.end() );
  std::vector<unsigned> out;
  for ( std::size_t i = 0; i < by_rank.size(); ++i )
  {
    if ( i == 0 || by_rank[i].first != by_rank[i - 1].first )
    {
      out.push_back( by_rank[i].second );
    }
  }
  return out;
}

big_int table_layout::configurations( std::span<const unsigned> cell ) const
{
  big_int total = 1;
  for ( const auto& b : blocks_ )
  {
    unsigned above = b.size;
    for ( auto level : chain( b, cell ) )
    {
      total *= binomial( above, level );
      above = level;
    }
  }
  return total;
}

} // namespace sharedsig
