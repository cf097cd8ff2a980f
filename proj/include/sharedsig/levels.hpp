#pragma once

#include <sharedsig/system_model.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sharedsig
{

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

/// One level per coordinate of a table layout.
using level_vector = std::vector<unsigned>;

/*! \brief Weak ordering of the observation times of the systems.

  `ranks[i]` is the dense rank of system i's time (0 = earliest); equal
  ranks are tied times. With two systems the three orderings are called
  earlier (t1 < t2), same (t1 = t2) and later (t1 > t2).
*/
struct order_tag
{
  std::vector<unsigned> ranks;

  static order_tag earlier() { return { { 0, 1 } }; }
  static order_tag same() { return { { 0, 0 } }; }
  static order_tag later() { return { { 1, 0 } }; }
  static order_tag single() { return { { 0 } }; }

  static order_tag from_times( std::span<const double> times );

  /// Accepts earlier|same|later (two systems) or a rank string such as "1<2=3".
  static order_tag parse( const std::string& text, std::size_t systems );

  /// Every weak ordering of `systems` times (3 for two systems, 13 for three).
  static std::vector<order_tag> all( std::size_t systems );

  std::size_t systems() const { return ranks.size(); }
  std::string to_string() const;

  bool operator==( const order_tag& ) const = default;
  auto operator<=>( const order_tag& ) const = default;
};

/// A (type, sharing group) cell of components and the systems that observe it.
struct layout_block
{
  std::size_t type = 0;
  group_mask group = 0;
  unsigned size = 0;
  std::vector<std::size_t> members; ///< system positions, ascending
  std::vector<std::size_t> coords;  ///< coordinate index of each member's level

  bool operator==( const layout_block& ) const = default;
};

/*! \brief Coordinates and feasibility rules of a signature table.

  Coordinates follow the blocks in order (types outer, canonical groups
  inner, member systems ascending). For two systems and one type this is
  (l_1, l_2, l_[1]2, l_1[2]); for three systems the twelve-entry vector
  (l_1, l_2, l_3, l_[1]2, l_1[2], l_[1]3, l_1[3], l_[2]3, l_2[3], l_[1]23,
  l_1[2]3, l_12[3]). Within a block, a member observed later sees a
  subset of the survivors seen by a member observed earlier.
*/
class table_layout
{
public:
  table_layout() = default;

  /// Joint layout over all types and canonical groups of `model`.
  static table_layout joint( const shared_model& model, const order_tag& order );

  /// Single-system layout: one block per type, or per (type, group) when `split`.
  static table_layout single( const shared_model& model, std::size_t system, bool split );

  /// Generic constructor used by the single-structure route and deserialization.
  table_layout( std::vector<std::string> type_names, std::size_t systems, order_tag order,
                std::vector<layout_block> blocks, std::vector<std::string> coordinate_names );

  const std::vector<std::string>& type_names() const { return type_names_; }
  std::size_t systems() const { return systems_; }
  const order_tag& order() const { return order_; }
  const std::vector<layout_block>& blocks() const { return blocks_; }
  const std::vector<std::string>& coordinate_names() const { return names_; }
  std::size_t dimension() const { return names_.size(); }
  unsigned coordinate_max( std::size_t coord ) const { return max_[coord]; }

  bool feasible( std::span<const unsigned> cell ) const;

  std::uint64_t dense_size() const { return dense_size_; }
  std::uint64_t dense_index( std::span<const unsigned> cell ) const;
  level_vector decode( std::uint64_t index ) const;

  /// Feasible cells in dense (lexicographic) order.
  std::vector<level_vector> feasible_cells() const;

  /// Number of labeled configurations consistent with a feasible cell.
  big_int configurations( std::span<const unsigned> cell ) const;

  /// Block levels ordered from the earliest distinct rank to the latest.
  std::vector<unsigned> chain( const layout_block& block, std::span<const unsigned> cell ) const;

  bool operator==( const table_layout& ) const = default;

private:
  void finish();

  std::vector<std::string> type_names_;
  std::size_t systems_ = 0;
  order_tag order_;
  std::vector<layout_block> blocks_;
  std::vector<std::string> names_;
  std::vector<unsigned> max_;
  std::uint64_t dense_size_ = 1;
};

/// Joint coordinate name, e.g. "l_[1]2" for system 0 in group {1,2}.
std::string joint_coordinate_name( group_mask group, std::size_t member );

big_int binomial( unsigned n, unsigned k );

} // namespace sharedsig
