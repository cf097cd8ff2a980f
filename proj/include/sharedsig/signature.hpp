#pragma once

#include <sharedsig/levels.hpp>
#include <sharedsig/structure.hpp>
#include <sharedsig/system_model.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sharedsig
{

/// What the event asks of one system at its observation time.
enum class requirement
{
  functions,
  fails,
  any
};

enum class event_kind
{
  both,                  ///< every system functions (two or three systems)
  s1_functions_s2_fails,
  s2_functions_s1_fails,
  s1_only,               ///< S1 functions, S2 unconstrained
  s2_only,
  neither,
  single_system
};

std::string to_string( event_kind e );
event_kind parse_event( const std::string& text );

/// Per-system requirements of an event; for three systems the third system
/// must function under `both` and is unconstrained otherwise.
std::vector<requirement> requirements( event_kind e, std::size_t systems );

/// True for events whose signature is nondecreasing in every level.
bool is_monotone_event( event_kind e );

/// Default enumeration budget (indicator evaluations per table).
inline constexpr std::uint64_t default_budget = 10'000'000;

/*! \brief Exact signature values over the feasible cells of a layout.

  Each cell stores the number of favourable labeled configurations and the
  total number of configurations; infeasible cells are absent.
*/
class signature_table
{
public:
  signature_table() = default;
  signature_table( event_kind event, table_layout layout, std::vector<std::string> system_names );

  event_kind event() const { return event_; }
  const table_layout& layout() const { return layout_; }
  const order_tag& order() const { return layout_.order(); }
  const std::vector<std::string>& system_names() const { return system_names_; }

  std::size_t size() const { return cells_.size(); }
  const level_vector& cell( std::size_t i ) const { return cells_[i]; }
  const big_int& favourable( std::size_t i ) const { return favourable_[i]; }
  const big_int& total( std::size_t i ) const { return total_[i]; }
  rational value( std::size_t i ) const { return rational( favourable_[i], total_[i] ); }
  double value_double( std::size_t i ) const { return value_doubles_[i]; }

  std::optional<std::size_t> find( std::span<const unsigned> cell ) const;

  /// Exact value at a cell; throws infeasible_query when the cell is absent.
  rational at( std::span<const unsigned> cell ) const;

  /// Appends a cell; cells must arrive in dense order.
  void push( level_vector cell, big_int favourable, big_int total );

  bool operator==( const signature_table& other ) const;

private:
  event_kind event_ = event_kind::both;
  table_layout layout_;
  std::vector<std::string> system_names_;
  std::vector<level_vector> cells_;
  std::vector<big_int> favourable_;
  std::vector<big_int> total_;
  std::vector<double> value_doubles_;
  std::vector<std::uint64_t> dense_; // dense index of each cell, ascending
};

/*! \brief Survival signature of one structure, levels per component type.

  `types` fixes the coordinate order; `component_type` maps each component of
  the structure to one of them.
*/
signature_table survival_signature_single( const structure_function& structure, const std::vector<std::string>& types,
                                           const std::map<component_id, std::string>& component_type,
                                           std::uint64_t budget = default_budget );

/// Single-system signature of system `system` of a model (grouped when `split`).
signature_table survival_signature_single( const shared_model& model, std::size_t system, bool split,
                                           std::uint64_t budget = default_budget );

signature_table joint_signature_two( const shared_model& model, const order_tag& order,
                                     std::uint64_t budget = default_budget );

signature_table joint_signature_two_multitype( const shared_model& model, const order_tag& order,
                                               std::uint64_t budget = default_budget );

signature_table joint_signature_three( const shared_model& model, const order_tag& order,
                                       std::uint64_t budget = default_budget );

signature_table variant_signature( const shared_model& model, const order_tag& order, event_kind event,
                                   std::uint64_t budget = default_budget );

/// Work units `variant_signature` would spend; compared against the budget before enumeration.
std::uint64_t estimated_work( const shared_model& model, const order_tag& order );

/*! \brief Evaluated cells of one table, used to bound the cells not evaluated. */
class partial_signature
{
public:
  partial_signature( event_kind event, table_layout layout );

  /// Subset of a full table's cells.
  static partial_signature from_table( const signature_table& table, std::span<const std::size_t> positions );

  void insert( level_vector cell, rational value );
  std::size_t size() const { return values_.size(); }
  const table_layout& layout() const { return layout_; }

  const std::vector<std::pair<level_vector, rational>>& entries() const { return values_; }

private:
  event_kind event_;
  table_layout layout_;
  std::vector<std::pair<level_vector, rational>> values_;

  friend std::pair<rational, rational> signature_bounds( const partial_signature&, std::span<const unsigned> );
};

/// Lower and upper bounds at `query` from monotonicity of the evaluated cells.
std::pair<rational, rational> signature_bounds( const partial_signature& partial, std::span<const unsigned> query );

} // namespace sharedsig
