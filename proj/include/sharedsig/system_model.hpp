#pragma once

#include <sharedsig/structure.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sharedsig
{

struct component_decl
{
  component_id id;
  std::string type;
};

struct system_decl
{
  std::string name;
  structure_function structure;
};

/// Bit set over system positions; bit i set means system i references the component.
using group_mask = unsigned;

/// Sharing groups in canonical order: exclusive groups first, then pairs, then the triple.
/// For two systems: {1}, {2}, {12}. For three: {1}, {2}, {3}, {12}, {13}, {23}, {123}.
std::vector<group_mask> canonical_groups( std::size_t systems );

/// Group label with 1-based system digits, e.g. "12" for mask 0b011.
std::string group_label( group_mask g );

/*! \brief Per-type sizes of the sharing groups of a model. */
class group_counts
{
public:
  group_counts() = default;
  group_counts( std::size_t systems, std::size_t types );

  std::size_t systems() const { return systems_; }
  std::size_t types() const { return counts_.size(); }

  unsigned operator()( std::size_t type, group_mask g ) const { return counts_.at( type ).at( g ); }
  unsigned& at( std::size_t type, group_mask g ) { return counts_.at( type ).at( g ); }

  /// Components of `type` used by system i (n*_i for that type).
  unsigned system_total( std::size_t type, std::size_t system ) const;
  /// Components of `type` referenced by at least one system.
  unsigned type_total( std::size_t type ) const;

  bool operator==( const group_counts& ) const = default;

private:
  std::size_t systems_ = 0;
  std::vector<std::vector<unsigned>> counts_; // [type][mask], mask in [0, 2^systems)
};

/*! \brief Two or three coherent systems sharing exchangeable components.

  Sharing is inferred: a component belongs to the group of exactly those
  systems whose structures reference it. Declared components that no
  structure references are kept but ignored by every computation.
*/
class shared_model
{
public:
  static constexpr std::size_t max_components = 64;

  static shared_model build( std::vector<system_decl> systems, std::vector<component_decl> components,
                             std::vector<std::string> types );

  std::size_t system_count() const { return systems_.size(); }
  const std::vector<system_decl>& systems() const { return systems_; }
  const std::vector<component_decl>& components() const { return components_; }
  const std::vector<std::string>& types() const { return types_; }

  std::size_t system_index( const std::string& name ) const;
  std::size_t component_index( const component_id& id ) const;
  std::size_t type_index( const std::string& name ) const;

  std::size_t component_type( std::size_t component ) const { return component_types_[component]; }
  group_mask component_group( std::size_t component ) const { return component_groups_[component]; }

  /// Structure of system i bound to component indices (bit c = component c).
  const compiled_structure& phi( std::size_t system ) const { return compiled_[system]; }

  const group_counts& counts() const { return counts_; }

  /// Component indices of a (type, group) cell, ascending.
  std::vector<std::size_t> members( std::size_t type, group_mask g ) const;

  /// True when no component is shared between systems.
  bool independent() const;

  std::vector<component_id> unused_components() const;

  /// Model restricted to the listed systems (in that order), sharing recomputed.
  shared_model induced( const std::vector<std::size_t>& systems ) const;

private:
  std::vector<system_decl> systems_;
  std::vector<component_decl> components_;
  std::vector<std::string> types_;
  std::vector<std::size_t> component_types_;
  std::vector<group_mask> component_groups_;
  std::vector<compiled_structure> compiled_;
  group_counts counts_;
};

/// Alias for `model.counts()`.
inline const group_counts& get_group_counts( const shared_model& model ) { return model.counts(); }

} // namespace sharedsig
