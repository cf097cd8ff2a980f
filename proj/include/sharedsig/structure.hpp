#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sharedsig
{

using component_id = std::string;

/// True if `name` is a valid component identifier (letters, digits, underscore).
bool is_valid_component_id( const std::string& name );

/*! \brief Monotone structure function of a coherent system.

  Either a negation-free expression tree (atom / all_of / any_of / k_of_n),
  which is monotone by construction, or an explicit truth table, which must
  pass `verify_coherent` before it is used in a model.

  Values are immutable and cheap to copy (nodes are shared).
*/
class structure_function
{
public:
  enum class kind
  {
    atom,
    all_of,
    any_of,
    k_of_n,
    truth_table
  };

  static structure_function atom( component_id name );
  static structure_function all_of( std::vector<structure_function> children );
  static structure_function any_of( std::vector<structure_function> children );
  static structure_function k_of_n( unsigned k, std::vector<structure_function> children );

  /// Truth table over `components`; bit i of the row index is the state of components[i].
  static structure_function truth_table( std::vector<component_id> components, std::vector<bool> outputs );

  kind node_kind() const;
  const component_id& name() const;
  unsigned threshold() const;
  const std::vector<structure_function>& children() const;
  const std::vector<component_id>& table_components() const;
  const std::vector<bool>& table_outputs() const;

  bool is_expression() const { return node_kind() != kind::truth_table; }

  /// Sorted, duplicate-free list of components the structure references.
  std::vector<component_id> components() const;

  /// Evaluates phi; every referenced component must be assigned.
  bool evaluate( const std::map<component_id, bool>& state ) const;

  std::string to_string() const;

private:
  struct node;
  explicit structure_function( std::shared_ptr<const node> n );
  std::shared_ptr<const node> node_;

  friend class compiled_structure;
};

/*! \brief Structure function bound to bit positions of a 64-bit state mask. */
class compiled_structure
{
public:
  compiled_structure() = default;
  compiled_structure( const structure_function& f, const std::function<unsigned( const component_id& )>& bit_of );

  bool operator()( std::uint64_t state ) const { return eval( root_, state ); }

  /// Mask of bits the structure depends on.
  std::uint64_t support() const { return support_; }

private:
  struct cnode
  {
    structure_function::kind kind;
    unsigned bit = 0;       // atom
    unsigned k = 0;         // k_of_n (all_of: n, any_of: 1)
    std::vector<unsigned> children;
    std::vector<unsigned> table_bits;
    std::vector<bool> outputs;
  };

  unsigned add( const structure_function& f, const std::function<unsigned( const component_id& )>& bit_of );
  bool eval( unsigned index, std::uint64_t state ) const;

  std::vector<cnode> nodes_;
  unsigned root_ = 0;
  std::uint64_t support_ = 0;
};

struct coherence_report
{
  enum class status
  {
    pass,
    non_monotone,
    boundary_violation
  };

  status result = status::pass;
  /// For non_monotone: x <= y with phi(x) = 1 and phi(y) = 0 (functioning components listed).
  std::optional<std::pair<std::vector<component_id>, std::vector<component_id>>> witness;
  std::string message;

  bool ok() const { return result == status::pass; }
};

/// Maximum number of components for truth tables and exhaustive path-set extraction.
inline constexpr unsigned max_exhaustive_components = 20;

coherence_report verify_coherent( const structure_function& f );

/// Throws non_monotone or boundary_violation if the report is not a pass.
void ensure_coherent( const structure_function& f );

/// All minimal path sets, each sorted, ordered by size then lexicographically.
std::vector<std::vector<component_id>> minimal_path_sets( const structure_function& f );

} // namespace sharedsig
