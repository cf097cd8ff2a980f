#pragma once

#include <sharedsig/lifetimes.hpp>
#include <sharedsig/signature.hpp>
#include <sharedsig/structure.hpp>
#include <sharedsig/system_model.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace sharedsig
{

using json = nlohmann::json;

/// Structure expression as nested single-key objects: atom / and / or / k_of_n, or truth_table.
structure_function structure_from_json( const json& j, const std::string& path = "structure" );
json structure_to_json( const structure_function& f );

lifetime_distribution distribution_from_json( const json& j, const std::string& path = "distribution" );
json distribution_to_json( const lifetime_distribution& d );

struct model_file
{
  shared_model model;
  std::vector<lifetime_distribution> distributions; ///< one per type, in type order
};

/*! \brief Parses a model document.

  Schema:
  {
    "types":      [ {"name": "T", "distribution": {"kind": "exponential", "rate": 1.0}} ],
    "components": [ {"id": "A", "type": "T"} ],
    "systems":    [ {"name": "S1", "structure": {"or": [{"atom": "B"}, ...]}} ]
  }
  Syntax errors report line and column; schema errors report the JSON path.
*/
model_file parse_model( const std::string& text );
model_file load_model( const std::string& path );
json model_to_json( const model_file& m );

/// Signature table as JSON (layout, ordering, event and one entry per cell).
json table_to_json( const signature_table& table );
signature_table table_from_json( const json& j );

/// CSV: order, one column per level coordinate, favourable, total, fraction, decimal.
void write_table_csv( std::ostream& os, const signature_table& table, bool header = true );

/// "p/q" in lowest terms ("0" and "1" for the extremes).
std::string format_fraction( const rational& r );

/// Twelve significant digits.
std::string format_probability( double p );

} // namespace sharedsig
