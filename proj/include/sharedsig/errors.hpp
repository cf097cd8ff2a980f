#pragma once

#include <stdexcept>
#include <string>

namespace sharedsig
{

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define SHAREDSIG_DEFINE_ERROR( name )   \
  class name : public error              \
  {                                      \
  public:                                \
    using error::error;                  \
  };

SHAREDSIG_DEFINE_ERROR( invalid_structure )
SHAREDSIG_DEFINE_ERROR( unassigned_component )
SHAREDSIG_DEFINE_ERROR( non_monotone )
SHAREDSIG_DEFINE_ERROR( boundary_violation )
SHAREDSIG_DEFINE_ERROR( too_large )
SHAREDSIG_DEFINE_ERROR( unknown_component )
SHAREDSIG_DEFINE_ERROR( unknown_type )
SHAREDSIG_DEFINE_ERROR( unknown_system )
SHAREDSIG_DEFINE_ERROR( duplicate_name )
SHAREDSIG_DEFINE_ERROR( wrong_arity )
SHAREDSIG_DEFINE_ERROR( infeasible_levels )
SHAREDSIG_DEFINE_ERROR( infeasible_query )
SHAREDSIG_DEFINE_ERROR( level_out_of_range )
SHAREDSIG_DEFINE_ERROR( negative_time )
SHAREDSIG_DEFINE_ERROR( invalid_distribution )
SHAREDSIG_DEFINE_ERROR( invalid_time_order )
SHAREDSIG_DEFINE_ERROR( conditioning_on_null_event )
SHAREDSIG_DEFINE_ERROR( model_file_error )

#undef SHAREDSIG_DEFINE_ERROR

} // namespace sharedsig
