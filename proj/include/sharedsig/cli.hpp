#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sharedsig::cli
{

/// Exit statuses of `run`.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_usage = 2;

/*! \brief Runs one command line (without the program name).

  Results go to `out`, diagnostics to `err`. Returns 0 on success, 1 when
  the model or a query is invalid, 2 on usage errors.
*/
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace sharedsig::cli
