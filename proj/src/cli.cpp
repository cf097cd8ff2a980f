#include <sharedsig/cli.hpp>

#include <sharedsig/errors.hpp>
#include <sharedsig/model_io.hpp>
#include <sharedsig/oracle.hpp>
#include <sharedsig/reliability.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

namespace sharedsig::cli
{

namespace
{

class usage_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct options
{
  std::string model_path;
  std::string systems;
  std::string order;
  std::string event = "both";
  std::string format = "json";
  std::string grid;
  std::string given;
  std::string query = "marginal";
  std::optional<double> t[3];
  std::uint64_t seed = 1;
  std::size_t samples = 100'000;
  std::uint64_t budget = default_budget;
  bool split = false;
};

std::vector<std::string> split_list( const std::string& text, char sep )
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream in( text );
  while ( std::getline( in, item, sep ) )
  {
    out.push_back( item );
  }
  if ( !text.empty() && text.back() == sep )
  {
    out.emplace_back();
  }
  return out;
}

double parse_number( const std::string& text, const std::string& what )
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod( text, &used );
  }
  catch ( const std::exception& )
  {
    used = 0;
  }
  if ( used == 0 || used != text.size() || !std::isfinite( v ) )
  {
    throw usage_error( "invalid number '" + text + "' in " + what );
  }
  return v;
}

std::vector<double> parse_grid( const std::string& text )
{
  const auto parts = split_list( text, ':' );
  if ( parts.size() != 3 )
  {
    throw usage_error( "--grid expects start:stop:step" );
  }
  const double start = parse_number( parts[0], "--grid" );
  const double stop = parse_number( parts[1], "--grid" );
  const double step = parse_number( parts[2], "--grid" );
  if ( !( step > 0.0 ) || stop < start )
  {
    throw usage_error( "--grid needs step > 0 and stop >= start" );
  }
  const double span = ( stop - start ) / step;
  if ( span > 1e6 )
  {
    throw usage_error( "--grid has too many points" );
  }
  const auto n = static_cast<std::size_t>( std::floor( span + 1e-9 ) ) + 1;
  std::vector<double> values;
  for ( std::size_t i = 0; i < n; ++i )
  {
    values.push_back( start + static_cast<double>( i ) * step );
  }
  return values;
}

/// Rounds to the printed precision so JSON numbers carry 12 significant digits.
double rounded( double p )
{
  return std::stod( format_probability( p ) );
}

struct selection
{
  shared_model model;
  std::vector<std::string> names;
};

selection select_systems( const shared_model& model, const std::string& list, std::size_t min_count,
                          std::size_t max_count )
{
  std::vector<std::size_t> chosen;
  if ( list.empty() )
  {
    for ( std::size_t i = 0; i < std::min( model.system_count(), max_count ); ++i )
    {
      chosen.push_back( i );
    }
  }
  else
  {
    for ( const auto& name : split_list( list, ',' ) )
    {
      chosen.push_back( model.system_index( name ) );
    }
  }
  if ( chosen.size() < min_count || chosen.size() > max_count )
  {
    throw usage_error( "--systems expects " +
                       ( min_count == max_count ? std::to_string( min_count )
                                                : std::to_string( min_count ) + " to " + std::to_string( max_count ) ) +
                       " system names" );
  }
  for ( std::size_t i = 0; i < chosen.size(); ++i )
  {
    for ( std::size_t j = 0; j < i; ++j )
    {
      if ( chosen[i] == chosen[j] )
      {
        throw usage_error( "--systems lists '" + model.systems()[chosen[i]].name + "' twice" );
      }
    }
  }
  selection s{ chosen.size() >= 2 ? model.induced( chosen ) : model, {} };
  for ( auto i : chosen )
  {
    s.names.push_back( model.systems()[i].name );
  }
  return s;
}

/// Time tuples from --t1.. and --grid: explicit times are fixed, the rest are gridded.
std::vector<std::vector<double>> time_points( const options& opt, std::size_t axes )
{
  for ( std::size_t a = axes; a < 3; ++a )
  {
    if ( opt.t[a] )
    {
      throw usage_error( "--t" + std::to_string( a + 1 ) + " does not apply here" );
    }
  }
  std::vector<std::size_t> free_axes;
  for ( std::size_t a = 0; a < axes; ++a )
  {
    if ( !opt.t[a] )
    {
      free_axes.push_back( a );
    }
  }
  if ( free_axes.empty() )
  {
    if ( !opt.grid.empty() )
    {
      throw usage_error( "--grid needs at least one time axis without an explicit time" );
    }
    std::vector<double> point;
    for ( std::size_t a = 0; a < axes; ++a )
    {
      point.push_back( *opt.t[a] );
    }
    return { point };
  }
  if ( opt.grid.empty() )
  {
    throw usage_error( "missing --t" + std::to_string( free_axes.front() + 1 ) + " (or --grid)" );
  }
  if ( free_axes.size() > 2 )
  {
    throw usage_error( "--grid applies to at most two time axes; fix the others with --t1/--t2/--t3" );
  }
  const auto values = parse_grid( opt.grid );
  std::vector<double> base( axes, 0.0 );
  for ( std::size_t a = 0; a < axes; ++a )
  {
    if ( opt.t[a] )
    {
      base[a] = *opt.t[a];
    }
  }
  std::vector<std::vector<double>> points;
  for ( auto u : values )
  {
    base[free_axes[0]] = u;
    if ( free_axes.size() == 1 )
    {
      points.push_back( base );
      continue;
    }
    for ( auto v : values )
    {
      base[free_axes[1]] = v;
      points.push_back( base );
    }
  }
  return points;
}

void write_curve( std::ostream& out, const options& opt, json header, const std::vector<std::string>& axis_names,
                  const std::vector<std::vector<double>>& points, const std::vector<double>& values )
{
  if ( opt.format == "csv" )
  {
    for ( const auto& name : axis_names )
    {
      out << name << ',';
    }
    out << "probability\n";
    for ( std::size_t i = 0; i < points.size(); ++i )
    {
      for ( auto t : points[i] )
      {
        out << format_probability( t ) << ',';
      }
      out << format_probability( values[i] ) << '\n';
    }
    return;
  }
  header["points"] = json::array();
  for ( std::size_t i = 0; i < points.size(); ++i )
  {
    header["points"].push_back( { { "times", points[i] }, { "probability", rounded( values[i] ) } } );
  }
  out << header.dump( 2 ) << '\n';
}

std::vector<std::string> time_axis_names( std::size_t axes )
{
  std::vector<std::string> names;
  for ( std::size_t a = 0; a < axes; ++a )
  {
    names.push_back( "t_" + std::to_string( a + 1 ) );
  }
  return names;
}

event_kind event_option( const options& opt )
{
  try
  {
    return parse_event( opt.event );
  }
  catch ( const std::invalid_argument& e )
  {
    throw usage_error( e.what() );
  }
}

/* commands */

void cmd_check( const options& opt, std::ostream& out )
{
  const auto file = load_model( opt.model_path );
  const auto& m = file.model;
  json report;
  report["systems"] = json::array();
  for ( const auto& s : m.systems() )
  {
    json paths = json::array();
    if ( s.structure.components().size() <= max_exhaustive_components )
    {
      for ( const auto& p : minimal_path_sets( s.structure ) )
      {
        paths.push_back( p );
      }
    }
    report["systems"].push_back( { { "name", s.name },
                                   { "structure", s.structure.to_string() },
                                   { "components", s.structure.components() },
                                   { "coherence", "PASS" },
                                   { "minimal_path_sets", paths } } );
  }
  report["types"] = json::array();
  for ( std::size_t k = 0; k < m.types().size(); ++k )
  {
    json sharing = json::object();
    json counts = json::array();
    for ( auto g : canonical_groups( m.system_count() ) )
    {
      sharing[group_label( g )] = m.counts()( k, g );
      counts.push_back( m.counts()( k, g ) );
    }
    report["types"].push_back( { { "name", m.types()[k] },
                                 { "distribution", distribution_to_json( file.distributions[k] ) },
                                 { "groups", sharing },
                                 { "sharing_counts", counts } } );
  }
  report["independent"] = m.independent();
  report["unused_components"] = m.unused_components();
  out << report.dump( 2 ) << '\n';
}

void cmd_signature( const options& opt, std::ostream& out )
{
  const auto file = load_model( opt.model_path );
  const auto name = opt.systems.empty() ? file.model.systems().front().name : opt.systems;
  if ( name.find( ',' ) != std::string::npos )
  {
    throw usage_error( "signature takes a single system in --systems" );
  }
  const auto table = survival_signature_single( file.model, file.model.system_index( name ), opt.split, opt.budget );
  if ( opt.format == "csv" )
  {
    write_table_csv( out, table );
  }
  else
  {
    out << table_to_json( table ).dump( 2 ) << '\n';
  }
}

void cmd_joint( const options& opt, std::ostream& out )
{
  const auto file = load_model( opt.model_path );
  const auto sel = select_systems( file.model, opt.systems, 2, 3 );
  const auto event = event_option( opt );
  std::vector<order_tag> orders;
  if ( opt.order.empty() || opt.order == "any" )
  {
    if ( opt.order.empty() && sel.model.system_count() == 2 )
    {
      orders.push_back( order_tag::earlier() );
    }
    else if ( opt.order.empty() )
    {
      orders.push_back( order_tag{ { 0, 1, 2 } } );
    }
    else
    {
      orders = order_tag::all( sel.model.system_count() );
    }
  }
  else
  {
    try
    {
      orders.push_back( order_tag::parse( opt.order, sel.model.system_count() ) );
    }
    catch ( const std::invalid_argument& e )
    {
      throw usage_error( e.what() );
    }
  }
  std::vector<signature_table> tables;
  for ( const auto& o : orders )
  {
    tables.push_back( variant_signature( sel.model, o, event, opt.budget ) );
  }
  if ( opt.format == "csv" )
  {
    for ( std::size_t i = 0; i < tables.size(); ++i )
    {
      write_table_csv( out, tables[i], i == 0 );
    }
    return;
  }
  if ( tables.size() == 1 )
  {
    out << table_to_json( tables.front() ).dump( 2 ) << '\n';
    return;
  }
  json all = { { "tables", json::array() } };
  for ( const auto& t : tables )
  {
    all["tables"].push_back( table_to_json( t ) );
  }
  out << all.dump( 2 ) << '\n';
}

void cmd_survival( const options& opt, std::ostream& out )
{
  auto file = load_model( opt.model_path );
  auto sel = select_systems( file.model, opt.systems, 2, 3 );
  const auto event = event_option( opt );
  const auto axes = sel.model.system_count();
  const auto points = time_points( opt, axes );
  const reliability_engine engine( std::move( sel.model ), std::move( file.distributions ), opt.budget );
  std::vector<double> values;
  for ( const auto& p : points )
  {
    values.push_back( engine.event_probability( event, p ) );
  }
  write_curve( out, opt, { { "systems", sel.names }, { "event", to_string( event ) } }, time_axis_names( axes ),
               points, values );
}

void cmd_marginal( const options& opt, std::ostream& out )
{
  auto file = load_model( opt.model_path );
  const auto name = opt.systems.empty() ? file.model.systems().front().name : opt.systems;
  if ( name.find( ',' ) != std::string::npos )
  {
    throw usage_error( "marginal takes a single system in --systems" );
  }
  const auto system = file.model.system_index( name );
  const auto points = time_points( opt, 1 );
  const reliability_engine engine( std::move( file.model ), std::move( file.distributions ), opt.budget );
  std::vector<double> values;
  for ( const auto& p : points )
  {
    values.push_back( engine.marginal_survival( system, p[0] ) );
  }
  write_curve( out, opt, { { "system", name } }, { "t" }, points, values );
}

void cmd_conditional( const options& opt, std::ostream& out )
{
  auto file = load_model( opt.model_path );
  auto sel = select_systems( file.model, opt.systems, 2, 2 );
  const auto parts = split_list( opt.given, ':' );
  if ( parts.size() != 2 || ( parts[1] != "functioning" && parts[1] != "failed" ) )
  {
    throw usage_error( "--given expects SYSTEM:functioning or SYSTEM:failed" );
  }
  const auto it = std::find( sel.names.begin(), sel.names.end(), parts[0] );
  if ( it == sel.names.end() )
  {
    throw usage_error( "--given names '" + parts[0] + "', which is not in --systems" );
  }
  const std::size_t given = static_cast<std::size_t>( it - sel.names.begin() );
  const std::size_t target = 1 - given;
  const bool functioning = parts[1] == "functioning";
  if ( opt.query != "marginal" && opt.query != "joint" )
  {
    throw usage_error( "--query expects marginal or joint" );
  }
  if ( opt.query == "joint" && !functioning )
  {
    throw usage_error( "--query joint conditions on a functioning system" );
  }

  const auto points = time_points( opt, 2 );
  const reliability_engine engine( std::move( sel.model ), std::move( file.distributions ), opt.budget );
  std::vector<double> values;
  for ( const auto& p : points )
  {
    const double t_target = p[target], t_given = p[given];
    if ( opt.query == "joint" )
    {
      values.push_back( conditional_joint_survival( engine, t_target, t_given, target, given ) );
    }
    else if ( functioning )
    {
      values.push_back( conditional_survival_given_functioning( engine, t_target, t_given, target, given ) );
    }
    else
    {
      values.push_back( conditional_survival_given_failed( engine, t_target, t_given, target, given ) );
    }
  }
  write_curve( out, opt,
               { { "systems", sel.names },
                 { "target", sel.names[target] },
                 { "given", opt.given },
                 { "query", opt.query } },
               time_axis_names( 2 ), points, values );
}

void cmd_simulate( const options& opt, std::ostream& out )
{
  auto file = load_model( opt.model_path );
  auto sel = select_systems( file.model, opt.systems, 2, 3 );
  const auto event = event_option( opt );
  const auto axes = sel.model.system_count();
  const auto points = time_points( opt, axes );
  if ( opt.samples == 0 )
  {
    throw usage_error( "--samples must be positive" );
  }
  const auto run = simulate_failure_times( sel.model, file.distributions, opt.seed, opt.samples );
  const auto reqs = requirements( event, axes );
  std::vector<estimate> estimates;
  for ( const auto& p : points )
  {
    for ( auto t : p )
    {
      if ( t < 0.0 )
      {
        throw negative_time( "times must be nonnegative" );
      }
    }
    estimates.push_back( estimate_event( run, reqs, p ) );
  }
  if ( opt.format == "csv" )
  {
    for ( const auto& name : time_axis_names( axes ) )
    {
      out << name << ',';
    }
    out << "estimate,standard_error\n";
    for ( std::size_t i = 0; i < points.size(); ++i )
    {
      for ( auto t : points[i] )
      {
        out << format_probability( t ) << ',';
      }
      out << format_probability( estimates[i].value ) << ',' << format_probability( estimates[i].standard_error )
          << '\n';
    }
    return;
  }
  json doc = { { "seed", opt.seed },
               { "samples", opt.samples },
               { "generator", simulation_run::generator_id },
               { "systems", sel.names },
               { "event", to_string( event ) },
               { "estimates", json::array() } };
  for ( std::size_t i = 0; i < points.size(); ++i )
  {
    doc["estimates"].push_back( { { "times", points[i] },
                                  { "estimate", rounded( estimates[i].value ) },
                                  { "standard_error", rounded( estimates[i].standard_error ) } } );
  }
  out << doc.dump( 2 ) << '\n';
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Joint survival signatures of systems with shared components", "sharedsig" };
  app.require_subcommand( 1 );
  options opt;

  auto model_arg = [&]( CLI::App* sub ) {
    sub->add_option( "model", opt.model_path, "Model file (JSON)" )->required();
  };
  auto budget_arg = [&]( CLI::App* sub ) {
    sub->add_option( "--budget", opt.budget, "Enumeration budget (work units)" )->check( CLI::PositiveNumber );
  };
  auto format_arg = [&]( CLI::App* sub ) {
    sub->add_option( "--format", opt.format, "Output format" )->check( CLI::IsMember( { "json", "csv" } ) );
  };
  auto times_arg = [&]( CLI::App* sub, std::size_t axes ) {
    for ( std::size_t a = 0; a < axes; ++a )
    {
      sub->add_option( "--t" + std::to_string( a + 1 ), opt.t[a], "Observation time of system " + std::to_string( a + 1 ) );
    }
    sub->add_option( "--grid", opt.grid, "start:stop:step for the axes without an explicit time" );
  };

  auto* check = app.add_subcommand( "check", "Validate a model and report its sharing structure" );
  model_arg( check );

  auto* signature = app.add_subcommand( "signature", "Survival signature of one system" );
  model_arg( signature );
  signature->add_option( "--systems", opt.systems, "System name (default: the first)" );
  signature->add_flag( "--split", opt.split, "Separate levels per sharing group" );
  format_arg( signature );
  budget_arg( signature );

  auto* joint = app.add_subcommand( "joint", "Joint survival signature table" );
  model_arg( joint );
  joint->add_option( "--systems", opt.systems, "Two or three system names" );
  joint->add_option( "--order", opt.order, "earlier|same|later, a rank string like 1<2=3, or any" );
  joint->add_option( "--event", opt.event, "both|s1not2|s2not1|s1only|s2only|neither" );
  format_arg( joint );
  budget_arg( joint );

  auto* survival = app.add_subcommand( "survival", "Joint survival probability" );
  model_arg( survival );
  survival->add_option( "--systems", opt.systems, "Two or three system names" );
  survival->add_option( "--event", opt.event, "both|s1not2|s2not1|s1only|s2only|neither" );
  times_arg( survival, 3 );
  format_arg( survival );
  budget_arg( survival );

  auto* marginal = app.add_subcommand( "marginal", "Survival probability of one system" );
  model_arg( marginal );
  marginal->add_option( "--systems", opt.systems, "System name (default: the first)" );
  times_arg( marginal, 1 );
  format_arg( marginal );
  budget_arg( marginal );

  auto* conditional = app.add_subcommand( "conditional", "Survival of one system given the state of another" );
  model_arg( conditional );
  conditional->add_option( "--systems", opt.systems, "The two systems; --t1/--t2 follow this order" );
  conditional->add_option( "--given", opt.given, "SYSTEM:functioning or SYSTEM:failed" )->required();
  conditional->add_option( "--query", opt.query,
                           "marginal: P(T > t | given); joint: P(both function at t | given), t = target time" );
  times_arg( conditional, 2 );
  format_arg( conditional );
  budget_arg( conditional );

  auto* simulate = app.add_subcommand( "simulate", "Monte-Carlo estimate of an event probability" );
  model_arg( simulate );
  simulate->add_option( "--systems", opt.systems, "Two or three system names" );
  simulate->add_option( "--event", opt.event, "both|s1not2|s2not1|s1only|s2only|neither" );
  simulate->add_option( "--seed", opt.seed, "Random seed" );
  simulate->add_option( "--samples", opt.samples, "Number of samples" );
  times_arg( simulate, 3 );
  format_arg( simulate );

  try
  {
    app.parse( std::vector<std::string>( args.rbegin(), args.rend() ) );
  }
  catch ( const CLI::CallForHelp& e )
  {
    return app.exit( e, out, err );
  }
  catch ( const CLI::CallForAllHelp& e )
  {
    return app.exit( e, out, err );
  }
  catch ( const CLI::ParseError& e )
  {
    app.exit( e, out, err );
    return exit_usage;
  }

  try
  {
    if ( check->parsed() )
    {
      cmd_check( opt, out );
    }
    else if ( signature->parsed() )
    {
      cmd_signature( opt, out );
    }
    else if ( joint->parsed() )
    {
      cmd_joint( opt, out );
    }
    else if ( survival->parsed() )
    {
      cmd_survival( opt, out );
    }
    else if ( marginal->parsed() )
    {
      cmd_marginal( opt, out );
    }
    else if ( conditional->parsed() )
    {
      cmd_conditional( opt, out );
    }
    else if ( simulate->parsed() )
    {
      cmd_simulate( opt, out );
    }
  }
  catch ( const usage_error& e )
  {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  return exit_ok;
}

} // namespace sharedsig::cli
