#include <sharedsig/cli.hpp>
#include <sharedsig/errors.hpp>
#include <sharedsig/model_io.hpp>
#include <sharedsig/oracle.hpp>
#include <sharedsig/reliability.hpp>
#include <sharedsig/signature.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace sharedsig;

namespace
{

py::object to_fraction( const big_int& num, const big_int& den )
{
  static py::object fraction = py::module_::import( "fractions" ).attr( "Fraction" );
  return fraction( py::int_( py::str( num.str() ) ), py::int_( py::str( den.str() ) ) );
}

order_tag order_arg( const std::string& text, std::size_t systems )
{
  return order_tag::parse( text, systems );
}

std::size_t system_arg( const shared_model& m, const py::object& system )
{
  if ( py::isinstance<py::str>( system ) )
  {
    return m.system_index( system.cast<std::string>() );
  }
  return system.cast<std::size_t>();
}

py::object json_to_python( const json& j )
{
  static py::object loads = py::module_::import( "json" ).attr( "loads" );
  return loads( j.dump() );
}

} // namespace

PYBIND11_MODULE( _sharedsig, m )
{
  m.doc() = "Joint survival signatures of systems with shared components";

  auto base = py::register_exception<error>( m, "Error", PyExc_ValueError );
  py::register_exception<too_large>( m, "TooLarge", base.ptr() );
  py::register_exception<model_file_error>( m, "ModelFileError", base.ptr() );
  py::register_exception<conditioning_on_null_event>( m, "ConditioningOnNullEvent", base.ptr() );

  py::class_<model_file>( m, "Model" )
      .def_property_readonly( "systems",
                              []( const model_file& f ) {
                                std::vector<std::string> names;
                                for ( const auto& s : f.model.systems() )
                                {
                                  names.push_back( s.name );
                                }
                                return names;
                              } )
      .def_property_readonly( "types", []( const model_file& f ) { return f.model.types(); } )
      .def_property_readonly( "independent", []( const model_file& f ) { return f.model.independent(); } )
      .def( "sharing_counts",
            []( const model_file& f, const std::string& type ) {
              py::dict out;
              const auto k = f.model.type_index( type );
              for ( auto g : canonical_groups( f.model.system_count() ) )
              {
                out[py::str( group_label( g ) )] = f.model.counts()( k, g );
              }
              return out;
            },
            py::arg( "type" ) )
      .def( "to_json", []( const model_file& f ) { return model_to_json( f ).dump( 2 ); } );

  m.def( "load_model", &load_model, py::arg( "path" ) );
  m.def( "parse_model", &parse_model, py::arg( "text" ) );

  py::class_<signature_table>( m, "SignatureTable" )
      .def_property_readonly( "event", []( const signature_table& t ) { return to_string( t.event() ); } )
      .def_property_readonly( "order", []( const signature_table& t ) { return t.order().to_string(); } )
      .def_property_readonly( "coordinates",
                              []( const signature_table& t ) { return t.layout().coordinate_names(); } )
      .def_property_readonly( "cells",
                              []( const signature_table& t ) {
                                std::vector<level_vector> cells;
                                for ( std::size_t i = 0; i < t.size(); ++i )
                                {
                                  cells.push_back( t.cell( i ) );
                                }
                                return cells;
                              } )
      .def( "__len__", &signature_table::size )
      .def( "__getitem__",
            []( const signature_table& t, const level_vector& cell ) {
              const auto i = t.find( cell );
              if ( !i )
              {
                throw py::key_error( "infeasible cell" );
              }
              return to_fraction( t.favourable( *i ), t.total( *i ) );
            } )
      .def( "counts",
            []( const signature_table& t, const level_vector& cell ) {
              const auto i = t.find( cell );
              if ( !i )
              {
                throw py::key_error( "infeasible cell" );
              }
              return py::make_tuple( py::int_( py::str( t.favourable( *i ).str() ) ),
                                     py::int_( py::str( t.total( *i ).str() ) ) );
            } )
      .def( "to_dict", []( const signature_table& t ) { return json_to_python( table_to_json( t ) ); } )
      .def( "to_csv",
            []( const signature_table& t ) {
              std::ostringstream os;
              write_table_csv( os, t );
              return os.str();
            } )
      .def( "__eq__", []( const signature_table& a, const signature_table& b ) { return a == b; } );

  m.def(
      "joint_signature",
      []( const model_file& f, const std::string& order, const std::string& event, std::uint64_t budget ) {
        return variant_signature( f.model, order_arg( order, f.model.system_count() ), parse_event( event ), budget );
      },
      py::arg( "model" ), py::arg( "order" ), py::arg( "event" ) = "both", py::arg( "budget" ) = default_budget );
  m.def(
      "survival_signature",
      []( const model_file& f, const py::object& system, bool split, std::uint64_t budget ) {
        return survival_signature_single( f.model, system_arg( f.model, system ), split, budget );
      },
      py::arg( "model" ), py::arg( "system" ) = 0, py::arg( "split" ) = false, py::arg( "budget" ) = default_budget );
  m.def(
      "exhaustive_signature",
      []( const model_file& f, const std::string& order, const std::string& event ) {
        return exhaustive_signature( f.model, order_arg( order, f.model.system_count() ), parse_event( event ) );
      },
      py::arg( "model" ), py::arg( "order" ), py::arg( "event" ) = "both" );

  py::class_<reliability_engine, std::shared_ptr<reliability_engine>>( m, "Reliability" )
      .def( py::init( []( const model_file& f, std::uint64_t budget ) {
              return std::make_shared<reliability_engine>( f.model, f.distributions, budget );
            } ),
            py::arg( "model" ), py::arg( "budget" ) = default_budget )
      .def( "joint_survival",
            []( const reliability_engine& e, const std::vector<double>& times ) { return e.joint_survival( times ); },
            py::arg( "times" ) )
      .def(
          "event_probability",
          []( const reliability_engine& e, const std::string& event, const std::vector<double>& times ) {
            return e.event_probability( parse_event( event ), times );
          },
          py::arg( "event" ), py::arg( "times" ) )
      .def(
          "marginal_survival",
          []( const reliability_engine& e, const py::object& system, double t ) {
            return e.marginal_survival( system_arg( e.model(), system ), t );
          },
          py::arg( "system" ), py::arg( "t" ) )
      .def(
          "conditional_given_functioning",
          []( const reliability_engine& e, double t_target, double t_given, const py::object& target,
              const py::object& given ) {
            return conditional_survival_given_functioning( e, t_target, t_given, system_arg( e.model(), target ),
                                                           system_arg( e.model(), given ) );
          },
          py::arg( "t_target" ), py::arg( "t_given" ), py::arg( "target" ) = 0, py::arg( "given" ) = 1 )
      .def(
          "conditional_given_failed",
          []( const reliability_engine& e, double t_target, double t_given, const py::object& target,
              const py::object& given ) {
            return conditional_survival_given_failed( e, t_target, t_given, system_arg( e.model(), target ),
                                                      system_arg( e.model(), given ) );
          },
          py::arg( "t_target" ), py::arg( "t_given" ), py::arg( "target" ) = 0, py::arg( "given" ) = 1 )
      .def(
          "conditional_joint",
          []( const reliability_engine& e, double t, double t_given, const py::object& target,
              const py::object& given ) {
            return conditional_joint_survival( e, t, t_given, system_arg( e.model(), target ),
                                               system_arg( e.model(), given ) );
          },
          py::arg( "t" ), py::arg( "t_given" ), py::arg( "target" ) = 0, py::arg( "given" ) = 1 );

  m.def(
      "simulate",
      []( const model_file& f, const std::vector<std::vector<double>>& times, std::uint64_t seed, std::size_t samples,
          const std::string& event ) {
        simulation_run run;
        {
          py::gil_scoped_release release;
          run = simulate_failure_times( f.model, f.distributions, seed, samples );
        }
        const auto reqs = requirements( parse_event( event ), f.model.system_count() );
        std::vector<std::pair<double, double>> out;
        for ( const auto& t : times )
        {
          const auto est = estimate_event( run, reqs, t );
          out.emplace_back( est.value, est.standard_error );
        }
        return out;
      },
      py::arg( "model" ), py::arg( "times" ), py::arg( "seed" ) = 1, py::arg( "samples" ) = 100'000,
      py::arg( "event" ) = "both" );

  m.def(
      "run_cli",
      []( const std::vector<std::string>& args ) {
        std::ostringstream out, err;
        const int status = cli::run( args, out, err );
        return py::make_tuple( status, out.str(), err.str() );
      },
      py::arg( "args" ) );

  m.attr( "generator_id" ) = simulation_run::generator_id;
}
