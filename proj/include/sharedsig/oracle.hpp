#pragma once

#include <sharedsig/lifetimes.hpp>
#include <sharedsig/signature.hpp>
#include <sharedsig/system_model.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sharedsig
{

/*! \brief Seeded Monte-Carlo sample of system failure times.

  Samples are generated in chunks of `chunk_size`; chunk c uses an
  mt19937_64 engine seeded with splitmix64(seed + (c + 1) * 0x9E3779B97F4A7C15),
  and uniforms are ((x >> 11) + 0.5) * 2^-53. The result depends only on
  (seed, model, distributions, N), never on the number of worker threads.
*/
struct simulation_run
{
  static constexpr const char* generator_id = "mt19937_64+splitmix64-chunks/v1";
  static constexpr std::size_t chunk_size = 1u << 16;

  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<std::string> systems;
  std::vector<double> failure_times; ///< row-major [sample][system]

  double time( std::size_t sample, std::size_t system ) const
  {
    return failure_times[sample * systems.size() + system];
  }

  bool operator==( const simulation_run& ) const = default;
};

struct estimate
{
  double value = 0.0;
  double standard_error = 0.0;
};

std::uint64_t splitmix64( std::uint64_t x );

/// Simulates N samples; `threads` = 0 picks the hardware concurrency.
simulation_run simulate_failure_times( const shared_model& model, std::span<const lifetime_distribution> dists,
                                       std::uint64_t seed, std::size_t samples, unsigned threads = 0 );

/// Fraction of samples with T_i > times[i] for every system, with its binomial standard error.
estimate estimate_joint_survival( const simulation_run& run, std::span<const double> times );

/// Fraction of samples meeting per-system requirements (functions: T > t, fails: T <= t).
estimate estimate_event( const simulation_run& run, std::span<const requirement> requirements,
                         std::span<const double> times );

/// Failure time of one system given component lifetimes (indexed like the model's components).
double system_failure_time( const shared_model& model, std::size_t system, std::span<const double> lifetimes );

inline constexpr std::size_t max_exhaustive_model_components = 12;

/*! \brief Brute-force signature table.

  Iterates every labeled configuration (each component's survival state at
  each observation time of the systems that use it), evaluates every
  structure, and counts favourable and total configurations per cell.
*/
signature_table exhaustive_signature( const shared_model& model, const order_tag& order, event_kind event );

} // namespace sharedsig
