#pragma once

#include <sharedsig/lifetimes.hpp>
#include <sharedsig/signature.hpp>
#include <sharedsig/system_model.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace sharedsig
{

/*! \brief Survival probabilities of the systems of a shared model.

  Signature tables are computed once per (ordering, event) and cached;
  evaluating a time grid only recomputes the count kernels. The cache is
  guarded, so one engine can be shared by concurrent evaluations.
*/
class reliability_engine
{
public:
  reliability_engine( shared_model model, std::vector<lifetime_distribution> distributions,
                      std::uint64_t budget = default_budget );

  const shared_model& model() const { return model_; }
  const std::vector<lifetime_distribution>& distributions() const { return dists_; }
  std::uint64_t budget() const { return budget_; }

  std::shared_ptr<const signature_table> table( const order_tag& order, event_kind event ) const;

  /// Probability of `event` with system i observed at times[i].
  double event_probability( event_kind event, std::span<const double> times ) const;

  /// P(T_i > times[i] for every system).
  double joint_survival( std::span<const double> times ) const;

  /// P(T_system > t): other systems pinned at full survival, kernel over the target's groups only.
  double marginal_survival( std::size_t system, double t ) const;

private:
  shared_model model_;
  std::vector<lifetime_distribution> dists_;
  std::uint64_t budget_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<order_tag, event_kind>, std::shared_ptr<const signature_table>> cache_;
};

double joint_survival_two( const reliability_engine& engine, double t1, double t2 );
double joint_survival_three( const reliability_engine& engine, double t1, double t2, double t3 );

double marginal_survival( const reliability_engine& engine, std::size_t system, double t );

/// Marginal survival from the single-system signature and the single-system kernel.
double marginal_survival_single_route( const shared_model& model, std::span<const lifetime_distribution> dists,
                                       std::size_t system, double t );

/// P(T_target > t_target | T_given > t_given), two-system models (or the pair of a three-system model).
double conditional_survival_given_functioning( const reliability_engine& engine, double t_target, double t_given,
                                               std::size_t target = 0, std::size_t given = 1 );

/// P(T_target > t_target | T_given <= t_given).
double conditional_survival_given_failed( const reliability_engine& engine, double t_target, double t_given,
                                          std::size_t target = 0, std::size_t given = 1 );

/// P(min(T_target, T_given) > t | T_given > t_given), for t > t_given.
double conditional_joint_survival( const reliability_engine& engine, double t, double t_given,
                                   std::size_t target = 0, std::size_t given = 1 );

} // namespace sharedsig
