#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "secgame/errors.hpp"
#include "secgame/game.hpp"
#include "secgame/prospect.hpp"
#include "secgame/quantal.hpp"

namespace secgame {

// Ratio of a behavioral expected loss to the rational optimum's loss,
// together with the matching proved ceiling when the curve family admits
// one. The denominator is the optimum over the continuous interval [0, R],
// not the best menu entry, so the ratio can stay above 1 even as the
// response concentrates.
struct InefficiencyReport {
  double value = 0.0;
  std::optional<double> bound;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t qre_support_size = 0;
};

inline void ensure_unit_exponential(const SecurityGame& game, const char* op) {
  if (!game.has_unit_exponential_curves()) {
    throw PreconditionError(std::string(op) +
                            ": proved only for unit exponential decay curves");
  }
}

// Loss at the optimum over the continuous interval [0, R]. The interior
// equalizer is algebraic for unit exponential curves; bisection (with its
// ~1e-10 allocation error) is only needed off that family.
inline double optimal_loss(const SecurityGame& game) {
  if (game.has_unit_exponential_curves()) {
    const double log_loss = std::log(game.site2_loss());
    if (log_loss > -game.budget() && log_loss < game.budget()) {
      return expected_loss(game, optimal_allocation_closed_form(game));
    }
  }
  return expected_loss(game, optimal_allocation(game));
}

// max{A, 1/A} * |X| * e^R. Bare formula, so the factors can be evaluated
// without constructing a game.
inline double poqa_bound_value(double loss_A, std::size_t space_size,
                               double budget_R) {
  return std::max(loss_A, 1.0 / loss_A) * static_cast<double>(space_size) *
         std::exp(budget_R);
}

inline double poqa_bound(const SecurityGame& game, const StrategySpace& space) {
  ensure_unit_exponential(game, "poqa_bound");
  return poqa_bound_value(game.site2_loss(), space.size(), game.budget());
}

// Expected loss under the logit response, relative to the rational optimum.
// At finite lambda every menu entry has positive probability, so the support
// is the whole menu.
inline InefficiencyReport poqa(const SecurityGame& game, const StrategySpace& space,
                               double lambda_d) {
  const ResponseDistribution dist = defender_response(game, space, lambda_d);
  double numerator = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    numerator += dist.probabilities[i] * dist.losses[i];
  }
  const double denominator = optimal_loss(game);

  InefficiencyReport report;
  report.numerator = numerator;
  report.denominator = denominator;
  report.value = numerator / denominator;
  report.qre_support_size = space.size();
  if (game.has_unit_exponential_curves()) {
    report.bound = poqa_bound_value(game.site2_loss(), space.size(), game.budget());
  }
  return report;
}

// lambda -> infinity limit: the response concentrates on the minimum-loss
// entries, splitting ties evenly.
inline InefficiencyReport poqa_pne_limit(const SecurityGame& game,
                                         const StrategySpace& space) {
  const std::vector<std::size_t> support = pne_limit(game, space);
  const std::vector<double> losses = expected_losses(game, space);
  double numerator = 0.0;
  for (std::size_t index : support) {
    numerator += losses[index] / static_cast<double>(support.size());
  }
  const double denominator = optimal_loss(game);

  InefficiencyReport report;
  report.numerator = numerator;
  report.denominator = denominator;
  report.value = numerator / denominator;
  report.qre_support_size = support.size();
  if (game.has_unit_exponential_curves()) {
    report.bound =
        poqa_bound_value(game.site2_loss(), support.size(), game.budget());
  }
  return report;
}

// max{A, 1/A} * e^R.
inline double pobw_bound_value(double loss_A, double budget_R) {
  return std::max(loss_A, 1.0 / loss_A) * std::exp(budget_R);
}

inline double pobw_bound(const SecurityGame& game) {
  ensure_unit_exponential(game, "pobw_bound");
  return pobw_bound_value(game.site2_loss(), game.budget());
}

// True expected loss at the probability-weighting optimum over the true
// loss at the rational optimum. Both losses are the undistorted ones; the
// weighting only moves the allocation.
inline InefficiencyReport pobw(const SecurityGame& game, double alpha) {
  ensure_weighting_exponent(alpha);
  const double numerator = expected_loss(game, behavioral_optimal(game, alpha));
  const double denominator = optimal_loss(game);

  InefficiencyReport report;
  report.numerator = numerator;
  report.denominator = denominator;
  report.value = numerator / denominator;
  report.qre_support_size = 1;  // a single behavioral allocation
  if (game.has_unit_exponential_curves()) {
    report.bound = pobw_bound_value(game.site2_loss(), game.budget());
  }
  return report;
}

}  // namespace secgame
