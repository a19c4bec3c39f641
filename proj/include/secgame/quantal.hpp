#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "secgame/errors.hpp"
#include "secgame/game.hpp"

namespace secgame {

// Logit rationality levels. 0 is uniform random play; exact best response is
// the limit and is served by pne_limit(), not by evaluation.
struct QuantalParams {
  double lambda_d = 1.0;
  double lambda_a = 1.0;
};

inline void ensure_rationality(double lambda, const char* name) {
  if (!(std::isfinite(lambda) && lambda >= 0.0)) {
    throw DomainError(std::string(name) + " must be finite and >= 0 (got " +
                      std::to_string(lambda) +
                      "); the best-response limit is served by pne_limit");
  }
}

// Probability vector aligned with the owning menu (or with the two attack
// targets) together with the per-strategy losses it was built from. Entries
// are mathematically positive for any finite lambda, but underflow to exact
// zero once lambda * (loss - min loss) exceeds ~745.
struct ResponseDistribution {
  std::vector<double> probabilities;
  std::vector<double> losses;  // defender: expected losses; attacker: utilities

  std::size_t size() const noexcept { return probabilities.size(); }
};

// sigma_k proportional to exp(-lambda * losses[k]). The minimum loss is
// subtracted before exponentiating so the largest exponent is exactly zero;
// lambda * loss can otherwise exceed the double exponent range.
inline std::vector<double> logit_probabilities(std::span<const double> losses,
                                               double lambda) {
  ensure_rationality(lambda, "lambda");
  if (losses.empty()) {
    throw DomainError("logit_probabilities: empty loss vector");
  }
  for (double loss : losses) {
    if (!std::isfinite(loss)) {
      throw DomainError("logit_probabilities: losses must be finite");
    }
  }
  const double shift = *std::min_element(losses.begin(), losses.end());
  std::vector<double> probs(losses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    probs[i] = std::exp(-lambda * (losses[i] - shift));
    total += probs[i];
  }
  for (double& p : probs) {
    p /= total;
  }
  return probs;
}

inline ResponseDistribution defender_response(const SecurityGame& game,
                                              const StrategySpace& space,
                                              double lambda_d) {
  std::vector<double> losses = expected_losses(game, space);
  std::vector<double> probs = logit_probabilities(losses, lambda_d);
  return {std::move(probs), std::move(losses)};
}

enum class AttackerSign {
  maximizer,  // sigma proportional to exp(+lambda_a * utility)
  verbatim,   // sigma proportional to exp(-lambda_a * utility)
};

// Response over {site1, site2} after observing the defender's split. The
// attacker maximizes its utility, hence the maximizer default; verbatim
// keeps the opposite sign for literal reproduction of the flipped form.
inline ResponseDistribution attacker_response(
    const SecurityGame& game, DefenseAllocation alloc, double lambda_a,
    AttackerSign sign = AttackerSign::maximizer) {
  ensure_rationality(lambda_a, "lambda_a");
  ensure_feasible(game, alloc);
  const double u1 = game.site1_attack_prob(alloc);
  const double u2 = game.site2_loss() * game.site2_attack_prob(alloc);
  std::vector<double> probs(2);
  if (sign == AttackerSign::maximizer) {
    const double shift = std::max(u1, u2);
    probs[0] = std::exp(lambda_a * (u1 - shift));
    probs[1] = std::exp(lambda_a * (u2 - shift));
  } else {
    const double shift = std::min(u1, u2);
    probs[0] = std::exp(-lambda_a * (u1 - shift));
    probs[1] = std::exp(-lambda_a * (u2 - shift));
  }
  const double total = probs[0] + probs[1];
  probs[0] /= total;
  probs[1] /= total;
  return {std::move(probs), {u1, u2}};
}

// d sigma_k / d lambda = sigma_k * (E_sigma[L] - L_k): each strategy gains
// probability at the expense of strategies with higher loss. The entry for
// a minimum-loss strategy is always >= 0.
inline std::vector<double> sigma_lambda_derivative(const SecurityGame& game,
                                                   const StrategySpace& space,
                                                   double lambda_d) {
  const ResponseDistribution dist = defender_response(game, space, lambda_d);
  double mean_loss = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    mean_loss += dist.probabilities[i] * dist.losses[i];
  }
  std::vector<double> derivative(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    derivative[i] = dist.probabilities[i] * (mean_loss - dist.losses[i]);
  }
  return derivative;
}

// Indices of the menu's minimum-loss strategies (ties within kTieTolerance):
// the support of the lambda -> infinity limit of defender_response.
inline std::vector<std::size_t> pne_limit(const SecurityGame& game,
                                          const StrategySpace& space) {
  const std::vector<double> losses = expected_losses(game, space);
  const double min_loss = *std::min_element(losses.begin(), losses.end());
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (losses[i] <= min_loss + kTieTolerance) {
      support.push_back(i);
    }
  }
  return support;
}

enum class SensitivityMethod { closed_form, finite_difference };

namespace detail {

// Tolerance for recognizing the loss-equalizing optimum inside a menu. The
// bisection route carries ~1e-10 of error, so exact matching is too strict.
inline constexpr double kOptimumMatchTolerance = 1e-8;

inline std::size_t find_allocation(const StrategySpace& space, double r,
                                   double tolerance) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (std::abs(space[i].r - r) <= tolerance) {
      return i;
    }
  }
  return space.size();
}

struct LossBranchSplit {
  std::vector<std::size_t> site1_dominant;  // p1 strictly above A p2
  std::vector<std::size_t> site2_dominant;  // A p2 strictly above p1
  std::vector<std::size_t> tied;

  bool pure_site1() const { return site2_dominant.empty() && tied.empty(); }
  bool pure_site2() const { return site1_dominant.empty() && tied.empty(); }
};

inline LossBranchSplit classify_branches(const SecurityGame& game,
                                         const StrategySpace& space,
                                         std::size_t skip_index) {
  LossBranchSplit split;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == skip_index) continue;
    const double s1 = game.site1_attack_prob(space[i]);
    const double s2 = game.site2_loss() * game.site2_attack_prob(space[i]);
    if (s1 > s2 + kTieTolerance) {
      split.site1_dominant.push_back(i);
    } else if (s2 > s1 + kTieTolerance) {
      split.site2_dominant.push_back(i);
    } else {
      split.tied.push_back(i);
    }
  }
  return split;
}

}  // namespace detail

// Sensitivity of the optimum's choice probability to the site-2 loss A.
//
// The menu must contain the interior loss-equalizing optimum (R - ln A)/2 as
// one of its strategies, and the curves must be unit exponentials (the
// closed forms rest on that family). The semantics depend on the menu:
//
//  * every other strategy keeps site 1 dominant, or every other strategy
//    keeps site 2 dominant: the optimum row is treated as tracking
//    (R - ln A')/2 as the loss moves, so its loss stays smooth and the
//    derivative is two-sided;
//  * mixed menus: the menu is held fixed. The pinned optimum's own loss is
//    kinked at the evaluation point (its two branches are equal there), so
//    the returned value is the right-derivative.
//
// Both methods follow the same semantics and agree up to finite-difference
// error.
inline double sigma_loss_sensitivity(const SecurityGame& game,
                                     const StrategySpace& space,
                                     double lambda_d,
                                     SensitivityMethod method) {
  ensure_rationality(lambda_d, "lambda_d");
  if (!game.has_unit_exponential_curves()) {
    throw PreconditionError(
        "sigma_loss_sensitivity: derived for unit exponential decay curves only");
  }
  const DefenseAllocation optimum = optimal_allocation_closed_form(game);
  const std::size_t opt_idx =
      detail::find_allocation(space, optimum.r, detail::kOptimumMatchTolerance);
  if (opt_idx == space.size()) {
    throw PreconditionError(
        "sigma_loss_sensitivity: menu does not contain the loss-equalizing "
        "optimum r*=" + std::to_string(optimum.r));
  }
  const detail::LossBranchSplit split =
      detail::classify_branches(game, space, opt_idx);
  const bool moving_optimum = split.pure_site1() || split.pure_site2();
  const double loss_A = game.site2_loss();

  if (method == SensitivityMethod::closed_form) {
    const ResponseDistribution dist = defender_response(game, space, lambda_d);
    const double sigma_opt = dist.probabilities[opt_idx];
    const double p2_opt = game.site2_attack_prob(space[opt_idx]);
    if (split.pure_site1()) {
      // All alternatives keep their site-1 loss, which does not move with A.
      return -lambda_d * sigma_opt * (1.0 - sigma_opt) * 0.5 * p2_opt;
    }
    if (split.pure_site2()) {
      double weighted_gap = 0.0;
      for (std::size_t j : split.site2_dominant) {
        weighted_gap += dist.probabilities[j] *
                        (game.site2_attack_prob(space[j]) - 0.5 * p2_opt);
      }
      return lambda_d * sigma_opt * weighted_gap;
    }
    // Mixed menu, right-derivative: the site-2 branch covers every strategy
    // not strictly dominated by site 1, including the pinned optimum.
    double branch_mean = sigma_opt * p2_opt;
    for (std::size_t j : split.site2_dominant) {
      branch_mean += dist.probabilities[j] * game.site2_attack_prob(space[j]);
    }
    for (std::size_t j : split.tied) {
      branch_mean += dist.probabilities[j] * game.site2_attack_prob(space[j]);
    }
    return lambda_d * sigma_opt * (branch_mean - p2_opt);
  }

  const double step = 1e-5 * (1.0 + std::abs(loss_A));
  const auto sigma_at = [&](double loss, bool move_optimum) {
    SecurityGame shifted(game.budget(), loss);
    std::vector<DefenseAllocation> rows = space.allocations();
    if (move_optimum) {
      rows[opt_idx] = optimal_allocation_closed_form(shifted);
    }
    StrategySpace menu(std::move(rows), space.budget(), space.labels());
    return defender_response(shifted, menu, lambda_d).probabilities[opt_idx];
  };
  if (moving_optimum) {
    return (sigma_at(loss_A + step, true) - sigma_at(loss_A - step, true)) /
           (2.0 * step);
  }
  // Second-order forward difference for the one-sided mixed case.
  const double s0 = sigma_at(loss_A, false);
  const double s1 = sigma_at(loss_A + step, false);
  const double s2 = sigma_at(loss_A + 2.0 * step, false);
  return (-3.0 * s0 + 4.0 * s1 - s2) / (2.0 * step);
}

using SpaceBuilder = std::function<StrategySpace(const SecurityGame&)>;

struct SigmaComparison {
  double sigma_at_low_loss = 0.0;
  double sigma_at_high_loss = 0.0;

  bool decreasing() const { return sigma_at_low_loss > sigma_at_high_loss; }
};

// Rebuilds the menu at two site-2 losses and reports the optimum's choice
// probability under each. With enforce_case_i the per-strategy dominance
// condition p1 > A p2 is validated at both losses (naming the first
// violator), and the proved ordering sigma(low) > sigma(high) is asserted.
inline SigmaComparison compare_sigma_across_losses(
    const SecurityGame& base, const SpaceBuilder& builder, double loss_low,
    double loss_high, double lambda_d, bool enforce_case_i = false) {
  ensure_rationality(lambda_d, "lambda_d");
  if (!builder) {
    throw DomainError("compare_sigma_across_losses: empty menu builder");
  }
  if (!(std::isfinite(loss_low) && loss_low > 0.0 && std::isfinite(loss_high) &&
        loss_high > 0.0)) {
    throw DomainError("compare_sigma_across_losses: losses must be positive and finite");
  }
  if (!(loss_low < loss_high)) {
    throw DomainError("compare_sigma_across_losses: requires loss_low < loss_high");
  }

  const auto evaluate = [&](double loss) {
    SecurityGame game(base.budget(), loss, base.p1_curve(), base.p2_curve());
    const StrategySpace menu = builder(game);
    const DefenseAllocation optimum = optimal_allocation(game);
    const std::size_t opt_idx =
        detail::find_allocation(menu, optimum.r, detail::kOptimumMatchTolerance);
    if (opt_idx == menu.size()) {
      throw PreconditionError(
          "compare_sigma_across_losses: menu does not contain the optimum r*=" +
          std::to_string(optimum.r) + " at loss A=" + std::to_string(loss));
    }
    if (enforce_case_i) {
      for (std::size_t j = 0; j < menu.size(); ++j) {
        if (j == opt_idx) continue;
        const double s1 = game.site1_attack_prob(menu[j]);
        const double s2 = loss * game.site2_attack_prob(menu[j]);
        if (!(s1 > s2 + kTieTolerance)) {
          throw PreconditionError(
              "compare_sigma_across_losses: strategy " + menu.labels()[j] +
              " (r=" + std::to_string(menu[j].r) +
              ") violates the site-1 dominance condition at loss A=" +
              std::to_string(loss));
        }
      }
    }
    return defender_response(game, menu, lambda_d).probabilities[opt_idx];
  };

  const SigmaComparison comparison{evaluate(loss_low), evaluate(loss_high)};
  if (enforce_case_i && !comparison.decreasing()) {
    throw std::logic_error(
        "compare_sigma_across_losses: expected sigma(low) > sigma(high) under "
        "the site-1 dominance condition");
  }
  return comparison;
}

}  // namespace secgame
