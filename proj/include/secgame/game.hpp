#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "secgame/curves.hpp"
#include "secgame/errors.hpp"
#include "secgame/roots.hpp"

namespace secgame {

// Absolute tolerance for attacker indifference and for treating two
// allocations or two losses as equal. Bit-exact equality on exponentials is
// unreliable in double precision.
inline constexpr double kTieTolerance = 1e-12;

// Absolute tolerance in the allocation for bisection-based optima.
inline constexpr double kRootTolerance = 1e-10;
inline constexpr int kMaxBisectionIterations = 200;

// Investment on site 1; site 2 receives the remaining budget R - r.
struct DefenseAllocation {
  double r = 0.0;
};

// Two sites, one budget. Site 1 carries a unit loss when compromised, site 2
// a loss of loss_A. Attack success probabilities decay with the investment
// each site receives. Immutable after construction; every operation on a
// game is a pure function, so values can be shared across threads freely.
class SecurityGame {
 public:
  SecurityGame(double budget_R, double loss_A,
               ProbabilityCurve p1 = ProbabilityCurve::exponential(),
               ProbabilityCurve p2 = ProbabilityCurve::exponential())
      : budget_(budget_R),
        loss2_(loss_A),
        p1_(std::move(p1)),
        p2_(std::move(p2)) {
    if (!(std::isfinite(budget_) && budget_ > 0.0)) {
      throw DomainError("SecurityGame: budget_R must be positive and finite (got " +
                        std::to_string(budget_) + ")");
    }
    if (!(std::isfinite(loss2_) && loss2_ > 0.0)) {
      throw DomainError("SecurityGame: loss_A must be positive and finite (got " +
                        std::to_string(loss2_) + ")");
    }
    for (auto& note : validate_curve(p1_, budget_)) {
      warnings_.push_back("p1: " + note);
    }
    for (auto& note : validate_curve(p2_, budget_)) {
      warnings_.push_back("p2: " + note);
    }
  }

  double budget() const noexcept { return budget_; }
  double site2_loss() const noexcept { return loss2_; }
  const ProbabilityCurve& p1_curve() const noexcept { return p1_; }
  const ProbabilityCurve& p2_curve() const noexcept { return p2_; }

  // p1(r) and p2(R - r) for an allocation that puts r on site 1.
  double site1_attack_prob(DefenseAllocation alloc) const { return p1_(alloc.r); }
  double site2_attack_prob(DefenseAllocation alloc) const {
    return p2_(budget_ - alloc.r);
  }

  bool has_unit_exponential_curves() const noexcept {
    return p1_.is_unit_exponential() && p2_.is_unit_exponential();
  }

  // Non-fatal notes collected while validating the curves.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  double budget_;
  double loss2_;
  ProbabilityCurve p1_;
  ProbabilityCurve p2_;
  std::vector<std::string> warnings_;
};

inline void ensure_feasible(const SecurityGame& game, DefenseAllocation alloc) {
  if (!std::isfinite(alloc.r)) {
    throw DomainError("allocation r=" + std::to_string(alloc.r) + " is not finite");
  }
  if (alloc.r < 0.0) {
    throw DomainError("allocation r=" + std::to_string(alloc.r) +
                      " violates the lower bound r >= 0");
  }
  if (alloc.r > game.budget()) {
    throw DomainError("allocation r=" + std::to_string(alloc.r) +
                      " exceeds the budget R=" + std::to_string(game.budget()));
  }
}

// max{p1(r), A p2(R - r)}: the defender's expected loss under a best-response
// attacker, and equally the attacker's utility.
inline double expected_loss(const SecurityGame& game, DefenseAllocation alloc) {
  ensure_feasible(game, alloc);
  return std::max(game.site1_attack_prob(alloc),
                  game.site2_loss() * game.site2_attack_prob(alloc));
}

enum class AttackTarget { site1, site2, indifferent };

struct AttackDecision {
  AttackTarget target = AttackTarget::indifferent;
  double utility = 0.0;
};

// The attacker hits whichever site costs the defender more; branches within
// kTieTolerance of each other are reported indifferent.
inline AttackDecision attacker_target(const SecurityGame& game,
                                      DefenseAllocation alloc) {
  ensure_feasible(game, alloc);
  const double u1 = game.site1_attack_prob(alloc);
  const double u2 = game.site2_loss() * game.site2_attack_prob(alloc);
  AttackDecision decision;
  decision.utility = std::max(u1, u2);
  if (u1 > u2 + kTieTolerance) {
    decision.target = AttackTarget::site1;
  } else if (u2 > u1 + kTieTolerance) {
    decision.target = AttackTarget::site2;
  }
  return decision;
}

inline const char* to_string(AttackTarget t) {
  switch (t) {
    case AttackTarget::site1: return "site1";
    case AttackTarget::site2: return "site2";
    case AttackTarget::indifferent: return "indifferent";
  }
  return "unknown";
}

// E(r) = p1(r) - A p2(R - r). Strictly decreasing in r; where it changes
// sign on [0, R] its root is the loss-equalizing allocation.
inline double difference_function(const SecurityGame& game, double r) {
  if (!std::isfinite(r) || r < 0.0 || r > game.budget()) {
    throw DomainError("difference_function: r=" + std::to_string(r) +
                      " outside [0, R=" + std::to_string(game.budget()) + "]");
  }
  return game.p1_curve()(r) -
         game.site2_loss() * game.p2_curve()(game.budget() - r);
}

// Minimizes max{p1(r), A p2(R - r)}. When one site dominates over the whole
// budget the optimum is the matching corner, otherwise the unique interior
// equalizer found by bisection.
inline DefenseAllocation optimal_allocation(const SecurityGame& game) {
  const double R = game.budget();
  if (difference_function(game, 0.0) <= 0.0) {
    return {0.0};
  }
  if (difference_function(game, R) >= 0.0) {
    return {R};
  }
  const double root = bisect_decreasing(
      [&game](double r) { return difference_function(game, r); }, 0.0, R,
      kRootTolerance, kMaxBisectionIterations);
  return {root};
}

// (R - ln A) / 2, natural logarithm. Valid only for unit exponential curves
// with an interior optimum, i.e. e^-R < A < e^R; anything else must go
// through optimal_allocation().
inline DefenseAllocation optimal_allocation_closed_form(const SecurityGame& game) {
  if (!game.has_unit_exponential_curves()) {
    throw PreconditionError(
        "optimal_allocation_closed_form: curves are not unit exponential "
        "decay; use optimal_allocation");
  }
  const double log_loss = std::log(game.site2_loss());
  if (!(log_loss > -game.budget() && log_loss < game.budget())) {
    throw PreconditionError(
        "optimal_allocation_closed_form: loss_A outside (e^-R, e^R), the "
        "optimum is a corner; use optimal_allocation");
  }
  return {0.5 * (game.budget() - log_loss)};
}

// Finite ordered menu of feasible budget splits. Entries must be pairwise
// distinct beyond kTieTolerance; labels default to r1..rn.
class StrategySpace {
 public:
  StrategySpace(std::vector<DefenseAllocation> allocations, double budget,
                std::vector<std::string> labels = {})
      : allocations_(std::move(allocations)),
        budget_(budget),
        labels_(std::move(labels)) {
    if (!(std::isfinite(budget_) && budget_ > 0.0)) {
      throw DomainError("StrategySpace: budget must be positive and finite");
    }
    if (allocations_.empty()) {
      throw DomainError("StrategySpace: menu must not be empty");
    }
    for (std::size_t i = 0; i < allocations_.size(); ++i) {
      const double r = allocations_[i].r;
      if (!std::isfinite(r) || r < 0.0 || r > budget_) {
        throw DomainError("StrategySpace: allocation " + std::to_string(i + 1) +
                          " (r=" + std::to_string(r) + ") outside [0, " +
                          std::to_string(budget_) + "]");
      }
    }
    for (std::size_t i = 0; i < allocations_.size(); ++i) {
      for (std::size_t j = i + 1; j < allocations_.size(); ++j) {
        if (std::abs(allocations_[i].r - allocations_[j].r) <= kTieTolerance) {
          throw DomainError("StrategySpace: allocations " + std::to_string(i + 1) +
                            " and " + std::to_string(j + 1) + " coincide");
        }
      }
    }
    if (labels_.empty()) {
      labels_.reserve(allocations_.size());
      for (std::size_t i = 0; i < allocations_.size(); ++i) {
        labels_.push_back("r" + std::to_string(i + 1));
      }
    } else if (labels_.size() != allocations_.size()) {
      throw DomainError("StrategySpace: label count does not match menu size");
    }
  }

  std::size_t size() const noexcept { return allocations_.size(); }
  const DefenseAllocation& operator[](std::size_t i) const { return allocations_[i]; }
  const std::vector<DefenseAllocation>& allocations() const noexcept {
    return allocations_;
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double budget() const noexcept { return budget_; }

 private:
  std::vector<DefenseAllocation> allocations_;
  double budget_;
  std::vector<std::string> labels_;
};

inline std::vector<double> expected_losses(const SecurityGame& game,
                                           const StrategySpace& space) {
  if (space.budget() != game.budget()) {
    throw DomainError("expected_losses: menu budget " + std::to_string(space.budget()) +
                      " does not match game budget " + std::to_string(game.budget()));
  }
  std::vector<double> losses;
  losses.reserve(space.size());
  for (const auto& alloc : space.allocations()) {
    losses.push_back(expected_loss(game, alloc));
  }
  return losses;
}

}  // namespace secgame
