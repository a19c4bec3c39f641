#pragma once

#include <cmath>
#include <string>

#include "secgame/errors.hpp"
#include "secgame/game.hpp"
#include "secgame/roots.hpp"

namespace secgame {

// Probability weighting exponent; 1 means no distortion.
struct PrelecWeight {
  double alpha = 1.0;
};

inline void ensure_weighting_exponent(double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0, 1] (got " + std::to_string(alpha) + ")");
  }
}

// w(p) = exp(-(-ln p)^alpha). Strictly increasing on (0, 1] with fixed
// points at p = 1 and p = 1/e; for alpha < 1 it overweights probabilities
// below 1/e and underweights the ones above.
inline double prelec(double p, double alpha) {
  ensure_weighting_exponent(alpha);
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("prelec: p must lie in (0, 1] (got " + std::to_string(p) + ")");
  }
  return std::exp(-std::pow(-std::log(p), alpha));
}

// Same weighting, but tolerates curve values above one by clamping to 1 and
// recording a note. Keeps curves with scale > 1 usable.
inline double prelec_clamped(double p, double alpha, ValidationLog* log = nullptr) {
  if (p > 1.0) {
    warn_into(log, "probability " + std::to_string(p) + " clamped to 1 before weighting");
    p = 1.0;
  }
  return prelec(p, alpha);
}

// max{w(p1(r)), A w(p2(R - r))}: the loss as perceived by a
// probability-weighting defender. With alpha = 1 this is expected_loss.
inline double perceived_loss(const SecurityGame& game, double alpha,
                             DefenseAllocation alloc, ValidationLog* log = nullptr) {
  ensure_weighting_exponent(alpha);
  ensure_feasible(game, alloc);
  const double w1 = prelec_clamped(game.site1_attack_prob(alloc), alpha, log);
  const double w2 = prelec_clamped(game.site2_attack_prob(alloc), alpha, log);
  return std::max(w1, game.site2_loss() * w2);
}

// Weighted difference w(p1(r)) - A w(p2(R - r)); strictly decreasing in r.
inline double perceived_difference(const SecurityGame& game, double alpha,
                                   double r, ValidationLog* log = nullptr) {
  ensure_weighting_exponent(alpha);
  if (!std::isfinite(r) || r < 0.0 || r > game.budget()) {
    throw DomainError("perceived_difference: r=" + std::to_string(r) +
                      " outside [0, R=" + std::to_string(game.budget()) + "]");
  }
  const double w1 = prelec_clamped(game.p1_curve()(r), alpha, log);
  const double w2 = prelec_clamped(game.p2_curve()(game.budget() - r), alpha, log);
  return w1 - game.site2_loss() * w2;
}

// Allocation minimizing the perceived loss: a corner when one weighted
// branch dominates over the whole budget, otherwise the unique root of the
// weighted difference.
inline DefenseAllocation behavioral_optimal(const SecurityGame& game, double alpha,
                                            ValidationLog* log = nullptr) {
  ensure_weighting_exponent(alpha);
  const double R = game.budget();
  if (perceived_difference(game, alpha, 0.0, log) <= 0.0) {
    return {0.0};
  }
  if (perceived_difference(game, alpha, R, log) >= 0.0) {
    return {R};
  }
  // Clamp notes were already collected at the corners; stay quiet inside the
  // bisection loop.
  const double root = bisect_decreasing(
      [&game, alpha](double r) { return perceived_difference(game, alpha, r); },
      0.0, R, kRootTolerance, kMaxBisectionIterations);
  return {root};
}

enum class TheoremCase {
  corner_low,    // weighted site-2 branch dominates everywhere: r_hat = 0 <= r_star
  corner_high,   // weighted site-1 branch dominates everywhere: r_hat = R >= r_star
  equal,         // A = 1: r_hat = r_star
  hat_greater,   // p1(r_star) < 1/e and A < 1: r_hat > r_star
  hat_less,      // p1(r_star) < 1/e and A > 1: r_hat < r_star
  unclassified,  // p1(r_star) >= 1/e with A != 1, or no interior r_star
};

inline const char* to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::corner_low: return "corner_low";
    case TheoremCase::corner_high: return "corner_high";
    case TheoremCase::equal: return "equal";
    case TheoremCase::hat_greater: return "hat_greater";
    case TheoremCase::hat_less: return "hat_less";
    case TheoremCase::unclassified: return "unclassified";
  }
  return "unknown";
}

// Classifies the weighting defender's optimum against the rational one.
// Needs alpha in (0, 1), exclusive: with no distortion the comparison is
// empty. unclassified is a real outcome, not an error; the comparison has
// no prediction for p1(r_star) >= 1/e with asymmetric losses.
inline TheoremCase theorem_case(const SecurityGame& game, double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("theorem_case: alpha must lie in (0, 1) exclusive (got " +
                      std::to_string(alpha) + ")");
  }
  if (perceived_difference(game, alpha, 0.0) <= 0.0) {
    return TheoremCase::corner_low;
  }
  if (perceived_difference(game, alpha, game.budget()) >= 0.0) {
    return TheoremCase::corner_high;
  }
  // Interior r_hat from here on. The comparison assumes an interior rational
  // equalizer as well.
  if (difference_function(game, 0.0) <= 0.0 ||
      difference_function(game, game.budget()) >= 0.0) {
    return TheoremCase::unclassified;
  }
  if (std::abs(game.site2_loss() - 1.0) <= kTieTolerance) {
    return TheoremCase::equal;
  }
  const double p1_at_optimum = game.site1_attack_prob(optimal_allocation(game));
  if (p1_at_optimum < std::exp(-1.0)) {
    return game.site2_loss() < 1.0 ? TheoremCase::hat_greater
                                   : TheoremCase::hat_less;
  }
  return TheoremCase::unclassified;
}

}  // namespace secgame
