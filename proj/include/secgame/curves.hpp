#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "secgame/errors.hpp"

namespace secgame {

enum class CurveForm { exponential_decay, custom };

// Probability of a successful attack as a function of the defense investment
// a site receives. Curves must be strictly decreasing, strictly convex and
// positive over the budget interval; validate_curve() spot-checks this on a
// grid. A scale above one is tolerated (some illustrative curves start above
// one) but flagged, since values above one are not probabilities.
class ProbabilityCurve {
 public:
  // scale * exp(-x)
  static ProbabilityCurve exponential(double scale = 1.0) {
    if (!(std::isfinite(scale) && scale > 0.0)) {
      throw DomainError("ProbabilityCurve: scale must be positive and finite");
    }
    ProbabilityCurve curve;
    curve.form_ = CurveForm::exponential_decay;
    curve.scale_ = scale;
    curve.description_ = std::to_string(scale) + "*exp(-x)";
    return curve;
  }

  static ProbabilityCurve custom(std::function<double(double)> eval,
                                 std::string description = "custom") {
    if (!eval) {
      throw DomainError("ProbabilityCurve: empty evaluator");
    }
    ProbabilityCurve curve;
    curve.form_ = CurveForm::custom;
    curve.eval_ = std::move(eval);
    curve.description_ = std::move(description);
    return curve;
  }

  double operator()(double investment) const {
    if (form_ == CurveForm::exponential_decay) {
      return scale_ * std::exp(-investment);
    }
    return eval_(investment);
  }

  CurveForm form() const noexcept { return form_; }
  double scale() const noexcept { return scale_; }
  const std::string& description() const noexcept { return description_; }

  // Closed forms and proved bounds are only valid for exp(-x) with scale 1.
  bool is_unit_exponential() const noexcept {
    return form_ == CurveForm::exponential_decay && scale_ == 1.0;
  }

 private:
  ProbabilityCurve() = default;

  CurveForm form_ = CurveForm::exponential_decay;
  double scale_ = 1.0;
  std::function<double(double)> eval_;
  std::string description_;
};

// Sampled shape checks on [0, upper]. Positivity, strict decrease and strict
// convexity (positive second differences) are hard errors; a value above one
// at x = 0 only produces a warning.
inline std::vector<std::string> validate_curve(const ProbabilityCurve& curve,
                                               double upper,
                                               int grid_points = 65) {
  if (!(std::isfinite(upper) && upper > 0.0)) {
    throw DomainError("validate_curve: upper bound must be positive and finite");
  }
  if (grid_points < 3) {
    throw DomainError("validate_curve: need at least 3 grid points");
  }

  const double step = upper / (grid_points - 1);
  std::vector<double> values(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double x = step * i;
    const double v = curve(x);
    if (!(std::isfinite(v) && v > 0.0)) {
      throw DomainError("curve value " + std::to_string(v) + " at x=" +
                        std::to_string(x) + " is not positive and finite");
    }
    values[static_cast<std::size_t>(i)] = v;
  }
  for (int i = 0; i + 1 < grid_points; ++i) {
    if (!(values[i + 1] < values[i])) {
      throw DomainError("curve is not strictly decreasing near x=" +
                        std::to_string(step * i));
    }
  }
  for (int i = 1; i + 1 < grid_points; ++i) {
    const double second = values[i - 1] - 2.0 * values[i] + values[i + 1];
    if (!(second > 0.0)) {
      throw DomainError("curve is not strictly convex near x=" +
                        std::to_string(step * i));
    }
  }

  std::vector<std::string> warnings;
  if (values.front() > 1.0) {
    warnings.push_back("curve value " + std::to_string(values.front()) +
                       " at x=0 exceeds 1 and is not a probability");
  }
  return warnings;
}

}  // namespace secgame
