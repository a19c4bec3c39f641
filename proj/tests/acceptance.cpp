// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failures. Every tolerance is pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "secgame/cli.hpp"
#include "secgame/secgame.hpp"
#include "support/oracles.hpp"

using namespace secgame;

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// 1. Optimum probability on menu C is non-decreasing in lambda, anchored at
//    the uniform value and saturating near one.
bool lambda_monotonicity(std::string& detail) {
  const SecurityGame game = table_game(1.0);
  const StrategySpace space = builtin_space(TableSpace::C, 1.0);

  const double at_zero = defender_response(game, space, 0.0).probabilities[2];
  if (!(std::abs(at_zero - 0.2) <= 1e-12)) {
    detail = "sigma(lambda=0) = " + fmt(at_zero) + ", expected 0.2";
    return false;
  }

  double previous = -1.0;
  double at_top = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double lambda = std::pow(10.0, -3.0 + 7.0 * i / 99.0);
    const double sigma = defender_response(game, space, lambda).probabilities[2];
    if (sigma - previous < -1e-12) {
      detail = "decrease at lambda = " + fmt(lambda);
      return false;
    }
    previous = sigma;
    at_top = sigma;
  }
  if (!(at_top >= 0.999)) {
    detail = "sigma(lambda=1e4) = " + fmt(at_top) + " < 0.999";
    return false;
  }
  detail = "sigma(0) = 0.2, non-decreasing, sigma(1e4) = " + fmt(at_top);
  return true;
}

// 2. Menu A at lambda 50: the optimum probability strictly decreases across
//    losses 0.5, 1.0, 1.5, with the site-1 dominance condition verified
//    per strategy.
bool loss_ordering_menu_a(std::string& detail) {
  const double lambda = 50.0;
  std::vector<double> sigmas;
  for (double loss_A : {0.5, 1.0, 1.5}) {
    const SecurityGame game = table_game(loss_A);
    const StrategySpace space = builtin_space(TableSpace::A, loss_A);
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j == kBuiltinOptimumIndex) continue;
      const double s1 = game.site1_attack_prob(space[j]);
      const double s2 = loss_A * game.site2_attack_prob(space[j]);
      if (!(s1 > s2)) {
        detail = "condition p1 > A p2 fails at row " + std::to_string(j + 1) +
                 ", A = " + fmt(loss_A);
        return false;
      }
    }
    sigmas.push_back(
        defender_response(game, space, lambda).probabilities[kBuiltinOptimumIndex]);
  }
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (!(sigmas[i - 1] - sigmas[i] > 1e-6)) {
      detail = "gap " + fmt(sigmas[i - 1] - sigmas[i]) + " not above 1e-6";
      return false;
    }
  }
  detail = "sigma = " + fmt(sigmas[0]) + " > " + fmt(sigmas[1]) + " > " +
           fmt(sigmas[2]);
  return true;
}

// 3. Menu B at lambda 50: strictly increasing optimum probability across the
//    loss grid, and the closed-form loss derivative is positive and matches
//    an independent central difference of the rebuilt-menu response.
bool loss_ordering_menu_b(std::string& detail) {
  const double lambda = 50.0;
  const std::vector<double> grid{0.5, 0.75, 1.0, 1.25, 1.5};

  double previous = -1.0;
  double worst_rel = 0.0;
  for (double loss_A : grid) {
    const SecurityGame game = table_game(loss_A);
    const StrategySpace space = builtin_space(TableSpace::B, loss_A);
    const double sigma =
        defender_response(game, space, lambda).probabilities[kBuiltinOptimumIndex];
    if (!(sigma > previous)) {
      detail = "sigma not increasing at A = " + fmt(loss_A);
      return false;
    }
    previous = sigma;

    const double closed =
        sigma_loss_sensitivity(game, space, lambda, SensitivityMethod::closed_form);
    if (!(closed > 0.0)) {
      detail = "closed-form derivative " + fmt(closed) + " not positive at A = " +
               fmt(loss_A);
      return false;
    }
    const double step = 1e-5 * (1.0 + loss_A);
    const auto sigma_at = [&](double loss) {
      const SecurityGame moved = table_game(loss);
      const StrategySpace menu = builtin_space(TableSpace::B, loss);
      return defender_response(moved, menu, lambda)
          .probabilities[kBuiltinOptimumIndex];
    };
    const double finite = (sigma_at(loss_A + step) - sigma_at(loss_A - step)) /
                          (2.0 * step);
    const double rel = std::abs(closed - finite) / std::abs(closed);
    worst_rel = std::max(worst_rel, rel);
    if (!(rel < 1e-5)) {
      detail = "derivative mismatch " + fmt(rel) + " at A = " + fmt(loss_A);
      return false;
    }
  }
  detail = "increasing, derivative positive, worst fd mismatch " + fmt(worst_rel);
  return true;
}

// 4. Randomized menus never cross the proved poqa ceiling.
bool poqa_bound_fuzz(std::string& detail) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> budget_dist(1.0, 8.0);
  std::uniform_real_distribution<double> loss_dist(0.1, 10.0);
  std::uniform_int_distribution<int> size_dist(2, 8);
  std::uniform_real_distribution<double> lambda_dist(0.0, 1e3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    const double budget = budget_dist(rng);
    const double loss_A = loss_dist(rng);
    const int count = size_dist(rng);
    const double lambda = lambda_dist(rng);

    std::vector<DefenseAllocation> rows;
    while (rows.size() < static_cast<std::size_t>(count)) {
      const double r = unit(rng) * budget;
      bool close = false;
      for (const auto& row : rows) close = close || std::abs(row.r - r) < 1e-6;
      if (!close) rows.push_back({r});
    }

    const SecurityGame game(budget, loss_A);
    const StrategySpace space(rows, budget);
    const double value = poqa(game, space, lambda).value;
    const double ceiling =
        std::max(loss_A, 1.0 / loss_A) * count * std::exp(budget);
    if (!(value <= ceiling)) {
      detail = "violation at trial " + std::to_string(trial) + ": " + fmt(value) +
               " > " + fmt(ceiling);
      return false;
    }
  }
  detail = "1000 trials, 0 violations (seed 42)";
  return true;
}

// 5. On menu C at lambda 10 the loss 0.5 game is the most inefficient, and
//    the symmetric game's ratio collapses to one at high rationality.
bool poqa_ordering(std::string& detail) {
  const StrategySpace space = builtin_space(TableSpace::C, 1.0);
  const double at_half = poqa(table_game(0.5), space, 10.0).value;
  const double at_one = poqa(table_game(1.0), space, 10.0).value;
  const double at_three_halves = poqa(table_game(1.5), space, 10.0).value;
  if (!(at_half > at_one && at_half > at_three_halves)) {
    detail = "ordering failed: " + fmt(at_half) + ", " + fmt(at_one) + ", " +
             fmt(at_three_halves);
    return false;
  }
  const double limit = poqa(table_game(1.0), space, 1e6).value;
  if (!(std::abs(limit - 1.0) <= 1e-6)) {
    detail = "poqa(A=1, lambda=1e6) = " + fmt(limit);
    return false;
  }
  detail = "poqa(0.5) = " + fmt(at_half) + " dominates; limit = " + fmt(limit);
  return true;
}

// 6. Bisection and the closed form agree across the loss range.
bool closed_form_agreement(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double log_loss = -9.0 + 18.0 * i / 49.0;
    const SecurityGame game(10.0, std::exp(log_loss));
    const double bisected = optimal_allocation(game).r;
    const double closed = optimal_allocation_closed_form(game).r;
    worst = std::max(worst, std::abs(bisected - closed));
  }
  detail = "worst |bisection - closed form| = " + fmt(worst);
  return worst < 1e-8;
}

// 7. The rationality derivative matches central finite differences and its
//    minimum-loss entry never goes negative.
bool lambda_derivative_consistency(std::string& detail) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> budget_dist(2.0, 8.0);
  std::uniform_real_distribution<double> loss_dist(0.25, 4.0);
  std::uniform_real_distribution<double> lambda_dist(0.0, 20.0);
  std::uniform_int_distribution<int> size_dist(3, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst_rel = 0.0;
  int accepted = 0;
  int sampled = 0;
  while (accepted < 50) {
    const double budget = budget_dist(rng);
    const double loss_A = loss_dist(rng);
    const double lambda = lambda_dist(rng);
    const int count = size_dist(rng);
    ++sampled;

    std::vector<DefenseAllocation> rows;
    while (rows.size() < static_cast<std::size_t>(count)) {
      const double r = unit(rng) * budget;
      bool close = false;
      for (const auto& row : rows) close = close || std::abs(row.r - r) < 1e-6;
      if (!close) rows.push_back({r});
    }
    const SecurityGame game(budget, loss_A);
    const StrategySpace space(rows, budget);

    const std::vector<double> closed = sigma_lambda_derivative(game, space, lambda);
    const std::vector<double> losses = expected_losses(game, space);

    std::size_t argmin = 0;
    for (std::size_t k = 1; k < losses.size(); ++k) {
      if (losses[k] < losses[argmin]) argmin = k;
    }
    if (!(closed[argmin] >= 0.0)) {
      detail = "negative argmin entry in sample " + std::to_string(sampled);
      return false;
    }

    // The difference oracle only resolves derivatives while the response is
    // not saturated; skip configurations it cannot measure.
    const double spread = *std::max_element(losses.begin(), losses.end()) -
                          losses[argmin];
    if (spread < 0.1 || lambda * spread > 8.0) continue;
    ++accepted;

    const double scale = oracle::max_abs(closed);
    if (!(scale > 0.0)) {
      detail = "degenerate configuration in sample " + std::to_string(sampled);
      return false;
    }
    for (std::size_t k = 0; k < losses.size(); ++k) {
      const double finite = oracle::central_derivative(
          [&](double l) { return oracle::direct_logit(losses, l)[k]; }, lambda,
          2e-3);
      const double rel = std::abs(closed[k] - finite) / scale;
      worst_rel = std::max(worst_rel, rel);
      if (!(rel < 1e-6)) {
        detail = "mismatch " + fmt(rel) + " in sample " + std::to_string(sampled);
        return false;
      }
    }
  }
  detail = "50 configurations, worst relative mismatch " + fmt(worst_rel) +
           ", argmin entry non-negative in all " + std::to_string(sampled) +
           " samples";
  return true;
}

// 8. Weighting-defender comparisons: symmetric losses coincide, the skewed
//    frozen cases land where they should, and 200 random verified interior
//    configurations match the predicted direction.
bool prelec_theorem(std::string& detail) {
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    const SecurityGame game(10.0, 1.0);
    const double gap =
        std::abs(behavioral_optimal(game, alpha).r - optimal_allocation(game).r);
    if (!(gap < 1e-8)) {
      detail = "A=1 gap " + fmt(gap) + " at alpha=" + fmt(alpha);
      return false;
    }
  }

  {
    const SecurityGame game(10.0, 0.5);
    const double r_hat = behavioral_optimal(game, 0.5).r;
    const double r_star = optimal_allocation(game).r;
    if (!(std::abs(r_hat - 6.531) <= 1e-3 && r_hat > r_star)) {
      detail = "A=0.5 landed at " + fmt(r_hat);
      return false;
    }
  }
  {
    const SecurityGame game(10.0, 1.5);
    if (!(behavioral_optimal(game, 0.5).r < optimal_allocation(game).r)) {
      detail = "A=1.5 did not shift down";
      return false;
    }
  }

  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> budget_dist(4.0, 12.0);
  std::uniform_real_distribution<double> alpha_dist(0.3, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const double budget = budget_dist(rng);
    const double alpha = alpha_dist(rng);
    const double cap = 0.9 * std::min(budget - 2.0, std::pow(budget, alpha));
    const double log_loss = (2.0 * unit(rng) - 1.0) * cap;
    if (std::abs(log_loss) < 0.05) continue;

    const SecurityGame game(budget, std::exp(log_loss));
    const double r_star = optimal_allocation(game).r;
    if (!(game.site1_attack_prob({r_star}) < std::exp(-1.0))) continue;
    if (perceived_difference(game, alpha, 0.0) <= 0.0) continue;
    if (perceived_difference(game, alpha, budget) >= 0.0) continue;

    const double r_hat = behavioral_optimal(game, alpha).r;
    const bool expected_up = game.site2_loss() < 1.0;
    if (expected_up != (r_hat > r_star)) {
      detail = "direction violation at R=" + fmt(budget) + ", A=" +
               fmt(game.site2_loss()) + ", alpha=" + fmt(alpha);
      return false;
    }
    ++checked;
  }
  detail = "symmetric and frozen cases hit; 200 direction checks clean";
  return true;
}

// 9. Randomized pobw never crosses its ceiling, and identity weighting is
//    exactly neutral.
bool pobw_bound_fuzz(std::string& detail) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> budget_dist(1.0, 8.0);
  std::uniform_real_distribution<double> loss_dist(0.1, 10.0);
  std::uniform_real_distribution<double> alpha_dist(0.02, 1.0);

  for (int trial = 0; trial < 1000; ++trial) {
    const double budget = budget_dist(rng);
    const double loss_A = loss_dist(rng);
    const SecurityGame game(budget, loss_A);
    const double value = pobw(game, alpha_dist(rng)).value;
    const double ceiling = std::max(loss_A, 1.0 / loss_A) * std::exp(budget);
    if (!(value <= ceiling)) {
      detail = "violation at trial " + std::to_string(trial) + ": " + fmt(value) +
               " > " + fmt(ceiling);
      return false;
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const SecurityGame game(budget_dist(rng), loss_dist(rng));
    const double value = pobw(game, 1.0).value;
    if (!(std::abs(value - 1.0) <= 1e-9)) {
      detail = "identity weighting drifted to " + fmt(value);
      return false;
    }
  }
  detail = "1000 bound trials and 50 identity trials clean (seed 43)";
  return true;
}

// 10. sweep-lambda through the CLI is byte-identical across runs with the
//     same configuration and seed.
bool sweep_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "secgame_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path config_path = dir / "config.json";
  {
    std::ofstream os(config_path);
    os << R"({"kind": "lambda_sweep", "space": "C", "A_fixed": 1.0})";
  }
  const auto run_once = [&](const fs::path& out) {
    const std::string config = config_path.string();
    const std::string out_str = out.string();
    const char* argv[] = {"secgame", "--config", config.c_str(), "--out",
                          out_str.c_str(), "--seed", "42", "sweep-lambda"};
    return run_cli(8, argv);
  };
  const fs::path out_a = dir / "a.csv";
  const fs::path out_b = dir / "b.csv";
  if (run_once(out_a) != 0 || run_once(out_b) != 0) {
    detail = "CLI run failed";
    fs::remove_all(dir);
    return false;
  }
  const auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)), {});
  };
  const std::string bytes_a = slurp(out_a);
  const std::string bytes_b = slurp(out_b);
  fs::remove_all(dir);
  if (bytes_a.empty() || bytes_a != bytes_b) {
    detail = "outputs differ or are empty";
    return false;
  }
  detail = std::to_string(bytes_a.size()) + " bytes, identical across runs";
  return true;
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"lambda monotonicity on menu C", lambda_monotonicity},
      {"loss ordering on menu A", loss_ordering_menu_a},
      {"loss ordering and derivative on menu B", loss_ordering_menu_b},
      {"poqa bound fuzzing", poqa_bound_fuzz},
      {"poqa ordering and limit on menu C", poqa_ordering},
      {"closed form vs bisection", closed_form_agreement},
      {"lambda derivative consistency", lambda_derivative_consistency},
      {"probability-weighting comparisons", prelec_theorem},
      {"pobw bound fuzzing and identity", pobw_bound_fuzz},
      {"sweep determinism", sweep_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    bool passed = false;
    try {
      passed = checks[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s (%s)\n", passed ? "PASS" : "FAIL", i + 1,
                checks[i].name.c_str(), detail.c_str());
    if (!passed) ++failures;
  }
  return failures;
}
