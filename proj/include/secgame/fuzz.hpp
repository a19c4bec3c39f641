#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "secgame/game.hpp"
#include "secgame/inefficiency.hpp"

namespace secgame {

struct BoundFuzzReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::vector<std::string> details;  // one line per violation

  bool ok() const noexcept { return violations == 0; }
};

namespace detail {

// Distinct site-1 allocations in [0, R]; the menu rejects near-duplicates.
inline std::vector<DefenseAllocation> random_menu_rows(std::mt19937_64& rng,
                                                       double budget, int count) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DefenseAllocation> rows;
  rows.reserve(static_cast<std::size_t>(count));
  while (rows.size() < static_cast<std::size_t>(count)) {
    const double candidate = unit(rng) * budget;
    bool clashes = false;
    for (const auto& row : rows) {
      if (std::abs(row.r - candidate) <= 1e-6 * budget) {
        clashes = true;
        break;
      }
    }
    if (!clashes) {
      rows.push_back({candidate});
    }
  }
  return rows;
}

}  // namespace detail

// Random games, menus and rationality levels; checks poqa() against its
// proved ceiling.
inline BoundFuzzReport fuzz_poqa_bound(std::uint64_t seed, std::size_t trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> budget_dist(1.0, 8.0);
  std::uniform_real_distribution<double> loss_dist(0.1, 10.0);
  std::uniform_int_distribution<int> size_dist(2, 8);
  std::uniform_real_distribution<double> lambda_dist(0.0, 1e3);

  BoundFuzzReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const double budget = budget_dist(rng);
    const double loss_A = loss_dist(rng);
    const int menu_size = size_dist(rng);
    const double lambda = lambda_dist(rng);

    const SecurityGame game(budget, loss_A);
    const StrategySpace space(detail::random_menu_rows(rng, budget, menu_size),
                              budget);
    const InefficiencyReport result = poqa(game, space, lambda);
    const double ceiling = poqa_bound(game, space);
    if (!(result.value <= ceiling)) {
      ++report.violations;
      report.details.push_back(
          "trial " + std::to_string(t) + ": poqa=" + std::to_string(result.value) +
          " > bound=" + std::to_string(ceiling) + " (R=" + std::to_string(budget) +
          ", A=" + std::to_string(loss_A) + ", |X|=" + std::to_string(menu_size) +
          ", lambda=" + std::to_string(lambda) + ")");
    }
  }
  return report;
}

// Random games and weighting exponents; checks pobw() against its ceiling.
inline BoundFuzzReport fuzz_pobw_bound(std::uint64_t seed, std::size_t trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> budget_dist(1.0, 8.0);
  std::uniform_real_distribution<double> loss_dist(0.1, 10.0);
  std::uniform_real_distribution<double> alpha_dist(0.02, 1.0);

  BoundFuzzReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const double budget = budget_dist(rng);
    const double loss_A = loss_dist(rng);
    const double alpha = alpha_dist(rng);

    const SecurityGame game(budget, loss_A);
    const InefficiencyReport result = pobw(game, alpha);
    const double ceiling = pobw_bound(game);
    if (!(result.value <= ceiling)) {
      ++report.violations;
      report.details.push_back(
          "trial " + std::to_string(t) + ": pobw=" + std::to_string(result.value) +
          " > bound=" + std::to_string(ceiling) + " (R=" + std::to_string(budget) +
          ", A=" + std::to_string(loss_A) + ", alpha=" + std::to_string(alpha) + ")");
    }
  }
  return report;
}

}  // namespace secgame
