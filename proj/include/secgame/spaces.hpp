#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secgame/errors.hpp"
#include "secgame/game.hpp"

namespace secgame {

// The three built-in five-strategy menus, all on a budget of 10. Menus A and
// B embed the loss-equalizing optimum (10 - ln A)/2 as their third row, so
// they stay anchored to the optimum as the site-2 loss changes; menu C is a
// fixed list whose third row is optimal at A = 1. Menu A keeps site 1
// dominant on every other row, menu B keeps site 2 dominant, menu C mixes
// both.
enum class TableSpace { A, B, C };

inline constexpr double kTableBudget = 10.0;

// Row index of the optimum in every built-in menu.
inline constexpr std::size_t kBuiltinOptimumIndex = 2;

inline const char* to_string(TableSpace space) {
  switch (space) {
    case TableSpace::A: return "A";
    case TableSpace::B: return "B";
    case TableSpace::C: return "C";
  }
  return "?";
}

inline std::optional<TableSpace> table_space_from_string(std::string_view name) {
  if (name == "A") return TableSpace::A;
  if (name == "B") return TableSpace::B;
  if (name == "C") return TableSpace::C;
  return std::nullopt;
}

// Unit-exponential game on the built-in budget.
inline SecurityGame table_game(double loss_A) {
  return SecurityGame(kTableBudget, loss_A);
}

inline StrategySpace builtin_space(TableSpace name, double loss_A) {
  if (!(std::isfinite(loss_A) && loss_A > 0.0)) {
    throw DomainError("builtin_space: loss_A must be positive and finite");
  }

  std::vector<double> site1_rows;
  if (name == TableSpace::C) {
    site1_rows = {10.0, 5.35, 5.0, 4.8, 0.0};
  } else {
    const double log_loss = std::log(loss_A);
    if (!(log_loss > -kTableBudget && log_loss < kTableBudget)) {
      throw PreconditionError(
          "builtin_space: loss_A=" + std::to_string(loss_A) +
          " leaves no interior optimum row; needs e^-10 < loss_A < e^10");
    }
    const double optimum_row = 0.5 * (kTableBudget - log_loss);
    site1_rows = (name == TableSpace::A)
                     ? std::vector<double>{4.0, 2.0, optimum_row, 3.5, 0.0}
                     : std::vector<double>{7.0, 5.4, optimum_row, 6.5, 10.0};
    for (std::size_t i = 0; i < site1_rows.size(); ++i) {
      if (i == kBuiltinOptimumIndex) continue;
      if (std::abs(site1_rows[i] - optimum_row) <= kTieTolerance) {
        throw PreconditionError(
            "builtin_space: optimum row r3=" + std::to_string(optimum_row) +
            " coincides with fixed row " + std::to_string(i + 1) +
            " at loss_A=" + std::to_string(loss_A));
      }
    }
  }

  std::vector<DefenseAllocation> allocations;
  allocations.reserve(site1_rows.size());
  for (double r : site1_rows) {
    allocations.push_back({r});
  }
  return StrategySpace(std::move(allocations), kTableBudget,
                       {"r1", "r2", "r3", "r4", "r5"});
}

}  // namespace secgame
