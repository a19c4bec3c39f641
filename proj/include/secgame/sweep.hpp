#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "secgame/errors.hpp"
#include "secgame/game.hpp"
#include "secgame/inefficiency.hpp"
#include "secgame/quantal.hpp"
#include "secgame/spaces.hpp"
#include "secgame/version.hpp"

namespace secgame {

using Json = nlohmann::ordered_json;

enum class SweepKind { lambda_sweep, loss_sweep, poqa_sweep };

inline const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::lambda_sweep: return "lambda_sweep";
    case SweepKind::loss_sweep: return "loss_sweep";
    case SweepKind::poqa_sweep: return "poqa_sweep";
  }
  return "?";
}

inline std::optional<SweepKind> sweep_kind_from_string(std::string_view name) {
  if (name == "lambda_sweep") return SweepKind::lambda_sweep;
  if (name == "loss_sweep") return SweepKind::loss_sweep;
  if (name == "poqa_sweep") return SweepKind::poqa_sweep;
  return std::nullopt;
}

// Parameter grid: explicit values, or a log-spaced range materialized on
// demand with pinned endpoints.
struct Grid {
  std::vector<double> values;
  double log_min = 0.0;
  double log_max = 0.0;
  std::size_t log_count = 0;

  static Grid explicit_values(std::vector<double> v) {
    Grid grid;
    grid.values = std::move(v);
    return grid;
  }

  static Grid single(double v) { return explicit_values({v}); }

  static Grid log_range(double lo, double hi, std::size_t count) {
    Grid grid;
    grid.log_min = lo;
    grid.log_max = hi;
    grid.log_count = count;
    return grid;
  }

  bool is_log_range() const noexcept { return log_count > 0; }

  std::vector<double> materialize() const {
    if (!is_log_range()) {
      return values;
    }
    std::vector<double> out(log_count);
    if (log_count == 1) {
      out[0] = log_min;
      return out;
    }
    const double lo = std::log(log_min);
    const double hi = std::log(log_max);
    for (std::size_t i = 0; i < log_count; ++i) {
      out[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(log_count - 1));
    }
    out.front() = log_min;
    out.back() = log_max;
    return out;
  }
};

// Declarative sweep description; mirrors its JSON form field by field.
struct SweepSpec {
  SweepKind kind = SweepKind::lambda_sweep;
  std::optional<TableSpace> builtin;     // "space": "A" | "B" | "C"
  std::vector<double> explicit_space;    // "space": [site-1 allocations]
  double budget = kTableBudget;          // "R"
  Grid loss_grid = Grid::single(1.0);    // "A_values" | "A_fixed"
  Grid lambda_grid;                      // "lambda_values" | "lambda_fixed"
  std::string output_path;               // "output_path"
};

inline SweepSpec default_lambda_sweep() {
  SweepSpec spec;
  spec.kind = SweepKind::lambda_sweep;
  spec.builtin = TableSpace::C;
  spec.loss_grid = Grid::single(1.0);
  // The log grid cannot carry lambda = 0, so the uniform-choice row is
  // prepended explicitly.
  std::vector<double> lambdas = Grid::log_range(1e-3, 1e4, 100).materialize();
  lambdas.insert(lambdas.begin(), 0.0);
  spec.lambda_grid = Grid::explicit_values(std::move(lambdas));
  spec.output_path = "lambda_sweep.csv";
  return spec;
}

inline SweepSpec default_loss_sweep(TableSpace space = TableSpace::A) {
  SweepSpec spec;
  spec.kind = SweepKind::loss_sweep;
  spec.builtin = space;
  spec.loss_grid = Grid::explicit_values({0.5, 0.75, 1.0, 1.25, 1.5});
  spec.lambda_grid = Grid::log_range(1.0, 1e3, 25);
  spec.output_path = "loss_sweep.csv";
  return spec;
}

inline SweepSpec default_poqa_sweep() {
  SweepSpec spec;
  spec.kind = SweepKind::poqa_sweep;
  spec.builtin = TableSpace::C;
  spec.loss_grid = Grid::explicit_values({0.5, 1.0, 1.5});
  spec.lambda_grid = Grid::log_range(10.0, 1e4, 60);
  spec.output_path = "poqa_sweep.csv";
  return spec;
}

namespace detail {

inline void check_grid(const Grid& grid, const std::string& field, double min_value,
                       bool min_exclusive) {
  if (grid.is_log_range()) {
    if (!(std::isfinite(grid.log_min) && std::isfinite(grid.log_max) &&
          grid.log_min > 0.0 && grid.log_min < grid.log_max)) {
      throw ConfigError(field, "log range needs 0 < log_min < log_max");
    }
    if (grid.log_count < 2) {
      throw ConfigError(field, "log range needs count >= 2");
    }
  }
  const std::vector<double> values = grid.materialize();
  if (values.empty()) {
    throw ConfigError(field, "grid must not be empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string element = field + "[" + std::to_string(i) + "]";
    if (!std::isfinite(values[i])) {
      throw ConfigError(element, "value must be finite");
    }
    if (min_exclusive ? !(values[i] > min_value) : !(values[i] >= min_value)) {
      throw ConfigError(element, "value " + std::to_string(values[i]) +
                                     " below the valid domain");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw ConfigError(element, "grid values must be strictly increasing");
    }
  }
}

}  // namespace detail

inline void validate(const SweepSpec& spec) {
  if (!(std::isfinite(spec.budget) && spec.budget > 0.0)) {
    throw ConfigError("R", "must be positive and finite");
  }
  const bool has_builtin = spec.builtin.has_value();
  const bool has_explicit = !spec.explicit_space.empty();
  if (has_builtin == has_explicit) {
    throw ConfigError("space",
                      "provide exactly one of a builtin menu name or an explicit "
                      "allocation list");
  }
  if (has_builtin && spec.budget != kTableBudget) {
    throw ConfigError("R", "builtin menus are defined for R=10");
  }
  if (has_explicit) {
    for (std::size_t i = 0; i < spec.explicit_space.size(); ++i) {
      const double r = spec.explicit_space[i];
      if (!std::isfinite(r) || r < 0.0 || r > spec.budget) {
        throw ConfigError("space[" + std::to_string(i) + "]",
                          "allocation outside [0, R]");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(spec.explicit_space[j] - r) <= kTieTolerance) {
          throw ConfigError("space", "allocations " + std::to_string(j) + " and " +
                                         std::to_string(i) + " coincide");
        }
      }
    }
  }

  detail::check_grid(spec.lambda_grid, "lambda_values", 0.0, false);
  detail::check_grid(spec.loss_grid, "A_values", 0.0, true);

  const bool anchored_builtin =
      has_builtin && *spec.builtin != TableSpace::C;
  if (anchored_builtin) {
    const std::vector<double> losses = spec.loss_grid.materialize();
    for (std::size_t i = 0; i < losses.size(); ++i) {
      const double log_loss = std::log(losses[i]);
      if (!(log_loss > -kTableBudget && log_loss < kTableBudget)) {
        throw ConfigError("A_values[" + std::to_string(i) + "]",
                          "menus A and B need e^-10 < A < e^10");
      }
    }
  }

  switch (spec.kind) {
    case SweepKind::lambda_sweep:
      if (spec.loss_grid.materialize().size() != 1) {
        throw ConfigError("A_values",
                          "lambda sweep expects a single loss value (use A_fixed)");
      }
      break;
    case SweepKind::loss_sweep:
      if (!has_builtin || *spec.builtin == TableSpace::C) {
        throw ConfigError("space",
                          "loss sweep rebuilds the optimum row and needs menu A or B");
      }
      break;
    case SweepKind::poqa_sweep:
      break;
  }
}

// JSON form. Grids accept an explicit array, a single number through the
// *_fixed key, or {"log_min":..., "log_max":..., "count":...}.
inline Json grid_to_json(const Grid& grid) {
  if (grid.is_log_range()) {
    return Json{{"log_min", grid.log_min},
                {"log_max", grid.log_max},
                {"count", grid.log_count}};
  }
  return Json(grid.values);
}

namespace detail {

inline Grid grid_from_json(const Json& value, const std::string& field) {
  if (value.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (!value[i].is_number()) {
        throw ConfigError(field + "[" + std::to_string(i) + "]",
                          "expected a number");
      }
      out.push_back(value[i].get<double>());
    }
    return Grid::explicit_values(std::move(out));
  }
  if (value.is_object()) {
    for (const auto& [key, ignored] : value.items()) {
      if (key != "log_min" && key != "log_max" && key != "count") {
        throw ConfigError(field + "." + key, "unknown grid key");
      }
    }
    if (!value.contains("log_min") || !value.contains("log_max") ||
        !value.contains("count")) {
      throw ConfigError(field, "log range needs log_min, log_max and count");
    }
    if (!value["log_min"].is_number() || !value["log_max"].is_number() ||
        !value["count"].is_number_unsigned()) {
      throw ConfigError(field, "log range fields have the wrong type");
    }
    return Grid::log_range(value["log_min"].get<double>(),
                           value["log_max"].get<double>(),
                           value["count"].get<std::size_t>());
  }
  throw ConfigError(field, "expected an array or a log-range object");
}

}  // namespace detail

inline Json sweep_spec_to_json(const SweepSpec& spec) {
  Json out;
  out["kind"] = to_string(spec.kind);
  if (spec.builtin) {
    out["space"] = to_string(*spec.builtin);
  } else {
    out["space"] = Json(spec.explicit_space);
  }
  out["R"] = spec.budget;
  out["A_values"] = grid_to_json(spec.loss_grid);
  out["lambda_values"] = grid_to_json(spec.lambda_grid);
  out["output_path"] = spec.output_path;
  return out;
}

// Merges the JSON fields present in `value` into `spec`. Unknown keys are
// configuration errors; so are type mismatches.
inline void merge_sweep_spec_json(SweepSpec& spec, const Json& value) {
  if (!value.is_object()) {
    throw ConfigError("config", "expected a JSON object");
  }
  for (const auto& [key, field] : value.items()) {
    if (key == "kind") {
      if (!field.is_string()) throw ConfigError("kind", "expected a string");
      const auto kind = sweep_kind_from_string(field.get<std::string>());
      if (!kind) throw ConfigError("kind", "unknown sweep kind '" +
                                               field.get<std::string>() + "'");
      spec.kind = *kind;
    } else if (key == "space") {
      if (field.is_string()) {
        const auto space = table_space_from_string(field.get<std::string>());
        if (!space) {
          throw ConfigError("space", "unknown builtin menu '" +
                                         field.get<std::string>() + "'");
        }
        spec.builtin = *space;
        spec.explicit_space.clear();
      } else if (field.is_array()) {
        std::vector<double> rows;
        for (std::size_t i = 0; i < field.size(); ++i) {
          if (!field[i].is_number()) {
            throw ConfigError("space[" + std::to_string(i) + "]",
                              "expected a number");
          }
          rows.push_back(field[i].get<double>());
        }
        spec.explicit_space = std::move(rows);
        spec.builtin.reset();
      } else {
        throw ConfigError("space", "expected a menu name or an allocation list");
      }
    } else if (key == "R") {
      if (!field.is_number()) throw ConfigError("R", "expected a number");
      spec.budget = field.get<double>();
    } else if (key == "A_values") {
      spec.loss_grid = detail::grid_from_json(field, "A_values");
    } else if (key == "A_fixed") {
      if (!field.is_number()) throw ConfigError("A_fixed", "expected a number");
      spec.loss_grid = Grid::single(field.get<double>());
    } else if (key == "lambda_values") {
      spec.lambda_grid = detail::grid_from_json(field, "lambda_values");
    } else if (key == "lambda_fixed") {
      if (!field.is_number()) throw ConfigError("lambda_fixed", "expected a number");
      spec.lambda_grid = Grid::single(field.get<double>());
    } else if (key == "output_path") {
      if (!field.is_string()) throw ConfigError("output_path", "expected a string");
      spec.output_path = field.get<std::string>();
    } else {
      throw ConfigError(key, "unknown configuration field");
    }
  }
}

inline SweepSpec sweep_spec_from_json(const Json& value) {
  SweepSpec spec;
  spec.lambda_grid = Grid::single(1.0);
  merge_sweep_spec_json(spec, value);
  return spec;
}

// Tabular sweep output: one row per grid point, plus a metadata block that
// describes where the numbers came from.
struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Json metadata;
};

namespace detail {

inline Json space_metadata(const SweepSpec& spec) {
  Json meta;
  if (spec.builtin) {
    meta["name"] = to_string(*spec.builtin);
    if (*spec.builtin != TableSpace::C) {
      meta["note"] = "third row tracks the loss-equalizing optimum (R - ln A)/2";
    }
  } else {
    meta["name"] = "explicit";
    meta["site1_allocations"] = Json(spec.explicit_space);
  }
  return meta;
}

inline Json base_metadata(const SweepSpec& spec) {
  Json meta;
  meta["tool"] = "secgame";
  meta["version"] = kVersion;
  meta["kind"] = to_string(spec.kind);
  meta["R"] = spec.budget;
  meta["A_values"] = Json(spec.loss_grid.materialize());
  meta["lambda_values"] = Json(spec.lambda_grid.materialize());
  meta["space"] = space_metadata(spec);
  return meta;
}

inline StrategySpace resolve_space(const SweepSpec& spec, double loss_A) {
  if (spec.builtin) {
    return builtin_space(*spec.builtin, loss_A);
  }
  std::vector<DefenseAllocation> rows;
  rows.reserve(spec.explicit_space.size());
  for (double r : spec.explicit_space) {
    rows.push_back({r});
  }
  return StrategySpace(std::move(rows), spec.budget);
}

inline std::size_t argmin_index(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace detail

// One row per lambda: the response over the menu and the derivative of the
// best entry's probability.
inline SweepResult run_lambda_sweep(const SweepSpec& spec) {
  if (spec.kind != SweepKind::lambda_sweep) {
    throw ConfigError("kind", "expected lambda_sweep");
  }
  validate(spec);

  const double loss_A = spec.loss_grid.materialize().front();
  const SecurityGame game(spec.budget, loss_A);
  const StrategySpace space = detail::resolve_space(spec, loss_A);
  const std::vector<double> losses = expected_losses(game, space);
  const std::size_t opt = detail::argmin_index(losses);

  SweepResult result;
  result.columns.push_back("lambda");
  for (const std::string& label : space.labels()) {
    result.columns.push_back("sigma_" + label);
  }
  result.columns.push_back("dsigma_opt_dlambda");

  for (double lambda : spec.lambda_grid.materialize()) {
    const std::vector<double> probs = logit_probabilities(losses, lambda);
    const std::vector<double> deriv = sigma_lambda_derivative(game, space, lambda);
    std::vector<double> row;
    row.reserve(space.size() + 2);
    row.push_back(lambda);
    row.insert(row.end(), probs.begin(), probs.end());
    row.push_back(deriv[opt]);
    result.rows.push_back(std::move(row));
  }

  result.metadata = detail::base_metadata(spec);
  result.metadata["optimum_label"] = space.labels()[opt];
  result.metadata["columns"] = Json(result.columns);
  return result;
}

// One row per (A, lambda): the optimum row's probability plus a diagnostic
// flag for the per-strategy dominance condition the menu is built around
// (site 1 for menu A, site 2 for menu B). Violations are recorded, not
// raised.
inline SweepResult run_loss_sweep(const SweepSpec& spec) {
  if (spec.kind != SweepKind::loss_sweep) {
    throw ConfigError("kind", "expected loss_sweep");
  }
  validate(spec);

  SweepResult result;
  result.columns = {"A", "lambda", "sigma_opt", "case_condition_ok"};

  const std::vector<double> lambdas = spec.lambda_grid.materialize();
  for (double loss_A : spec.loss_grid.materialize()) {
    const SecurityGame game(spec.budget, loss_A);
    const StrategySpace space = builtin_space(*spec.builtin, loss_A);

    bool condition_ok = true;
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j == kBuiltinOptimumIndex) continue;
      const double s1 = game.site1_attack_prob(space[j]);
      const double s2 = loss_A * game.site2_attack_prob(space[j]);
      const bool row_ok = (*spec.builtin == TableSpace::A) ? (s1 > s2) : (s1 < s2);
      condition_ok = condition_ok && row_ok;
    }

    for (double lambda : lambdas) {
      const ResponseDistribution dist = defender_response(game, space, lambda);
      result.rows.push_back({loss_A, lambda,
                             dist.probabilities[kBuiltinOptimumIndex],
                             condition_ok ? 1.0 : 0.0});
    }
  }

  result.metadata = detail::base_metadata(spec);
  result.metadata["optimum_label"] = "r3";
  result.metadata["columns"] = Json(result.columns);
  return result;
}

// One row per (lambda, A): the inefficiency ratio, its natural log, and the
// proved ceiling.
inline SweepResult run_poqa_sweep(const SweepSpec& spec) {
  if (spec.kind != SweepKind::poqa_sweep) {
    throw ConfigError("kind", "expected poqa_sweep");
  }
  validate(spec);

  SweepResult result;
  result.columns = {"lambda", "A", "poqa", "ln_poqa", "bound"};

  const std::vector<double> losses = spec.loss_grid.materialize();
  for (double lambda : spec.lambda_grid.materialize()) {
    for (double loss_A : losses) {
      const SecurityGame game(spec.budget, loss_A);
      const StrategySpace space = detail::resolve_space(spec, loss_A);
      const InefficiencyReport report = poqa(game, space, lambda);
      result.rows.push_back({lambda, loss_A, report.value, std::log(report.value),
                             report.bound.value()});
    }
  }

  result.metadata = detail::base_metadata(spec);
  if (spec.builtin && *spec.builtin == TableSpace::C) {
    result.metadata["space"]["note"] =
        "menu C is the only built-in menu independent of the loss value";
  }
  result.metadata["columns"] = Json(result.columns);
  return result;
}

inline SweepResult run_sweep(const SweepSpec& spec) {
  switch (spec.kind) {
    case SweepKind::lambda_sweep: return run_lambda_sweep(spec);
    case SweepKind::loss_sweep: return run_loss_sweep(spec);
    case SweepKind::poqa_sweep: return run_poqa_sweep(spec);
  }
  throw ConfigError("kind", "unknown sweep kind");
}

}  // namespace secgame
