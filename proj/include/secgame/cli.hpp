#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secgame/errors.hpp"
#include "secgame/fuzz.hpp"
#include "secgame/game.hpp"
#include "secgame/inefficiency.hpp"
#include "secgame/io.hpp"
#include "secgame/prospect.hpp"
#include "secgame/quantal.hpp"
#include "secgame/spaces.hpp"
#include "secgame/sweep.hpp"
#include "secgame/version.hpp"

namespace secgame {
namespace cli_detail {

// Small result table for the one-shot commands; cells can be labels or
// numbers. Sweeps use SweepResult instead.
struct CliTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json metadata;
};

inline void write_table_csv(const CliTable& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) os << ',';
    os << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      if (row[i].is_string()) {
        os << row[i].get<std::string>();
      } else {
        os << format_float(row[i].get<double>());
      }
    }
    os << '\n';
  }
}

inline void write_table_jsonl(const CliTable& table, std::ostream& os) {
  for (const auto& row : table.rows) {
    Json line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line[table.columns[i]] = row[i];
    }
    os << line.dump() << '\n';
  }
}

inline void emit_table(const CliTable& table, const std::string& out_path,
                       OutputFormat format) {
  if (out_path.empty()) {
    if (format == OutputFormat::csv) {
      write_table_csv(table, std::cout);
    } else {
      write_table_jsonl(table, std::cout);
    }
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) {
    throw ConfigError("out", "cannot open '" + out_path + "' for writing");
  }
  if (format == OutputFormat::csv) {
    write_table_csv(table, os);
  } else {
    write_table_jsonl(table, os);
  }
  os.close();
  Json meta = table.metadata;
  meta["tool"] = "secgame";
  meta["version"] = kVersion;
  meta["generated_at"] = iso8601_utc_now();
  std::ofstream meta_os(metadata_path(out_path), std::ios::binary);
  if (!meta_os) {
    throw ConfigError("out", "cannot open '" + metadata_path(out_path) +
                                 "' for writing");
  }
  meta_os << meta.dump(2) << '\n';
}

inline void emit_sweep(const SweepResult& result, const std::string& out_path,
                       OutputFormat format) {
  if (out_path.empty()) {
    if (format == OutputFormat::csv) {
      write_csv(result, std::cout);
    } else {
      write_jsonl(result, std::cout);
    }
    return;
  }
  write_result_file(result, out_path, format);
}

inline Json load_config(const std::string& path) {
  if (path.empty()) {
    return Json::object();
  }
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("config", "cannot open '" + path + "'");
  }
  Json config;
  try {
    is >> config;
  } catch (const Json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!config.is_object()) {
    throw ConfigError("config", "expected a JSON object");
  }
  return config;
}

inline double config_number(const Json& config, const char* key, double fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_number()) throw ConfigError(key, "expected a number");
  return config[key].get<double>();
}

inline std::string config_string(const Json& config, const char* key,
                                 std::string fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_string()) throw ConfigError(key, "expected a string");
  return config[key].get<std::string>();
}

inline TableSpace parse_space_name(const std::string& name) {
  const auto space = table_space_from_string(name);
  if (!space) {
    throw ConfigError("space", "unknown builtin menu '" + name + "'");
  }
  return *space;
}

}  // namespace cli_detail

// Entry point behind the secgame binary. Exit codes: 0 success, 1
// configuration or usage problem, 2 numerical domain or precondition
// violation.
inline int run_cli(int argc, const char* const* argv) {
  using cli_detail::CliTable;

  CLI::App app{"Two-site security budget games under logit choice and "
               "probability weighting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name = "csv";
  std::uint64_t seed = 42;
  app.add_option("--config", config_path, "JSON configuration file; flags win");
  auto* out_opt =
      app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--seed", seed, "RNG seed for randomized checks");

  // qre
  auto* qre_cmd = app.add_subcommand("qre", "logit response over a builtin menu");
  qre_cmd->fallthrough();
  std::string qre_space = "C";
  double qre_loss = 1.0;
  double qre_lambda = 1.0;
  auto* qre_space_opt = qre_cmd->add_option("--space", qre_space, "menu: A, B or C");
  auto* qre_loss_opt = qre_cmd->add_option("--loss-A", qre_loss, "site-2 loss");
  auto* qre_lambda_opt =
      qre_cmd->add_option("--lambda", qre_lambda, "defender rationality");

  // optimal
  auto* optimal_cmd =
      app.add_subcommand("optimal", "loss-minimizing budget split");
  optimal_cmd->fallthrough();
  double opt_budget = kTableBudget;
  double opt_loss = 1.0;
  auto* opt_budget_opt = optimal_cmd->add_option("--R", opt_budget, "budget");
  auto* opt_loss_opt = optimal_cmd->add_option("--loss-A", opt_loss, "site-2 loss");

  // sweeps
  struct SweepFlags {
    CLI::App* cmd = nullptr;
    std::string space;
    double budget = kTableBudget;
    double loss_fixed = 1.0;
    std::vector<double> loss_values;
    std::vector<double> lambda_values;
    std::vector<double> lambda_log;
    CLI::Option* space_opt = nullptr;
    CLI::Option* budget_opt = nullptr;
    CLI::Option* loss_fixed_opt = nullptr;
    CLI::Option* loss_values_opt = nullptr;
    CLI::Option* lambda_values_opt = nullptr;
    CLI::Option* lambda_log_opt = nullptr;
  };
  const auto add_sweep_flags = [&app](const char* name, const char* help) {
    SweepFlags flags;
    flags.cmd = app.add_subcommand(name, help);
    flags.cmd->fallthrough();
    flags.space_opt = flags.cmd->add_option("--space", flags.space, "menu: A, B or C");
    flags.budget_opt = flags.cmd->add_option("--R", flags.budget, "budget");
    flags.loss_fixed_opt =
        flags.cmd->add_option("--loss-A", flags.loss_fixed, "fixed site-2 loss");
    flags.loss_values_opt = flags.cmd->add_option("--A-values", flags.loss_values,
                                                  "loss grid (comma separated)")
                                ->delimiter(',');
    flags.lambda_values_opt =
        flags.cmd
            ->add_option("--lambda-values", flags.lambda_values,
                         "rationality grid (comma separated)")
            ->delimiter(',');
    flags.lambda_log_opt = flags.cmd
                               ->add_option("--lambda-log", flags.lambda_log,
                                            "log-spaced rationality grid: min,max,count")
                               ->delimiter(',')
                               ->expected(3);
    return flags;
  };
  SweepFlags lambda_sweep_flags = add_sweep_flags(
      "sweep-lambda", "response over the menu across rationality levels");
  SweepFlags loss_sweep_flags = add_sweep_flags(
      "sweep-loss", "optimum-row probability across site-2 losses");
  SweepFlags poqa_sweep_flags = add_sweep_flags(
      "sweep-poqa", "inefficiency ratio across rationality levels and losses");

  // prelec-compare
  auto* prelec_cmd = app.add_subcommand(
      "prelec-compare", "weighting optimum versus the rational one");
  prelec_cmd->fallthrough();
  double prelec_budget = kTableBudget;
  double prelec_loss = 1.0;
  std::vector<double> prelec_alphas = {0.3, 0.5, 0.7, 0.9, 1.0};
  auto* prelec_budget_opt = prelec_cmd->add_option("--R", prelec_budget, "budget");
  auto* prelec_loss_opt =
      prelec_cmd->add_option("--loss-A", prelec_loss, "site-2 loss");
  prelec_cmd->add_option("--alphas", prelec_alphas, "weighting exponents")
      ->delimiter(',');

  // fuzz-bounds
  auto* fuzz_cmd = app.add_subcommand(
      "fuzz-bounds", "randomized checks of the proved inefficiency ceilings");
  fuzz_cmd->fallthrough();
  std::size_t fuzz_trials = 1000;
  auto* fuzz_trials_opt =
      fuzz_cmd->add_option("--trials", fuzz_trials, "trials per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Json config = cli_detail::load_config(config_path);
    const OutputFormat format = *output_format_from_string(
        config_path.empty() || out_opt->count() > 0 || !config.contains("format")
            ? format_name
            : cli_detail::config_string(config, "format", format_name));

    if (*qre_cmd) {
      if (qre_space_opt->count() == 0) {
        qre_space = cli_detail::config_string(config, "space", qre_space);
      }
      if (qre_loss_opt->count() == 0) {
        qre_loss = cli_detail::config_number(config, "A_fixed", qre_loss);
      }
      if (qre_lambda_opt->count() == 0) {
        qre_lambda = cli_detail::config_number(config, "lambda_fixed", qre_lambda);
      }
      const TableSpace space_id = cli_detail::parse_space_name(qre_space);
      const SecurityGame game = table_game(qre_loss);
      const StrategySpace space = builtin_space(space_id, qre_loss);
      const ResponseDistribution dist = defender_response(game, space, qre_lambda);

      CliTable table;
      table.columns = {"strategy", "site1", "site2", "loss", "sigma"};
      for (std::size_t i = 0; i < space.size(); ++i) {
        table.rows.push_back({space.labels()[i], space[i].r,
                              game.budget() - space[i].r, dist.losses[i],
                              dist.probabilities[i]});
      }
      table.metadata = {{"command", "qre"},
                        {"space", to_string(space_id)},
                        {"R", game.budget()},
                        {"A", qre_loss},
                        {"lambda", qre_lambda}};
      cli_detail::emit_table(table, out_path, format);
      return 0;
    }

    if (*optimal_cmd) {
      if (opt_budget_opt->count() == 0) {
        opt_budget = cli_detail::config_number(config, "R", opt_budget);
      }
      if (opt_loss_opt->count() == 0) {
        opt_loss = cli_detail::config_number(config, "A_fixed", opt_loss);
      }
      const SecurityGame game(opt_budget, opt_loss);
      const DefenseAllocation bisected = optimal_allocation(game);

      CliTable table;
      table.columns = {"method", "r_star", "site2_investment", "expected_loss"};
      table.rows.push_back({"bisection", bisected.r, game.budget() - bisected.r,
                            expected_loss(game, bisected)});
      table.metadata = {{"command", "optimal"}, {"R", opt_budget}, {"A", opt_loss}};
      try {
        const DefenseAllocation closed = optimal_allocation_closed_form(game);
        table.rows.push_back({"closed_form", closed.r, game.budget() - closed.r,
                              expected_loss(game, closed)});
      } catch (const PreconditionError& e) {
        table.metadata["closed_form_note"] = e.what();
      }
      cli_detail::emit_table(table, out_path, format);
      return 0;
    }

    const auto run_sweep_command = [&](SweepFlags& flags, SweepSpec spec) {
      if (!config.empty()) {
        if (config.contains("kind")) {
          const std::string kind_name =
              cli_detail::config_string(config, "kind", to_string(spec.kind));
          if (kind_name != to_string(spec.kind)) {
            throw ConfigError("kind", "config kind '" + kind_name +
                                          "' does not match this subcommand");
          }
        }
        Json sweep_keys = config;
        sweep_keys.erase("format");
        sweep_keys.erase("seed");
        merge_sweep_spec_json(spec, sweep_keys);
      }
      if (flags.space_opt->count() > 0) {
        spec.builtin = cli_detail::parse_space_name(flags.space);
        spec.explicit_space.clear();
      }
      if (flags.budget_opt->count() > 0) {
        spec.budget = flags.budget;
      }
      if (flags.loss_fixed_opt->count() > 0) {
        spec.loss_grid = Grid::single(flags.loss_fixed);
      }
      if (flags.loss_values_opt->count() > 0) {
        spec.loss_grid = Grid::explicit_values(flags.loss_values);
      }
      if (flags.lambda_values_opt->count() > 0) {
        spec.lambda_grid = Grid::explicit_values(flags.lambda_values);
      }
      if (flags.lambda_log_opt->count() > 0) {
        spec.lambda_grid =
            Grid::log_range(flags.lambda_log[0], flags.lambda_log[1],
                            static_cast<std::size_t>(flags.lambda_log[2]));
      }
      if (out_opt->count() > 0) {
        spec.output_path = out_path;
      }
      const SweepResult result = run_sweep(spec);
      cli_detail::emit_sweep(result, spec.output_path, format);
      return 0;
    };

    if (*lambda_sweep_flags.cmd) {
      return run_sweep_command(lambda_sweep_flags, default_lambda_sweep());
    }
    if (*loss_sweep_flags.cmd) {
      return run_sweep_command(loss_sweep_flags, default_loss_sweep());
    }
    if (*poqa_sweep_flags.cmd) {
      return run_sweep_command(poqa_sweep_flags, default_poqa_sweep());
    }

    if (*prelec_cmd) {
      if (prelec_budget_opt->count() == 0) {
        prelec_budget = cli_detail::config_number(config, "R", prelec_budget);
      }
      if (prelec_loss_opt->count() == 0) {
        prelec_loss = cli_detail::config_number(config, "A_fixed", prelec_loss);
      }
      const SecurityGame game(prelec_budget, prelec_loss);
      const DefenseAllocation rational = optimal_allocation(game);

      CliTable table;
      table.columns = {"alpha", "r_hat", "r_star", "theorem_case", "pobw",
                       "pobw_bound"};
      for (double alpha : prelec_alphas) {
        const DefenseAllocation behavioral = behavioral_optimal(game, alpha);
        const std::string case_name =
            alpha < 1.0 ? to_string(theorem_case(game, alpha)) : "identity";
        const InefficiencyReport report = pobw(game, alpha);
        table.rows.push_back(
            {alpha, behavioral.r, rational.r, case_name, report.value,
             report.bound ? Json(*report.bound)
                          : Json(std::numeric_limits<double>::quiet_NaN())});
      }
      table.metadata = {{"command", "prelec-compare"},
                        {"R", prelec_budget},
                        {"A", prelec_loss}};
      cli_detail::emit_table(table, out_path, format);
      return 0;
    }

    if (*fuzz_cmd) {
      if (fuzz_trials_opt->count() == 0 && config.contains("trials")) {
        fuzz_trials = static_cast<std::size_t>(
            cli_detail::config_number(config, "trials", 1000.0));
      }
      const BoundFuzzReport poqa_report = fuzz_poqa_bound(seed, fuzz_trials);
      const BoundFuzzReport pobw_report = fuzz_pobw_bound(seed + 1, fuzz_trials);

      CliTable table;
      table.columns = {"check", "trials", "violations"};
      table.rows.push_back({"poqa_bound", static_cast<double>(poqa_report.trials),
                            static_cast<double>(poqa_report.violations)});
      table.rows.push_back({"pobw_bound", static_cast<double>(pobw_report.trials),
                            static_cast<double>(pobw_report.violations)});
      table.metadata = {{"command", "fuzz-bounds"}, {"seed", seed}};
      cli_detail::emit_table(table, out_path, format);
      for (const auto& line : poqa_report.details) std::cerr << line << '\n';
      for (const auto& line : pobw_report.details) std::cerr << line << '\n';
      return (poqa_report.ok() && pobw_report.ok()) ? 0 : 1;
    }

    throw ConfigError("command", "no subcommand handled");
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace secgame
