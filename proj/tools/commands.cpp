#include "commands.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eepc/delayqos.hpp"
#include "eepc/errors.hpp"
#include "eepc/experiments.hpp"
#include "eepc/scenario.hpp"
#include "table.hpp"

namespace eepc::cli {

namespace {

struct CommonFlags {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  long max_iters = 100000;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Base seed (trial i uses seed + i)");
  cmd->add_option("--tol", flags.tol, "Convergence tolerance relative to P_max")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", flags.max_iters, "Maximum best-response sweeps")->check(CLI::PositiveNumber);
  cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", flags.out, "Output file (default: stdout)");
}

IterateOptions iterate_options(const CommonFlags& flags) {
  IterateOptions o;
  o.tol = flags.tol;
  o.max_iters = flags.max_iters;
  return o;
}

// "a:b:s" with finite values and s > 0.
struct Range {
  double start = 0, stop = 0, step = 0;
};

Range parse_range(const std::string& text, const std::string& flag) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  if (!(in >> r.start >> c1 >> r.stop >> c2 >> r.step) || c1 != ':' || c2 != ':' || !in.eof()) {
    // A single value is a one-point range.
    std::istringstream single(text);
    single.imbue(std::locale::classic());
    double v = 0;
    if (single >> v && single.eof()) return {v, v, 1.0};
    throw ConfigError(flag + ": expected start:stop:step, got '" + text + "'");
  }
  if (!std::isfinite(r.start) || !std::isfinite(r.stop) || !std::isfinite(r.step) || !(r.step > 0) ||
      r.stop < r.start) {
    throw ConfigError(flag + ": range must be finite with start <= stop and step > 0");
  }
  return r;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double v = 0;
  if (!(in >> v) || !in.eof() || !std::isfinite(v)) throw ConfigError(flag + ": bad number '" + text + "'");
  return v;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void emit(const Table& table, const CommonFlags& flags, std::ostream& out) {
  Output sink(flags.out, out);
  if (flags.format == "json") {
    table.write_json(sink.stream());
  } else {
    table.write_csv(sink.stream());
  }
}

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-efficient power-control games for uplink CDMA"};
  app.name(args.empty() ? "eepc" : args.front());
  app.require_subcommand(1);

  // gamma-star
  CommonFlags gs_flags;
  std::string gs_form = "exp-m";
  int gs_packet = 100;
  std::string gs_table;
  auto* gs = app.add_subcommand("gamma-star", "Utility-maximizing SIR of an efficiency function");
  gs->add_option("--efficiency", gs_form, "Efficiency function form")->check(CLI::IsMember({"exp-m", "tabulated"}));
  gs->add_option("--packet-size", gs_packet, "Packet size M in bits")->check(CLI::PositiveNumber);
  gs->add_option("--table", gs_table, "JSON file {\"gammas\": [...], \"values\": [...]} for the tabulated form");
  add_common(gs, gs_flags);

  // equilibrium
  CommonFlags eq_flags;
  std::string eq_config, eq_receiver = "mf", eq_objective = "bpj", eq_schedule = "gauss-seidel";
  int eq_verify = 101;
  auto* eq = app.add_subcommand("equilibrium", "Best-response equilibrium of a scenario");
  eq->add_option("--config", eq_config, "Scenario JSON file")->required();
  eq->add_option("--receiver", eq_receiver, "mf (1/N model), mf-corr, de or mmse")
      ->check(CLI::IsMember({"mf", "mf-corr", "de", "mmse"}));
  eq->add_option("--objective", eq_objective, "Objective")
      ->check(CLI::IsMember({"bpj", "priced", "log-priced", "sir-cost"}));
  eq->add_option("--schedule", eq_schedule, "Update schedule")->check(CLI::IsMember({"gauss-seidel", "jacobi"}));
  eq->add_option("--verify-grid", eq_verify, "Deviation grid size for the Nash check (0 disables)");
  add_common(eq, eq_flags);

  // sweep-load
  CommonFlags sl_flags;
  std::string sl_alpha = "0.05:1.5:0.05", sl_receivers = "mf,de,mmse", sl_antennas = "1,2";
  SweepLoadConfig sl_config;
  auto* sl = app.add_subcommand("sweep-load", "Equilibrium utility versus load per receiver and antenna count");
  sl->add_option("--alpha", sl_alpha, "Load range start:stop:step");
  sl->add_option("--receivers", sl_receivers, "Comma-separated receivers");
  sl->add_option("--antennas", sl_antennas, "Comma-separated receive antenna counts");
  sl->add_option("--trials", sl_config.trials, "Finite-system Monte Carlo trials per point")->check(CLI::NonNegativeNumber);
  sl->add_option("--gain", sl_config.processing_gain, "Processing gain N")->check(CLI::PositiveNumber);
  sl->add_option("--packet-size", sl_config.packet_size_bits, "Packet size M in bits")->check(CLI::PositiveNumber);
  sl->add_option("--distance", sl_config.distance_m, "User distance in meters")->check(CLI::PositiveNumber);
  add_common(sl, sl_flags);

  // multicarrier
  CommonFlags mc_flags;
  std::string mc_users = "2:40:2";
  MulticarrierConfig mc_config;
  auto* mc = app.add_subcommand("multicarrier", "Joint versus per-carrier total utility");
  mc->add_option("--users", mc_users, "User-count range start:stop:step");
  mc->add_option("--carriers", mc_config.carriers, "Number of carriers D")->check(CLI::PositiveNumber);
  mc->add_option("--gain", mc_config.processing_gain, "Processing gain N per carrier")->check(CLI::PositiveNumber);
  mc->add_option("--trials", mc_config.trials, "Trials per user count")->check(CLI::PositiveNumber);
  mc->add_option("--packet-size", mc_config.packet_size_bits, "Packet size M in bits")->check(CLI::PositiveNumber);
  add_common(mc, mc_flags);

  // delay-qos
  CommonFlags dq_flags;
  std::string dq_rates = "10,50,100", dq_delay = "1e4:1e7:13";
  DelayQosConfig dq_config;
  auto* dq = app.add_subcommand("delay-qos", "User size, capacity, rate and goodput versus normalized delay");
  dq->add_option("--source-rates", dq_rates, "Comma-separated packet arrival rates (packets/s)");
  dq->add_option("--delay-range", dq_delay, "Normalized delay D*B as start:stop:points (log-spaced)");
  dq->add_option("--bandwidth", dq_config.bandwidth_hz, "System bandwidth B in Hz")->check(CLI::PositiveNumber);
  dq->add_option("--packet-size", dq_config.packet_size_bits, "Packet size M in bits")->check(CLI::PositiveNumber);
  add_common(dq, dq_flags);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (gs->parsed()) {
      EfficiencyModel model = EfficiencyModel::exp_m(gs_packet);
      if (gs_form == "tabulated") {
        if (gs_table.empty()) throw ConfigError("--table is required for the tabulated form");
        std::ifstream in(gs_table);
        if (!in) throw ConfigError("cannot open table file '" + gs_table + "'");
        nlohmann::json t;
        try {
          in >> t;
          model = EfficiencyModel::tabulated(t.at("gammas").get<std::vector<double>>(),
                                             t.at("values").get<std::vector<double>>(), gs_packet);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(std::string("table: ") + e.what());
        }
      }
      const double g = gamma_star(model);
      Table table{{"efficiency", "packet_size_bits", "gamma_star", "gamma_star_db", "f_gamma_star"}, {}};
      table.add({gs_form, std::int64_t{gs_packet}, g, to_db(g), model.eval(g)});
      emit(table, gs_flags, out);
      return kOk;
    }

    if (eq->parsed()) {
      const Scenario scenario = load_scenario(eq_config);
      IterateOptions options = iterate_options(eq_flags);
      options.schedule = eq_schedule == "jacobi" ? Schedule::Jacobi : Schedule::GaussSeidel;
      const EquilibriumRun run = run_equilibrium(scenario, eq_receiver, eq_objective, options, eq_verify);
      const auto& state = run.report.state;
      const std::string status(to_string(run.report.status));
      Output sink(eq_flags.out, out);
      if (eq_flags.format == "json") {
        nlohmann::ordered_json doc;
        doc["status"] = status;
        doc["iterations"] = run.report.iterations;
        doc["receiver"] = run.receiver;
        doc["objective"] = run.objective;
        if (eq_verify > 0) {
          doc["ne_verified"] = run.report.ne_verified;
          doc["worst_deviation_gain"] = run.report.worst_deviation_gain;
        }
        doc["users"] = nlohmann::ordered_json::array();
        for (Eigen::Index k = 0; k < state.powers.rows(); ++k) {
          nlohmann::ordered_json u;
          u["user_id"] = scenario.users[static_cast<std::size_t>(k)].id;
          u["power_w"] = state.powers(k, 0);
          u["sir"] = state.sirs(k, 0);
          u["sir_db"] = to_db(state.sirs(k, 0));
          u["utility_bpj"] = state.efficiencies(k);
          doc["users"].push_back(std::move(u));
        }
        sink.stream() << doc.dump(2) << '\n';
      } else {
        Table table{{"user_id", "power_w", "sir", "sir_db", "utility_bpj", "status"}, {}};
        for (Eigen::Index k = 0; k < state.powers.rows(); ++k) {
          table.add({std::int64_t{scenario.users[static_cast<std::size_t>(k)].id}, state.powers(k, 0),
                     state.sirs(k, 0), to_db(state.sirs(k, 0)), state.efficiencies(k), status});
        }
        table.write_csv(sink.stream());
      }
      return kOk;
    }

    if (sl->parsed()) {
      const Range r = parse_range(sl_alpha, "--alpha");
      sl_config.alpha_start = r.start;
      sl_config.alpha_stop = r.stop;
      sl_config.alpha_step = r.step;
      sl_config.receivers.clear();
      for (const auto& name : split(sl_receivers)) sl_config.receivers.push_back(parse_receiver(name));
      sl_config.antennas.clear();
      for (const auto& a : split(sl_antennas)) {
        const double m = parse_number(a, "--antennas");
        if (m < 1 || m != std::floor(m)) throw ConfigError("--antennas: expected positive integers");
        sl_config.antennas.push_back(static_cast<int>(m));
      }
      if (sl_config.receivers.empty() || sl_config.antennas.empty()) {
        throw ConfigError("--receivers and --antennas must be nonempty");
      }
      sl_config.base_seed = sl_flags.seed;
      sl_config.iterate = iterate_options(sl_flags);
      Table table{{"alpha", "receiver", "antennas", "users", "utility_large_system", "utility_finite_mc_mean",
                   "utility_finite_mc_stderr", "converged_trials", "trials", "status"},
                  {}};
      for (const auto& row : sweep_load(sl_config)) {
        table.add({row.alpha, std::string(to_string(row.receiver)), std::int64_t{row.antennas},
                   std::int64_t{row.users}, row.utility_large_system, row.utility_finite_mean,
                   row.utility_finite_stderr, std::int64_t{row.converged_trials}, std::int64_t{row.trials},
                   std::string(row.feasible ? "ok" : "infeasible")});
      }
      emit(table, sl_flags, out);
      return kOk;
    }

    if (mc->parsed()) {
      const Range r = parse_range(mc_users, "--users");
      if (r.start < 1 || r.start != std::floor(r.start) || r.step != std::floor(r.step)) {
        throw ConfigError("--users: expected integer start:stop:step with start >= 1");
      }
      mc_config.users_start = static_cast<int>(r.start);
      mc_config.users_stop = static_cast<int>(r.stop);
      mc_config.users_step = static_cast<int>(r.step);
      mc_config.base_seed = mc_flags.seed;
      mc_config.iterate = iterate_options(mc_flags);
      std::vector<std::string> columns{"K", "trial", "total_utility_joint", "total_utility_independent", "converged",
                                       "status"};
      for (int l = 0; l < mc_config.carriers; ++l) columns.push_back("users_on_carrier_" + std::to_string(l + 1));
      Table table{columns, {}};
      for (const auto& row : multicarrier_table(mc_config)) {
        std::vector<Cell> cells{std::int64_t{row.users},
                                std::int64_t{row.trial},
                                row.total_utility_joint,
                                row.total_utility_independent,
                                std::int64_t{row.converged ? 1 : 0},
                                std::string(to_string(row.status))};
        for (int count : row.carrier_counts) cells.emplace_back(std::int64_t{count});
        table.add(std::move(cells));
      }
      emit(table, mc_flags, out);
      return kOk;
    }

    if (dq->parsed()) {
      dq_config.source_rates_pps.clear();
      for (const auto& v : split(dq_rates)) {
        const double rate = parse_number(v, "--source-rates");
        if (!(rate > 0)) throw ConfigError("--source-rates: rates must be positive");
        dq_config.source_rates_pps.push_back(rate);
      }
      if (dq_config.source_rates_pps.empty()) throw ConfigError("--source-rates must be nonempty");
      const Range r = parse_range(dq_delay, "--delay-range");
      if (!(r.start > 0) || r.step != std::floor(r.step)) {
        throw ConfigError("--delay-range: expected start:stop:points with start > 0");
      }
      dq_config.delay_start = r.start;
      dq_config.delay_stop = r.stop;
      dq_config.delay_points = static_cast<int>(r.step);
      Table table{{"normalized_delay", "source_rate_pps", "size_phi", "capacity_K", "omega_over_B",
                   "total_goodput_over_B"},
                  {}};
      for (const auto& row : delay_qos_table(dq_config)) {
        table.add({row.normalized_delay, row.source_rate_pps, row.size_phi, std::int64_t{row.capacity_k},
                   row.omega_over_b, row.total_goodput_over_b});
      }
      emit(table, dq_flags, out);
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NoInteriorMaximizer& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kConfigError;
}

}  // namespace eepc::cli
