#include "hostembed/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hostembed/achievability.hpp"
#include "hostembed/errors.hpp"
#include "hostembed/lower_bounds.hpp"
#include "hostembed/mc.hpp"
#include "hostembed/sweep.hpp"
#include "hostembed/weighted_cost.hpp"

namespace hostembed::cli {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; divergent values are rendered as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

struct Flags {
  double sigma2 = 1.0;
  double power = 0.0;
  double rate = 0.0;
  double k2 = 1.0;
  double mmse = 0.5;
  std::string variant = "full";
  std::string format = "json";
  std::string out;
  std::size_t workers = 1;

  std::string quantity = "cost_ratio_new";
  std::string axis1;
  std::string axis2;

  std::string strategy = "linear";
  double gain = 0.0;
  double step = 1.0;
  std::optional<double> alpha;
  double beta = 0.0;
  std::optional<double> rate_t;
  std::size_t m = 1;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
};

void add_format(CLI::App* sub, Flags& f) {
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& values) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, keys, values);
      continue;
    }
    keys.push_back(name);
    if (value.is_number_float()) {
      values.push_back(format_number(value.get<double>()));
    } else if (value.is_string()) {
      values.push_back(value.get<std::string>());
    } else if (value.is_null()) {
      values.push_back("");
    } else {
      values.push_back(value.dump());
    }
  }
}

void write_json_or_csv(const Json& j, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << j.dump(2) << '\n';
    return;
  }
  std::vector<std::string> keys, values;
  flatten(j, "", keys, values);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << '\n';
}

Json lower_bound(const Flags& f) {
  const auto variant = parse_bound_variant(f.variant);
  if (!variant) throw ValidationError("unknown bound variant '" + f.variant + "'");
  const ProblemParams params = make_params(f.sigma2, f.power, f.rate);
  require_feasible(params);
  const BoundResult r = mmse_lower(params, *variant);
  Json j;
  j["command"] = "lower-bound";
  j["inputs"] = {{"sigma2", f.sigma2}, {"power", f.power}, {"rate", f.rate}, {"variant", f.variant}};
  j["value"] = number(r.value);
  j["witness_sigma_xv"] = number(r.witness_sigma_xv);
  j["witness_gamma"] = r.witness_gamma ? number(*r.witness_gamma) : Json(nullptr);
  return j;
}

Json upper_bound(const Flags& f) {
  const AchievablePoint r = mmse_upper_numeric(make_params(f.sigma2, f.power, f.rate));
  Json j;
  j["command"] = "upper-bound";
  j["inputs"] = {{"sigma2", f.sigma2}, {"power", f.power}, {"rate", f.rate}};
  j["value"] = number(r.mmse);
  j["achieved_rate"] = number(r.rate);
  j["alpha"] = r.strategy.alpha;
  j["beta"] = r.strategy.beta;
  j["strategy"] = std::string(to_string(r.variant));
  return j;
}

Json rate_perfect(const Flags& f) {
  make_params(f.sigma2, f.power, 0.0);
  const RateWitness r = perfect_rate_r0_detail(f.sigma2, f.power);
  Json j;
  j["command"] = "rate-perfect";
  j["inputs"] = {{"sigma2", f.sigma2}, {"power", f.power}};
  j["value"] = number(r.rate);
  j["witness_sigma_xv"] = number(r.witness);
  return j;
}

Json min_power(const Flags& f) {
  make_params(f.sigma2, 0.0, f.rate);
  Json j;
  j["command"] = "min-power";
  j["inputs"] = {{"sigma2", f.sigma2}, {"rate", f.rate}};
  j["value"] = number(min_power_for_perfect(f.sigma2, f.rate));
  return j;
}

Json weighted_cost(const Flags& f) {
  const WeightedCostParams params = make_cost_params(f.k2, f.sigma2, f.rate);
  const CostSandwich s = cost_sandwich(params);
  Json j;
  j["command"] = "weighted-cost";
  j["inputs"] = {{"k2", f.k2}, {"sigma2", f.sigma2}, {"rate", f.rate}};
  j["lower"] = number(s.j_lb);
  j["upper_numeric"] = number(s.j_ub_numeric);
  j["upper_analytical"] = number(s.j_ub_analytical);
  j["ratio"] = number(s.ratio);
  j["ratio_analytical"] = number(s.ratio_analytical);
  j["p_star_lower"] = number(s.p_star_lb);
  j["p_star_upper"] = number(s.p_star_ub);
  j["region"] = std::string(to_string(s.region.region));
  j["certificate"] = number(s.region.certificate);
  j["kappa"] = number(s.region.kappa);
  j["p_star_loosened"] = number(s.p_star_loosened);
  j["region_full"] = s.region_full ? Json(std::string(to_string(s.region_full->region))) : Json(nullptr);
  return j;
}

int sweep(const Flags& f, std::ostream& out) {
  const auto quantity = parse_quantity(f.quantity);
  if (!quantity) throw ValidationError("unknown quantity '" + f.quantity + "'");
  SweepSpec spec;
  spec.quantity = *quantity;
  spec.axis1 = parse_axis(f.axis1);
  spec.axis2 = parse_axis(f.axis2);
  spec.fixed = {f.k2, f.sigma2, f.power, f.rate, f.mmse};
  spec.validate();
  const SweepResult result = run_sweep(spec, f.workers);
  if (!f.out.empty()) emit_csv(result, f.out);
  if (f.format == "csv" && f.out.empty()) {
    emit_csv(result, out);
    return kOk;
  }
  Json j;
  j["command"] = "sweep";
  j["inputs"] = {{"quantity", f.quantity},      {"axis1", format_axis(spec.axis1)},
                 {"axis2", format_axis(spec.axis2)}, {"rate", f.rate},
                 {"sigma2", f.sigma2},           {"k2", f.k2},
                 {"power", f.power},             {"mmse", f.mmse},
                 {"workers", f.workers},         {"out", f.out}};
  j["max_value"] = number(result.max_value);
  j["argmax_axis1"] = number(result.argmax_axis1);
  j["argmax_axis2"] = number(result.argmax_axis2);
  j["cells"] = result.rows.size();
  write_json_or_csv(j, f.format, out);
  return kOk;
}

int simulate(const Flags& f, std::ostream& out) {
  mc::TrialConfig config;
  config.seed = f.seed;
  config.blocklength = f.m;
  config.trials = f.trials;
  config.params = make_params(f.sigma2, f.power, f.rate);
  config.workers = f.workers;

  Json inputs = {{"strategy", f.strategy}, {"sigma2", f.sigma2}, {"power", f.power},
                 {"rate", f.rate},         {"m", f.m},           {"trials", f.trials},
                 {"seed", f.seed},         {"workers", f.workers}};
  mc::TrialStats stats;
  if (f.strategy == "linear") {
    inputs["gain"] = f.gain;
    stats = mc::simulate_linear(config, f.gain);
  } else if (f.strategy == "quantizer") {
    inputs["step"] = f.step;
    stats = mc::simulate_quantizer(config, f.step);
  } else if (f.strategy == "dpc") {
    if (!f.rate_t) throw ValidationError("--rate-t is required for the dpc strategy");
    const double p_dpc = f.power - f.beta * f.beta * f.sigma2;
    const double alpha = f.alpha.value_or(p_dpc / (p_dpc + 1.0));
    inputs["alpha"] = alpha;
    inputs["beta"] = f.beta;
    inputs["rate-t"] = *f.rate_t;
    stats = mc::simulate_dpc_smallm(config, make_strategy(alpha, f.beta, f.sigma2, f.power), *f.rate_t);
  } else {
    throw ValidationError("unknown strategy '" + f.strategy + "'");
  }
  if (!f.out.empty()) {
    inputs["out"] = f.out;
    std::ofstream file(f.out);
    if (!file) throw IoError("cannot open '" + f.out + "' for writing");
    mc::write_csv(stats, file);
    if (!file) throw IoError("failed writing '" + f.out + "'");
  }
  if (f.format == "csv" && f.out.empty()) {
    mc::write_csv(stats, out);
    return kOk;
  }
  Json j;
  j["command"] = "simulate";
  j["inputs"] = inputs;
  j["mean_power"] = number(stats.mean_power);
  j["mean_power_stderr"] = number(stats.mean_power_stderr);
  j["mean_mmse"] = number(stats.mean_mmse);
  j["mean_mmse_stderr"] = number(stats.mean_mmse_stderr);
  j["decode_error_rate"] = number(stats.decode_error_rate);
  j["decode_error_stderr"] = number(stats.decode_error_stderr);
  j["message_error_rate"] = number(stats.message_error_rate);
  j["message_error_stderr"] = number(stats.message_error_stderr);
  j["max_message_power"] = number(stats.max_message_power);
  j["lower_bound_at_mean_power"] =
      number(mmse_lower_full(make_params(f.sigma2, stats.mean_power, 0.0)).value);
  j["notes"] = stats.notes;
  write_json_or_csv(j, f.format, out);
  return kOk;
}

int dispatch(CLI::App& app, const Flags& f, std::ostream& out) {
  auto json_command = [&](const Json& j) {
    write_json_or_csv(j, f.format, out);
    return kOk;
  };
  if (app.got_subcommand("lower-bound")) return json_command(lower_bound(f));
  if (app.got_subcommand("upper-bound")) return json_command(upper_bound(f));
  if (app.got_subcommand("rate-perfect")) return json_command(rate_perfect(f));
  if (app.got_subcommand("min-power")) return json_command(min_power(f));
  if (app.got_subcommand("weighted-cost")) return json_command(weighted_cost(f));
  if (app.got_subcommand("sweep")) return sweep(f, out);
  return simulate(f, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Bounds and simulations for Gaussian information embedding", "hostembed"};
  app.require_subcommand(1);

  auto* lb = app.add_subcommand("lower-bound", "Converse bound on the reconstruction MMSE");
  lb->add_option("--sigma2", f.sigma2, "Host variance");
  lb->add_option("--power", f.power, "Power budget")->required();
  lb->add_option("--rate", f.rate, "Message rate in bits per use");
  lb->add_option("--variant", f.variant, "full, loosened, legacy or gamma_one");
  add_format(lb, f);

  auto* ub = app.add_subcommand("upper-bound", "Achievable MMSE of linear + dirty-paper strategies");
  ub->add_option("--sigma2", f.sigma2, "Host variance");
  ub->add_option("--power", f.power, "Power budget")->required();
  ub->add_option("--rate", f.rate, "Message rate in bits per use");
  add_format(ub, f);

  auto* rp = app.add_subcommand("rate-perfect", "Largest rate with perfect host recovery");
  rp->add_option("--sigma2", f.sigma2, "Host variance");
  rp->add_option("--power", f.power, "Power budget")->required();
  add_format(rp, f);

  auto* mp = app.add_subcommand("min-power", "Least power for perfect host recovery at a rate");
  mp->add_option("--sigma2", f.sigma2, "Host variance");
  mp->add_option("--rate", f.rate, "Message rate in bits per use");
  add_format(mp, f);

  auto* wc = app.add_subcommand("weighted-cost", "Bounds on k^2 P + MMSE");
  wc->add_option("--k2", f.k2, "Power weight k^2");
  wc->add_option("--sigma2", f.sigma2, "Host variance");
  wc->add_option("--rate", f.rate, "Message rate in bits per use");
  add_format(wc, f);

  auto* sw = app.add_subcommand("sweep", "Ratio of upper to lower bound over a 2-D grid");
  sw->add_option("--quantity", f.quantity,
                 "cost_ratio_new, cost_ratio_legacy, mmse_ratio_new, mmse_ratio_legacy or power_ratio");
  sw->add_option("--axis1", f.axis1, "name:lo:hi:count[:log10|:linear]")->required();
  sw->add_option("--axis2", f.axis2, "name:lo:hi:count[:log10|:linear]")->required();
  sw->add_option("--rate", f.rate, "Message rate in bits per use");
  sw->add_option("--sigma2", f.sigma2, "Host variance when not on an axis");
  sw->add_option("--k2", f.k2, "Power weight when not on an axis");
  sw->add_option("--power", f.power, "Power budget when not on an axis");
  sw->add_option("--mmse", f.mmse, "Target MMSE as a fraction of sigma^2/(sigma^2+1)");
  sw->add_option("--out", f.out, "CSV destination");
  sw->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  add_format(sw, f);

  auto* sim = app.add_subcommand("simulate", "Finite-blocklength Monte Carlo of a strategy");
  sim->add_option("--strategy", f.strategy, "linear, quantizer or dpc");
  sim->add_option("--sigma2", f.sigma2, "Host variance");
  sim->add_option("--power", f.power, "Power budget");
  sim->add_option("--rate", f.rate, "Message rate in bits per use");
  sim->add_option("--gain", f.gain, "Linear strategy: fraction of the host cancelled");
  sim->add_option("--step", f.step, "Quantizer step");
  sim->add_option("--alpha", f.alpha, "DPC mixing coefficient (default: Costa's)");
  sim->add_option("--beta", f.beta, "DPC linear pre-cancellation");
  sim->add_option("--rate-t", f.rate_t, "DPC codebook rate");
  sim->add_option("--m", f.m, "Blocklength");
  sim->add_option("--trials", f.trials, "Number of trials");
  sim->add_option("--seed", f.seed, "Random seed");
  sim->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--out", f.out, "CSV destination");
  add_format(sim, f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidation;
  }

  try {
    return dispatch(app, f, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace hostembed::cli
