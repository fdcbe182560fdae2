// Command-line front end: evaluate, indices, weights, sweep, compare, ingest.
// Structured output goes to stdout (or -o); diagnostics to stderr.
// Exit codes: 0 success, 1 input/validation error, 2 numeric failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "osw/dominance.hpp"
#include "osw/errors.hpp"
#include "osw/indices.hpp"
#include "osw/io.hpp"
#include "osw/reports.hpp"
#include "osw/welfare.hpp"

namespace {

double parse_theta(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw osw::InvalidInput("cannot parse theta \"" + text + "\" (number >= 0 or \"inf\")");
  }
  if (consumed != text.size() || std::isnan(value) || value < 0.0)
    throw osw::InvalidInput("cannot parse theta \"" + text + "\" (number >= 0 or \"inf\")");
  return value;
}

osw::UtilitySpec parse_utility(const std::string& text, double theta) {
  if (text == "log") return osw::UtilitySpec::log_utility();
  if (text.rfind("power:", 0) == 0) {
    const std::string sigma_text = text.substr(6);
    std::size_t consumed = 0;
    double sigma = 0.0;
    try {
      sigma = std::stod(sigma_text, &consumed);
    } catch (const std::exception&) {
      throw osw::InvalidInput("cannot parse power utility \"" + text + "\"");
    }
    if (consumed != sigma_text.size())
      throw osw::InvalidInput("cannot parse power utility \"" + text + "\"");
    if (theta > 0.0)
      std::cerr << "note: power utility with theta > 0 is not scale invariant; "
                   "scale-invariance guarantees hold for log utility only\n";
    return osw::UtilitySpec::power(sigma);
  }
  throw osw::InvalidInput("unknown utility \"" + text + "\" (use \"log\" or \"power:<sigma>\")");
}

osw::io::Binning parse_binning(const std::string& text) {
  if (text == "exact") return osw::io::Binning::exact();
  if (text.rfind("quantile:", 0) == 0) {
    const std::string count_text = text.substr(9);
    std::size_t consumed = 0;
    int k = 0;
    try {
      k = std::stoi(count_text, &consumed);
    } catch (const std::exception&) {
      throw osw::InvalidInput("cannot parse binning \"" + text + "\"");
    }
    if (consumed != count_text.size())
      throw osw::InvalidInput("cannot parse binning \"" + text + "\"");
    return osw::io::Binning::quantile(k);
  }
  throw osw::InvalidInput("unknown binning \"" + text + "\" (use \"exact\" or \"quantile:<k>\")");
}

void write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw osw::InvalidInput("cannot open \"" + out_path + "\" for writing");
  out << payload;
  if (!out) throw osw::InvalidInput("failed writing \"" + out_path + "\"");
}

struct CommonOptions {
  std::string society_path;
  std::string utility = "log";
  std::string theta = "0";
  std::string output;
  std::string format;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunity-sensitive social welfare toolkit"};
  app.require_subcommand(1);

  CommonOptions eval_opt, indices_opt, weights_opt, sweep_opt;
  int sweep_grid = 101;

  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "Welfare, EDEI, normative weights, and the efficiency/IOp split");
  cmd_evaluate->add_option("society", eval_opt.society_path, "Society JSON file")->required();
  cmd_evaluate->add_option("--utility", eval_opt.utility, "log or power:<sigma>");
  cmd_evaluate->add_option("--theta", eval_opt.theta, "Aversion parameter (>= 0 or \"inf\")");
  cmd_evaluate->add_option("-o,--output", eval_opt.output, "Output file (default stdout)");

  auto* cmd_indices =
      app.add_subcommand("indices", "Overall, social-risks, and opportunity inequality indices");
  cmd_indices->add_option("society", indices_opt.society_path, "Society JSON file")->required();
  cmd_indices->add_option("--utility", indices_opt.utility, "log or power:<sigma>");
  cmd_indices->add_option("--theta", indices_opt.theta, "Aversion parameter (>= 0 or \"inf\")");
  cmd_indices->add_option("--format", indices_opt.format, "json (default) or csv");
  cmd_indices->add_option("-o,--output", indices_opt.output, "Output file (default stdout)");

  auto* cmd_weights = app.add_subcommand("weights", "Normative type weights");
  cmd_weights->add_option("society", weights_opt.society_path, "Society JSON file")->required();
  cmd_weights->add_option("--utility", weights_opt.utility, "log or power:<sigma>");
  cmd_weights->add_option("--theta", weights_opt.theta, "Aversion parameter (>= 0 or \"inf\")");
  cmd_weights->add_option("--format", weights_opt.format, "json (default) or csv");
  cmd_weights->add_option("-o,--output", weights_opt.output, "Output file (default stdout)");

  auto* cmd_sweep =
      app.add_subcommand("sweep", "Welfare and indices over the rho = exp(-theta) grid in [0, 1]");
  cmd_sweep->add_option("society", sweep_opt.society_path, "Society JSON file")->required();
  cmd_sweep->add_option("--utility", sweep_opt.utility, "log or power:<sigma>");
  cmd_sweep->add_option("--grid", sweep_grid, "Number of rho grid points")->check(CLI::Range(2, 1000000));
  cmd_sweep->add_option("--format", sweep_opt.format, "csv (default) or json");
  cmd_sweep->add_option("-o,--output", sweep_opt.output, "Output file (default stdout)");

  std::string compare_a, compare_b, compare_utility = "log", compare_output, compare_format;
  int compare_grid = 101;
  auto* cmd_compare =
      app.add_subcommand("compare", "Opportunity stochastic dominance verdict between two societies");
  cmd_compare->add_option("societyA", compare_a, "Society JSON file")->required();
  cmd_compare->add_option("societyB", compare_b, "Society JSON file")->required();
  cmd_compare->add_option("--utility", compare_utility, "log or power:<sigma>");
  cmd_compare->add_option("--grid", compare_grid, "Number of rho grid points")->check(CLI::Range(2, 1000000));
  cmd_compare->add_option("--format", compare_format, "json (default) or csv");
  cmd_compare->add_option("-o,--output", compare_output, "Output file (default stdout)");

  std::string ingest_csv_path, ingest_binning = "exact", ingest_output;
  auto* cmd_ingest = app.add_subcommand("ingest", "Build a society file from micro-data CSV");
  cmd_ingest->add_option("csv", ingest_csv_path, "Micro-data CSV (type,income[,weight])")->required();
  cmd_ingest->add_option("--binning", ingest_binning, "exact or quantile:<k>");
  cmd_ingest->add_option("-o,--output", ingest_output, "Society JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_evaluate->parsed()) {
      osw::WelfareParams params;
      params.theta = parse_theta(eval_opt.theta);
      const osw::UtilitySpec u = parse_utility(eval_opt.utility, params.theta);
      const osw::Society society = osw::io::load_society(eval_opt.society_path);
      write_output(osw::io::to_json(osw::evaluate_report(society, u, params)), eval_opt.output);
    } else if (cmd_indices->parsed()) {
      osw::WelfareParams params;
      params.theta = parse_theta(indices_opt.theta);
      const osw::UtilitySpec u = parse_utility(indices_opt.utility, params.theta);
      const osw::Society society = osw::io::load_society(indices_opt.society_path);
      const osw::InequalityReport report = osw::inequality_report(society, u, params);
      if (indices_opt.format == "csv")
        write_output(osw::io::to_csv(report), indices_opt.output);
      else if (indices_opt.format.empty() || indices_opt.format == "json")
        write_output(osw::io::to_json(report), indices_opt.output);
      else
        throw osw::InvalidInput("unknown format \"" + indices_opt.format + "\"");
    } else if (cmd_weights->parsed()) {
      osw::WelfareParams params;
      params.theta = parse_theta(weights_opt.theta);
      const osw::UtilitySpec u = parse_utility(weights_opt.utility, params.theta);
      const osw::Society society = osw::io::load_society(weights_opt.society_path);
      const osw::WeightsReport report = osw::weights_report(society, u, params);
      if (weights_opt.format == "csv")
        write_output(osw::io::to_csv(report), weights_opt.output);
      else if (weights_opt.format.empty() || weights_opt.format == "json")
        write_output(osw::io::to_json(report), weights_opt.output);
      else
        throw osw::InvalidInput("unknown format \"" + weights_opt.format + "\"");
    } else if (cmd_sweep->parsed()) {
      const osw::UtilitySpec u = parse_utility(sweep_opt.utility, 1.0);
      const osw::Society society = osw::io::load_society(sweep_opt.society_path);
      const std::vector<osw::SweepRow> rows = osw::sweep(society, u, sweep_grid);
      if (sweep_opt.format == "json")
        write_output(osw::io::to_json(rows), sweep_opt.output);
      else if (sweep_opt.format.empty() || sweep_opt.format == "csv")
        write_output(osw::io::to_csv(rows), sweep_opt.output);
      else
        throw osw::InvalidInput("unknown format \"" + sweep_opt.format + "\"");
    } else if (cmd_compare->parsed()) {
      const osw::UtilitySpec u = parse_utility(compare_utility, 1.0);
      const osw::Society a = osw::io::load_society(compare_a);
      const osw::Society b = osw::io::load_society(compare_b);
      osw::DominanceVerdict verdict = osw::dominance_check(a, b, u, compare_grid);
      verdict.ca_family = osw::dominance_ca_family(a, b, u);
      if (compare_format == "csv")
        write_output(osw::io::to_csv(verdict), compare_output);
      else if (compare_format.empty() || compare_format == "json")
        write_output(osw::io::to_json(verdict), compare_output);
      else
        throw osw::InvalidInput("unknown format \"" + compare_format + "\"");
    } else if (cmd_ingest->parsed()) {
      const osw::io::Binning binning = parse_binning(ingest_binning);
      const osw::Society society = osw::io::ingest_csv(ingest_csv_path, binning);
      if (ingest_output.empty())
        std::cout << osw::io::society_to_json(society);
      else
        osw::io::save_society(society, ingest_output);
    }
  } catch (const osw::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const osw::NumericFailure& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
