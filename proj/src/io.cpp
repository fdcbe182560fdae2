#include "osw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "osw/errors.hpp"

namespace osw::io {

namespace {

using ordered_json = nlohmann::ordered_json;

// 17 significant decimal digits round-trip any double exactly.
std::string fmt17(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string format_theta(double theta) {
  return std::isinf(theta) ? "inf" : fmt17(theta);
}

ordered_json theta_json(double theta) {
  if (std::isinf(theta)) return "inf";
  return theta;
}

ordered_json weights_json(const WeightVector& weights) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < weights.weights.size(); ++i) {
    ordered_json entry;
    entry["label"] = weights.labels[static_cast<std::size_t>(i)];
    entry["weight"] = weights.weights[i];
    out.push_back(entry);
  }
  return out;
}

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const std::string& path, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key))
    throw InvalidInput(context + ": missing field at " + path + "/" + key);
  return obj.at(key);
}

double require_number(const ordered_json& value, const std::string& path,
                      const std::string& context) {
  if (!value.is_number())
    throw InvalidInput(context + ": expected a number at " + path);
  return value.get<double>();
}

std::string require_string(const ordered_json& value, const std::string& path,
                           const std::string& context) {
  if (!value.is_string())
    throw InvalidInput(context + ": expected a string at " + path);
  return value.get<std::string>();
}

const ordered_json& require_array(const ordered_json& value, const std::string& path,
                                  const std::string& context) {
  if (!value.is_array())
    throw InvalidInput(context + ": expected an array at " + path);
  return value;
}

std::string trim(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  std::size_t last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

double parse_double(const std::string& token, const char* what, std::size_t line) {
  const std::string text = trim(token);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse " << what << " \"" << token << "\"";
    throw InvalidInput(msg.str());
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

struct TypeAccumulator {
  std::string label;
  long double total_weight = 0.0L;
  std::vector<std::pair<double, double>> observations;  // (income, weight)
};

// Index of the pooled quantile bin containing income y: the number of cut
// points strictly below y.
std::size_t bin_of(const std::vector<double>& cuts, double y) {
  return static_cast<std::size_t>(
      std::lower_bound(cuts.begin(), cuts.end(), y) - cuts.begin());
}

}  // namespace

Binning Binning::quantile(int k) {
  if (k < 1) throw InvalidInput("quantile binning needs k >= 1");
  return {Kind::Quantile, k};
}

Society ingest_microdata(const std::vector<MicroRecord>& records, const Binning& binning) {
  if (records.empty()) throw InvalidInput("micro-data input is empty");

  std::vector<TypeAccumulator> types;
  std::map<std::string, std::size_t> type_index;
  long double grand_total = 0.0L;
  for (std::size_t row = 0; row < records.size(); ++row) {
    const MicroRecord& r = records[row];
    std::ostringstream where;
    where << "record " << row + 1;
    if (r.type_label.empty()) throw InvalidInput(where.str() + ": empty type label");
    if (!(r.income > 0.0) || !std::isfinite(r.income))
      throw InvalidInput(where.str() + ": income must be > 0");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight))
      throw InvalidInput(where.str() + ": weight must be > 0");
    auto [it, inserted] = type_index.try_emplace(r.type_label, types.size());
    if (inserted) types.push_back({r.type_label, 0.0L, {}});
    TypeAccumulator& acc = types[it->second];
    acc.total_weight += r.weight;
    acc.observations.emplace_back(r.income, r.weight);
    grand_total += r.weight;
  }

  std::vector<double> cuts;
  if (binning.kind == Binning::Kind::Quantile) {
    // Population-weighted quantiles of the pooled sample, so every type is
    // binned against the same income grid.
    std::vector<std::pair<double, double>> pooled;
    for (const TypeAccumulator& t : types)
      pooled.insert(pooled.end(), t.observations.begin(), t.observations.end());
    std::sort(pooled.begin(), pooled.end());
    const int k = binning.quantile_count;
    std::size_t position = 0;
    long double cumulative = 0.0L;
    // Accumulation dust must not push an exact tie past the target, so the
    // comparison carries a relative slack.
    const long double slack = grand_total * 1e-12L;
    for (int j = 1; j < k; ++j) {
      const long double target = grand_total * j / k - slack;
      while (position < pooled.size() && cumulative + pooled[position].second < target) {
        cumulative += pooled[position].second;
        ++position;
      }
      const double cut =
          position < pooled.size() ? pooled[position].first : pooled.back().first;
      if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
    }
  }

  std::vector<TypeEntry> entries;
  entries.reserve(types.size());
  for (const TypeAccumulator& t : types) {
    std::vector<Atom> atoms;
    if (binning.kind == Binning::Kind::Exact) {
      std::map<double, long double> mass;
      for (const auto& [income, weight] : t.observations) mass[income] += weight;
      for (const auto& [income, weight] : mass)
        atoms.push_back({income, static_cast<double>(weight / t.total_weight)});
    } else {
      const std::size_t bins = cuts.size() + 1;
      std::vector<long double> bin_weight(bins, 0.0L);
      std::vector<long double> bin_income(bins, 0.0L);
      for (const auto& [income, weight] : t.observations) {
        const std::size_t b = bin_of(cuts, income);
        bin_weight[b] += weight;
        bin_income[b] += static_cast<long double>(weight) * income;
      }
      for (std::size_t b = 0; b < bins; ++b) {
        if (bin_weight[b] == 0.0L) continue;  // the type has no mass in this bin
        atoms.push_back({static_cast<double>(bin_income[b] / bin_weight[b]),
                         static_cast<double>(bin_weight[b] / t.total_weight)});
      }
    }
    entries.push_back({t.label, static_cast<double>(t.total_weight / grand_total),
                       IncomeDistribution(std::move(atoms))});
  }
  return Society(std::move(entries));
}

std::vector<MicroRecord> read_micro_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("micro-data CSV is empty");
  const std::string header = trim(line);
  bool has_weight = false;
  if (header == "type,income")
    has_weight = false;
  else if (header == "type,income,weight")
    has_weight = true;
  else
    throw InvalidInput("line 1: expected header \"type,income\" or \"type,income,weight\", got \"" +
                       header + "\"");

  std::vector<MicroRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::size_t expected = has_weight ? 3 : 2;
    if (fields.size() != expected) {
      std::ostringstream msg;
      msg << "line " << line_number << ": expected " << expected << " fields, got "
          << fields.size();
      throw InvalidInput(msg.str());
    }
    MicroRecord record;
    record.type_label = trim(fields[0]);
    if (record.type_label.empty()) {
      std::ostringstream msg;
      msg << "line " << line_number << ": empty type label";
      throw InvalidInput(msg.str());
    }
    record.income = parse_double(fields[1], "income", line_number);
    if (!(record.income > 0.0)) {
      std::ostringstream msg;
      msg << "line " << line_number << ": income must be > 0, got " << fields[1];
      throw InvalidInput(msg.str());
    }
    if (has_weight) {
      record.weight = parse_double(fields[2], "weight", line_number);
      if (!(record.weight > 0.0)) {
        std::ostringstream msg;
        msg << "line " << line_number << ": weight must be > 0, got " << fields[2];
        throw InvalidInput(msg.str());
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

Society ingest_csv(const std::string& path, const Binning& binning) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open micro-data file \"" + path + "\"");
  try {
    return ingest_microdata(read_micro_csv(in), binning);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string society_to_json(const Society& society) {
  ordered_json doc;
  doc["schema_version"] = "1";
  if (!society.name().empty()) doc["name"] = society.name();
  doc["types"] = ordered_json::array();
  for (const TypeEntry& t : society.types()) {
    ordered_json entry;
    entry["label"] = t.label;
    entry["share"] = t.share;
    entry["distribution"] = ordered_json::array();
    for (const Atom& a : t.dist.atoms()) {
      ordered_json atom;
      atom["income"] = a.income;
      atom["prob"] = a.prob;
      entry["distribution"].push_back(atom);
    }
    doc["types"].push_back(entry);
  }
  return doc.dump(2) + "\n";
}

Society society_from_json(const std::string& text, const std::string& context) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InvalidInput(context + ": " + e.what());
  }
  if (!doc.is_object()) throw InvalidInput(context + ": document root must be an object");

  const std::string version =
      require_string(require_field(doc, "schema_version", "", context), "/schema_version", context);
  if (version != "1")
    throw InvalidInput(context + ": unsupported schema_version \"" + version + "\" (expected \"1\")");

  std::string name;
  if (doc.contains("name")) name = require_string(doc.at("name"), "/name", context);

  const ordered_json& types = require_array(require_field(doc, "types", "", context), "/types", context);
  std::vector<TypeEntry> entries;
  entries.reserve(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string type_path = "/types/" + std::to_string(i);
    const ordered_json& t = types.at(i);
    const std::string label =
        require_string(require_field(t, "label", type_path, context), type_path + "/label", context);
    const double share =
        require_number(require_field(t, "share", type_path, context), type_path + "/share", context);
    const ordered_json& dist = require_array(
        require_field(t, "distribution", type_path, context), type_path + "/distribution", context);
    std::vector<Atom> atoms;
    atoms.reserve(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const std::string atom_path = type_path + "/distribution/" + std::to_string(j);
      const ordered_json& a = dist.at(j);
      atoms.push_back(
          {require_number(require_field(a, "income", atom_path, context), atom_path + "/income", context),
           require_number(require_field(a, "prob", atom_path, context), atom_path + "/prob", context)});
    }
    try {
      entries.push_back({label, share, IncomeDistribution(std::move(atoms))});
    } catch (const InvalidInput& e) {
      throw InvalidInput(context + ": type \"" + label + "\": " + e.what());
    }
  }
  try {
    return Society(std::move(entries), name);
  } catch (const InvalidInput& e) {
    throw InvalidInput(context + ": " + e.what());
  }
}

Society load_society(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open society file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return society_from_json(buffer.str(), path);
}

void save_society(const Society& society, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open \"" + path + "\" for writing");
  out << society_to_json(society);
  if (!out) throw InvalidInput("failed writing society file \"" + path + "\"");
}

std::string to_json(const EvaluationReport& report) {
  ordered_json doc;
  doc["theta"] = theta_json(report.theta);
  doc["rho"] = report.rho;
  doc["utility"] = report.utility;
  doc["welfare"] = report.welfare;
  doc["edei"] = report.edei;
  doc["efficiency"] = report.efficiency;
  doc["iop_term"] = report.iop_term;
  doc["weights"] = weights_json(report.weights);
  return doc.dump(2) + "\n";
}

std::string to_json(const WeightsReport& report) {
  ordered_json doc;
  doc["theta"] = theta_json(report.theta);
  doc["rho"] = report.rho;
  doc["utility"] = report.utility;
  doc["weights"] = weights_json(report.weights);
  return doc.dump(2) + "\n";
}

std::string to_json(const InequalityReport& report) {
  ordered_json doc;
  doc["theta"] = theta_json(report.theta);
  doc["rho"] = report.rho;
  doc["mean_income"] = report.mean_income;
  doc["edei"] = report.edei;
  doc["atkinson_edei"] = report.atkinson_edei;
  doc["overall"] = report.overall;
  doc["social_risks"] = report.social_risks;
  doc["opportunity"] = report.opportunity;
  return doc.dump(2) + "\n";
}

std::string to_json(const DominanceVerdict& verdict) {
  ordered_json doc;
  doc["relation"] = to_string(verdict.relation);
  doc["tolerance"] = verdict.tolerance;
  doc["rho_grid"] = verdict.rho_grid;
  doc["margins"] = verdict.margins;
  doc["crossings"] = ordered_json::array();
  for (const auto& [lo, hi] : verdict.crossings) {
    ordered_json interval;
    interval["rho_low"] = lo;
    interval["rho_high"] = hi;
    doc["crossings"].push_back(interval);
  }
  if (verdict.ca_family) {
    const CaFamilyResult& ca = *verdict.ca_family;
    ordered_json fam;
    fam["r_values"] = ca.r_values;
    fam["margins"] = ca.margins;
    fam["linear_margin"] = ca.linear_margin;
    fam["violating_r"] = ca.violating_r;
    fam["linear_violated"] = ca.linear_violated;
    fam["falsified"] = ca.falsified();
    doc["ca_family"] = fam;
  }
  return doc.dump(2) + "\n";
}

std::string to_json(const std::vector<SweepRow>& rows) {
  ordered_json doc = ordered_json::array();
  for (const SweepRow& row : rows) {
    ordered_json r;
    r["theta"] = theta_json(row.theta);
    r["rho"] = row.rho;
    r["welfare"] = row.welfare;
    r["edei"] = row.edei;
    r["I"] = row.overall;
    r["I_R"] = row.social_risks;
    r["I_O"] = row.opportunity;
    doc.push_back(r);
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const WeightsReport& report) {
  std::string out = "label,weight\n";
  for (Eigen::Index i = 0; i < report.weights.weights.size(); ++i)
    out += report.weights.labels[static_cast<std::size_t>(i)] + "," +
           fmt17(report.weights.weights[i]) + "\n";
  return out;
}

std::string to_csv(const InequalityReport& report) {
  std::string out = "theta,rho,edei,atkinson_edei,mean_income,I,I_R,I_O\n";
  out += format_theta(report.theta) + "," + fmt17(report.rho) + "," + fmt17(report.edei) + "," +
         fmt17(report.atkinson_edei) + "," + fmt17(report.mean_income) + "," +
         fmt17(report.overall) + "," + fmt17(report.social_risks) + "," +
         fmt17(report.opportunity) + "\n";
  return out;
}

std::string to_csv(const DominanceVerdict& verdict) {
  std::string out = "rho,theta,margin\n";
  for (std::size_t i = 0; i < verdict.rho_grid.size(); ++i) {
    const double rho = verdict.rho_grid[i];
    const double theta = rho == 0.0 ? std::numeric_limits<double>::infinity()
                                    : (rho >= 1.0 ? 0.0 : -std::log(rho));
    out += fmt17(rho) + "," + format_theta(theta) + "," + fmt17(verdict.margins[i]) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "theta,rho,welfare,edei,I,I_R,I_O\n";
  for (const SweepRow& row : rows)
    out += format_theta(row.theta) + "," + fmt17(row.rho) + "," + fmt17(row.welfare) + "," +
           fmt17(row.edei) + "," + fmt17(row.overall) + "," + fmt17(row.social_risks) + "," +
           fmt17(row.opportunity) + "\n";
  return out;
}

}  // namespace osw::io
