#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "osw/dominance.hpp"
#include "osw/indices.hpp"
#include "osw/reports.hpp"
#include "osw/society.hpp"

namespace osw::io {

/// One observation of the micro-data input: a pre-assigned type label, a
/// strictly positive income, and an optional positive sampling weight.
struct MicroRecord {
  std::string type_label;
  double income;
  double weight = 1.0;
};

struct Binning {
  enum class Kind { Exact, Quantile };
  Kind kind = Kind::Exact;
  int quantile_count = 0;

  static Binning exact() { return {Kind::Exact, 0}; }
  static Binning quantile(int k);
};

/// Builds a society from micro-data. Types appear in first-observation order;
/// q(s) is the type's weight share of the total. Exact binning keeps one atom
/// per distinct observed income. Quantile(k) binning cuts the pooled sample at
/// k population-weighted quantiles and places each type's per-bin mass at the
/// bin's within-type weighted mean income, omitting bins where the type has no
/// mass.
Society ingest_microdata(const std::vector<MicroRecord>& records, const Binning& binning);

/// CSV with header "type,income" or "type,income,weight", UTF-8, '.' decimal
/// separator, rows in any order. Errors cite the offending line number.
std::vector<MicroRecord> read_micro_csv(std::istream& in);
Society ingest_csv(const std::string& path, const Binning& binning);

Society load_society(const std::string& path);
void save_society(const Society& society, const std::string& path);
std::string society_to_json(const Society& society);
Society society_from_json(const std::string& text, const std::string& context);

std::string to_json(const EvaluationReport& report);
std::string to_json(const WeightsReport& report);
std::string to_json(const InequalityReport& report);
std::string to_json(const DominanceVerdict& verdict);
std::string to_json(const std::vector<SweepRow>& rows);

std::string to_csv(const WeightsReport& report);
std::string to_csv(const InequalityReport& report);
std::string to_csv(const DominanceVerdict& verdict);
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace osw::io
