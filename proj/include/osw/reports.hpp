#pragma once

#include <string>
#include <vector>

#include "osw/indices.hpp"
#include "osw/society.hpp"
#include "osw/utility.hpp"
#include "osw/welfare.hpp"

namespace osw {

/// Full evaluation at one aversion level: welfare, its money-metric EDEI, the
/// normative type weights, and the efficiency / inequality-of-opportunity
/// split of the welfare value.
struct EvaluationReport {
  double theta;
  double rho;
  std::string utility;
  double welfare;
  double edei;
  double efficiency;
  double iop_term;
  WeightVector weights;
};

struct WeightsReport {
  double theta;
  double rho;
  std::string utility;
  WeightVector weights;
};

/// One row of the aversion sweep; rows are ordered by rho ascending, from the
/// maximin endpoint (rho = 0) to the utilitarian one (rho = 1).
struct SweepRow {
  double theta;
  double rho;
  double welfare;
  double edei;
  double overall;
  double social_risks;
  double opportunity;
};

EvaluationReport evaluate_report(const Society& society, const UtilitySpec& u,
                                 const WelfareParams& params);

WeightsReport weights_report(const Society& society, const UtilitySpec& u,
                             const WelfareParams& params);

std::vector<SweepRow> sweep(const Society& society, const UtilitySpec& u, int grid_size);

}  // namespace osw
