#include "osw/reports.hpp"

#include <cmath>
#include <limits>

#include "osw/errors.hpp"

namespace osw {

namespace {

// Efficiency / inequality-of-opportunity split valid across the whole theta
// range: the iop term is E_q[U] minus welfare, which the mean-divergence form
// shows is the (1/theta)-scaled Bregman gap for finite theta > 0.
void fill_split(const Society& society, const UtilitySpec& u, const WelfareParams& params,
                double welfare, double& efficiency, double& iop_term) {
  if (params.theta == 0.0) {
    efficiency = welfare;
    iop_term = 0.0;
    return;
  }
  if (std::isinf(params.theta)) {
    efficiency = welfare_mean_variance(society, u, 0.0);
    iop_term = efficiency - welfare;
    return;
  }
  const MeanDivergenceResult split = welfare_mean_divergence(society, u, params.theta);
  efficiency = split.efficiency;
  iop_term = split.iop_term;
}

}  // namespace

EvaluationReport evaluate_report(const Society& society, const UtilitySpec& u,
                                 const WelfareParams& params) {
  EvaluationReport report;
  report.theta = params.theta;
  report.rho = std::exp(-params.theta);
  report.utility = u.descriptor();
  report.welfare = welfare_primal(society, u, params);
  report.edei = u.inverse(report.welfare);
  fill_split(society, u, params, report.welfare, report.efficiency, report.iop_term);
  report.weights = optimal_weights(society, u, params.theta);
  return report;
}

WeightsReport weights_report(const Society& society, const UtilitySpec& u,
                             const WelfareParams& params) {
  WeightsReport report;
  report.theta = params.theta;
  report.rho = std::exp(-params.theta);
  report.utility = u.descriptor();
  report.weights = optimal_weights(society, u, params.theta);
  return report;
}

std::vector<SweepRow> sweep(const Society& society, const UtilitySpec& u, int grid_size) {
  if (grid_size < 2) throw InvalidInput("sweep grid needs at least 2 points");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double rho = static_cast<double>(i) / (grid_size - 1);
    WelfareParams params;
    if (rho == 0.0)
      params.theta = std::numeric_limits<double>::infinity();
    else if (rho >= 1.0)
      params.theta = 0.0;
    else
      params.theta = -std::log(rho);
    const InequalityReport indices = inequality_report(society, u, params);
    SweepRow row;
    row.theta = params.theta;
    row.rho = rho;
    row.welfare = welfare_primal(society, u, params);
    row.edei = indices.edei;
    row.overall = indices.overall;
    row.social_risks = indices.social_risks;
    row.opportunity = indices.opportunity;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace osw
