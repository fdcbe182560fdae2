#include "osw/indices.hpp"

#include <cmath>
#include <sstream>

#include "osw/errors.hpp"

namespace osw {

double edei(const Society& society, const UtilitySpec& u, const WelfareParams& params) {
  return u.inverse(welfare_primal(society, u, params));
}

double atkinson_edei(const IncomeDistribution& dist, const UtilitySpec& u) {
  return u.inverse(expected_utility(dist, u));
}

InequalityReport inequality_report(const Society& society, const UtilitySpec& u,
                                   const WelfareParams& params) {
  const IncomeDistribution pi = aggregate(society);
  InequalityReport report;
  report.theta = params.theta;
  report.rho = std::exp(-params.theta);
  report.mean_income = mean(pi);
  report.edei = edei(society, u, params);
  report.atkinson_edei = atkinson_edei(pi, u);
  report.overall = 1.0 - report.edei / report.mean_income;
  report.social_risks = 1.0 - report.atkinson_edei / report.mean_income;
  report.opportunity = 1.0 - report.edei / report.atkinson_edei;

  const double lhs = 1.0 - report.overall;
  const double rhs = (1.0 - report.social_risks) * (1.0 - report.opportunity);
  if (std::abs(lhs - rhs) > 1e-12) {
    std::ostringstream msg;
    msg << "inequality decomposition identity violated: 1 - I = " << lhs
        << " but (1 - I^R)(1 - I^O) = " << rhs;
    throw NumericFailure(msg.str());
  }
  return report;
}

}  // namespace osw
