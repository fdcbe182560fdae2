#pragma once

#include "osw/society.hpp"
#include "osw/utility.hpp"
#include "osw/welfare.hpp"

namespace osw {

/// Equally-distributed-equivalent income, the three inequality indices, and
/// the aversion parameter they were computed at (rho = exp(-theta)).
///
/// The indices satisfy (1 - overall) = (1 - social_risks) * (1 - opportunity);
/// for increasing weakly concave utility each lies in [0, 1] and neither
/// sub-index exceeds the overall index.
struct InequalityReport {
  double theta;
  double rho;
  double edei;           // xi: u^-1 of social welfare
  double atkinson_edei;  // xi_u(pi): EDEI of the aggregate distribution
  double mean_income;    // mu(pi)
  double overall;        // I   = 1 - edei / mean_income
  double social_risks;   // I^R = 1 - atkinson_edei / mean_income
  double opportunity;    // I^O = 1 - edei / atkinson_edei
};

/// u^-1 of welfare_primal. Log inverts to exp; Power to the 1/sigma power;
/// Tabulated by monotone interpolation, erroring outside the table range.
double edei(const Society& society, const UtilitySpec& u, const WelfareParams& params);

/// EDEI of a single income distribution: u^-1( sum pi(y) u(y) ).
double atkinson_edei(const IncomeDistribution& dist, const UtilitySpec& u);

InequalityReport inequality_report(const Society& society, const UtilitySpec& u,
                                   const WelfareParams& params);

}  // namespace osw
