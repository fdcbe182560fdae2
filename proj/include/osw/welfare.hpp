#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "osw/society.hpp"
#include "osw/utility.hpp"

namespace osw {

/// Aversion parameter and numerical switches for the welfare evaluation.
/// theta may be +infinity (maximin over types); it is a distinguished value,
/// not a large float.
struct WelfareParams {
  double theta = 0.0;
  /// Below this theta the primal evaluation switches to the second-order
  /// expansion E[U] - (theta/2) Var[U] to avoid cancellation in
  /// (1/theta) * log(1 + O(theta)).
  double theta_small_switch = 1e-6;
  /// Agreement tolerance promised between the primal value and the
  /// variational minimizer.
  double dual_tol = 1e-8;
};

double phi_theta(double t, double theta);
double phi_theta_inverse(double t, double theta);

/// Strictly increasing transform applied to type expected utilities, given as
/// a (phi, phi_inverse) callable pair. Transforms built by exp_family(theta)
/// carry the parameter so evaluation can use the same max-centered
/// log-sum-exp path as welfare_primal.
struct SecondOrderTransform {
  std::function<double(double)> phi;
  std::function<double(double)> phi_inverse;
  std::string descriptor;
  std::optional<double> exp_family_theta;

  static SecondOrderTransform identity();
  static SecondOrderTransform exp_family(double theta);
  static SecondOrderTransform custom(std::function<double(double)> phi,
                                     std::function<double(double)> phi_inverse,
                                     std::string descriptor);
};

/// Per-type weights on the simplex, aligned with a society's type list.
/// Weight is zero wherever the demographic share is zero.
struct WeightVector {
  std::vector<std::string> labels;
  Eigen::VectorXd weights;
};

/// Demographic shares of a society as a WeightVector (zero-share types kept).
WeightVector demographic_weights(const Society& society);

/// Social welfare, primal form: sum q U at theta = 0, the max-centered
/// log-sum-exp of -theta U for finite theta > 0, and min U at theta = inf.
double welfare_primal(const Society& society, const UtilitySpec& u,
                      const WelfareParams& params);

/// General second-order form: phi_inverse( sum_{q>0} q phi(U_s) ).
double welfare_second_order(const Society& society, const UtilitySpec& u,
                            const SecondOrderTransform& transform);

/// Exponentially tilted normative weights q(s) e^{-theta U_s} / Z. theta may
/// be +infinity, in which case the limit weights (demographic mass renormalized
/// on the argmin-utility set) are returned.
WeightVector optimal_weights(const Society& society, const UtilitySpec& u, double theta);

struct VariationalResult {
  double value;
  WeightVector weights;
  int iterations;
  double residual;  // KL between the last two iterates
};

/// Minimizes sum p U + (1/theta) KL(p || q) over the simplex restricted to
/// supp(q) by exponentiated-gradient descent in log space, initialized at q.
/// Serves as an optimization-based check of welfare_primal and
/// optimal_weights.
VariationalResult welfare_variational(const Society& society, const UtilitySpec& u,
                                      double theta);

/// KL divergence sum p ln(p/q) with the 0 ln 0 = 0 convention. Requires
/// matching labels and p absolutely continuous with respect to q.
double kl_divergence(const WeightVector& p, const WeightVector& q);

/// Bregman divergence phi(x) - phi(y) - (x - y) phi'(y) for a strictly convex
/// differentiable generator given as (value, derivative) callables.
double bregman_divergence(const std::function<double(double)>& value,
                          const std::function<double(double)>& derivative,
                          double x, double y);

/// Cumulant generating function of the type expected utilities under q:
/// K_U(tau) = ln E_q[e^{tau U}], max-centered; K_U(0) = 0 exactly.
double cgf(const Society& society, const UtilitySpec& u, double tau);

/// Second-order approximation E_q[U] - (theta/2) Var_q(U).
double welfare_mean_variance(const Society& society, const UtilitySpec& u, double theta);

struct MeanDivergenceResult {
  double welfare;
  double efficiency;  // E_q[U]
  double iop_term;    // (1/theta) D_{K_U}(-theta || 0) >= 0
};

/// Exact mean-divergence split: welfare = efficiency - iop_term.
MeanDivergenceResult welfare_mean_divergence(const Society& society,
                                             const UtilitySpec& u, double theta);

}  // namespace osw
