#include "osw/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "osw/errors.hpp"
#include "reduce.hpp"

namespace osw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Supported slice of a society: expected utilities and shares of the types
// with positive share, plus the same data grouped by exact utility value.
// Welfare reductions run over the groups, which makes the value invariant
// under type permutations and exact under type splits: a split type
// contributes the same (U, total share) group as the original.
struct Supported {
  std::vector<std::size_t> index;  // into society.types()
  std::vector<double> q;
  std::vector<double> U;
  std::vector<std::pair<double, double>> groups;  // (U, total q), U ascending
  long double q_total = 0.0L;
  double u_min = 0.0;
  double u_max = 0.0;
};

Supported gather(const Society& society, const UtilitySpec& u) {
  Supported sup;

  for (std::size_t i = 0; i < society.types().size(); ++i) {
    const TypeEntry& t = society.types()[i];
    if (t.share == 0.0) continue;
    sup.index.push_back(i);
    sup.q.push_back(t.share);
    sup.U.push_back(expected_utility(t.dist, u));
  }
  if (sup.q.empty()) throw InvalidInput("society has no supported types");
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(sup.q.size());
  for (std::size_t i = 0; i < sup.q.size(); ++i) pairs.emplace_back(sup.U[i], sup.q[i]);
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [value, share] : pairs) {
    if (!sup.groups.empty() && sup.groups.back().first == value)
      sup.groups.back().second += share;
    else
      sup.groups.emplace_back(value, share);
  }
  {
    std::vector<long double> shares;
    shares.reserve(sup.groups.size());
    for (const auto& g : sup.groups) shares.push_back(g.second);
    sup.q_total = detail::ordered_sum(std::move(shares));
  }
  sup.u_min = sup.groups.front().first;
  sup.u_max = sup.groups.back().first;
  return sup;
}

void validate_theta(double theta, bool allow_infinite) {
  if (std::isnan(theta) || theta < 0.0)
    throw InvalidInput("theta must be >= 0");
  if (!allow_infinite && std::isinf(theta))
    throw InvalidInput("theta must be finite here");
}

// E_q[U], computed relative to min U so a constant profile evaluates to that
// constant exactly.
long double centered_mean(const Supported& sup) {
  std::vector<long double> terms;
  terms.reserve(sup.groups.size());
  for (const auto& [value, share] : sup.groups)
    terms.push_back(static_cast<long double>(share) *
                    (static_cast<long double>(value) - sup.u_min));
  return sup.u_min + detail::ordered_sum(std::move(terms)) / sup.q_total;
}

long double weighted_variance(const Supported& sup, long double mean_value) {
  std::vector<long double> terms;
  terms.reserve(sup.groups.size());
  for (const auto& [value, share] : sup.groups) {
    const long double d = static_cast<long double>(value) - mean_value;
    terms.push_back(static_cast<long double>(share) * d * d);
  }
  return detail::ordered_sum(std::move(terms)) / sup.q_total;
}

// ln( E_q[e^{-theta (U - min U)}] ), in [ln q_min, 0].
long double centered_log_mean_exp(const Supported& sup, double theta) {
  std::vector<long double> terms;
  terms.reserve(sup.groups.size());
  for (const auto& [value, share] : sup.groups)
    terms.push_back(static_cast<long double>(share) *
                    std::exp(-static_cast<long double>(theta) *
                             (static_cast<long double>(value) - sup.u_min)));
  return std::log(detail::ordered_sum(std::move(terms)) / sup.q_total);
}

double primal_value(const Supported& sup, const WelfareParams& params) {
  validate_theta(params.theta, /*allow_infinite=*/true);
  if (!(params.theta_small_switch > 0.0))
    throw InvalidInput("theta_small_switch must be > 0");
  if (std::isinf(params.theta)) return sup.u_min;
  if (params.theta == 0.0) return static_cast<double>(centered_mean(sup));
  if (params.theta < params.theta_small_switch) {
    const long double m = centered_mean(sup);
    return static_cast<double>(m - 0.5L * params.theta * weighted_variance(sup, m));
  }
  const long double log_mean = centered_log_mean_exp(sup, params.theta);
  return static_cast<double>(sup.u_min - log_mean / params.theta);
}

Eigen::VectorXd full_weights(const Society& society, const Supported& sup,
                             const Eigen::ArrayXd& supported_weights) {
  Eigen::VectorXd all = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(society.types().size()));
  for (std::size_t i = 0; i < sup.index.size(); ++i)
    all[static_cast<Eigen::Index>(sup.index[i])] = supported_weights[static_cast<Eigen::Index>(i)];
  return all;
}

std::vector<std::string> all_labels(const Society& society) {
  std::vector<std::string> labels;
  labels.reserve(society.types().size());
  for (const TypeEntry& t : society.types()) labels.push_back(t.label);
  return labels;
}

double log_sum_exp(const Eigen::ArrayXd& x) {
  const double m = x.maxCoeff();
  return m + std::log((x - m).exp().sum());
}

}  // namespace

double phi_theta(double t, double theta) {
  validate_theta(theta, /*allow_infinite=*/false);
  return theta == 0.0 ? t : -std::exp(-theta * t);
}

double phi_theta_inverse(double t, double theta) {
  validate_theta(theta, /*allow_infinite=*/false);
  if (theta == 0.0) return t;
  if (!(t < 0.0)) {
    std::ostringstream msg;
    msg << "phi_theta_inverse needs t < 0 when theta > 0, got t = " << t;
    throw InvalidInput(msg.str());
  }
  return -std::log(-t) / theta;
}

SecondOrderTransform SecondOrderTransform::identity() {
  SecondOrderTransform t;
  t.phi = [](double v) { return v; };
  t.phi_inverse = [](double v) { return v; };
  t.descriptor = "identity";
  return t;
}

SecondOrderTransform SecondOrderTransform::exp_family(double theta) {
  validate_theta(theta, /*allow_infinite=*/false);
  SecondOrderTransform t;
  t.phi = [theta](double v) { return phi_theta(v, theta); };
  t.phi_inverse = [theta](double v) { return phi_theta_inverse(v, theta); };
  std::ostringstream name;
  name << "exp_family(" << theta << ")";
  t.descriptor = name.str();
  t.exp_family_theta = theta;
  return t;
}

SecondOrderTransform SecondOrderTransform::custom(std::function<double(double)> phi,
                                                  std::function<double(double)> phi_inverse,
                                                  std::string descriptor) {
  SecondOrderTransform t;
  t.phi = std::move(phi);
  t.phi_inverse = std::move(phi_inverse);
  t.descriptor = std::move(descriptor);
  return t;
}

WeightVector demographic_weights(const Society& society) {
  WeightVector w;
  w.labels = all_labels(society);
  w.weights = Eigen::VectorXd(static_cast<Eigen::Index>(society.types().size()));
  for (std::size_t i = 0; i < society.types().size(); ++i)
    w.weights[static_cast<Eigen::Index>(i)] = society.types()[i].share;
  return w;
}

double welfare_primal(const Society& society, const UtilitySpec& u,
                      const WelfareParams& params) {
  return primal_value(gather(society, u), params);
}

double welfare_second_order(const Society& society, const UtilitySpec& u,
                            const SecondOrderTransform& transform) {
  if (transform.exp_family_theta) {
    // Same value as the generic formula below; evaluated through the
    // max-centered path so it matches welfare_primal bit for bit.
    WelfareParams params;
    params.theta = *transform.exp_family_theta;
    return welfare_primal(society, u, params);
  }
  const Supported sup = gather(society, u);
  std::vector<long double> terms;
  terms.reserve(sup.groups.size());
  for (const auto& [value, share] : sup.groups)
    terms.push_back(static_cast<long double>(share) * transform.phi(value));
  const double inner =
      static_cast<double>(detail::ordered_sum(std::move(terms)) / sup.q_total);
  double result;
  try {
    result = transform.phi_inverse(inner);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "second-order inverse failed for transform \"" << transform.descriptor
        << "\" at aggregated value " << inner << ": " << e.what();
    throw NumericFailure(msg.str());
  }
  if (!std::isfinite(result)) {
    std::ostringstream msg;
    msg << "second-order inverse returned a non-finite value for transform \""
        << transform.descriptor << "\" at aggregated value " << inner;
    throw NumericFailure(msg.str());
  }
  return result;
}

WeightVector optimal_weights(const Society& society, const UtilitySpec& u, double theta) {
  validate_theta(theta, /*allow_infinite=*/true);
  const Supported sup = gather(society, u);
  const Eigen::Index n = static_cast<Eigen::Index>(sup.q.size());
  Eigen::ArrayXd tilt(n);
  if (std::isinf(theta)) {
    // Limit weights: demographic mass renormalized on the argmin-utility set.
    for (Eigen::Index i = 0; i < n; ++i)
      tilt[i] = sup.U[static_cast<std::size_t>(i)] == sup.u_min
                    ? sup.q[static_cast<std::size_t>(i)]
                    : 0.0;
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      tilt[i] = sup.q[static_cast<std::size_t>(i)] *
                std::exp(-theta * (sup.U[static_cast<std::size_t>(i)] - sup.u_min));
  }
  tilt /= tilt.sum();
  WeightVector w;
  w.labels = all_labels(society);
  w.weights = full_weights(society, sup, tilt);
  return w;
}

VariationalResult welfare_variational(const Society& society, const UtilitySpec& u,
                                      double theta) {
  if (std::isnan(theta) || !(theta > 0.0) || std::isinf(theta))
    throw InvalidInput("welfare_variational requires finite theta > 0");
  const Supported sup = gather(society, u);
  const Eigen::Index n = static_cast<Eigen::Index>(sup.q.size());
  Eigen::ArrayXd utilities(n), log_q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    utilities[i] = sup.U[static_cast<std::size_t>(i)];
    log_q[i] = std::log(sup.q[static_cast<std::size_t>(i)] /
                        static_cast<double>(sup.q_total));
  }

  // Exponentiated-gradient descent in log space, initialized at q. Step
  // theta/2 halves the log-space distance to the tilted fixed point each
  // iterate, uniformly in theta.
  const double step = 0.5 * theta;
  const int max_iterations = 10'000;
  constexpr double kStopKl = 1e-14;

  Eigen::ArrayXd x = log_q;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  while (iterations < max_iterations) {
    ++iterations;
    const Eigen::ArrayXd gradient = utilities + (x - log_q + 1.0) / theta;
    Eigen::ArrayXd next = x - step * gradient;
    next -= log_sum_exp(next);
    residual = (next.exp() * (next - x)).sum();
    x = next;
    if (residual < kStopKl) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "variational minimization did not converge after " << max_iterations
        << " iterations; last successive-iterate KL = " << residual;
    throw NumericFailure(msg.str());
  }

  const Eigen::ArrayXd p = x.exp();
  std::vector<long double> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    terms.push_back(static_cast<long double>(p[i]) *
                    (static_cast<long double>(utilities[i]) + (x[i] - log_q[i]) / theta));
  VariationalResult result;
  result.value = static_cast<double>(detail::ordered_sum(std::move(terms)));
  result.weights.labels = all_labels(society);
  result.weights.weights = full_weights(society, sup, p);
  result.iterations = iterations;
  result.residual = residual;
  return result;
}

double kl_divergence(const WeightVector& p, const WeightVector& q) {
  if (p.labels != q.labels)
    throw InvalidInput("KL divergence requires weight vectors over the same labels");
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < p.weights.size(); ++i) {
    const double pi = p.weights[i];
    const double qi = q.weights[i];
    if (pi == 0.0) continue;  // 0 ln 0 = 0
    if (qi == 0.0)
      throw InvalidInput("KL divergence undefined: p(\"" + p.labels[static_cast<std::size_t>(i)] +
                         "\") > 0 where q is 0");
    total += static_cast<long double>(pi) * std::log(pi / qi);
  }
  return static_cast<double>(total);
}

double bregman_divergence(const std::function<double(double)>& value,
                          const std::function<double(double)>& derivative,
                          double x, double y) {
  return value(x) - value(y) - (x - y) * derivative(y);
}

double cgf(const Society& society, const UtilitySpec& u, double tau) {
  if (!std::isfinite(tau)) throw InvalidInput("cgf requires finite tau");
  const Supported sup = gather(society, u);
  const double anchor = tau >= 0.0 ? tau * sup.u_max : tau * sup.u_min;
  std::vector<long double> terms;
  terms.reserve(sup.groups.size());
  for (const auto& [value, share] : sup.groups)
    terms.push_back(static_cast<long double>(share) *
                    std::exp(static_cast<long double>(tau) * value - anchor));
  const long double log_mean =
      std::log(detail::ordered_sum(std::move(terms)) / sup.q_total);
  return static_cast<double>(anchor + log_mean);
}

double welfare_mean_variance(const Society& society, const UtilitySpec& u, double theta) {
  validate_theta(theta, /*allow_infinite=*/false);
  const Supported sup = gather(society, u);
  const long double m = centered_mean(sup);
  return static_cast<double>(m - 0.5L * theta * weighted_variance(sup, m));
}

MeanDivergenceResult welfare_mean_divergence(const Society& society,
                                             const UtilitySpec& u, double theta) {
  if (std::isnan(theta) || !(theta > 0.0) || std::isinf(theta))
    throw InvalidInput("welfare_mean_divergence requires finite theta > 0");
  const Supported sup = gather(society, u);
  const long double mean_utility = centered_mean(sup);
  const long double log_mean = centered_log_mean_exp(sup, theta);
  // (1/theta) D_{K_U}(-theta || 0) = E[U - min U] + ln E[e^{-theta(U - min U)}] / theta.
  long double iop = (mean_utility - sup.u_min) + log_mean / theta;
  if (iop < 0.0L) iop = 0.0L;  // Jensen guarantees >= 0; trim float dust
  MeanDivergenceResult result;
  result.efficiency = static_cast<double>(mean_utility);
  result.iop_term = static_cast<double>(iop);
  result.welfare = static_cast<double>(mean_utility - iop);
  return result;
}

}  // namespace osw
