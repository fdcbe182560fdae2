#include "osw/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "osw/errors.hpp"
#include "osw/welfare.hpp"
#include "reduce.hpp"

namespace osw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_utility_over_supports(const UtilitySpec& u, const Society& society) {
  double lowest = kInf;
  for (const TypeEntry& t : society.types()) {
    if (t.share == 0.0) continue;
    for (const Atom& a : t.dist.atoms()) {
      if (a.prob == 0.0) continue;
      lowest = std::min(lowest, u.value(a.income));
    }
  }
  return lowest;
}

double theta_of_rho(double rho) {
  if (rho == 0.0) return kInf;
  if (rho >= 1.0) return 0.0;
  return -std::log(rho);
}

double margin_at_rho(const Society& a, const Society& b, const UtilitySpec& u, double rho) {
  WelfareParams params;
  params.theta = theta_of_rho(rho);
  return welfare_primal(a, u, params) - welfare_primal(b, u, params);
}

// E_q[phi_r(U)] with phi_r(z) = (1/r)(1 - e^{-rz}); direct summation over the
// supported types, no shared path with welfare_primal.
double bernstein_sum(const Society& society, const UtilitySpec& u, double r) {
  std::vector<long double> terms;
  long double total_share = 0.0L;
  for (const TypeEntry& t : society.types()) {
    if (t.share == 0.0) continue;
    const long double z = expected_utility(t.dist, u);
    terms.push_back(static_cast<long double>(t.share) *
                    (1.0L - std::exp(-static_cast<long double>(r) * z)) / r);
    total_share += t.share;
  }
  return static_cast<double>(detail::ordered_sum(std::move(terms)) / total_share);
}

double linear_sum(const Society& society, const UtilitySpec& u) {
  std::vector<long double> terms;
  long double total_share = 0.0L;
  for (const TypeEntry& t : society.types()) {
    if (t.share == 0.0) continue;
    terms.push_back(static_cast<long double>(t.share) * expected_utility(t.dist, u));
    total_share += t.share;
  }
  return static_cast<double>(detail::ordered_sum(std::move(terms)) / total_share);
}

}  // namespace

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::dominates: return "dominates";
    case Relation::dominated: return "dominated";
    case Relation::equivalent: return "equivalent";
    case Relation::crossing: return "crossing";
  }
  return "unknown";
}

UtilitySpec normalize_utility_for_dominance(const UtilitySpec& u, const Society& a,
                                            const Society& b) {
  const double lowest = std::min(min_utility_over_supports(u, a),
                                 min_utility_over_supports(u, b));
  if (lowest >= 0.0) return u;
  return u.shifted(-lowest);
}

std::vector<double> default_r_values() {
  std::vector<double> values;
  const int count = 25;
  for (int i = 0; i < count; ++i) {
    const double exponent = -3.0 + 6.0 * i / (count - 1);
    values.push_back(std::pow(10.0, exponent));
  }
  return values;
}

DominanceVerdict dominance_check(const Society& a, const Society& b, const UtilitySpec& u,
                                 int grid_size, double tol) {
  if (grid_size < 2) throw InvalidInput("dominance grid needs at least 2 points");
  if (!(tol > 0.0)) throw InvalidInput("dominance tolerance must be > 0");
  const UtilitySpec shifted = normalize_utility_for_dominance(u, a, b);

  DominanceVerdict verdict;
  verdict.tolerance = tol;
  verdict.rho_grid.reserve(static_cast<std::size_t>(grid_size));
  verdict.margins.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double rho = static_cast<double>(i) / (grid_size - 1);
    verdict.rho_grid.push_back(rho);
    verdict.margins.push_back(margin_at_rho(a, b, shifted, rho));
  }

  bool any_positive = false;
  bool any_negative = false;
  for (double m : verdict.margins) {
    any_positive = any_positive || m > tol;
    any_negative = any_negative || m < -tol;
  }
  if (any_positive && any_negative)
    verdict.relation = Relation::crossing;
  else if (any_positive)
    verdict.relation = Relation::dominates;
  else if (any_negative)
    verdict.relation = Relation::dominated;
  else
    verdict.relation = Relation::equivalent;

  if (verdict.relation == Relation::crossing) {
    // Bracket each sign change between consecutive beyond-tolerance margins.
    int previous = -1;
    for (int i = 0; i < grid_size; ++i) {
      const double m = verdict.margins[static_cast<std::size_t>(i)];
      if (!(m > tol || m < -tol)) continue;
      if (previous >= 0) {
        const double mp = verdict.margins[static_cast<std::size_t>(previous)];
        if ((mp > tol) != (m > tol)) {
          double lo = verdict.rho_grid[static_cast<std::size_t>(previous)];
          double hi = verdict.rho_grid[static_cast<std::size_t>(i)];
          double lo_margin = mp;
          while (hi - lo > 1e-4) {
            const double mid = 0.5 * (lo + hi);
            const double mm = margin_at_rho(a, b, shifted, mid);
            if ((mm >= 0.0) == (lo_margin >= 0.0)) {
              lo = mid;
              lo_margin = mm;
            } else {
              hi = mid;
            }
          }
          verdict.crossings.emplace_back(lo, hi);
        }
      }
      previous = i;
    }
  }
  return verdict;
}

CaFamilyResult dominance_ca_family(const Society& a, const Society& b, const UtilitySpec& u,
                                   const std::vector<double>& r_values, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("CA-family tolerance must be > 0");
  for (double r : r_values)
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream msg;
      msg << "CA-family generator parameter must be finite and > 0, got " << r;
      throw InvalidInput(msg.str());
    }
  const UtilitySpec shifted = normalize_utility_for_dominance(u, a, b);

  CaFamilyResult result;
  result.tolerance = tol;
  result.r_values = r_values;
  result.margins.reserve(r_values.size());
  for (double r : r_values) {
    const double margin = bernstein_sum(a, shifted, r) - bernstein_sum(b, shifted, r);
    result.margins.push_back(margin);
    if (margin < -tol) result.violating_r.push_back(r);
  }
  result.linear_margin = linear_sum(a, shifted) - linear_sum(b, shifted);
  result.linear_violated = result.linear_margin < -tol;
  return result;
}

}  // namespace osw
