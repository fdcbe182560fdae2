#include "osw/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "osw/errors.hpp"

namespace osw {

IncomeDistribution::IncomeDistribution(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InvalidInput("income distribution needs at least one atom");
  for (const Atom& a : atoms) {
    if (!(a.income > 0.0) || !std::isfinite(a.income)) {
      std::ostringstream msg;
      msg << "income must lie in (0, inf), got " << a.income;
      throw InvalidInput(msg.str());
    }
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
      std::ostringstream msg;
      msg << "probability must be finite and >= 0, got " << a.prob;
      throw InvalidInput(msg.str());
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.income < b.income; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && atoms_.back().income == a.income)
      atoms_.back().prob += a.prob;
    else
      atoms_.push_back(a);
  }
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.prob;
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", not 1";
    throw InvalidInput(msg.str());
  }
  // Renormalize only a meaningful deviation; a total within 1e-12 keeps the
  // probabilities verbatim so pass-through transformations stay bit-exact.
  if (std::abs(total - 1.0) > 1e-12)
    for (Atom& a : atoms_) a.prob /= total;
}

IncomeDistribution IncomeDistribution::degenerate(double income) {
  return IncomeDistribution({{income, 1.0}});
}

double mean(const IncomeDistribution& dist) {
  long double total = 0.0L;
  for (const Atom& a : dist.atoms())
    if (a.prob > 0.0) total += static_cast<long double>(a.prob) * a.income;
  return static_cast<double>(total);
}

double geometric_mean(const IncomeDistribution& dist) {
  long double log_total = 0.0L;
  for (const Atom& a : dist.atoms())
    if (a.prob > 0.0) log_total += static_cast<long double>(a.prob) * std::log(a.income);
  return static_cast<double>(std::exp(static_cast<double>(log_total)));
}

double expected_utility(const IncomeDistribution& dist, const UtilitySpec& u) {
  long double total = 0.0L;
  for (const Atom& a : dist.atoms())
    if (a.prob > 0.0) total += static_cast<long double>(a.prob) * u.value(a.income);
  return static_cast<double>(total);
}

}  // namespace osw
