#pragma once

#include <cstddef>
#include <vector>

#include "osw/utility.hpp"

namespace osw {

struct Atom {
  double income;
  double prob;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Discrete probability measure on strictly positive incomes.
///
/// Construction canonicalizes: atoms sorted by income, duplicate incomes
/// merged by summing probabilities, and the total mass renormalized to one
/// (rejected when it is off by more than 1e-9). Zero-probability atoms are
/// kept so supports stay stable across transformations; evaluation sums skip
/// them.
class IncomeDistribution {
 public:
  explicit IncomeDistribution(std::vector<Atom> atoms);
  static IncomeDistribution degenerate(double income);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  friend bool operator==(const IncomeDistribution&, const IncomeDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
};

double mean(const IncomeDistribution& dist);
double geometric_mean(const IncomeDistribution& dist);
double expected_utility(const IncomeDistribution& dist, const UtilitySpec& u);

}  // namespace osw
