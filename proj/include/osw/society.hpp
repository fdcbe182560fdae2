#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "osw/distribution.hpp"

namespace osw {

struct TypeEntry {
  std::string label;
  double share;
  IncomeDistribution dist;
  friend bool operator==(const TypeEntry&, const TypeEntry&) = default;
};

/// A society pairs an opportunity profile (one income distribution per type)
/// with demographic shares over the types.
///
/// Shares are renormalized on construction when they sum to one within 1e-9
/// and rejected otherwise. Labels must be unique and non-empty. Types with
/// zero share stay stored but take no part in any evaluation.
class Society {
 public:
  explicit Society(std::vector<TypeEntry> types, std::string name = {});

  const std::vector<TypeEntry>& types() const { return types_; }
  const std::string& name() const { return name_; }
  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const Society&, const Society&) = default;

 private:
  std::vector<TypeEntry> types_;
  std::string name_;
};

/// Population-wide income distribution: the share-weighted mixture of the
/// supported types' distributions.
IncomeDistribution aggregate(const Society& society);

/// All incomes multiplied by lambda > 0; shares and probabilities unchanged.
Society transform_scale(const Society& society, double lambda);

/// Distributions permuted across positions: new type i keeps its label and
/// share but receives the distribution of type perm[i].
Society transform_permute(const Society& society, const std::vector<std::size_t>& perm);

/// Pulls the rows of s and s_prime toward their midpoint: each is replaced by
/// alpha * (own row) + (1 - alpha) * midpoint, alpha in [0, 1).
Society transform_converge(const Society& society, const std::string& s,
                           const std::string& s_prime, double alpha);

/// Splits a type into two subtypes with identical distribution; the two new
/// shares must add up to the original. New labels are label + "/a", "/b".
Society split_type(const Society& society, const std::string& label,
                   double share_a, double share_b);

/// Inverse of split_type: merges two types whose distributions agree within
/// tol at every income of the union support, summing their shares.
Society merge_identical(const Society& society, const std::string& a,
                        const std::string& b, double tol);

}  // namespace osw
