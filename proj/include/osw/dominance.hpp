#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osw/society.hpp"
#include "osw/utility.hpp"

namespace osw {

enum class Relation { dominates, dominated, equivalent, crossing };

const char* to_string(Relation relation);

/// Falsification check over the Bernstein generators
/// phi_r(z) = (1/r)(1 - e^{-rz}) plus the linear case phi(z) = z: a society
/// dominates over the whole aversion range only if its q-weighted phi sum is
/// at least the other's for every such phi.
struct CaFamilyResult {
  std::vector<double> r_values;
  std::vector<double> margins;  // sum_A q phi_r(U) - sum_B q' phi_r(U'), per r
  double linear_margin;         // phi(z) = z, the theta = 0 comparison
  std::vector<double> violating_r;  // r values with margin < -tol
  bool linear_violated;
  double tolerance;

  bool falsified() const { return linear_violated || !violating_r.empty(); }
};

/// Verdict of the welfare comparison over the full aversion range, evaluated
/// on a rho = exp(-theta) grid covering [0, 1]; rho = 0 is the exact maximin
/// endpoint and rho = 1 the exact utilitarian one.
struct DominanceVerdict {
  Relation relation;
  std::vector<double> rho_grid;
  std::vector<double> margins;  // V(A) - V(B) at each rho, common shifted utility
  std::vector<std::pair<double, double>> crossings;  // rho intervals bracketing sign changes
  std::optional<CaFamilyResult> ca_family;
  double tolerance;
};

/// Shifts u by max(0, -min u over both societies' evaluated incomes) so the
/// minimum utility is non-negative. The same shift applies to both societies,
/// so every margin is unchanged.
UtilitySpec normalize_utility_for_dominance(const UtilitySpec& u, const Society& a,
                                            const Society& b);

/// 25 logarithmically spaced generator parameters in [1e-3, 1e3].
std::vector<double> default_r_values();

DominanceVerdict dominance_check(const Society& a, const Society& b, const UtilitySpec& u,
                                 int grid_size = 101, double tol = 1e-9);

CaFamilyResult dominance_ca_family(const Society& a, const Society& b, const UtilitySpec& u,
                                   const std::vector<double>& r_values = default_r_values(),
                                   double tol = 1e-9);

}  // namespace osw
