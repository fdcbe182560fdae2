#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace osw {

/// Planner's utility function over incomes.
///
/// Log and Power(sigma > 0) are the canonical increasing families on
/// (0, inf). Affine wraps u -> a*u + b with a > 0, which represents the same
/// preferences as its base. Tabulated holds explicit (income, utility) pairs,
/// strictly increasing in both coordinates; it evaluates only at tabulated
/// incomes and inverts by monotone piecewise-linear interpolation, erroring
/// outside the tabulated utility range.
class UtilitySpec {
 public:
  enum class Kind { Log, Power, Affine, Tabulated };

  static UtilitySpec log_utility();
  static UtilitySpec power(double sigma);
  static UtilitySpec affine(UtilitySpec base, double scale, double shift);
  static UtilitySpec tabulated(std::vector<std::pair<double, double>> table);

  /// Same preferences, utility shifted by a constant.
  UtilitySpec shifted(double shift) const;

  double value(double income) const;
  double inverse(double utility) const;

  Kind kind() const { return kind_; }
  /// Human-readable tag used in reports, e.g. "log" or "power(0.5)".
  std::string descriptor() const;

 private:
  UtilitySpec() = default;

  Kind kind_ = Kind::Log;
  double sigma_ = 0.0;                            // Power
  double scale_ = 1.0;                            // Affine
  double shift_ = 0.0;                            // Affine
  std::shared_ptr<const UtilitySpec> base_;       // Affine
  std::vector<std::pair<double, double>> table_;  // Tabulated, sorted by income
};

}  // namespace osw
