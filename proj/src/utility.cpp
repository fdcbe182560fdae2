#include "osw/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "osw/errors.hpp"

namespace osw {

namespace {

std::string format_number(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

UtilitySpec UtilitySpec::log_utility() {
  UtilitySpec u;
  u.kind_ = Kind::Log;
  return u;
}

UtilitySpec UtilitySpec::power(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInput("power utility requires sigma > 0, got " + format_number(sigma));
  UtilitySpec u;
  u.kind_ = Kind::Power;
  u.sigma_ = sigma;
  return u;
}

UtilitySpec UtilitySpec::affine(UtilitySpec base, double scale, double shift) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift))
    throw InvalidInput("affine utility requires finite scale > 0 and finite shift");
  UtilitySpec u;
  u.kind_ = Kind::Affine;
  u.scale_ = scale;
  u.shift_ = shift;
  u.base_ = std::make_shared<const UtilitySpec>(std::move(base));
  return u;
}

UtilitySpec UtilitySpec::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw InvalidInput("tabulated utility requires at least one entry");
  std::sort(table.begin(), table.end());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].first > 0.0) || !std::isfinite(table[i].first) ||
        !std::isfinite(table[i].second))
      throw InvalidInput("tabulated utility entries must have finite income > 0");
    if (i > 0) {
      if (table[i].first == table[i - 1].first)
        throw InvalidInput("tabulated utility has duplicate income " +
                           format_number(table[i].first));
      if (!(table[i].second > table[i - 1].second))
        throw InvalidInput("tabulated utility must be strictly increasing in income");
    }
  }
  UtilitySpec u;
  u.kind_ = Kind::Tabulated;
  u.table_ = std::move(table);
  return u;
}

UtilitySpec UtilitySpec::shifted(double shift) const {
  return affine(*this, 1.0, shift);
}

double UtilitySpec::value(double income) const {
  switch (kind_) {
    case Kind::Log:
      return std::log(income);
    case Kind::Power:
      return std::pow(income, sigma_);
    case Kind::Affine:
      return scale_ * base_->value(income) + shift_;
    case Kind::Tabulated: {
      auto it = std::lower_bound(table_.begin(), table_.end(),
                                 std::make_pair(income, -std::numeric_limits<double>::infinity()));
      if (it == table_.end() || it->first != income)
        throw InvalidInput("tabulated utility does not cover income " + format_number(income));
      return it->second;
    }
  }
  throw InvalidInput("unknown utility kind");
}

double UtilitySpec::inverse(double utility) const {
  switch (kind_) {
    case Kind::Log:
      return std::exp(utility);
    case Kind::Power: {
      if (!(utility >= 0.0))
        throw NumericFailure("power utility inversion requires a non-negative value, got " +
                             format_number(utility));
      return std::pow(utility, 1.0 / sigma_);
    }
    case Kind::Affine:
      return base_->inverse((utility - shift_) / scale_);
    case Kind::Tabulated: {
      if (utility < table_.front().second || utility > table_.back().second)
        throw NumericFailure("value " + format_number(utility) +
                             " lies outside the tabulated utility range [" +
                             format_number(table_.front().second) + ", " +
                             format_number(table_.back().second) + "]");
      auto it = std::lower_bound(table_.begin(), table_.end(), utility,
                                 [](const auto& entry, double v) { return entry.second < v; });
      if (it->second == utility) return it->first;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (utility - lo.second) / (hi.second - lo.second);
      return lo.first + t * (hi.first - lo.first);
    }
  }
  throw InvalidInput("unknown utility kind");
}

std::string UtilitySpec::descriptor() const {
  switch (kind_) {
    case Kind::Log:
      return "log";
    case Kind::Power:
      return "power(" + format_number(sigma_) + ")";
    case Kind::Affine: {
      std::string base = base_->descriptor();
      std::string out = scale_ == 1.0 ? base : format_number(scale_) + "*" + base;
      if (shift_ != 0.0)
        out += (shift_ > 0.0 ? "+" : "") + format_number(shift_);
      return out;
    }
    case Kind::Tabulated:
      return "tabulated(" + std::to_string(table_.size()) + ")";
  }
  return "unknown";
}

}  // namespace osw
