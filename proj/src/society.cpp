#include "osw/society.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "osw/errors.hpp"

namespace osw {

namespace {

// Probability of income y under dist, treating absent incomes as zero mass.
double prob_at(const IncomeDistribution& dist, double income) {
  for (const Atom& a : dist.atoms())
    if (a.income == income) return a.prob;
  return 0.0;
}

std::vector<double> union_support(const IncomeDistribution& a, const IncomeDistribution& b) {
  std::set<double> incomes;
  for (const Atom& atom : a.atoms()) incomes.insert(atom.income);
  for (const Atom& atom : b.atoms()) incomes.insert(atom.income);
  return {incomes.begin(), incomes.end()};
}

}  // namespace

Society::Society(std::vector<TypeEntry> types, std::string name)
    : types_(std::move(types)), name_(std::move(name)) {
  if (types_.empty()) throw InvalidInput("society needs at least one type");
  std::set<std::string> labels;
  double total = 0.0;
  bool any_positive = false;
  for (const TypeEntry& t : types_) {
    if (t.label.empty()) throw InvalidInput("type labels must be non-empty");
    if (!labels.insert(t.label).second)
      throw InvalidInput("duplicate type label \"" + t.label + "\"");
    if (!(t.share >= 0.0) || !std::isfinite(t.share))
      throw InvalidInput("share of type \"" + t.label + "\" must be finite and >= 0");
    total += t.share;
    any_positive = any_positive || t.share > 0.0;
  }
  if (!any_positive) throw InvalidInput("society needs at least one type with positive share");
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "type shares sum to " << total << ", not 1";
    throw InvalidInput(msg.str());
  }
  // Same policy as IncomeDistribution: keep shares verbatim when the total is
  // already within 1e-12, so share-preserving transformations stay bit-exact.
  if (std::abs(total - 1.0) > 1e-12)
    for (TypeEntry& t : types_) t.share /= total;
}

std::size_t Society::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < types_.size(); ++i)
    if (types_[i].label == label) return i;
  throw InvalidInput("unknown type label \"" + label + "\"");
}

IncomeDistribution aggregate(const Society& society) {
  std::map<double, long double> mass;
  for (const TypeEntry& t : society.types()) {
    if (t.share == 0.0) continue;
    for (const Atom& a : t.dist.atoms())
      mass[a.income] += static_cast<long double>(t.share) * a.prob;
  }
  std::vector<Atom> atoms;
  atoms.reserve(mass.size());
  for (const auto& [income, prob] : mass)
    atoms.push_back({income, static_cast<double>(prob)});
  return IncomeDistribution(std::move(atoms));
}

Society transform_scale(const Society& society, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidInput("scale factor must be finite and > 0");
  std::vector<TypeEntry> types;
  types.reserve(society.types().size());
  for (const TypeEntry& t : society.types()) {
    std::vector<Atom> atoms = t.dist.atoms();
    for (Atom& a : atoms) a.income *= lambda;
    types.push_back({t.label, t.share, IncomeDistribution(std::move(atoms))});
  }
  return Society(std::move(types), society.name());
}

Society transform_permute(const Society& society, const std::vector<std::size_t>& perm) {
  const auto& types = society.types();
  if (perm.size() != types.size())
    throw InvalidInput("permutation size does not match the number of types");
  std::vector<bool> seen(types.size(), false);
  for (std::size_t p : perm) {
    if (p >= types.size() || seen[p])
      throw InvalidInput("permutation is not a bijection on type indices");
    seen[p] = true;
  }
  std::vector<TypeEntry> permuted;
  permuted.reserve(types.size());
  for (std::size_t i = 0; i < types.size(); ++i)
    permuted.push_back({types[i].label, types[i].share, types[perm[i]].dist});
  return Society(std::move(permuted), society.name());
}

Society transform_converge(const Society& society, const std::string& s,
                           const std::string& s_prime, double alpha) {
  if (s == s_prime) throw InvalidInput("converge needs two distinct types");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw InvalidInput("converge mixing weight must lie in [0, 1)");
  const std::size_t i = society.index_of(s);
  const std::size_t j = society.index_of(s_prime);
  const IncomeDistribution& di = society.types()[i].dist;
  const IncomeDistribution& dj = society.types()[j].dist;

  const std::vector<double> incomes = union_support(di, dj);
  std::vector<Atom> row_i, row_j;
  row_i.reserve(incomes.size());
  row_j.reserve(incomes.size());
  for (double y : incomes) {
    const double pi = prob_at(di, y);
    const double pj = prob_at(dj, y);
    const double mid = 0.5 * (pi + pj);
    row_i.push_back({y, alpha * pi + (1.0 - alpha) * mid});
    row_j.push_back({y, alpha * pj + (1.0 - alpha) * mid});
  }

  std::vector<TypeEntry> types = society.types();
  types[i].dist = IncomeDistribution(std::move(row_i));
  types[j].dist = IncomeDistribution(std::move(row_j));
  return Society(std::move(types), society.name());
}

Society split_type(const Society& society, const std::string& label,
                   double share_a, double share_b) {
  const std::size_t i = society.index_of(label);
  const double share = society.types()[i].share;
  if (!(share_a >= 0.0) || !(share_b >= 0.0))
    throw InvalidInput("split fractions must be >= 0");
  if (std::abs((share_a + share_b) - share) > 1e-12) {
    std::ostringstream msg;
    msg << "split fractions sum to " << share_a + share_b << ", expected the share "
        << share << " of type \"" << label << "\"";
    throw InvalidInput(msg.str());
  }
  std::vector<TypeEntry> types;
  types.reserve(society.types().size() + 1);
  for (std::size_t k = 0; k < society.types().size(); ++k) {
    if (k != i) {
      types.push_back(society.types()[k]);
      continue;
    }
    const TypeEntry& t = society.types()[k];
    types.push_back({t.label + "/a", share_a, t.dist});
    types.push_back({t.label + "/b", share_b, t.dist});
  }
  return Society(std::move(types), society.name());
}

Society merge_identical(const Society& society, const std::string& a,
                        const std::string& b, double tol) {
  if (a == b) throw InvalidInput("merge needs two distinct types");
  if (!(tol >= 0.0)) throw InvalidInput("merge tolerance must be >= 0");
  const std::size_t i = society.index_of(a);
  const std::size_t j = society.index_of(b);
  const IncomeDistribution& di = society.types()[i].dist;
  const IncomeDistribution& dj = society.types()[j].dist;
  for (double y : union_support(di, dj)) {
    if (std::abs(prob_at(di, y) - prob_at(dj, y)) > tol) {
      std::ostringstream msg;
      msg << "types \"" << a << "\" and \"" << b
          << "\" differ at income " << y << " beyond tolerance " << tol;
      throw InvalidInput(msg.str());
    }
  }
  std::vector<TypeEntry> types;
  types.reserve(society.types().size() - 1);
  for (std::size_t k = 0; k < society.types().size(); ++k) {
    if (k == j) continue;
    TypeEntry t = society.types()[k];
    if (k == i) t.share += society.types()[j].share;
    types.push_back(std::move(t));
  }
  return Society(std::move(types), society.name());
}

}  // namespace osw
