#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "osw/errors.hpp"
#include "osw/welfare.hpp"
#include "testkit.hpp"

using namespace osw;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const UtilitySpec kLog = UtilitySpec::log_utility();

Society example_society() {
  return Society({{"R", 0.2, IncomeDistribution({{1.0, 0.1}, {2.0, 0.9}})},
                  {"P", 0.8, IncomeDistribution({{1.0, 0.6}, {2.0, 0.4}})}});
}

// Two types with expected log-utilities 0 and ln 2 at equal shares.
Society two_type_society() {
  return Society({{"lo", 0.5, IncomeDistribution::degenerate(1.0)},
                  {"hi", 0.5, IncomeDistribution::degenerate(2.0)}});
}

WelfareParams at_theta(double theta) {
  WelfareParams params;
  params.theta = theta;
  return params;
}

double objective(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                 const std::vector<double>& utilities, double theta) {
  double value = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    value += p[i] * utilities[(std::size_t)i] + p[i] * std::log(p[i] / q[i]) / theta;
  }
  return value;
}

}  // namespace

TEST_CASE("phi_theta and its inverse") {
  CHECK(phi_theta(0.37, 0.0) == 0.37);
  CHECK(phi_theta(0.0, 2.0) == -1.0);
  CHECK(phi_theta(0.0, 17.5) == -1.0);
  CHECK(phi_theta_inverse(phi_theta(0.7, 2.5), 2.5) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(phi_theta_inverse(-1.0, 3.0) == 0.0);
  CHECK_THROWS_AS(phi_theta(1.0, -0.5), InvalidInput);
  CHECK_THROWS_AS(phi_theta_inverse(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(phi_theta_inverse(0.5, 1.0), InvalidInput);
}

TEST_CASE("welfare_primal on the worked example") {
  const Society society = example_society();
  CHECK(welfare_primal(society, kLog, at_theta(0.0)) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  // theta = inf picks the worst-off type, here P with 0.4 ln 2.
  CHECK(welfare_primal(society, kLog, at_theta(kInf)) ==
        doctest::Approx(0.4 * std::log(2.0)).epsilon(1e-14));

  const Society two = two_type_society();
  CHECK(welfare_primal(two, kLog, at_theta(1.0)) ==
        doctest::Approx(-std::log(0.75)).epsilon(1e-14));

  SUBCASE("zero-share types do not contribute") {
    const Society padded({{"lo", 0.5, IncomeDistribution::degenerate(1.0)},
                          {"hi", 0.5, IncomeDistribution::degenerate(2.0)},
                          {"ghost", 0.0, IncomeDistribution::degenerate(1e-3)}});
    for (double theta : {0.0, 1.0, 7.0, kInf})
      CHECK(welfare_primal(padded, kLog, at_theta(theta)) ==
            welfare_primal(two, kLog, at_theta(theta)));
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(welfare_primal(society, kLog, at_theta(-1.0)), InvalidInput);
    WelfareParams bad;
    bad.theta_small_switch = 0.0;
    CHECK_THROWS_AS(welfare_primal(society, kLog, bad), InvalidInput);
  }
}

TEST_CASE("welfare_second_order") {
  const Society society = example_society();
  // Identity transform is plain utilitarian aggregation.
  CHECK(welfare_second_order(society, kLog, SecondOrderTransform::identity()) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));

  SUBCASE("exp_family equals welfare_primal bit for bit") {
    oswtest::SocietyGenerator gen(5);
    for (int i = 0; i < 25; ++i) {
      const Society s = gen.next();
      for (double theta : {1e-4, 1e-2, 0.1, 1.0, 5.0, 50.0})
        CHECK(welfare_second_order(s, kLog, SecondOrderTransform::exp_family(theta)) ==
              welfare_primal(s, kLog, at_theta(theta)));
    }
  }
  SUBCASE("raw callables agree with the primal within 1e-10") {
    oswtest::SocietyGenerator gen(6);
    for (int i = 0; i < 25; ++i) {
      const Society s = gen.next();
      for (double theta : {1e-4, 0.1, 1.0, 5.0, 50.0}) {
        const auto raw = SecondOrderTransform::custom(
            [theta](double t) { return phi_theta(t, theta); },
            [theta](double t) { return phi_theta_inverse(t, theta); }, "raw phi_theta");
        CHECK(welfare_second_order(s, kLog, raw) ==
              doctest::Approx(welfare_primal(s, kLog, at_theta(theta))).epsilon(1e-10));
      }
    }
  }
  SUBCASE("concave transform lands between min U and the utilitarian value") {
    // sqrt needs non-negative utilities; incomes >= 1 keep log utility >= 0.
    const Society s({{"a", 0.3, IncomeDistribution::degenerate(1.5)},
                     {"b", 0.7, IncomeDistribution({{2.0, 0.5}, {8.0, 0.5}})}});
    const auto root = SecondOrderTransform::custom(
        [](double t) { return std::sqrt(t); }, [](double t) { return t * t; }, "sqrt");
    const double value = welfare_second_order(s, kLog, root);
    const double u_a = std::log(1.5);
    const double u_b = 0.5 * (std::log(2.0) + std::log(8.0));
    CHECK(value >= std::min(u_a, u_b));
    CHECK(value <= 0.3 * u_a + 0.7 * u_b);
  }
  SUBCASE("inverse domain violations surface as numeric failures") {
    const auto broken = SecondOrderTransform::custom(
        [](double) { return 1.0; },
        [](double) -> double { throw InvalidInput("no inverse here"); }, "broken");
    CHECK_THROWS_AS(welfare_second_order(society, kLog, broken), NumericFailure);
  }
}

TEST_CASE("optimal_weights") {
  const Society society = example_society();
  SUBCASE("theta = 0 returns the demographic shares") {
    const WeightVector w = optimal_weights(society, kLog, 0.0);
    CHECK(w.weights[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(w.weights[1] == doctest::Approx(0.8).epsilon(1e-14));
  }
  SUBCASE("closed form on the two-type society") {
    const WeightVector w = optimal_weights(two_type_society(), kLog, 1.0);
    CHECK(w.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w.weights[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("strong aversion concentrates on the worst-off type") {
    const WeightVector w = optimal_weights(two_type_society(), kLog, 50.0);
    CHECK(w.weights[0] >= 0.999);
  }
  SUBCASE("theta = inf yields the maximin limit weights") {
    const WeightVector w = optimal_weights(two_type_society(), kLog, kInf);
    CHECK(w.weights[0] == 1.0);
    CHECK(w.weights[1] == 0.0);
  }
  SUBCASE("weights sum to one and vanish off the support") {
    const Society padded({{"a", 0.6, IncomeDistribution::degenerate(1.0)},
                          {"b", 0.4, IncomeDistribution::degenerate(3.0)},
                          {"ghost", 0.0, IncomeDistribution::degenerate(9.0)}});
    for (double theta : {0.0, 0.7, 12.0}) {
      const WeightVector w = optimal_weights(padded, kLog, theta);
      CHECK(w.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(w.weights[2] == 0.0);
    }
  }
}

TEST_CASE("welfare_variational") {
  SUBCASE("reproduces the closed form on the two-type society") {
    const VariationalResult r = welfare_variational(two_type_society(), kLog, 1.0);
    CHECK(r.value == doctest::Approx(-std::log(0.75)).epsilon(1e-10));
    CHECK(std::abs(r.weights.weights[0] - 2.0 / 3.0) <= 1e-6);
    CHECK(std::abs(r.weights.weights[1] - 1.0 / 3.0) <= 1e-6);
  }
  SUBCASE("equal opportunity pins the weights at q and the value at U") {
    const IncomeDistribution d({{1.0, 0.5}, {2.0, 0.5}});
    const Society equal({{"a", 0.3, d}, {"b", 0.7, d}});
    const VariationalResult r = welfare_variational(equal, kLog, 2.0);
    CHECK(r.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-13));
    CHECK(r.weights.weights[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(r.weights.weights[1] == doctest::Approx(0.7).epsilon(1e-9));
  }
  SUBCASE("returned weights are no better than the closed-form optimum") {
    oswtest::SocietyGenerator gen(7);
    const WelfareParams defaults;
    for (int i = 0; i < 10; ++i) {
      const Society s = gen.next();
      for (double theta : {1e-3, 0.5, 5.0}) {
        const VariationalResult r = welfare_variational(s, kLog, theta);
        const WeightVector star = optimal_weights(s, kLog, theta);
        std::vector<double> utilities;
        for (const TypeEntry& t : s.types())
          utilities.push_back(expected_utility(t.dist, kLog));
        const Eigen::VectorXd q = demographic_weights(s).weights;
        const double at_returned = objective(r.weights.weights, q, utilities, theta);
        const double at_star = objective(star.weights, q, utilities, theta);
        CHECK(at_returned >= at_star - defaults.dual_tol);
      }
    }
  }
  SUBCASE("requires finite positive theta") {
    CHECK_THROWS_AS(welfare_variational(two_type_society(), kLog, 0.0), InvalidInput);
    CHECK_THROWS_AS(welfare_variational(two_type_society(), kLog, kInf), InvalidInput);
  }
}

TEST_CASE("kl_divergence") {
  const auto weights = [](std::vector<double> w) {
    WeightVector v;
    v.weights = Eigen::Map<Eigen::VectorXd>(w.data(), (Eigen::Index)w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v.labels.push_back("t" + std::to_string(i));
    return v;
  };
  CHECK(kl_divergence(weights({0.4, 0.6}), weights({0.4, 0.6})) == 0.0);
  CHECK(kl_divergence(weights({1.0, 0.0}), weights({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(kl_divergence(weights({0.2, 0.8}), weights({0.5, 0.5})) ==
        doctest::Approx(0.2 * std::log(0.4) + 0.8 * std::log(1.6)).epsilon(1e-14));
  CHECK(kl_divergence(weights({0.2, 0.8}), weights({0.5, 0.5})) ==
        doctest::Approx(0.19274475).epsilon(1e-7));
  CHECK_THROWS_AS(kl_divergence(weights({0.5, 0.5}), weights({1.0, 0.0})), InvalidInput);
  SUBCASE("non-negativity on random simplex pairs") {
    oswtest::SocietyGenerator gen(9);
    for (int i = 0; i < 50; ++i) {
      const Society s = gen.next();
      const WeightVector q = demographic_weights(s);
      const WeightVector p = optimal_weights(s, kLog, 2.5);
      CHECK(kl_divergence(p, q) >= -1e-15);
    }
  }
}

TEST_CASE("bregman_divergence") {
  const auto square = [](double t) { return t * t; };
  const auto dsquare = [](double t) { return 2.0 * t; };
  CHECK(bregman_divergence(square, dsquare, 1.3, 1.3) == 0.0);
  CHECK(bregman_divergence(square, dsquare, 3.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(bregman_divergence(square, dsquare, -1.0, 2.0) == doctest::Approx(9.0).epsilon(1e-14));

  SUBCASE("CGF generator reproduces the welfare gap") {
    oswtest::SocietyGenerator gen(10);
    for (int i = 0; i < 10; ++i) {
      const Society s = gen.next();
      const double theta = 0.8;
      const auto k = [&](double tau) { return cgf(s, kLog, tau); };
      // K'(0) is the mean type utility.
      long double mean_u = 0.0L;
      for (const TypeEntry& t : s.types())
        mean_u += (long double)t.share * expected_utility(t.dist, kLog);
      const auto dk = [&](double tau) {
        REQUIRE(tau == 0.0);
        return (double)mean_u;
      };
      const double gap = bregman_divergence(k, dk, -theta, 0.0);
      const double primal = welfare_primal(s, kLog, at_theta(theta));
      CHECK(gap == doctest::Approx(theta * ((double)mean_u - primal)).epsilon(1e-9));
      CHECK(gap >= 0.0);
    }
  }
}

TEST_CASE("cgf") {
  const Society society = example_society();
  CHECK(cgf(society, kLog, 0.0) == 0.0);

  const Society single({{"only", 1.0, IncomeDistribution({{1.0, 0.5}, {4.0, 0.5}})}});
  const double u_single = expected_utility(single.types()[0].dist, kLog);
  for (double tau : {-2.0, -0.3, 1.7})
    CHECK(cgf(single, kLog, tau) == doctest::Approx(tau * u_single).epsilon(1e-13));

  SUBCASE("derivative at zero is the mean type utility") {
    oswtest::SocietyGenerator gen(12);
    for (int i = 0; i < 10; ++i) {
      const Society s = gen.next();
      long double mean_u = 0.0L;
      for (const TypeEntry& t : s.types())
        mean_u += (long double)t.share * expected_utility(t.dist, kLog);
      const double fd = oswtest::central_difference(
          [&](double tau) { return cgf(s, kLog, tau); }, 0.0, 1e-5);
      CHECK(fd == doctest::Approx((double)mean_u).epsilon(1e-8));
    }
  }
}

TEST_CASE("welfare_mean_variance") {
  const Society society = example_society();
  CHECK(welfare_mean_variance(society, kLog, 0.0) ==
        welfare_primal(society, kLog, at_theta(0.0)));

  const IncomeDistribution d({{1.0, 0.5}, {2.0, 0.5}});
  const Society equal({{"a", 0.5, d}, {"b", 0.5, d}});
  for (double theta : {0.0, 1.0, 10.0})
    CHECK(welfare_mean_variance(equal, kLog, theta) == doctest::Approx(0.5 * std::log(2.0)));

  SUBCASE("third-order error scaling") {
    // The truncation error of the second-order expansion shrinks by about
    // 1/4 when theta is halved, as long as the third cumulant is material.
    oswtest::SocietyGenerator gen(13);
    int measured = 0;
    for (int i = 0; i < 40 && measured < 10; ++i) {
      const Society s = gen.next();
      const double theta = 1e-2;
      const double err_full =
          std::abs(welfare_primal(s, kLog, at_theta(theta)) -
                   welfare_mean_variance(s, kLog, theta));
      const double err_half =
          std::abs(welfare_primal(s, kLog, at_theta(theta / 2.0)) -
                   welfare_mean_variance(s, kLog, theta / 2.0));
      if (err_full < 1e-12) continue;  // utilities too close to equal
      ++measured;
      CHECK(err_half / err_full == doctest::Approx(0.25).epsilon(0.4));
    }
    CHECK(measured > 0);
  }
}

TEST_CASE("welfare_mean_divergence") {
  SUBCASE("equal-opportunity societies have a zero divergence term") {
    const IncomeDistribution d({{1.0, 0.5}, {2.0, 0.5}});
    const Society equal({{"a", 0.25, d}, {"b", 0.75, d}});
    const MeanDivergenceResult r = welfare_mean_divergence(equal, kLog, 3.0);
    CHECK(r.iop_term == 0.0);
    CHECK(r.welfare == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("two-type example values") {
    const MeanDivergenceResult r = welfare_mean_divergence(two_type_society(), kLog, 1.0);
    CHECK(r.efficiency == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-13));
    CHECK(r.iop_term == doctest::Approx(0.5 * std::log(2.0) + std::log(0.75)).epsilon(1e-10));
    CHECK(r.iop_term == doctest::Approx(0.0588915).epsilon(1e-5));
    CHECK(r.welfare == doctest::Approx(-std::log(0.75)).epsilon(1e-13));
  }
  SUBCASE("divergence term is strictly positive under distinct utilities") {
    oswtest::GeneratorProfile profile;
    profile.force_distinct_utilities = true;
    profile.max_types = 4;
    oswtest::SocietyGenerator gen(14, profile);
    for (int i = 0; i < 20; ++i) {
      const Society s = gen.next();
      if (s.types().size() < 2) continue;
      for (double theta : {1e-3, 0.5, 9.0})
        CHECK(welfare_mean_divergence(s, kLog, theta).iop_term > 0.0);
    }
  }
  SUBCASE("requires finite positive theta") {
    CHECK_THROWS_AS(welfare_mean_divergence(two_type_society(), kLog, 0.0), InvalidInput);
    CHECK_THROWS_AS(welfare_mean_divergence(two_type_society(), kLog, kInf), InvalidInput);
  }
}

TEST_CASE("representation agreement and duality on random societies") {
  oswtest::SocietyGenerator gen(15);
  const WelfareParams defaults;
  for (int i = 0; i < 40; ++i) {
    const Society s = gen.next();
    for (double theta : {1e-4, 1e-2, 0.1, 1.0, 5.0, 50.0}) {
      const double primal = welfare_primal(s, kLog, at_theta(theta));
      CHECK(welfare_second_order(s, kLog, SecondOrderTransform::exp_family(theta)) == primal);
      CHECK(welfare_mean_divergence(s, kLog, theta).welfare ==
            doctest::Approx(primal).epsilon(1e-10));
      CHECK(welfare_variational(s, kLog, theta).value ==
            doctest::Approx(primal).scale(1.0).epsilon(defaults.dual_tol));

      // Duality: the objective at the closed-form weights equals the primal.
      const WeightVector star = optimal_weights(s, kLog, theta);
      std::vector<double> utilities;
      for (const TypeEntry& t : s.types())
        utilities.push_back(expected_utility(t.dist, kLog));
      const double at_star =
          objective(star.weights, demographic_weights(s).weights, utilities, theta);
      CHECK(at_star == doctest::Approx(primal).epsilon(1e-10));
    }
  }
}

TEST_CASE("positivity, limits, and the small-theta switch") {
  oswtest::SocietyGenerator gen(16);
  for (int i = 0; i < 20; ++i) {
    const Society s = gen.next();
    // Non-negative utility makes welfare non-negative; shift log utility up.
    const UtilitySpec positive = kLog.shifted(-std::log(0.1) + 1.0);
    for (double theta : {0.0, 0.5, 3.0, kInf})
      CHECK(welfare_primal(s, positive, at_theta(theta)) >= 0.0);

    double min_u = std::numeric_limits<double>::infinity();
    for (const TypeEntry& t : s.types())
      if (t.share > 0.0) min_u = std::min(min_u, expected_utility(t.dist, kLog));
    CHECK(std::abs(welfare_primal(s, kLog, at_theta(1e-9)) -
                   welfare_primal(s, kLog, at_theta(0.0))) <= 1e-8);
    CHECK(std::abs(welfare_primal(s, kLog, at_theta(1e4)) - min_u) <= 1e-3);

    const WelfareParams defaults;
    const double below =
        welfare_primal(s, kLog, at_theta(defaults.theta_small_switch * (1.0 - 1e-9)));
    const double above =
        welfare_primal(s, kLog, at_theta(defaults.theta_small_switch * (1.0 + 1e-9)));
    CHECK(std::abs(below - above) <= 1e-9);
  }
}

TEST_CASE("comparative aversion (monotonicity and weight spread)") {
  oswtest::GeneratorProfile profile;
  profile.force_distinct_utilities = true;
  // A bounded utility spread keeps the strict decrease representable in
  // doubles out to theta = 10 (huge gaps make the tilt underflow to a tie).
  profile.income_min = 1.0;
  profile.income_max = 7.0;
  oswtest::SocietyGenerator gen(17, profile);
  for (int i = 0; i < 15; ++i) {
    const Society s = gen.next();
    if (s.types().size() < 2) continue;
    double previous = welfare_primal(s, kLog, at_theta(0.0));
    for (double theta = 0.5; theta <= 10.0; theta += 0.5) {
      const double value = welfare_primal(s, kLog, at_theta(theta));
      CHECK(value < previous);
      previous = value;
    }
  }

  SUBCASE("two-type weight spread widens with theta") {
    const Society two = two_type_society();  // U(lo) < U(hi), equal shares
    const WeightVector slack = optimal_weights(two, kLog, 0.7);
    const WeightVector tight = optimal_weights(two, kLog, 2.9);
    CHECK(tight.weights[0] > slack.weights[0]);
    CHECK(slack.weights[0] >= slack.weights[1]);
    CHECK(slack.weights[1] > tight.weights[1]);
  }
}

TEST_CASE("axiom-style invariances of welfare") {
  SUBCASE("permutation invariance is bit-exact under uniform shares") {
    oswtest::GeneratorProfile profile;
    profile.uniform_shares = true;
    oswtest::SocietyGenerator gen(18, profile);
    for (int i = 0; i < 15; ++i) {
      const Society s = gen.next();
      const std::size_t n = s.types().size();
      std::vector<std::size_t> rotate(n);
      for (std::size_t j = 0; j < n; ++j) rotate[j] = (j + 1) % n;
      const Society permuted = transform_permute(s, rotate);
      for (double theta : {0.0, 1e-7, 0.3, 4.0, kInf})
        CHECK(welfare_primal(permuted, kLog, at_theta(theta)) ==
              welfare_primal(s, kLog, at_theta(theta)));
    }
  }
  SUBCASE("swapping the two rows of a uniform two-type profile changes nothing") {
    const Society f({{"R", 0.5, IncomeDistribution({{1.0, 1.0}, {2.0, 0.0}})},
                     {"P", 0.5, IncomeDistribution({{1.0, 0.0}, {2.0, 1.0}})}});
    const Society f_prime = transform_permute(f, {1, 0});
    for (double theta : {0.0, 0.5, 3.0, 40.0, kInf})
      CHECK(welfare_primal(f_prime, kLog, at_theta(theta)) ==
            welfare_primal(f, kLog, at_theta(theta)));
  }
  SUBCASE("the 0.8 share split into 0.5 and 0.3 keeps welfare") {
    const Society base({{"top", 0.2, IncomeDistribution({{1.0, 0.0}, {2.0, 1.0}})},
                        {"rest", 0.8, IncomeDistribution({{1.0, 1.0}, {2.0, 0.0}})}});
    const Society split = split_type(base, "rest", 0.5, 0.3);
    for (double theta : {0.0, 1.0, 9.0, kInf})
      CHECK(welfare_primal(split, kLog, at_theta(theta)) ==
            doctest::Approx(welfare_primal(base, kLog, at_theta(theta))).epsilon(1e-12));
  }
  SUBCASE("permuting non-uniform shares generally changes welfare") {
    const Society society = example_society();
    const Society swapped = transform_permute(society, {1, 0});
    CHECK(welfare_primal(swapped, kLog, at_theta(1.0)) !=
          doctest::Approx(welfare_primal(society, kLog, at_theta(1.0))).epsilon(1e-6));
  }
  SUBCASE("converging an equal-share pair weakly improves welfare") {
    oswtest::GeneratorProfile profile;
    profile.equal_share_pair = true;
    profile.max_types = 5;
    oswtest::SocietyGenerator gen(19, profile);
    for (int i = 0; i < 15; ++i) {
      const Society s = gen.next();
      if (s.types().size() < 2) continue;
      for (double alpha : {0.0, 0.4, 0.9}) {
        const Society merged =
            transform_converge(s, s.types()[0].label, s.types()[1].label, alpha);
        for (double theta : {0.0, 0.5, 3.0, 20.0, kInf})
          CHECK(welfare_primal(merged, kLog, at_theta(theta)) >=
                welfare_primal(s, kLog, at_theta(theta)) - 1e-12);
      }
    }
  }
  SUBCASE("type splits leave welfare unchanged") {
    oswtest::SocietyGenerator gen(20);
    for (int i = 0; i < 15; ++i) {
      const Society s = gen.next();
      const std::string label = s.types()[0].label;
      const double share = s.types()[0].share;
      const Society split = split_type(s, label, share / 2.0, share / 2.0);
      for (double theta : {0.0, 0.9, 17.0, kInf})
        CHECK(welfare_primal(split, kLog, at_theta(theta)) ==
              welfare_primal(s, kLog, at_theta(theta)));
    }
  }
  SUBCASE("log-utility scale identity") {
    oswtest::SocietyGenerator gen(21);
    for (int i = 0; i < 15; ++i) {
      const Society s = gen.next();
      for (double lambda : {0.1, 3.0, 1000.0}) {
        const Society scaled = transform_scale(s, lambda);
        for (double theta : {0.0, 0.5, 6.0})
          CHECK(welfare_primal(scaled, kLog, at_theta(theta)) ==
                doctest::Approx(welfare_primal(s, kLog, at_theta(theta)) + std::log(lambda))
                    .epsilon(1e-10));
      }
    }
  }
  SUBCASE("ranking is invariant under affine utility with theta/a") {
    // u -> a u + b represents the same preferences once theta -> theta / a.
    const Society a = example_society();
    const Society b = two_type_society();
    const double scale = 2.5, shift = -0.7;
    const UtilitySpec rescaled = UtilitySpec::affine(kLog, scale, shift);
    for (double theta : {0.3, 1.0, 4.0}) {
      const double margin_base = welfare_primal(a, kLog, at_theta(theta)) -
                                 welfare_primal(b, kLog, at_theta(theta));
      const double margin_rescaled =
          welfare_primal(a, rescaled, at_theta(theta / scale)) -
          welfare_primal(b, rescaled, at_theta(theta / scale));
      CHECK((margin_base > 0) == (margin_rescaled > 0));
      CHECK(margin_rescaled == doctest::Approx(scale * margin_base).epsilon(1e-10));
    }
  }
}

TEST_CASE("gradient identities (properties of the weights)") {
  oswtest::GeneratorProfile profile;
  profile.force_distinct_utilities = true;
  profile.max_types = 5;
  profile.max_support = 8;
  oswtest::SocietyGenerator gen(22, profile);
  const oswtest::WelfareFn engine = [](const Society& s, const UtilitySpec& u) {
    WelfareParams params;
    params.theta = 1.3;
    return welfare_primal(s, u, params);
  };
  for (int i = 0; i < 8; ++i) {
    const Society s = gen.next();
    const WeightVector star = optimal_weights(s, kLog, 1.3);

    for (std::size_t t = 0; t < s.types().size(); ++t) {
      const double fd = oswtest::fd_welfare_wrt_type_utility(engine, s, kLog, t, 1e-5);
      CHECK(fd == doctest::Approx(star.weights[(Eigen::Index)t]).epsilon(1e-6).scale(1.0));
    }

    const IncomeDistribution pi = aggregate(s);
    const Atom& probe = pi.atoms()[pi.size() / 2];
    double tilted = 0.0;
    for (std::size_t t = 0; t < s.types().size(); ++t) {
      double p_y = 0.0;
      for (const Atom& a : s.types()[t].dist.atoms())
        if (a.income == probe.income) p_y = a.prob;
      tilted += star.weights[(Eigen::Index)t] * p_y;
    }
    const double fd =
        oswtest::fd_welfare_wrt_income_utility(engine, s, kLog, probe.income, 1e-5);
    CHECK(fd == doctest::Approx(tilted).epsilon(1e-6).scale(1.0));
  }
}
