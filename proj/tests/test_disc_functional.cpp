#include <doctest.h>

#include <cmath>

#include "crosswedge/disc_functional.hpp"

using namespace crosswedge;

namespace {

const ProductRegion kDiscRegion{{PlanarDomain::unit_disc()}};

ScalarField indicator_outside(const DiscUnionSet& set) {
  return [set](const PointN& p) -> double { return set.contains(p.coord[0]) ? 0.0 : 1.0; };
}

}  // namespace

TEST_CASE("disc boundary averages") {
  SUBCASE("constant field") {
    const ScalarField one = [](const PointN&) { return 1.0; };
    DiscCandidate phi = DiscCandidate::constant(PointN::one(Complex(0.3, 0.1)));
    CHECK(disc_boundary_average(one, phi, 64) == doctest::Approx(1.0));
  }
  SUBCASE("upper half plane indicator through the identity disc") {
    const ScalarField upper = [](const PointN& p) {
      return p.coord[0].imag() > 0.0 ? 1.0 : 0.0;
    };
    DiscCandidate phi;
    phi.base = {Complex(0, 0)};
    phi.coef = {{Complex(1, 0)}};
    CHECK(disc_boundary_average(upper, phi, 256) == doctest::Approx(0.5));
  }
  SUBCASE("constant disc inside the target set scores zero") {
    const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
    const ScalarField u = indicator_outside(A);
    DiscCandidate phi = DiscCandidate::constant(PointN::one(Complex(0.1, 0)));
    CHECK(disc_boundary_average(u, phi, 64) == doctest::Approx(0.0));
  }
  SUBCASE("quadrature size is validated") {
    const ScalarField one = [](const PointN&) { return 1.0; };
    DiscCandidate phi = DiscCandidate::constant(PointN::one(Complex(0, 0)));
    CHECK_THROWS_AS(disc_boundary_average(one, phi, 8), std::invalid_argument);
  }
  SUBCASE("NaN marks the field undefined") {
    const ScalarField bad = [](const PointN&) { return std::nan(""); };
    DiscCandidate phi = DiscCandidate::constant(PointN::one(Complex(0, 0)));
    CHECK_THROWS_AS(disc_boundary_average(bad, phi, 64), std::domain_error);
  }
}

TEST_CASE("poisson functional trivial cases") {
  DiscSearchOptions opt;
  opt.budget = 200;
  opt.degree = 2;
  opt.profile.enabled = false;

  SUBCASE("zero field") {
    const ScalarField zero = [](const PointN&) { return 0.0; };
    const auto res = poisson_functional_estimate(zero, PointN::one(Complex(0.2, 0)),
                                                 kDiscRegion, opt);
    CHECK(res.value == doctest::Approx(0.0));
    CHECK(res.feasibility == 0.0);
  }
  SUBCASE("base point inside the target: constant disc wins immediately") {
    const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
    const auto res = poisson_functional_estimate(
        indicator_outside(A), PointN::one(Complex(0.1, 0)), kDiscRegion, opt);
    CHECK(res.value == doctest::Approx(0.0));
  }
  SUBCASE("value never exceeds the field at the base point") {
    const DiscUnionSet A{{{Complex(0.5, 0.5), 0.2}}};
    const auto res = poisson_functional_estimate(
        indicator_outside(A), PointN::one(Complex(-0.3, 0)), kDiscRegion, opt);
    CHECK(res.value <= 1.0 + 1e-12);
  }
  SUBCASE("base point outside the region is rejected") {
    const ScalarField zero = [](const PointN&) { return 0.0; };
    CHECK_THROWS_AS(poisson_functional_estimate(zero, PointN::one(Complex(2, 0)),
                                                kDiscRegion, opt),
                    std::invalid_argument);
  }
}

TEST_CASE("radial target: estimate brackets the closed form") {
  // omega(1/2, {|t| < 1/4}, E) = log(|z|/r) / log(1/r) = 1/2
  const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
  DiscSearchOptions opt;
  opt.degree = 60;
  opt.budget = 10000;
  const auto res = poisson_functional_estimate(indicator_outside(A),
                                               PointN::one(Complex(0.5, 0)),
                                               kDiscRegion, opt);
  CHECK(res.feasibility == 0.0);
  CHECK(res.value >= 0.5 - 5e-3);
  CHECK(res.value <= 0.55);
  CHECK(res.evaluations <= 10000);

  SUBCASE("quadrature refinement is stable at the converged disc") {
    const ScalarField u = indicator_outside(A);
    const double a1 = disc_boundary_average(u, res.best, 4096);
    const double a2 = disc_boundary_average(u, res.best, 8192);
    CHECK(std::abs(a1 - a2) <= 1e-3);
  }
}

TEST_CASE("budget monotonicity at fixed seed") {
  const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
  const ScalarField u = indicator_outside(A);
  DiscSearchOptions opt;
  opt.degree = 60;
  double prev = 1e300;
  for (const std::uint64_t budget : {50ull, 500ull, 3000ull, 8000ull}) {
    opt.budget = budget;
    const auto res = poisson_functional_estimate(u, PointN::one(Complex(0.5, 0)),
                                                 kDiscRegion, opt);
    CHECK(res.value <= prev + 1e-12);
    prev = res.value;
  }
}

TEST_CASE("search is deterministic across thread counts") {
  const DiscUnionSet A{{{Complex(0.3, 0.2), 0.3}}};
  const ScalarField u = indicator_outside(A);
  DiscSearchOptions o1;
  o1.degree = 6;
  o1.budget = 3000;
  o1.threads = 1;
  o1.profile.enabled = false;
  DiscSearchOptions o4 = o1;
  o4.threads = 4;
  const auto r1 = poisson_functional_estimate(u, PointN::one(Complex(-0.2, 0)), kDiscRegion, o1);
  const auto r4 = poisson_functional_estimate(u, PointN::one(Complex(-0.2, 0)), kDiscRegion, o4);
  CHECK(r1.value == r4.value);
  CHECK(r1.evaluations == r4.evaluations);
}

TEST_CASE("grid extremal solver reproduces the radial closed form") {
  const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
  const DiscExtremalSolver solver(A);
  // log(|z|/r)/log(1/r) at |z| = 1/2 is exactly 1/2
  CHECK(solver.value(Complex(0.5, 0)) == doctest::Approx(0.5).epsilon(6e-3));
  CHECK(solver.value(Complex(0, 0.5)) == doctest::Approx(0.5).epsilon(6e-3));
  CHECK(solver.value(Complex(0.1, 0)) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("envelope agreement for interior targets") {
  EnvelopeCheckOptions opt;
  opt.search.budget = 10000;

  SUBCASE("target covering the whole disc collapses both sides") {
    const DiscUnionSet all{{{Complex(0, 0), 2.0}}};
    const auto rep = rosay_identity_check(all, std::vector<Complex>{Complex(0.5, 0)}, opt);
    CHECK(rep.points[0].oracle == doctest::Approx(0.0));
    CHECK(rep.points[0].estimate == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("base point inside the target collapses both sides") {
    const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
    const auto rep = rosay_identity_check(A, std::vector<Complex>{Complex(0.1, 0)}, opt);
    CHECK(rep.points[0].oracle == doctest::Approx(0.0));
    CHECK(rep.points[0].estimate == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("radial case gap stays within the slack") {
    const DiscUnionSet A{{{Complex(0, 0), 0.25}}};
    const auto rep = rosay_identity_check(A, std::vector<Complex>{Complex(0.5, 0)}, opt);
    CHECK(rep.pass);
    CHECK(rep.max_gap <= 0.05);
    CHECK(rep.min_gap >= -opt.oracle_slack);
  }
}

TEST_CASE("center bound inequality") {
  SUBCASE("the whole closed disc") {
    const DiscUnionSet T{{{Complex(0, 0), 2.0}}};
    const auto rep = disc_center_bound_check(T);
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.rhs == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("ball tracing half the circle (and swallowing the center)") {
    const DiscUnionSet T{{{Complex(1, 0), std::sqrt(2.0)}}};
    const auto rep = disc_center_bound_check(T);
    CHECK(rep.rhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.lhs == doctest::Approx(0.0));  // 0 lies inside the ball
    CHECK(rep.pass);
  }
  SUBCASE("off-center ball with a positive extremal value") {
    const DiscUnionSet T{{{Complex(1.2, 0), 1.0}}};
    const auto rep = disc_center_bound_check(T);
    CHECK(rep.rhs == doctest::Approx(1.0 - 2.0 * std::acos(0.6) / kTwoPi));
    CHECK(rep.lhs == doctest::Approx(0.2873).epsilon(0.02));  // grid value
    CHECK(rep.lhs > 0.0);
    CHECK(rep.pass);
  }
  SUBCASE("interior-only target has full complementary average") {
    const DiscUnionSet T{{{Complex(0.4, 0), 0.2}}};
    const auto rep = disc_center_bound_check(T);
    CHECK(rep.rhs == doctest::Approx(1.0));
    CHECK(rep.pass);
  }
  SUBCASE("randomized targets never violate the bound") {
    RandomStream rng(2718, 0);
    for (int c = 0; c < 20; ++c) {
      DiscUnionSet T;
      const int nb = 1 + static_cast<int>(rng.next_double() * 3);
      for (int i = 0; i < nb; ++i) {
        const double r = 0.1 + 0.5 * rng.next_double();
        const double cr = 1.2 * rng.next_double();
        const double th = kTwoPi * rng.next_double();
        T.balls.push_back({cr * Complex(std::cos(th), std::sin(th)), r});
      }
      const auto rep = disc_center_bound_check(T);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("boundary trace of disc unions") {
  SUBCASE("half-plane-like ball") {
    const DiscUnionSet T{{{Complex(1, 0), std::sqrt(2.0)}}};
    const ArcSet trace = T.boundary_trace();
    CHECK(trace.total_length() == doctest::Approx(kPi));
    CHECK(trace.contains(0.5));
    CHECK(trace.contains(kTwoPi - 0.5));
    CHECK_FALSE(trace.contains(kPi));
  }
  SUBCASE("interior ball leaves no trace") {
    const DiscUnionSet T{{{Complex(0, 0), 0.5}}};
    CHECK(T.boundary_trace().total_length() == doctest::Approx(0.0));
  }
  SUBCASE("covering ball traces the full circle") {
    const DiscUnionSet T{{{Complex(0, 0), 3.0}}};
    CHECK(T.boundary_trace().total_length() == doctest::Approx(kTwoPi));
  }
}
