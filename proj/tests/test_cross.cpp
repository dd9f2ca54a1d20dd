#include <doctest.h>

#include <cmath>

#include "crosswedge/cross.hpp"
#include "crosswedge/rng.hpp"

using namespace crosswedge;

namespace {

CrossSpec half_half_spec() {
  const PlanarDomain disc = PlanarDomain::unit_disc();
  const ArcSet half(disc, {{0.0, kPi}});
  return CrossSpec(disc, half, disc, half);
}

}  // namespace

TEST_CASE("cross spec validation") {
  const PlanarDomain disc = PlanarDomain::unit_disc();
  const ArcSet half(disc, {{0.0, kPi}});
  CHECK_THROWS_AS(CrossSpec(disc, ArcSet::empty(disc), disc, half),
                  std::invalid_argument);
  const PlanarDomain sq = PlanarDomain::slit_square(0.5);
  CHECK_THROWS_AS(CrossSpec(sq, half, disc, half), std::invalid_argument);
}

TEST_CASE("omega sums over the closure") {
  const CrossSpec spec = half_half_spec();
  SUBCASE("arc points carry measure zero") {
    const Complex a = spec.d.boundary_point(kPi / 2);
    const Complex b = spec.g.boundary_point(kPi / 3);
    const auto est = omega_sum(spec, a, b);
    CHECK(est.value == doctest::Approx(0.0));
    CHECK(est.std_error == 0.0);
  }
  SUBCASE("centers of half-circle factors add to one") {
    const auto est = omega_sum(spec, Complex(0, 0), Complex(0, 0));
    CHECK(est.value == doctest::Approx(1.0));
  }
  SUBCASE("full arc sets kill the sum everywhere") {
    const PlanarDomain disc = PlanarDomain::unit_disc();
    const CrossSpec full(disc, ArcSet::full(disc), disc, ArcSet::full(disc));
    CHECK(omega_sum(full, Complex(0.3, 0.1), Complex(-0.4, 0.2)).value ==
          doctest::Approx(0.0));
  }
  SUBCASE("points neither inside nor on the arcs are rejected") {
    CHECK_THROWS_AS(omega_sum(spec, Complex(0, -1.0), Complex(0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(omega_sum(spec, Complex(3, 0), Complex(0, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("wedge membership") {
  const CrossSpec spec = half_half_spec();
  SUBCASE("the exact boundary classifies out") {
    CHECK(wedge_contains(spec, Complex(0, 0), Complex(0, 0)) == Containment::Out);
  }
  SUBCASE("points hugging the arc are in") {
    const Complex z = 0.99 * spec.d.boundary_point(kPi / 2);
    CHECK(wedge_contains(spec, z, Complex(0, 0)) == Containment::In);
  }
  SUBCASE("full arcs make the whole product the wedge") {
    const PlanarDomain disc = PlanarDomain::unit_disc();
    const CrossSpec full(disc, ArcSet::full(disc), disc, ArcSet::full(disc));
    RandomStream rng(8, 0);
    for (int i = 0; i < 20; ++i) {
      const double r1 = 0.95 * std::sqrt(rng.next_double());
      const double t1 = kTwoPi * rng.next_double();
      const double r2 = 0.95 * std::sqrt(rng.next_double());
      const double t2 = kTwoPi * rng.next_double();
      CHECK(wedge_contains(full, r1 * Complex(std::cos(t1), std::sin(t1)),
                           r2 * Complex(std::cos(t2), std::sin(t2))) ==
            Containment::In);
    }
  }
  SUBCASE("swap symmetry") {
    const PlanarDomain disc = PlanarDomain::unit_disc();
    const ArcSet a(disc, {{0.0, 2.0}});
    const ArcSet b(disc, {{1.0, 2.5}, {4.0, 5.0}});
    const CrossSpec spec_ab(disc, a, disc, b);
    const CrossSpec spec_ba = spec_ab.swapped();
    RandomStream rng(9, 0);
    for (int i = 0; i < 25; ++i) {
      const Complex z(1.8 * rng.next_double() - 0.9, 1.8 * rng.next_double() - 0.9);
      const Complex w(1.8 * rng.next_double() - 0.9, 1.8 * rng.next_double() - 0.9);
      if (std::abs(z) >= 1 || std::abs(w) >= 1) continue;
      CHECK(wedge_contains(spec_ab, z, w) == wedge_contains(spec_ba, w, z));
    }
  }
  SUBCASE("enlarging an arc set never flips in to out") {
    const PlanarDomain disc = PlanarDomain::unit_disc();
    const ArcSet a(disc, {{0.0, kPi}});
    const ArcSet a_big(disc, {{-0.5, kPi + 0.5}});
    const ArcSet b(disc, {{0.0, kPi}});
    const CrossSpec small(disc, a, disc, b);
    const CrossSpec big(disc, a_big, disc, b);
    RandomStream rng(10, 0);
    for (int i = 0; i < 25; ++i) {
      const Complex z(1.8 * rng.next_double() - 0.9, 1.8 * rng.next_double() - 0.9);
      const Complex w(1.8 * rng.next_double() - 0.9, 1.8 * rng.next_double() - 0.9);
      if (std::abs(z) >= 1 || std::abs(w) >= 1) continue;
      if (wedge_contains(small, z, w) == Containment::In) {
        CHECK(wedge_contains(big, z, w) == Containment::In);
      }
    }
  }
}

TEST_CASE("cross sampling") {
  const CrossSpec spec = half_half_spec();

  SUBCASE("constant function") {
    const auto samples = sample_cross(
        spec, [](Complex, Complex) { return Complex(3, -4); }, {20, 20, 10}, 1);
    CHECK(samples.samples.size() == 50);
    CHECK(samples.sup_w_norm == doctest::Approx(5.0));
    CHECK(samples.sup_ab_norm == doctest::Approx(5.0));
    for (const auto& s : samples.samples) {
      CHECK(s.value == Complex(3, -4));
    }
  }
  SUBCASE("only the requested strata are sampled") {
    const auto samples = sample_cross(
        spec, [](Complex, Complex) { return Complex(1, 0); }, {0, 0, 15}, 1);
    CHECK(samples.samples.size() == 15);
    for (const auto& s : samples.samples) CHECK(s.stratum == Stratum::AxB);
  }
  SUBCASE("exponential sup norm stays under the bidisc bound") {
    const auto samples = sample_cross(
        spec, [](Complex z, Complex w) { return std::exp(z + w); }, {300, 300, 150}, 7);
    CHECK(samples.sup_w_norm <= std::exp(2.0) + 1e-12);
    CHECK(samples.sup_ab_norm <= samples.sup_w_norm);
  }
  SUBCASE("stratum integrity: every sample sits in its declared stratum") {
    const auto samples = sample_cross(
        spec, [](Complex z, Complex w) { return z + w; }, {50, 50, 25}, 3);
    for (const auto& s : samples.samples) {
      const bool z_on_arc = std::abs(std::abs(s.z) - 1.0) < 1e-12 &&
                            spec.a.contains(spec.d.nearest_boundary_param(s.z));
      const bool w_on_arc = std::abs(std::abs(s.w) - 1.0) < 1e-12 &&
                            spec.b.contains(spec.g.nearest_boundary_param(s.w));
      switch (s.stratum) {
        case Stratum::AxG:
          CHECK(z_on_arc);
          CHECK(spec.g.contains(s.w));
          break;
        case Stratum::DxB:
          CHECK(spec.d.contains(s.z));
          CHECK(w_on_arc);
          break;
        case Stratum::AxB:
          CHECK(z_on_arc);
          CHECK(w_on_arc);
          break;
      }
    }
  }
  SUBCASE("arc-cross-arc samples always classify inside the wedge") {
    const auto samples = sample_cross(
        spec, [](Complex z, Complex w) { return z * w; }, {0, 0, 30}, 5);
    for (const auto& s : samples.samples) {
      CHECK(wedge_contains(spec, s.z, s.w) == Containment::In);
    }
  }
  SUBCASE("sampling is reproducible") {
    const auto f = [](Complex z, Complex w) { return z - w; };
    const auto s1 = sample_cross(spec, f, {40, 40, 20}, 77);
    const auto s2 = sample_cross(spec, f, {40, 40, 20}, 77);
    REQUIRE(s1.samples.size() == s2.samples.size());
    for (std::size_t i = 0; i < s1.samples.size(); ++i) {
      CHECK(s1.samples[i].z == s2.samples[i].z);
      CHECK(s1.samples[i].w == s2.samples[i].w);
    }
  }
  SUBCASE("non-finite function values surface as errors") {
    CHECK_THROWS_AS(sample_cross(
                        spec,
                        [](Complex, Complex) {
                          return Complex(std::nan(""), 0);
                        },
                        {5, 0, 5}, 1),
                    std::runtime_error);
  }
}

TEST_CASE("wedge slices") {
  const CrossSpec spec = half_half_spec();
  GridSpec grid;
  grid.nx = 9;
  grid.ny = 9;

  SUBCASE("slice at an arc point covers the factor domain") {
    const Complex w = spec.g.boundary_point(kPi / 2);
    const auto slice = wedge_slice(spec, w, grid);
    for (const auto& cell : slice.cells) {
      if (cell) CHECK(cell->verdict == Containment::In);
    }
  }
  SUBCASE("slice agrees with pointwise classification") {
    const Complex w(0.2, 0.3);
    const auto slice = wedge_slice(spec, w, grid);
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        const auto& cell = slice.cells[static_cast<std::size_t>(j) * grid.nx + i];
        if (!cell) continue;
        CHECK(cell->verdict == wedge_contains(spec, grid.point(i, j), w));
      }
    }
  }
  SUBCASE("a large second factor measure empties the slice") {
    const PlanarDomain disc = PlanarDomain::unit_disc();
    // tiny A: omega(., A, D) stays close to 1 on the grid
    const ArcSet tiny(disc, {{0.0, 0.05}});
    const ArcSet half(disc, {{0.0, kPi}});
    const CrossSpec spec2(disc, tiny, disc, half);
    const auto slice = wedge_slice(spec2, Complex(0, 0), grid);  // omega(w) = 0.5
    for (const auto& cell : slice.cells) {
      if (cell) CHECK(cell->verdict != Containment::In);
    }
  }
}
