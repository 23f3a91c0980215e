#include "salemlab/lattice.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "salemlab/bump.hpp"
#include "salemlab/measure.hpp"

using namespace salemlab;

namespace {

/// Independent surface-integral oracle for the mollified density in d=2:
/// Riemann sum along each nearby plane with arc-length weights.
double mollified_density_oracle_2d(const PlaneUnionMeasure& pm, const BumpProfile& profile,
                                   const std::vector<double>& x) {
  const double w = profile.width;
  const double norm = euclid_norm(pm.q);
  const double s0 = pm.q[0] * x[0] + pm.q[1] * x[1];
  double total = 0.0;
  const int64_t r_lo = static_cast<int64_t>(std::ceil(s0 - w * norm)) - 1;
  const int64_t r_hi = static_cast<int64_t>(std::floor(s0 + w * norm)) + 1;
  const double nx = pm.q[0] / norm, ny = pm.q[1] / norm;  // unit normal
  const double tx = -ny, ty = nx;                         // unit tangent
  const int steps = 4001;
  const double span = 3.0 * w;
  const double h = 2.0 * span / (steps - 1);
  for (int64_t r = r_lo; r <= r_hi; ++r) {
    const double dist = (static_cast<double>(r) - s0) / norm;  // signed
    const double footx = x[0] + dist * nx, footy = x[1] + dist * ny;
    double line = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double s = -span + i * h;
      const double px = footx + s * tx, py = footy + s * ty;
      const std::vector<double> diff{x[0] - px, x[1] - py};
      line += bump_value(profile, diff);
    }
    total += line * h;
  }
  return total;
}

}  // namespace

TEST_CASE("lattice neighborhood membership") {
  CHECK(in_lattice_neighborhood(std::vector<double>{0.5, 0.5}, {2, 2, 0.1}));
  CHECK_FALSE(in_lattice_neighborhood(std::vector<double>{0.25}, {1, 2, 0.4}));
  CHECK_FALSE(in_lattice_neighborhood(std::vector<double>{0.26}, {1, 2, 0.05}));
  CHECK(in_lattice_neighborhood(std::vector<double>{0.26}, {1, 2, 0.49}));
}

TEST_CASE("linear form membership") {
  CHECK(in_linear_form(std::vector<double>{0.5, 0.5}, {2, {1, 1}, 0.01, 1}));
  CHECK_FALSE(in_linear_form(std::vector<double>{0.5, 0.3}, {2, {1, 0}, 0.4, 1}));
  CHECK(in_linear_form(std::vector<double>{0.4, 0.3}, {2, {2, 1}, 0.15, 1}));
}

TEST_CASE("linear form membership is Z^d-periodic") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> x{rng.next_double(), rng.next_double()};
    const std::vector<double> shifted{x[0] + 3.0, x[1] - 2.0};
    const LinearFormSpec spec{2,
                              {static_cast<int64_t>(rng.next_below(7)) - 3,
                               static_cast<int64_t>(rng.next_below(7)) - 3},
                              0.05 + 0.3 * rng.next_double(),
                              1};
    if (gcd_of(spec.q) == 0) continue;
    CHECK(in_linear_form(x, spec) == in_linear_form(shifted, spec));
  }
}

TEST_CASE("neighborhood measure of the uniform line matches the interval oracle") {
  const GridMeasure mu = make_uniform_grid(1, 4096);
  const auto eval = measure_of_lattice_neighborhood(mu, {1, 7, 0.1});
  CHECK(std::fabs(eval.value - 0.2) < 2e-3);
  CHECK(eval.boundary_error < 0.02);
}

TEST_CASE("neighborhood measure of a point mass at the origin is 1") {
  const auto eval = measure_of_lattice_neighborhood(point_mass({0.0, 0.0}), {2, 9, 0.01});
  CHECK(eval.value == 1.0);
  CHECK(eval.boundary_error == 0.0);
}

TEST_CASE("neighborhood measure of the uniform square matches the disk-area oracle") {
  const GridMeasure mu = make_uniform_grid(2, 1024);
  const auto eval = measure_of_lattice_neighborhood(mu, {2, 3, 0.1});
  CHECK(std::fabs(eval.value - M_PI * 0.01) < 1e-3);
}

TEST_CASE("neighborhood measure scales like the ball volume for small delta") {
  const GridMeasure mu = make_uniform_grid(2, 1024);
  for (double delta : {0.2, 0.1}) {
    for (int64_t Q : {2, 5}) {
      const auto eval = measure_of_lattice_neighborhood(mu, {2, Q, delta});
      CHECK(eval.value / (delta * delta) == doctest::Approx(ball_volume(2)).epsilon(0.05));
    }
  }
}

TEST_CASE("linear form measure of the uniform square: strip oracle") {
  const GridMeasure mu = make_uniform_grid(2, 2048);
  const auto eval = measure_of_linear_form(mu, {2, {1, 0}, 0.25, 1});
  CHECK(std::fabs(eval.value - 0.5) < 1e-3);
}

TEST_CASE("linear form measure of the uniform square: triangular-density oracle") {
  const GridMeasure mu = make_uniform_grid(2, 2048);
  const auto eval = measure_of_linear_form(mu, {2, {1, 1}, 0.1, 1});
  CHECK(std::fabs(eval.value - 0.2) < 1e-3);
}

TEST_CASE("uniform slab measure is 2 delta for every primitive q") {
  // The map x -> q.x mod 1 pushes the uniform measure to the uniform measure
  // on the circle whenever q is a nonzero integer vector, so the slab mass
  // is exactly 2 delta up to the cell-center counting error.
  const GridMeasure mu = make_uniform_grid(2, 512);
  for (const auto& q :
       {std::vector<int64_t>{1, 0}, std::vector<int64_t>{2, 1}, std::vector<int64_t>{3, -2},
        std::vector<int64_t>{5, 4}, std::vector<int64_t>{-1, 5}}) {
    for (double delta : {0.2, 0.1}) {
      const auto eval = measure_of_linear_form(mu, {2, q, delta, 1});
      CHECK(std::fabs(eval.value - 2.0 * delta) <= std::max(eval.boundary_error, 1e-3));
    }
  }
}

TEST_CASE("linear form measure of the origin point mass is 1 for any spec") {
  const auto eval =
      measure_of_linear_form(point_mass({0.0, 0.0, 0.0, 0.0}), {2, {5, -3}, 1e-6, 2});
  CHECK(eval.value == 1.0);
}

TEST_CASE("linear form measure rejects dimension mismatches") {
  const GridMeasure mu = make_uniform_grid(2, 16);
  CHECK_THROWS_AS(measure_of_linear_form(mu, {2, {1, 0}, 0.1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(measure_of_lattice_neighborhood(mu, {3, 2, 0.1}), std::invalid_argument);
}

TEST_CASE("plane measures require a nonzero normal") {
  const PlaneUnionMeasure zero{2, {0, 0}};
  CHECK_THROWS_AS(plane_fourier_coefficient(zero, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(plane_fourier_quadrature(zero, {1, 0}, 16), std::invalid_argument);
}

TEST_CASE("plane coefficients follow the ray formula") {
  CHECK(plane_fourier_coefficient({2, {1, 0}}, {3, 0}) == doctest::Approx(1.0));
  CHECK(plane_fourier_coefficient({2, {2, 1}}, {2, 1}) == doctest::Approx(std::sqrt(5.0)));
  CHECK(plane_fourier_coefficient({2, {2, 1}}, {1, 1}) == 0.0);
  CHECK(plane_fourier_coefficient({2, {2, 1}}, {0, 0}) == doctest::Approx(std::sqrt(5.0)));
  CHECK(plane_fourier_coefficient({3, {1, -2, 2}}, {-2, 4, -4}) == doctest::Approx(3.0));
}

TEST_CASE("plane quadrature reproduces the closed form at pinned examples") {
  CHECK(std::abs(plane_fourier_quadrature({2, {1, 0}}, {0, 0}, 64) - complexd(1.0, 0.0)) < 1e-9);
  CHECK(std::abs(plane_fourier_quadrature({2, {2, 1}}, {2, 1}, 256) -
                 complexd(std::sqrt(5.0), 0.0)) < 1e-6);
  CHECK(std::abs(plane_fourier_quadrature({2, {2, 1}}, {0, 1}, 256)) < 1e-6);
}

TEST_CASE("plane quadrature vs closed form across primitive q, d=2") {
  for (int64_t q0 = -3; q0 <= 3; ++q0) {
    for (int64_t q1 = -3; q1 <= 3; ++q1) {
      const std::vector<int64_t> q{q0, q1};
      if (q0 == 0 && q1 == 0) continue;
      if (gcd_of(q) != 1) continue;
      const PlaneUnionMeasure pm{2, q};
      for (int64_t k0 = -3; k0 <= 3; k0 += 2) {
        for (int64_t k1 = -3; k1 <= 3; k1 += 3) {
          const std::vector<int64_t> k{k0, k1};
          const double closed = plane_fourier_coefficient(pm, k);
          const complexd numeric = plane_fourier_quadrature(pm, k, 256);
          CHECK(std::abs(numeric - complexd(closed, 0.0)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("plane quadrature vs closed form, d=3 sample") {
  const PlaneUnionMeasure pm{3, {2, -1, 1}};
  for (const auto& k : {std::vector<int64_t>{2, -1, 1}, std::vector<int64_t>{4, -2, 2},
                        std::vector<int64_t>{1, 1, 0}, std::vector<int64_t>{0, 0, 0}}) {
    const double closed = plane_fourier_coefficient(pm, k);
    const complexd numeric = plane_fourier_quadrature(pm, k, 64);
    CHECK(std::abs(numeric - complexd(closed, 0.0)) < 1e-6);
  }
}

TEST_CASE("non-primitive q: quadrature adjudicates the literal formula") {
  // For q = (2,2) the planes include half-integer lines, but alternating
  // phases cancel off the ray Z q; the displayed formula holds literally.
  const PlaneUnionMeasure pm{2, {2, 2}};
  CHECK(plane_fourier_coefficient(pm, {1, 1}) == 0.0);
  CHECK(std::abs(plane_fourier_quadrature(pm, {1, 1}, 256)) < 1e-6);
  const double mass = euclid_norm(pm.q);
  CHECK(std::abs(plane_fourier_quadrature(pm, {2, 2}, 256) - complexd(mass, 0.0)) < 1e-6);
  CHECK(std::abs(plane_fourier_quadrature(pm, {0, 0}, 256) - complexd(mass, 0.0)) < 1e-6);
}

TEST_CASE("plane ball measure: exact caps") {
  const PlaneUnionMeasure pm{2, {1, 0}};
  // x on the plane x_1 = 0; only the central plane is within reach
  CHECK(plane_ball_measure(pm, std::vector<double>{0.0, 0.5}, 0.3) == doctest::Approx(0.6));
  // off-plane point at distance h: chord length 2 sqrt(eps^2 - h^2)
  CHECK(plane_ball_measure(pm, std::vector<double>{0.1, 0.5}, 0.3) ==
        doctest::Approx(2.0 * std::sqrt(0.09 - 0.01)));
}

TEST_CASE("AD constants sit at the single-plane value in the slab regime") {
  const PlaneUnionMeasure pm{2, {2, 1}};
  const double w = 0.1 / euclid_norm(pm.q);
  const AdConstants ad = measure_ad_constants(pm, w / 4.0, 2.0 * w);
  CHECK(ad.lower == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(ad.upper == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("AD regularity holds on wider ranges with bounded constants") {
  for (const auto& q : {std::vector<int64_t>{1, 0}, std::vector<int64_t>{3, 2}}) {
    const PlaneUnionMeasure pm{2, q};
    const double cap = std::min(1.0, 2.0 / euclid_norm(q));
    const AdConstants ad = measure_ad_constants(pm, cap / 64.0, 0.99 * cap);
    CHECK(ad.lower >= 2.0 - 1e-9);  // the central cap alone gives 2 eps
    CHECK(ad.upper <= 2.0 * (1.0 + 2.0 * 2.0) + 1e-9);  // at most 1 + 2 eps |q| planes
  }
}

TEST_CASE("bump profiles are normalized and respect their support contracts") {
  for (int d : {1, 2, 3}) {
    CHECK(bump_hat_radial_compact(d, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    const BumpProfile compact{BumpKind::kCompactSupport, 0.25, d, 2.0};
    std::vector<double> y(static_cast<size_t>(d), 0.0);
    y[0] = 0.26;  // just outside the scaled support ball
    CHECK(bump_value(compact, y) == 0.0);
    y[0] = 0.24;
    CHECK(bump_value(compact, y) > 0.0);
  }
  const BumpProfile band{BumpKind::kBandLimited, 0.5, 2, 2.0};
  std::vector<double> zero{0.0, 0.0};
  CHECK(bump_hat(band, zero) == doctest::Approx(1.0));
  CHECK(bump_hat(band, std::vector<double>{2.1, 0.0}) == 0.0);
  CHECK(bump_hat(band, std::vector<double>{1.9, 0.0}) > 0.0);
  // strict positivity of the band-limited kernel (no common Fejer zeros)
  CHECK(bump_min_on_ball(band, 2.0) > 0.0);
}

TEST_CASE("compact bump transform matches a plain Riemann-sum oracle in d=1") {
  for (double s : {0.0, 0.7, 2.3, 5.0}) {
    const int steps = 200001;
    double acc = 0.0;
    const double h = 2.0 / (steps - 1);
    for (int i = 0; i < steps; ++i) {
      const double y = -1.0 + i * h;
      const double w = (i == 0 || i == steps - 1) ? 0.5 : 1.0;
      acc += w * compact_bump_normalizer(1) * std::pow(std::max(0.0, 1.0 - y * y), 4.0) *
             std::cos(kTwoPi * s * y);
    }
    acc *= h;
    CHECK(bump_hat_radial_compact(1, s) == doctest::Approx(acc).epsilon(1e-8));
  }
}

TEST_CASE("band-limited cutoff marks the exact band edge") {
  const BumpProfile band{BumpKind::kBandLimited, 0.05, 2, 2.0};
  const std::vector<int64_t> q{2, 1};
  const int64_t cut = band_limited_t_cutoff(band, 0.05, q);
  std::vector<double> arg(2);
  for (int k = 0; k < 2; ++k)
    arg[static_cast<size_t>(k)] = 0.05 * static_cast<double>(cut) * static_cast<double>(q[k]);
  CHECK(bump_hat(band, arg) > 0.0);
  for (int k = 0; k < 2; ++k)
    arg[static_cast<size_t>(k)] = 0.05 * static_cast<double>(cut + 1) * static_cast<double>(q[k]);
  CHECK(bump_hat(band, arg) == 0.0);
}

TEST_CASE("mollified density: compact profile against the surface-integral oracle") {
  const PlaneUnionMeasure pm{2, {2, 1}};
  const BumpProfile profile{BumpKind::kCompactSupport, 0.1 / euclid_norm(pm.q), 2, 2.0};
  for (const auto& x : {std::vector<double>{0.0, 0.0}, std::vector<double>{0.21, 0.1},
                        std::vector<double>{0.4, 0.21}}) {
    const double direct = mollified_plane_density(pm, profile, x);
    const double reference = mollified_density_oracle_2d(pm, profile, x);
    CHECK(direct == doctest::Approx(reference).epsilon(1e-5));
  }
}

TEST_CASE("mollified density: compact profile sandwich") {
  const PlaneUnionMeasure pm{2, {2, 1}};
  const double delta = 0.1;
  const double w = delta / euclid_norm(pm.q);
  const BumpProfile profile{BumpKind::kCompactSupport, w, 2, 2.0};
  const AdConstants ad = measure_ad_constants(pm, w / 4.0, 2.0 * w);
  const double sup_phi = bump_sup(profile);
  const double m_half = bump_min_on_ball(profile, 0.5);

  // On-plane lower bound with the measured constants.
  for (double u : {0.0, 0.13, 0.41, 0.77}) {
    const std::vector<double> x{(1.0 - u) / 2.0, u};  // a point on the plane q.x = 1
    const double f = mollified_plane_density(pm, profile, x);
    CHECK(f >= m_half * ad.lower * (w / 2.0) - 1e-12);
  }
  // Vanishing beyond the support distance.
  const std::vector<double> far{0.25, 0.0};  // q.x = 0.5, farthest from the planes
  CHECK(mollified_plane_density(pm, profile, far) == 0.0);
  // Global upper bound on a sample grid, with the slab indicator.
  const LinearFormSpec slab{2, pm.q, delta, 1};
  for (int i = 0; i < 33; ++i) {
    for (int j = 0; j < 33; ++j) {
      const std::vector<double> x{i / 33.0, j / 33.0};
      const double f = mollified_plane_density(pm, profile, x);
      const double cap = sup_phi * ad.upper * (2.0 * w);
      CHECK(f <= cap * (in_linear_form(x, slab) ? 1.0 : 0.0) + 1e-12);
    }
  }
}

TEST_CASE("mollified density: band-limited profile full sandwich on the slab") {
  const PlaneUnionMeasure pm{2, {1, 1}};
  const double delta = 0.15;
  const double w = delta / euclid_norm(pm.q);
  const BumpProfile profile{BumpKind::kBandLimited, w, 2, 2.0};
  const AdConstants ad = measure_ad_constants(pm, w / 4.0, 2.0 * w);
  const double m2 = bump_min_on_ball(profile, 2.0);
  REQUIRE(m2 > 0.0);
  const LinearFormSpec slab{2, pm.q, delta, 1};
  for (int i = 0; i < 29; ++i) {
    for (int j = 0; j < 29; ++j) {
      const std::vector<double> x{i / 29.0, j / 29.0};
      if (!in_linear_form(x, slab)) continue;
      const double f = mollified_plane_density(pm, profile, x);
      CHECK(f >= m2 * ad.lower * w - 1e-12);
    }
  }
}

TEST_CASE("plane tables export normalized coefficients in the common schema") {
  const PlaneUnionMeasure pm{2, {2, 1}};
  const FourierTable table = plane_table(pm, 8);
  validate(table);
  CHECK(table.meta.at("provenance") == "plane:q=(2,1)");
  CHECK(table.at(std::vector<int64_t>{4, 2}).real() == doctest::Approx(1.0));
  CHECK(std::abs(table.at(std::vector<int64_t>{1, 1})) == 0.0);
  const FourierTable back = table_from_json(table_to_json(table));
  CHECK(back.meta.at("provenance") == "plane:q=(2,1)");
  CHECK(back.coeffs.size() == table.coeffs.size());
}
