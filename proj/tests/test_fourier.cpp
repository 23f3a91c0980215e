#include "salemlab/fourier.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "salemlab/measure.hpp"

using namespace salemlab;

TEST_CASE("point mass at 0 transforms to all ones") {
  const FourierTable table = transform(point_mass({0.0}), 10);
  validate(table);
  for (int64_t xi = -10; xi <= 10; ++xi) {
    const std::vector<int64_t> f{xi};
    CHECK(table.at(f).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(table.at(f).imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("point mass at 1/2 alternates sign") {
  const FourierTable table = transform(point_mass({0.5}), 3);
  CHECK(table.at(std::vector<int64_t>{1}).real() == doctest::Approx(-1.0));
  CHECK(table.at(std::vector<int64_t>{2}).real() == doctest::Approx(1.0));
  CHECK(table.at(std::vector<int64_t>{3}).real() == doctest::Approx(-1.0));
}

TEST_CASE("two balanced atoms cancel odd frequencies") {
  const AtomicMeasure mu = make_atomic({{0.0}, {0.5}}, {0.5, 0.5});
  const FourierTable table = transform(mu, 4);
  CHECK(std::abs(table.at(std::vector<int64_t>{1})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(table.at(std::vector<int64_t>{2}).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform grid coefficients vanish off zero") {
  const GridMeasure mu = make_uniform_grid(1, 256);
  const FourierTable table = transform(mu, 100);
  validate(table);
  for (int64_t xi = 1; xi <= 100; ++xi) {
    const std::vector<int64_t> f{xi};
    CHECK(std::abs(table.at(f)) < 1e-12);
    // geometric-sum identity, cross-checked by the direct summation oracle
    CHECK(std::abs(table.at(f) - oracle::grid_coefficient(mu, f)) < 1e-10);
  }
}

TEST_CASE("grid transform agrees with the direct summation oracle") {
  const GridMeasure mu = random_measure(2, 24, 5, RandomProfile::kRoughDensity);
  const FourierTable table = transform(mu, 9);
  validate(table);
  for (int64_t x0 : {-9, -3, 0, 2, 7}) {
    for (int64_t x1 : {-8, -1, 0, 4, 9}) {
      const std::vector<int64_t> f{x0, x1};
      CHECK(std::abs(table.at(f) - oracle::grid_coefficient(mu, f)) < 1e-10);
    }
  }
}

TEST_CASE("atomic transform agrees with the direct summation oracle") {
  const AtomicMeasure mu =
      make_atomic({{0.13, 0.71}, {0.5, 0.25}, {0.999, 0.001}}, {0.2, 0.5, 0.3});
  const FourierTable table = transform(mu, 12);
  validate(table);
  std::vector<int64_t> f(2);
  for (f[0] = -12; f[0] <= 12; f[0] += 3)
    for (f[1] = -12; f[1] <= 12; f[1] += 5)
      CHECK(std::abs(table.at(f) - oracle::atomic_coefficient(mu, f)) < 1e-10);
}

TEST_CASE("alias guard rejects oversized boxes") {
  const GridMeasure mu = make_uniform_grid(1, 64);
  CHECK_THROWS_AS(transform(mu, 33), std::invalid_argument);
  CHECK_NOTHROW(transform(mu, 32));
}

TEST_CASE("transform factorizes over product measures") {
  // Product grid in d=2 from two 1-d factors.
  const GridMeasure a = random_measure(1, 32, 21, RandomProfile::kRoughDensity);
  const GridMeasure b = random_measure(1, 32, 22, RandomProfile::kSmoothDensity);
  GridMeasure prod;
  prod.dim = 2;
  prod.resolution = 32;
  prod.mass.resize(32 * 32);
  for (int64_t i = 0; i < 32; ++i)
    for (int64_t j = 0; j < 32; ++j)
      prod.mass[static_cast<size_t>(i * 32 + j)] =
          a.mass[static_cast<size_t>(i)] * b.mass[static_cast<size_t>(j)];
  const FourierTable ta = transform(a, 10);
  const FourierTable tb = transform(b, 10);
  const FourierTable tp = transform(prod, 10);
  for (int64_t x0 : {-10, -4, 0, 3, 10}) {
    for (int64_t x1 : {-7, 0, 1, 9}) {
      const complexd expected = ta.at(std::vector<int64_t>{x0}) * tb.at(std::vector<int64_t>{x1});
      CHECK(std::abs(tp.at(std::vector<int64_t>{x0, x1}) - expected) < 1e-10);
    }
  }
}

TEST_CASE("sublattice transform matches the dense transform on the ray") {
  const GridMeasure mu = random_measure(2, 32, 13, RandomProfile::kRoughDensity);
  const std::vector<int64_t> q{2, 1};
  const FourierTable ray = transform_sublattice(mu, q, 1, 8);
  const FourierTable dense = transform(mu, 16);
  for (int64_t t = -8; t <= 8; ++t) {
    const std::vector<int64_t> f{2 * t, t};
    CHECK(std::abs(ray.at(f) - dense.at(f)) < 1e-10);
  }
  validate(ray);
}

TEST_CASE("sublattice transform handles folds and stays exact past the dense alias guard") {
  const GridMeasure mu = random_measure(4, 8, 17, RandomProfile::kRoughDensity);
  const std::vector<int64_t> q{3, 2};
  const FourierTable ray = transform_sublattice(mu, q, 2, 6);
  std::vector<int64_t> f(4);
  for (int64_t t1 : {-6, -2, 0, 5}) {
    for (int64_t t2 : {-4, 0, 3, 6}) {
      f = {3 * t1, 2 * t1, 3 * t2, 2 * t2};
      CHECK(std::abs(ray.at(f) - oracle::grid_coefficient(mu, f)) < 1e-10);
    }
  }
}

TEST_CASE("atomic sublattice transform matches the oracle") {
  const AtomicMeasure mu = make_atomic({{0.31, 0.17}, {0.77, 0.42}}, {0.6, 0.4});
  const std::vector<int64_t> q{1, 3};
  const FourierTable ray = transform_sublattice(mu, q, 1, 5);
  for (int64_t t = -5; t <= 5; ++t) {
    const std::vector<int64_t> f{t, 3 * t};
    CHECK(std::abs(ray.at(f) - oracle::atomic_coefficient(mu, f)) < 1e-10);
  }
}

TEST_CASE("restricted_sum counts lattice multiples of Q") {
  // point mass at 0: all coefficients are 1, so the sum counts frequencies
  const FourierTable table = transform(point_mass({0.0}), 40);
  const auto freqs = lattice_multiple_freqs(1, 10, 40.0);  // 2Q/delta with delta = 0.5
  CHECK(freqs.size() == 8);
  CHECK(restricted_sum(table, freqs, true).real() == doctest::Approx(8.0));
}

TEST_CASE("restricted_sum of uniform-grid tables vanishes") {
  const FourierTable table = transform(make_uniform_grid(1, 256), 100);
  CHECK(restricted_sum(table, lattice_multiple_freqs(1, 3, 90.0), true).real() ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("restricted_sum reads absent in-box entries as zero") {
  FourierTable table(1, 10);
  table.set(std::vector<int64_t>{0}, complexd(1.0, 0.0));
  table.set(std::vector<int64_t>{5}, complexd(0.3, 0.0));
  table.set(std::vector<int64_t>{-5}, complexd(0.3, 0.0));
  const auto freqs = box_freqs(1, 7.0, Norm::kEuclid, true);
  CHECK(restricted_sum(table, freqs, true).real() == doctest::Approx(0.6));
}

TEST_CASE("restricted_sum names the offending out-of-box frequency") {
  const FourierTable table = transform(point_mass({0.0}), 5);
  const auto freqs = lattice_multiple_freqs(1, 3, 9.0);
  try {
    restricted_sum(table, freqs, true);
    FAIL("expected CoverageError");
  } catch (const CoverageError& err) {
    CHECK(err.frequency == std::vector<int64_t>{-9});
    CHECK(std::string(err.what()).find("(-9)") != std::string::npos);
  }
}

TEST_CASE("ray frequency enumeration excludes zero and respects the sup norm") {
  const auto freqs = ray_freqs({1}, 2, 8);  // d=1, n=2, |t|_inf <= 8
  CHECK(freqs.size() == 17 * 17 - 1);
}

TEST_CASE("decay profile reads off a synthetic power law") {
  const FourierTable table = synthetic_power_law(1, 512, 0.5);
  // With dyadic shells the radii are exact integers and the slope reads off
  // by construction; at base 1.5 the shell floor ceil(r) biases the early
  // shells slightly low.
  const DecayProfile dyadic = decay_profile(table, 2.0);
  CHECK(dyadic.fitted_s == doctest::Approx(1.0).epsilon(1e-6));
  const DecayProfile profile = decay_profile(table, 1.5);
  CHECK(profile.fitted_s > 0.9);
  CHECK(profile.fitted_s < 1.05);
  CHECK_FALSE(profile.zero_dominated);
  for (const auto& [r, peak] : profile.shells) {
    CHECK(peak >= 0.0);
    CHECK(peak <= 1.0);
  }
}

TEST_CASE("decay profile of a point mass is flat") {
  const FourierTable table = transform(point_mass({0.0}), 64);
  const DecayProfile profile = decay_profile(table, 1.5);
  CHECK(profile.fitted_s == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("decay profile clamps zero-dominated tables to the cap") {
  const FourierTable table = transform(make_uniform_grid(1, 512), 200);
  const DecayProfile profile = decay_profile(table, 1.5);
  CHECK(profile.zero_dominated);
  CHECK(profile.fitted_s == doctest::Approx(1.0));  // cap = dim
}

TEST_CASE("decay profile ignores a global phase") {
  FourierTable table = synthetic_power_law(1, 256, 0.8);
  FourierTable rotated = table;
  const complexd phase(std::cos(0.7), std::sin(0.7));
  for (auto& [key, value] : rotated.coeffs) value *= phase;
  const DecayProfile a = decay_profile(table, 1.5);
  const DecayProfile b = decay_profile(rotated, 1.5);
  CHECK(a.fitted_s == doctest::Approx(b.fitted_s).epsilon(1e-12));
}

TEST_CASE("decay profile needs at least three shells") {
  const FourierTable table = transform(point_mass({0.0}), 4);
  CHECK_THROWS_AS(decay_profile(table, 1.5), std::invalid_argument);
}

TEST_CASE("every measure-core generator keeps the table invariants") {
  // coeff(0)=1, Hermitian symmetry, |coeff| <= 1
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    for (auto profile : {RandomProfile::kSparseAtoms, RandomProfile::kRoughDensity,
                         RandomProfile::kSmoothDensity}) {
      const GridMeasure mu = random_measure(2, 32, seed, profile);
      validate(transform(mu, 12));
    }
  }
  validate(transform(make_uniform_grid(2, 32), 12));
  validate(transform(make_atomic({{0.17, 0.71}, {0.5, 0.5}}, {1.0, 2.0}), 12));
  validate(transform(localize(random_measure(1, 128, 2, RandomProfile::kSmoothDensity), {0.3},
                              0.2),
                     32));
  ApproximantParams params;
  params.tau = 1.0;
  params.d = 1;
  params.folds = 1;
  params.q_set = {{3}, {4}, {5}};
  params.resolution = 128;
  validate(transform(approximant_measure(params), 32));
}

TEST_CASE("table JSON round trip preserves every coefficient") {
  const GridMeasure mu = random_measure(2, 32, 19, RandomProfile::kSmoothDensity);
  FourierTable table = transform(mu, 10);
  table.meta["source"] = "unit-test";
  const FourierTable back = table_from_json(table_to_json(table));
  validate(back);
  REQUIRE(back.coeffs.size() == table.coeffs.size());
  for (const auto& [key, value] : table.coeffs) {
    CHECK(back.coeffs.at(key) == value);  // bit-exact round trip
  }
  CHECK(back.meta.at("source") == "unit-test");
}

TEST_CASE("decay CSV has the documented two columns") {
  const FourierTable table = synthetic_power_law(1, 64, 0.5);
  const std::string csv = decay_profile_to_csv(decay_profile(table, 1.5));
  CHECK(csv.rfind("radius,peak\r\n", 0) == 0);
}
