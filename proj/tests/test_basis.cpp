#include <cmath>

#include "doctest.h"
#include "opres/basis.hpp"
#include "opres/errors.hpp"
#include "opres/rng.hpp"

using namespace opres;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridFunction random_band_limited(const BasisSpec& spec, const GridPtr& grid,
                                 Rng& rng) {
  std::vector<double> coeffs(spec.encode_dim());
  for (double& c : coeffs) c = rng.symmetric_unit();
  return decode(spec, coeffs, grid);
}

}  // namespace

TEST_CASE("normalized Legendre point values") {
  CHECK(eval_legendre_1d(0, 0.3) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(eval_legendre_1d(0, -0.9) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(eval_legendre_1d(1, 1.0) == doctest::Approx(1.224744871391589).epsilon(1e-15));
  // degree 2 at 0.5: sqrt(5/2) * (3*0.25-1)/2
  CHECK(eval_legendre_1d(2, 0.5) ==
        doctest::Approx(-0.19764235376052372).epsilon(1e-14));
}

TEST_CASE("trig sequence point values") {
  CHECK(eval_trig_1d(1, 0.123) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_trig_1d(2, 0.5) == doctest::Approx(1.0).epsilon(1e-15));   // sin(pi/2)
  CHECK(eval_trig_1d(3, 0.25) ==
        doctest::Approx(std::cos(kPi / 4)).epsilon(1e-15));             // cos(pi/4)
  CHECK(eval_trig_1d(4, 0.25) == doctest::Approx(1.0).epsilon(1e-15));  // sin(pi/2*... )
  CHECK_THROWS_AS(eval_trig_1d(0, 0.0), ConfigError);
}

TEST_CASE("orthonormality: Gram matrices equal identity") {
  Rng rng(0);
  for (const BasisKind kind : {BasisKind::legendre, BasisKind::trigonometric}) {
    for (int dim = 1; dim <= 2; ++dim) {
      for (int order : {2, 5, 8}) {
        const BasisSpec spec{kind, dim, order};
        // Legendre is exact at m >= r+1; trig needs quadrature headroom
        // beyond its m >= 2r+2 floor to resolve frequency-2r products.
        const int m = kind == BasisKind::legendre
                          ? std::max(spec.min_grid_order(), 16)
                          : std::max(4 * order + 8, 24);
        const auto grid = make_grid(dim, m);
        const int d = spec.encode_dim();
        for (int a = 0; a < d; ++a) {
          const auto phi_a = [&] {
            std::vector<double> e(d, 0.0);
            e[a] = 1.0;
            return decode(spec, e, grid);
          }();
          const std::vector<double> row = encode(spec, phi_a);
          for (int b = 0; b < d; ++b)
            CHECK(std::abs(row[b] - (a == b ? 1.0 : 0.0)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("encode of basis functions and zero") {
  const BasisSpec spec{BasisKind::legendre, 1, 4};
  const auto grid = make_grid(1, 16);
  const auto zero = zero_function(grid);
  for (double c : encode(spec, zero)) CHECK(c == 0.0);

  // u(x) = x encodes to (0, sqrt(2/3), 0, 0)
  const auto linear = grid_sample(grid, [](const std::vector<double>& x) { return x[0]; });
  const std::vector<double> coeffs = encode(spec, linear);
  CHECK(std::abs(coeffs[0]) < 1e-10);
  CHECK(coeffs[1] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(coeffs[2]) < 1e-10);
  CHECK(std::abs(coeffs[3]) < 1e-10);
}

TEST_CASE("encode rejects too-coarse grids, naming the requirement") {
  const BasisSpec leg{BasisKind::legendre, 1, 8};
  const auto coarse = make_grid(1, 8);
  CHECK_THROWS_WITH_AS(encode(leg, zero_function(coarse)),
                       doctest::Contains("need m >= 9"), ConfigError);
  const BasisSpec trig{BasisKind::trigonometric, 1, 8};
  const auto coarse2 = make_grid(1, 17);
  CHECK_THROWS_WITH_AS(encode(trig, zero_function(coarse2)),
                       doctest::Contains("need m >= 18"), ConfigError);
}

TEST_CASE("decode of unit vectors samples the basis function") {
  const BasisSpec spec{BasisKind::trigonometric, 1, 5};
  const auto grid = make_grid(1, 24);
  std::vector<double> e(spec.encode_dim(), 0.0);
  e[3] = 1.0;  // T_4 = sin(2 pi x)
  const auto f = decode(spec, e, grid);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    CHECK(f.values[i] ==
          doctest::Approx(std::sin(2 * kPi * grid->axis_nodes[i])).epsilon(1e-13));

  CHECK_THROWS_AS(decode(spec, std::vector<double>(3, 0.0), grid), DimensionError);
}

TEST_CASE("decode of the zero vector is the zero function") {
  const BasisSpec spec{BasisKind::legendre, 1, 5};
  const auto grid = make_grid(1, 16);
  const auto f = decode(spec, std::vector<double>(5, 0.0), grid);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("encode(decode(a)) = a for random coefficients") {
  Rng rng(99);
  const BasisSpec leg{BasisKind::legendre, 2, 4};
  const auto grid = make_grid(2, 12);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> coeffs(leg.encode_dim());
    for (double& c : coeffs) c = rng.symmetric_unit();
    const std::vector<double> back = encode(leg, decode(leg, coeffs, grid));
    for (int k = 0; k < leg.encode_dim(); ++k)
      CHECK(std::abs(back[k] - coeffs[k]) < 1e-9);
  }
}

TEST_CASE("projection: idempotence and in-span identity") {
  Rng rng(3);
  const BasisSpec spec{BasisKind::trigonometric, 1, 6};
  const auto grid = make_grid(1, 32);
  const auto u = random_band_limited(spec, grid, rng);
  const auto pu = project(spec, u);
  CHECK(distance(pu, u) < 1e-9);
  const auto ppu = project(spec, pu);
  CHECK(distance(ppu, pu) < 1e-9);
}

TEST_CASE("projection error of x^3 onto Legendre r=2") {
  const BasisSpec spec{BasisKind::legendre, 1, 2};
  const auto grid = make_grid(1, 16);
  const auto cubic =
      grid_sample(grid, [](const std::vector<double>& x) { return x[0] * x[0] * x[0]; });
  // analytic residual: ||x^3 - (3/5)x|| = sqrt(8/175)
  CHECK(projection_error(spec, cubic) ==
        doctest::Approx(std::sqrt(8.0 / 175.0)).epsilon(1e-10));
}

TEST_CASE("projection error non-increasing in r, decays for |x|") {
  const auto grid = make_grid(1, 256);
  const auto vee =
      grid_sample(grid, [](const std::vector<double>& x) { return std::abs(x[0]); });

  // High-resolution analytic oracle: ||u||^2 - sum of squared Legendre
  // coefficients, coefficients exact by parity up to quadrature.
  std::vector<double> errors;
  std::vector<int> orders{2, 4, 8, 16};
  double previous = 1e300;
  for (int r : orders) {
    const BasisSpec spec{BasisKind::legendre, 1, r};
    const double err = projection_error(spec, vee);
    CHECK(err <= previous + 1e-12);
    previous = err;
    errors.push_back(err);
  }
  // log-log slope between r=2 and r=16 is at most -1 (|x| is C^{0,1})
  const double slope = (std::log(errors.back()) - std::log(errors.front())) /
                       (std::log(16.0) - std::log(2.0));
  CHECK(slope <= -1.0);
}

TEST_CASE("encoder is 1-Lipschitz and decoder is an isometry") {
  Rng rng(41);
  const BasisSpec spec{BasisKind::trigonometric, 1, 7};
  const auto grid = make_grid(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_band_limited(spec, grid, rng);
    const auto w = random_band_limited(spec, grid, rng);
    const auto eu = encode(spec, u);
    const auto ew = encode(spec, w);
    double coeff_dist_sq = 0.0;
    for (int k = 0; k < spec.encode_dim(); ++k)
      coeff_dist_sq += (eu[k] - ew[k]) * (eu[k] - ew[k]);
    CHECK(std::sqrt(coeff_dist_sq) <= distance(u, w) + 1e-8);

    std::vector<double> a(spec.encode_dim()), b(spec.encode_dim());
    for (double& c : a) c = rng.symmetric_unit();
    for (double& c : b) c = rng.symmetric_unit();
    double ab = 0.0;
    for (int k = 0; k < spec.encode_dim(); ++k) ab += (a[k] - b[k]) * (a[k] - b[k]);
    CHECK(std::abs(distance(decode(spec, a, grid), decode(spec, b, grid)) -
                   std::sqrt(ab)) < 1e-9);
  }
}

TEST_CASE("encoder linearity") {
  Rng rng(5);
  const BasisSpec spec{BasisKind::legendre, 1, 5};
  const auto grid = make_grid(1, 20);
  const auto u = grid_sample(grid, [](const std::vector<double>& x) {
    return std::exp(x[0]);  // not in span; linearity must still hold
  });
  const auto v = grid_sample(grid, [](const std::vector<double>& x) {
    return x[0] * x[0] - 0.25;
  });
  const double alpha = 1.7;
  const auto combo = axpy(alpha, u, v);
  const auto e_combo = encode(spec, combo);
  const auto eu = encode(spec, u);
  const auto ev = encode(spec, v);
  for (int k = 0; k < spec.encode_dim(); ++k)
    CHECK(std::abs(e_combo[k] - (alpha * eu[k] + ev[k])) < 1e-10);
}

TEST_CASE("multi-index enumeration is lexicographic") {
  const BasisSpec leg{BasisKind::legendre, 2, 3};
  CHECK(leg.multi_index(0) == std::vector<int>{0, 0});
  CHECK(leg.multi_index(1) == std::vector<int>{0, 1});
  CHECK(leg.multi_index(3) == std::vector<int>{1, 0});
  CHECK(leg.multi_index(8) == std::vector<int>{2, 2});
  const BasisSpec trig{BasisKind::trigonometric, 2, 3};
  CHECK(trig.multi_index(0) == std::vector<int>{1, 1});
  CHECK(trig.multi_index(8) == std::vector<int>{3, 3});
}
