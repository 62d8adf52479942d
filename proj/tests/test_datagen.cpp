#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <memory>

#include "extrap/datagen.hpp"
#include "oracles.hpp"

using namespace extrap;

namespace {
std::shared_ptr<const std::vector<Point>> interval_points(std::initializer_list<double> xs) {
  auto pts = std::make_shared<std::vector<Point>>();
  for (double x : xs) pts->push_back(Point::interval(x));
  return pts;
}
}  // namespace

TEST_CASE("sample_coefficients: support band and determinism") {
  GenConfig cfg;
  cfg.n_low = 3;
  cfg.n_high = 3;
  Rng rng(1);
  Eigen::VectorXd c = sample_coefficients(cfg, 6, rng);
  for (int i = 0; i < 6; ++i) {
    if (i == 3)
      REQUIRE(c[i] != 0.0);
    else
      REQUIRE(c[i] == 0.0);
  }

  GenConfig full;
  full.n_low = 0;
  full.n_high = 7;
  Rng rng2(2);
  Eigen::VectorXd v = sample_coefficients(full, 8, rng2);
  for (int i = 0; i < 8; ++i) REQUIRE(v[i] != 0.0);

  Rng a(42), b(42);
  REQUIRE(sample_coefficients(full, 8, a) == sample_coefficients(full, 8, b));

  GenConfig bad;
  bad.n_low = 0;
  bad.n_high = 9;
  Rng rng3(3);
  REQUIRE_THROWS_AS(sample_coefficients(bad, 8, rng3), std::invalid_argument);
}

TEST_CASE("normalize_coefficients") {
  Eigen::VectorXd c(2);
  c << 3.0, 4.0;
  Eigen::VectorXd n = normalize_coefficients(c, 1.0);
  REQUIRE(n[0] == Catch::Approx(0.6));
  REQUIRE(n[1] == Catch::Approx(0.8));

  Eigen::VectorXd fixed = normalize_coefficients(n, 1.0);
  REQUIRE((fixed - n).cwiseAbs().maxCoeff() < 1e-12);

  REQUIRE_THROWS_AS(normalize_coefficients(Eigen::VectorXd::Zero(3), 1.0),
                    std::invalid_argument);
}

TEST_CASE("project_monotone: hand cases") {
  BasisFamily cheb = BasisFamily::chebyshev(4);
  Domain dom = Domain::interval(-1.0, 1.0);

  // p(x) = x: shifted derivative x + 1, integral T_1 + T_2/4
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
  c[1] = 1.0;
  Eigen::VectorXd g = project_monotone(c, cheb, dom);
  REQUIRE(g[0] == 0.0);
  REQUIRE(g[1] == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(g[2] == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(g[3] == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(oracles::grid_nondecreasing(cheb, g, dom));

  // p constant: derivative shifts to zero, result is constant
  Eigen::VectorXd k = Eigen::VectorXd::Zero(4);
  k[0] = 1.0;
  Eigen::VectorXd flat = project_monotone(k, cheb, dom);
  REQUIRE(flat.cwiseAbs().maxCoeff() < 1e-12);

  // top slot occupied: no room for the degree raise
  Eigen::VectorXd fullc = Eigen::VectorXd::Ones(4);
  REQUIRE_THROWS_AS(project_monotone(fullc, cheb, dom), std::invalid_argument);
}

TEST_CASE("project_monotone: random draws pass the grid oracle") {
  int d = 8;
  BasisFamily cheb = BasisFamily::chebyshev(d);
  Domain both = Domain::interval_union({{-1.0, 0.5, true}, {0.5, 1.0, false}});
  Rng rng(9);
  GenConfig cfg;
  cfg.n_low = 0;
  cfg.n_high = d - 2;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd c = sample_coefficients(cfg, d, rng);
    c = normalize_coefficients(c, std::abs(rng.normal(1.0, 0.25)));
    Eigen::VectorXd g = project_monotone(c, cheb, both);
    REQUIRE(oracles::grid_nondecreasing(cheb, g, both, 1000, 1e-9));
  }
}

TEST_CASE("add_noise: exact realized SNR") {
  Eigen::VectorXd signal(4);
  signal << 1.0, -2.0, 0.5, 3.0;

  Rng rng(31);
  Eigen::VectorXd clean = add_noise(signal, std::numeric_limits<double>::infinity(), rng);
  REQUIRE((clean - signal).cwiseAbs().maxCoeff() == 0.0);

  for (double snr : {35.0, 20.0, 50.0}) {
    Eigen::VectorXd noisy = add_noise(signal, snr, rng);
    double p_s = signal.squaredNorm();
    double p_n = (noisy - signal).squaredNorm();
    double realized = 10.0 * std::log10(p_s / p_n);
    REQUIRE(realized == Catch::Approx(snr).margin(1e-9));
  }

  REQUIRE_THROWS_AS(add_noise(Eigen::VectorXd::Zero(3), 35.0, rng), std::invalid_argument);
}

TEST_CASE("add_noise: Monte Carlo noise power tracks the SNR definition") {
  Eigen::VectorXd signal(16);
  for (int i = 0; i < 16; ++i) signal[i] = std::sin(0.7 * i) + 0.3;
  double p_s = signal.squaredNorm();
  double snr = 35.0;
  double expected_pn = p_s * std::pow(10.0, -snr / 10.0);
  for (int trial = 0; trial < 10000; ++trial) {
    Rng rng = Rng::stream(77, static_cast<std::uint64_t>(trial));
    Eigen::VectorXd noisy = add_noise(signal, snr, rng);
    REQUIRE((noisy - signal).squaredNorm() == Catch::Approx(expected_pn).epsilon(1e-12));
  }
}

TEST_CASE("make_batch: reproducible, normalized, monotone when asked") {
  BasisFamily cheb = BasisFamily::chebyshev(8);
  auto pts = interval_points({-1.0, -0.5, 0.0, 0.4});
  GenConfig cfg;
  cfg.n_low = 0;
  cfg.n_high = 7;
  cfg.n_batch = 5;
  cfg.snr_db = 35.0;

  auto b1 = make_batch(cfg, cheb, pts, 123);
  auto b2 = make_batch(cfg, cheb, pts, 123);
  REQUIRE(b1.size() == 5);
  for (std::size_t j = 0; j < b1.size(); ++j) {
    REQUIRE(b1[j].first.values == b2[j].first.values);
    REQUIRE(b1[j].second == b2[j].second);
  }

  // batches starting at different pair offsets reproduce the same pairs
  auto shifted = make_batch(cfg, cheb, pts, 123, 2);
  REQUIRE(shifted[0].second == b1[2].second);

  Domain both = Domain::interval_union({{-1.0, 0.5, true}, {0.5, 1.0, false}});
  GenConfig mono = cfg;
  mono.monotone = true;
  mono.n_high = 6;
  auto mb = make_batch(mono, cheb, pts, 9, 0, &both);
  for (const auto& [samples, coeffs] : mb)
    REQUIRE(oracles::grid_nondecreasing(cheb, coeffs, both, 1000, 1e-9));
  REQUIRE_THROWS_AS(make_batch(mono, cheb, pts, 9), std::invalid_argument);
}

TEST_CASE("make_batch: mean coefficient norm calibrates to r_m") {
  BasisFamily cheb = BasisFamily::chebyshev(8);
  auto pts = interval_points({-1.0, 0.0});
  GenConfig cfg;
  cfg.r_m = 1.0;
  cfg.r_sigma = 0.25;
  cfg.n_low = 0;
  cfg.n_high = 7;
  cfg.n_batch = 10000;
  auto batch = make_batch(cfg, cheb, pts, 2024);
  double mean_norm = 0.0;
  for (const auto& [samples, coeffs] : batch) mean_norm += coeffs.norm();
  mean_norm /= static_cast<double>(batch.size());
  REQUIRE(mean_norm == Catch::Approx(1.0).margin(0.01));
}
