#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <memory>
#include <numbers>

#include "extrap/nnet.hpp"
#include "nn_testutil.hpp"
#include "oracles.hpp"

using namespace extrap;

namespace {
Mlp single_layer(Eigen::MatrixXd w, Eigen::VectorXd b, Activation act, double beta = 1.0) {
  Mlp net;
  Layer layer;
  layer.w = std::move(w);
  layer.b = std::move(b);
  layer.act = act;
  layer.snake_beta = beta;
  net.layers.push_back(std::move(layer));
  return net;
}
}  // namespace

TEST_CASE("forward: identity, relu and snake hand cases") {
  Mlp id = single_layer(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3),
                        Activation::identity);
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 2.0;
  REQUIRE((forward(id, x) - x).cwiseAbs().maxCoeff() == 0.0);

  Mlp relu = single_layer(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                          Activation::relu);
  Eigen::VectorXd r(2);
  r << -1.0, 2.0;
  Eigen::VectorXd out = forward(relu, r);
  REQUIRE(out[0] == 0.0);
  REQUIRE(out[1] == 2.0);

  Mlp snake = single_layer(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1),
                           Activation::snake, 1.0);
  Eigen::VectorXd zero(1);
  zero << 0.0;
  REQUIRE(forward(snake, zero)[0] == 0.0);
  Eigen::VectorXd half_pi(1);
  half_pi << std::numbers::pi / 2;
  REQUIRE(forward(snake, half_pi)[0] ==
          Catch::Approx(std::numbers::pi / 2 + 1.0).margin(1e-14));

  Eigen::VectorXd wrong(4);
  REQUIRE_THROWS_AS(forward(relu, wrong), std::invalid_argument);
}

TEST_CASE("snake keeps its periodic part inside [0,1]") {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    double beta = rng.uniform(0.2, 4.0);
    Mlp net = single_layer(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1),
                           Activation::snake, beta);
    Eigen::VectorXd x(1);
    x << rng.uniform(-20.0, 20.0);
    double diff = forward(net, x)[0] - x[0];
    REQUIRE(diff >= -1e-12);
    REQUIRE(diff <= 1.0 + 1e-12);
  }
}

TEST_CASE("backward: zero upstream gradient gives zero parameter gradients") {
  Mlp net = Mlp::create({4, 8, 3}, Activation::tanh_act, 5);
  Eigen::MatrixXd x(2, 4);
  x.setRandom();
  ForwardCache cache;
  Eigen::MatrixXd pred = forward(net, x, &cache);
  Gradients g = backward(net, cache, Eigen::MatrixXd::Zero(pred.rows(), pred.cols()));
  for (const auto& dw : g.dw) REQUIRE(dw.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& db : g.db) REQUIRE(db.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient check per activation, including learnable snake frequency") {
  std::vector<int> sizes{5, 7, 6, 4};
  REQUIRE(nn_testutil::gradient_check_max_err(sizes, Activation::relu, false, 101) < 1e-4);
  REQUIRE(nn_testutil::gradient_check_max_err(sizes, Activation::tanh_act, false, 102) < 1e-4);
  REQUIRE(nn_testutil::gradient_check_max_err(sizes, Activation::snake, true, 103) < 1e-4);
}

TEST_CASE("snake beta gradient vanishes where sin(2 beta x) = 0") {
  Mlp net = single_layer(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1),
                         Activation::snake, 1.0);
  net.layers[0].snake_beta_learnable = true;
  Eigen::MatrixXd x(1, 1);
  x << std::numbers::pi / 2;  // sin(2 x) = 0
  ForwardCache cache;
  forward(net, x, &cache);
  Gradients g = backward(net, cache, Eigen::MatrixXd::Ones(1, 1));
  REQUIRE(g.dbeta[0] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("loss_core: hand values and the brute-force norm oracle") {
  GramMatrix g(2, 2);
  g << 2.0, 1.0, 1.0, 3.0;
  Eigen::VectorXd pred(2), truth(2);
  pred << 1.0, 0.0;
  truth << 0.0, 1.0;
  auto [value, grad] = loss_core(pred, truth, g);
  REQUIRE(value == Catch::Approx(3.0));
  REQUIRE(grad[0] == Catch::Approx(2.0));
  REQUIRE(grad[1] == Catch::Approx(-4.0));

  auto [zero, zgrad] = loss_core(truth, truth, g);
  REQUIRE(zero == 0.0);
  REQUIRE(zgrad.cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  REQUIRE(loss_core(ones, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)).first ==
          Catch::Approx(2.0));

  // equals the squared domain norm of the coefficient difference
  Domain xi = Domain::interval(0.5, 1.0);
  BasisFamily cheb = BasisFamily::chebyshev(6);
  GramMatrix gram_xi = gram_matrix(xi, cheb);
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    double via_loss = loss_core(a, b, gram_xi).first;
    REQUIRE(via_loss >= 0.0);
    REQUIRE(via_loss == Catch::Approx(oracles::brute_norm2(xi, cheb, a - b)).epsilon(1e-8));
  }
}

TEST_CASE("endpoint monotone penalty") {
  BasisFamily cheb = BasisFamily::chebyshev(3);
  Point x0 = Point::interval(0.5), x1 = Point::interval(1.0);

  Eigen::VectorXd increasing = Eigen::VectorXd::Unit(3, 1);  // g(x) = x
  auto [v_inc, g_inc] = loss_ext_monotone(cheb, increasing, x0, x1);
  REQUIRE(v_inc == 0.0);
  REQUIRE(g_inc.cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd decreasing = -increasing;
  auto [v_dec, g_dec] = loss_ext_monotone(cheb, decreasing, x0, x1);
  REQUIRE(v_dec == Catch::Approx(0.5));
  REQUIRE(g_dec[1] == Catch::Approx(-0.5));

  // grid variant vanishes exactly on grid-monotone expansions
  Domain xi = Domain::interval(0.5, 1.0);
  std::vector<Point> grid = grid_points(xi, 50);
  REQUIRE(loss_ext_monotone_grid(cheb, increasing, grid).first == 0.0);
  REQUIRE(loss_ext_monotone_grid(cheb, decreasing, grid).first > 0.0);
}

TEST_CASE("adam: zero gradient is a no-op and the first step follows the sign") {
  Mlp net = single_layer(Eigen::MatrixXd::Constant(1, 1, 0.7), Eigen::VectorXd::Zero(1),
                         Activation::identity);
  AdamState st = AdamState::init(net, 1e-3, 0.9, 0.999, 1e-8);
  Gradients zero;
  zero.dw = {Eigen::MatrixXd::Zero(1, 1)};
  zero.db = {Eigen::VectorXd::Zero(1)};
  zero.dbeta = {0.0};
  adam_step(net, zero, st);
  REQUIRE(net.layers[0].w(0, 0) == Catch::Approx(0.7).margin(1e-12));

  // first step from a fresh state moves by learning_rate times the sign
  AdamState fresh = AdamState::init(net, 1e-3, 0.9, 0.999, 1e-8);
  Gradients g = zero;
  g.dw[0](0, 0) = -3.7;
  double before = net.layers[0].w(0, 0);
  adam_step(net, g, fresh);
  REQUIRE(net.layers[0].w(0, 0) - before == Catch::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("training: near-linear one-dimensional problem and determinism") {
  Domain omega = Domain::interval(0.0, 1.0);
  Domain xi = Domain::interval(1.0, 2.0);
  BasisFamily ones = BasisFamily::from_handles({FunctionHandle::constant(1.0)});
  auto pts = std::make_shared<const std::vector<Point>>(grid_points(omega, 4));

  GenConfig gen;
  gen.n_low = 0;
  gen.n_high = 0;
  gen.n_batch = 16;

  TrainConfig tc;
  tc.hidden = {16};
  tc.max_steps = 400;
  tc.learning_rate = 1e-2;
  tc.conv_tol = 0.0;

  TrainResult r1 = train(gen, tc, ones, omega, xi, pts, 99);
  TrainResult r2 = train(gen, tc, ones, omega, xi, pts, 99);
  REQUIRE(r1.net.layers[0].w == r2.net.layers[0].w);
  REQUIRE(r1.net.layers.back().b == r2.net.layers.back().b);

  // validation: coefficient recovery within 0.05 RMSE
  auto val = make_batch(gen, ones, pts, 7);
  double se = 0.0;
  int count = 0;
  for (int j = 0; j < 100; ++j) {
    auto batch = make_batch(gen, ones, pts, 7, static_cast<std::uint64_t>(j));
    const auto& [samples, truth] = batch.front();
    Eigen::VectorXd coeffs = predict_coefficients(r1.net, samples);
    se += (coeffs - truth).squaredNorm();
    count += 1;
  }
  REQUIRE(std::sqrt(se / count) < 0.05);

  // round-trip: prediction on a training pair extrapolates accurately
  auto batch = make_batch(gen, ones, pts, 7);
  std::vector<Point> xi_grid = grid_points(xi, 64);
  Eigen::VectorXd pred = predict_extrapolation(r1.net, batch.front().first, ones, xi_grid);
  Eigen::VectorXd expected(64);
  for (int i = 0; i < 64; ++i)
    expected[i] = ones.eval_function(batch.front().second, xi_grid[static_cast<std::size_t>(i)]);
  REQUIRE(std::sqrt((pred - expected).squaredNorm() / 64) < 0.05);

  SampleSet wrong;
  wrong.points = std::make_shared<const std::vector<Point>>(grid_points(omega, 5));
  wrong.values = Eigen::VectorXd::Zero(5);
  REQUIRE_THROWS_AS(predict_coefficients(r1.net, wrong), std::invalid_argument);
}

TEST_CASE("total_loss composes the weighted parts") {
  Domain omega = Domain::interval(0.0, 1.0);
  Domain xi = Domain::interval(1.0, 2.0);
  BasisFamily cheb = BasisFamily::chebyshev(3);
  auto pts = std::make_shared<const std::vector<Point>>(grid_points(omega, 5));
  GenConfig gen;
  gen.n_low = 0;
  gen.n_high = 2;
  gen.n_batch = 4;
  auto batch = make_batch(gen, cheb, pts, 11);
  GramMatrix gram_xi = gram_matrix(xi, cheb);
  Mlp net = Mlp::create({5, 8, 3}, Activation::relu, 4);

  TrainConfig core_only;
  core_only.lambda_core = 1.0;
  core_only.lambda_ext = 0.0;
  double base = total_loss(batch, net, gram_xi, core_only, cheb, Point::interval(1.0),
                           Point::interval(2.0));
  REQUIRE(base > 0.0);

  TrainConfig both = core_only;
  both.lambda_ext = 2.0;
  double with_ext = total_loss(batch, net, gram_xi, both, cheb, Point::interval(1.0),
                               Point::interval(2.0));
  REQUIRE(with_ext >= base - 1e-12);
}
