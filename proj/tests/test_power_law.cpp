#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "xct/power_law.hpp"
#include "xct/random.hpp"

using namespace xct;

namespace {

Eigen::ArrayXd linspace(Eigen::Index n, double lo, double hi) {
  return Eigen::ArrayXd::LinSpaced(n, lo, hi);
}

const PowerLawParams<double> kTable2{15227.387, -1.031, -995.488};

}  // namespace

TEST_CASE("exact 2/x data is recovered") {
  const Eigen::ArrayXd x = linspace(50, 0.5, 20.0);
  const Eigen::ArrayXd y = 2.0 / x;
  const auto fit = fit_power_law(x, y);
  CHECK(fit.converged);
  CHECK(std::abs(fit.params.a - 2.0) < 1e-6);
  CHECK(std::abs(fit.params.b + 1.0) < 1e-6);
  CHECK(std::abs(fit.params.eps) < 1e-6);
  CHECK(fit.rmse < 1e-6);
}

TEST_CASE("measured lifetime curve parameters are recovered") {
  const Eigen::ArrayXd x = linspace(200, 0.5, 14.0);
  const Eigen::ArrayXd y = power_law(x, kTable2);
  const auto fit = fit_power_law(x, y);
  CHECK(fit.converged);
  CHECK(std::abs(fit.params.a / kTable2.a - 1.0) < 1e-3);
  CHECK(std::abs(fit.params.b / kTable2.b - 1.0) < 1e-3);
  CHECK(std::abs(fit.params.eps / kTable2.eps - 1.0) < 1e-3);
}

TEST_CASE("float instantiation") {
  const Eigen::ArrayXf x = Eigen::ArrayXf::LinSpaced(40, 1.0f, 10.0f);
  const Eigen::ArrayXf y = 3.0f * x.pow(-0.5f) + 1.0f;
  const auto fit = fit_power_law(x, y);
  CHECK(fit.params.a == doctest::Approx(3.0f).epsilon(1e-2));
  CHECK(fit.params.b == doctest::Approx(-0.5f).epsilon(1e-2));
}

TEST_CASE("noisy fit is no worse than a coarse grid search") {
  Rng rng{3};
  const Eigen::ArrayXd x = linspace(60, 0.5, 24.0);
  Eigen::ArrayXd y = power_law(x, kTable2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += 300.0 * rng.normal();
  const auto fit = fit_power_law(x, y);

  // 50^3 grid centred on the initial guess.
  const auto init = power_law_initial_guess(x, y);
  const double a_lo = init.a * 0.25, a_hi = init.a * 4.0;
  const double b_lo = init.b - 1.0, b_hi = init.b + 1.0;
  const double e_span = std::max(1.0, y.abs().maxCoeff());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      for (int k = 0; k < 50; ++k) {
        const PowerLawParams<double> p{a_lo + (a_hi - a_lo) * i / 49.0, b_lo + (b_hi - b_lo) * j / 49.0,
                                       -e_span + 2.0 * e_span * k / 49.0};
        best = std::min(best, power_law_sse(x, y, p));
      }
    }
  }
  CHECK(fit.sse <= best);
  CHECK(fit.rmse == doctest::Approx(std::sqrt(power_law_sse(x, y, fit.params) / x.size())));
}

TEST_CASE("fit is invariant under permutation of the points") {
  Rng rng{8};
  const Eigen::ArrayXd x = linspace(80, 1.0, 30.0);
  Eigen::ArrayXd y = power_law(x, kTable2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += 50.0 * rng.normal();
  const auto base = fit_power_law(x, y);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), 0);
  for (int round = 0; round < 5; ++round) {
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    Eigen::ArrayXd px(x.size()), py(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      px(i) = x(order[static_cast<std::size_t>(i)]);
      py(i) = y(order[static_cast<std::size_t>(i)]);
    }
    const auto fit = fit_power_law(px, py);
    CHECK(fit.params.a == doctest::Approx(base.params.a).epsilon(1e-6));
    CHECK(fit.params.b == doctest::Approx(base.params.b).epsilon(1e-6));
    CHECK(fit.params.eps == doctest::Approx(base.params.eps).epsilon(1e-6));
  }
}

TEST_CASE("initial guess comes from log-log regression") {
  const Eigen::ArrayXd x = linspace(10, 1.0, 10.0);
  const Eigen::ArrayXd y = 5.0 * x.pow(-2.0);
  const auto p = power_law_initial_guess(x, y);
  CHECK(p.a == doctest::Approx(5.0));
  CHECK(p.b == doctest::Approx(-2.0));
  CHECK(p.eps == 0.0);
}

TEST_CASE("degenerate input") {
  const Eigen::ArrayXd two = linspace(2, 1.0, 2.0);
  CHECK_THROWS_AS(fit_power_law(two, two), DegenerateInput);
  const Eigen::ArrayXd flat = Eigen::ArrayXd::Constant(5, 3.0);
  CHECK_THROWS_AS(fit_power_law(flat, linspace(5, 1.0, 5.0)), DegenerateInput);
  Eigen::ArrayXd neg = linspace(5, -1.0, 3.0);
  CHECK_THROWS_AS(fit_power_law(neg, linspace(5, 1.0, 5.0)), DegenerateInput);
}

TEST_CASE("iteration cap reports non-convergence with the best point") {
  const Eigen::ArrayXd x = linspace(200, 0.5, 14.0);
  const Eigen::ArrayXd y = power_law(x, kTable2);
  const auto capped = fit_power_law(x, y, FitControls{1e-10, 2});
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 2);
  CHECK(capped.sse <= power_law_sse(x, y, power_law_initial_guess(x, y)));
}
