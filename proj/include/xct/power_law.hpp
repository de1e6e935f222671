#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xct {

template <typename Scalar>
struct PowerLawParams {
  Scalar a{1};
  Scalar b{-1};
  Scalar eps{0};
};

template <typename Scalar>
struct PowerLawFit {
  PowerLawParams<Scalar> params;
  /// Root-mean-square residual over the fitted points.
  Scalar rmse{0};
  Scalar sse{0};
  int iterations = 0;
  bool converged = false;
};

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FitControls {
  double relative_tolerance = 1e-10;
  int max_iterations = 500;
};

/// a * x^b + eps, elementwise.
template <typename Derived, typename Scalar = typename Derived::Scalar>
auto power_law(const Eigen::ArrayBase<Derived>& x, const PowerLawParams<Scalar>& p) {
  return p.a * x.pow(p.b) + p.eps;
}

template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
Scalar power_law_sse(const Eigen::ArrayBase<DerivedX>& x, const Eigen::ArrayBase<DerivedY>& y,
                     const PowerLawParams<Scalar>& p) {
  return (y - power_law(x, p)).square().sum();
}

namespace detail {

template <typename DerivedX, typename DerivedY>
void check_fit_input(const Eigen::ArrayBase<DerivedX>& x, const Eigen::ArrayBase<DerivedY>& y) {
  if (x.size() != y.size()) throw DegenerateInput("x and y differ in length");
  if (x.size() < 3) throw DegenerateInput("need at least 3 points");
  if (!x.allFinite() || !y.allFinite()) throw DegenerateInput("non-finite input");
  if ((x <= 0).any()) throw DegenerateInput("x must be strictly positive");
  if (x.maxCoeff() == x.minCoeff()) throw DegenerateInput("x is constant");
}

}  // namespace detail

/// Starting point: eps = 0 and (a, b) from least squares of log y on log x
/// over the points with y > 0.
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
PowerLawParams<Scalar> power_law_initial_guess(const Eigen::ArrayBase<DerivedX>& x,
                                               const Eigen::ArrayBase<DerivedY>& y) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::Index n = (y > 0).count();
  Vec lx(n), ly(n);
  for (Eigen::Index i = 0, k = 0; i < x.size(); ++i) {
    if (y(i) > 0) {
      lx(k) = std::log(x(i));
      ly(k) = std::log(y(i));
      ++k;
    }
  }
  PowerLawParams<Scalar> p;
  if (n < 2 || lx.maxCoeff() == lx.minCoeff()) {
    p.a = n > 0 ? std::exp(ly.mean()) : Scalar{1};
    return p;
  }
  const Scalar mx = lx.mean(), my = ly.mean();
  const Vec dx = lx.array() - mx;
  p.b = dx.dot((ly.array() - my).matrix()) / dx.squaredNorm();
  p.a = std::exp(my - p.b * mx);
  p.eps = Scalar{0};
  return p;
}

/// Least-squares fit of y = a * x^b + eps by Levenberg-Marquardt with
/// Marquardt diagonal scaling. Stops when an accepted step lowers the sum of
/// squared residuals by less than `relative_tolerance` of its value, when no
/// damping yields descent, or after `max_iterations` trial steps (then
/// `converged` is false and the best parameters so far are returned).
template <typename DerivedX, typename DerivedY, typename Scalar = typename DerivedX::Scalar>
PowerLawFit<Scalar> fit_power_law(const Eigen::ArrayBase<DerivedX>& x_in,
                                  const Eigen::ArrayBase<DerivedY>& y_in,
                                  const FitControls& controls = {}) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  detail::check_fit_input(x_in, y_in);
  const Array x = x_in;
  const Array y = y_in;
  const Eigen::Index n = x.size();
  const Array log_x = x.log();

  PowerLawFit<Scalar> fit;
  PowerLawParams<Scalar> p = power_law_initial_guess(x, y);
  Scalar sse = power_law_sse(x, y, p);
  Scalar lambda{1e-3};

  Matrix J(n, 3);
  Matrix augmented(n + 3, 3);
  Vec rhs(n + 3);

  while (fit.iterations < controls.max_iterations) {
    if (sse == Scalar{0}) {
      fit.converged = true;
      break;
    }
    const Array xb = x.pow(p.b);
    J.col(0) = xb.matrix();
    J.col(1) = (p.a * xb * log_x).matrix();
    J.col(2).setOnes();
    const Vec residual = (y - (p.a * xb + p.eps)).matrix();
    const Vec scale = J.colwise().norm().transpose().cwiseMax(std::numeric_limits<Scalar>::min());

    bool accepted = false;
    while (fit.iterations < controls.max_iterations) {
      ++fit.iterations;
      augmented.topRows(n) = J;
      augmented.bottomRows(3) = (std::sqrt(lambda) * scale).asDiagonal();
      rhs.head(n) = residual;
      rhs.tail(3).setZero();
      const Vec step = augmented.colPivHouseholderQr().solve(rhs);
      const PowerLawParams<Scalar> trial{p.a + step(0), p.b + step(1), p.eps + step(2)};
      const Scalar trial_sse = power_law_sse(x, y, trial);
      if (std::isfinite(trial_sse) && trial_sse < sse) {
        const Scalar relative = (sse - trial_sse) / sse;
        p = trial;
        sse = trial_sse;
        lambda = std::max(lambda / Scalar{10}, Scalar{1e-15});
        accepted = true;
        if (relative < controls.relative_tolerance) fit.converged = true;
        break;
      }
      lambda *= Scalar{10};
      if (lambda > Scalar{1e16}) {
        fit.converged = true;
        break;
      }
    }
    if (fit.converged || !accepted) break;
  }

  fit.params = p;
  fit.sse = sse;
  fit.rmse = std::sqrt(sse / static_cast<Scalar>(n));
  return fit;
}

}  // namespace xct
