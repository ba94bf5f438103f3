#pragma once

// Minkowski norms on R^n: nonnegative, positively 1-homogeneous, smooth away
// from the origin, with positive-definite fundamental tensor
//   g_ij(y) = d^2/dy_i dy_j [ F(y)^2 / 2 ]   for y != 0.
// Built-in families: euclidean quadratic forms, randers perturbations of a
// quadratic form, a quartic-mean norm, and user-supplied evaluators.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "finq/linalg.hpp"
#include "finq/rng.hpp"

namespace finq {

struct FundamentalTensor {
  Vector at;      // base direction, nonzero
  Matrix matrix;  // Hessian of F^2/2 at `at`
};

namespace detail {

inline Matrix checked_spd(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dimension mismatch");
  if (!is_symmetric(a, 1e-12))
    throw std::invalid_argument("matrix a must be symmetric positive-definite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 1e-12 * std::max(1.0, hi))
    throw std::invalid_argument("matrix a must be symmetric positive-definite");
  return a;
}

}  // namespace detail

class MinkowskiNorm {
 public:
  enum class Kind { euclidean, randers, custom };

  static MinkowskiNorm euclidean(Matrix a) {
    MinkowskiNorm n;
    n.a_ = detail::checked_spd(std::move(a));
    n.dim_ = static_cast<int>(n.a_.rows());
    n.kind_ = Kind::euclidean;
    n.name_ = "euclidean";
    return n;
  }

  static MinkowskiNorm randers(Matrix a, Vector b) {
    MinkowskiNorm n;
    n.a_ = detail::checked_spd(std::move(a));
    n.dim_ = static_cast<int>(n.a_.rows());
    if (b.size() != n.dim_) throw std::invalid_argument("dimension mismatch");
    // |b|_a = sqrt(b^T a^{-1} b) must stay strictly below 1 or the norm
    // loses positivity and the tensor loses definiteness.
    const double drift = std::sqrt(b.dot(n.a_.llt().solve(b)));
    if (drift >= 1.0 - 1e-9)
      throw std::invalid_argument("randers norm requires |b|_a < 1");
    n.b_ = std::move(b);
    n.kind_ = Kind::randers;
    n.name_ = "randers";
    return n;
  }

  // `hessian`, when given, must be the analytic Hessian of F^2/2; without it
  // the fundamental tensor falls back to central finite differences.
  static MinkowskiNorm custom(int dim, std::string name,
                              std::function<double(const Vector&)> evaluate,
                              std::function<Matrix(const Vector&)> hessian = {}) {
    if (dim < 1) throw std::invalid_argument("dimension mismatch");
    if (!evaluate) throw std::invalid_argument("custom norm requires an evaluator");
    MinkowskiNorm n;
    n.dim_ = dim;
    n.kind_ = Kind::custom;
    n.name_ = std::move(name);
    n.eval_ = std::move(evaluate);
    n.hess_ = std::move(hessian);
    return n;
  }

  // F(y) = (sum_i y_i^4)^{1/4}, the standard non-quadratic smoke test: it is
  // absolutely homogeneous yet its tensor genuinely depends on y.
  static MinkowskiNorm quartic(int dim) {
    auto eval = [](const Vector& y) {
      return std::pow(y.array().square().square().sum(), 0.25);
    };
    // With S = sum y^4:  g_ij = 3 y_i^2 delta_ij / sqrt(S) - 2 y_i^3 y_j^3 / S^{3/2}.
    auto hess = [](const Vector& y) {
      const Eigen::ArrayXd y2 = y.array().square();
      const Eigen::ArrayXd y3 = y2 * y.array();
      const double s = y2.square().sum();
      const double rt = std::sqrt(s);
      Matrix g = (3.0 / rt) * y2.matrix().asDiagonal();
      g.noalias() -= (2.0 / (s * rt)) * (y3.matrix() * y3.matrix().transpose());
      return g;
    };
    return custom(dim, "quartic", eval, hess);
  }

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  bool has_analytic_tensor() const {
    return kind_ != Kind::custom || static_cast<bool>(hess_);
  }

  friend double evaluate(const MinkowskiNorm& n, const Vector& y);
  friend FundamentalTensor fundamental_tensor(const MinkowskiNorm& n, const Vector& y);
  friend Matrix fd_fundamental_tensor(const MinkowskiNorm& n, const Vector& y);

 private:
  MinkowskiNorm() = default;

  int dim_ = 0;
  Kind kind_ = Kind::custom;
  std::string name_;
  Matrix a_;
  Vector b_;
  std::function<double(const Vector&)> eval_;
  std::function<Matrix(const Vector&)> hess_;
};

inline double evaluate(const MinkowskiNorm& n, const Vector& y) {
  if (y.size() != n.dim_) throw std::invalid_argument("dimension mismatch");
  switch (n.kind_) {
    case MinkowskiNorm::Kind::euclidean:
      return std::sqrt(std::max(0.0, y.dot(n.a_ * y)));
    case MinkowskiNorm::Kind::randers:
      return std::sqrt(std::max(0.0, y.dot(n.a_ * y))) + n.b_.dot(y);
    case MinkowskiNorm::Kind::custom:
    default:
      // homogeneity forces F(0) = 0 regardless of the evaluator
      return y.isZero(0.0) ? 0.0 : n.eval_(y);
  }
}

// Central finite differences on f = F^2/2 with step h per axis: every
// coordinate pair (i, j) uses the symmetric 4-point stencil
//   [f(y+h e_i+h e_j) - f(y+h e_i-h e_j) - f(y-h e_i+h e_j) + f(y-h e_i-h e_j)] / 4h^2,
// which on the diagonal degenerates to a second difference with doubled
// step and keeps the rounding error near eps/h^2. Each unordered pair is
// evaluated once, so the result is exactly symmetric.
inline Matrix fd_fundamental_tensor(const MinkowskiNorm& n, const Vector& y) {
  const int d = n.dim_;
  const double h =
      std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, y.norm());
  auto f = [&](const Vector& v) {
    const double fv = evaluate(n, v);
    return 0.5 * fv * fv;
  };
  Matrix g(d, d);
  const double f0 = f(y);
  for (int i = 0; i < d; ++i) {
    Vector yp = y, ym = y;
    yp[i] += 2.0 * h;
    ym[i] -= 2.0 * h;
    g(i, i) = (f(yp) - 2.0 * f0 + f(ym)) / (4.0 * h * h);
    for (int j = i + 1; j < d; ++j) {
      Vector pp = y, pm = y, mp = y, mm = y;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      const double v = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

inline FundamentalTensor fundamental_tensor(const MinkowskiNorm& n, const Vector& y) {
  if (y.size() != n.dim_) throw std::invalid_argument("dimension mismatch");
  if (y.norm() <= 1e-12)
    throw std::domain_error("fundamental tensor undefined at origin");
  switch (n.kind_) {
    case MinkowskiNorm::Kind::euclidean:
      return {y, n.a_};
    case MinkowskiNorm::Kind::randers: {
      // g = (l + b)(l + b)^T + (F/alpha) (a - l l^T)  with  l = a y / alpha.
      const double alpha = std::sqrt(y.dot(n.a_ * y));
      const Vector l = (n.a_ * y) / alpha;
      const double f = alpha + n.b_.dot(y);
      const Vector lb = l + n.b_;
      Matrix g = lb * lb.transpose();
      g.noalias() += (f / alpha) * (n.a_ - l * l.transpose());
      return {y, g};
    }
    case MinkowskiNorm::Kind::custom:
    default:
      if (n.hess_) return {y, n.hess_(y)};
      return {y, fd_fundamental_tensor(n, y)};
  }
}

// Sampled axiom audit over random directions y on the unit sphere and random
// scales lambda in (0, 10].
struct AxiomReport {
  int samples = 0;
  double max_homogeneity_deviation = 0.0;  // relative, F(lambda y) vs lambda F(y)
  double min_tensor_eigenvalue = std::numeric_limits<double>::infinity();
  bool symmetric = true;                   // F(-y) == F(y) held at every sample
  double max_symmetry_gap = 0.0;           // largest |F(-y) - F(y)| observed
  double max_tensor_asymmetry = 0.0;       // relative, g vs g^T
  double max_euler_deviation = 0.0;        // relative, y^T g y vs F(y)^2
  double max_fd_deviation = 0.0;           // analytic vs finite-difference tensor
  Vector worst_direction;                  // y at the homogeneity maximum
  double worst_lambda = 0.0;
};

inline AxiomReport check_minkowski_axioms(const MinkowskiNorm& n, int sample_count,
                                          std::uint64_t seed, int workers = 1) {
  if (sample_count < 1) throw std::invalid_argument("sample count must be positive");
  const int d = n.dim();
  const bool compare_fd = n.has_analytic_tensor();

  auto per_sample = [&](AxiomReport& acc, int, SampleRng& rng) {
    const Vector y = rng.unit_vector(d);
    const double lam = rng.positive(10.0);
    const double fy = evaluate(n, y);
    const double fly = evaluate(n, lam * y);

    const double hom = std::abs(fly - lam * fy) / std::max(lam * fy, 1e-300);
    if (hom > acc.max_homogeneity_deviation || acc.samples == 0) {
      acc.max_homogeneity_deviation = std::max(acc.max_homogeneity_deviation, hom);
      acc.worst_direction = y;
      acc.worst_lambda = lam;
    }

    const double gap = std::abs(evaluate(n, -y) - fy);
    acc.max_symmetry_gap = std::max(acc.max_symmetry_gap, gap);
    if (gap > 1e-9 * std::max(1.0, fy)) acc.symmetric = false;

    const Matrix g = fundamental_tensor(n, y).matrix;
    acc.max_tensor_asymmetry =
        std::max(acc.max_tensor_asymmetry,
                 max_abs(Matrix(g - g.transpose())) / std::max(1.0, max_abs(g)));
    acc.min_tensor_eigenvalue =
        std::min(acc.min_tensor_eigenvalue,
                 smallest_eigenvalue(0.5 * (g + g.transpose())));

    const double quad = y.dot(g * y);
    acc.max_euler_deviation = std::max(
        acc.max_euler_deviation, std::abs(quad - fy * fy) / std::max(fy * fy, 1e-300));

    if (compare_fd) {
      // The tensor is 0-homogeneous, so compare on the same ray at the point
      // where F = 1: there 1/2 F^2 is 1/2 and the finite-difference rounding
      // floor (~eps |1/2 F^2| / h^2) stays well inside the 1e-5 budget even
      // for strongly drifted randers norms.
      const Vector yn = y / fy;
      const Matrix ga = fundamental_tensor(n, yn).matrix;
      const Matrix gf = fd_fundamental_tensor(n, yn);
      acc.max_fd_deviation = std::max(acc.max_fd_deviation, max_abs(Matrix(ga - gf)));
    }
    acc.samples += 1;
  };

  auto merge = [](AxiomReport& acc, const AxiomReport& p) {
    if (p.samples == 0) return;
    if (acc.samples == 0 || p.max_homogeneity_deviation > acc.max_homogeneity_deviation) {
      acc.worst_direction = p.worst_direction;
      acc.worst_lambda = p.worst_lambda;
    }
    acc.max_homogeneity_deviation =
        std::max(acc.max_homogeneity_deviation, p.max_homogeneity_deviation);
    acc.min_tensor_eigenvalue = std::min(acc.min_tensor_eigenvalue, p.min_tensor_eigenvalue);
    acc.symmetric = acc.symmetric && p.symmetric;
    acc.max_symmetry_gap = std::max(acc.max_symmetry_gap, p.max_symmetry_gap);
    acc.max_tensor_asymmetry = std::max(acc.max_tensor_asymmetry, p.max_tensor_asymmetry);
    acc.max_euler_deviation = std::max(acc.max_euler_deviation, p.max_euler_deviation);
    acc.max_fd_deviation = std::max(acc.max_fd_deviation, p.max_fd_deviation);
    acc.samples += p.samples;
  };

  return scan_reduce(sample_count, seed, workers, AxiomReport{}, per_sample, merge);
}

}  // namespace finq
