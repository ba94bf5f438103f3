#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace finq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.transpose()) <= tol * std::max(1.0, max_abs(m));
}

inline double smallest_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Row-major flattening, matching the external matrix layout.
inline Vector flatten(const Matrix& m) {
  Vector out(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[idx++] = m(r, c);
  return out;
}

// Relative gap between two values of comparable scale.
inline double rel_deviation(double x, double y) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-12});
}

// Least-squares coordinates with respect to a fixed list of matrices.
// Backs Lie-algebra bases as well as split frames; the decomposition is
// computed once and shared between copies.
class MatrixBasis {
 public:
  MatrixBasis() = default;

  explicit MatrixBasis(std::vector<Matrix> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("empty matrix basis");
    const Eigen::Index rows = basis_.front().rows();
    const Eigen::Index cols = basis_.front().cols();
    Matrix flat(rows * cols, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i].rows() != rows || basis_[i].cols() != cols)
        throw std::invalid_argument("matrix basis shape mismatch");
      flat.col(static_cast<Eigen::Index>(i)) = flatten(basis_[i]);
    }
    auto cod = std::make_shared<Eigen::CompleteOrthogonalDecomposition<Matrix>>(flat);
    if (cod->rank() != flat.cols())
      throw std::invalid_argument("matrix basis is linearly dependent");
    flat_ = std::make_shared<Matrix>(std::move(flat));
    cod_ = std::move(cod);
  }

  int size() const { return static_cast<int>(basis_.size()); }
  const Matrix& operator[](int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const std::vector<Matrix>& matrices() const { return basis_; }

  Vector coordinates(const Matrix& target, double* residual = nullptr) const {
    Vector t = flatten(target);
    Vector c = cod_->solve(t);
    if (residual) *residual = (*flat_ * c - t).norm();
    return c;
  }

  Matrix combine(const Vector& coords) const {
    if (coords.size() != size()) throw std::invalid_argument("dimension mismatch");
    Matrix out = Matrix::Zero(basis_.front().rows(), basis_.front().cols());
    for (int i = 0; i < size(); ++i) out += coords[i] * basis_[static_cast<std::size_t>(i)];
    return out;
  }

 private:
  std::vector<Matrix> basis_;
  std::shared_ptr<const Matrix> flat_;  // m^2 x n, columns are flattened basis matrices
  std::shared_ptr<const Eigen::CompleteOrthogonalDecomposition<Matrix>> cod_;
};

}  // namespace finq
