#pragma once

// Matrix Lie groups with explicit algebra bases, the differentials of
// translations and inversion, invariant frames, and left/right invariant
// Finsler metrics obtained by translating a Minkowski norm on the algebra.

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finq/linalg.hpp"
#include "finq/minkowski.hpp"
#include "finq/rng.hpp"

namespace finq {

enum class Side { left, right, bi };

inline const char* side_name(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    default: return "bi";
  }
}

// bi-invariant metrics are stored and evaluated through the right frame
inline Side frame_side(Side s) { return s == Side::left ? Side::left : Side::right; }

class MatrixLieGroup;
using GroupPtr = std::shared_ptr<const MatrixLieGroup>;

struct GroupElement {
  GroupPtr group;
  Matrix matrix;

  GroupElement inverse() const {
    return {group, matrix.partialPivLu().inverse()};
  }
};

// A tangent vector at `base`, stored as an ambient m x m matrix. Valid
// vectors lie in (algebra) * base = base * (algebra).
struct TangentVector {
  GroupElement base;
  Matrix matrix;
};

class MatrixLieGroup : public std::enable_shared_from_this<MatrixLieGroup> {
 public:
  struct Spec {
    std::string name;
    int matrix_size = 0;
    std::vector<Matrix> algebra_basis;
    std::function<bool(const Matrix&)> membership;
    std::function<Matrix(const Vector&)> exp;  // algebra coordinates -> group matrix
    double tolerance = 1e-9;
  };

  static GroupPtr create(Spec spec) {
    return GroupPtr(new MatrixLieGroup(std::move(spec)));
  }

  const std::string& name() const { return spec_.name; }
  int dim() const { return basis_.size(); }
  int matrix_size() const { return spec_.matrix_size; }
  double tolerance() const { return spec_.tolerance; }
  const std::vector<Matrix>& algebra_basis() const { return basis_.matrices(); }
  const MatrixBasis& basis() const { return basis_; }

  bool member(const Matrix& m) const {
    return m.rows() == spec_.matrix_size && m.cols() == spec_.matrix_size &&
           spec_.membership(m);
  }

  // c^k_{ij} with [E_i, E_j] = sum_k c^k_{ij} E_k
  double structure_constant(int i, int j, int k) const {
    return struct_[static_cast<std::size_t>(k)](i, j);
  }

  Matrix exp_coords(const Vector& coords) const { return spec_.exp(coords); }

  GroupElement identity() const {
    return {shared_from_this(), Matrix::Identity(spec_.matrix_size, spec_.matrix_size)};
  }

  GroupElement element(Matrix m) const {
    if (!member(m)) throw std::invalid_argument("matrix fails the group membership test");
    return {shared_from_this(), std::move(m)};
  }

  GroupPtr handle() const { return shared_from_this(); }

 private:
  explicit MatrixLieGroup(Spec spec) : spec_(std::move(spec)) {
    if (spec_.matrix_size < 1) throw std::invalid_argument("matrix size must be positive");
    if (spec_.algebra_basis.empty()) throw std::invalid_argument("empty algebra basis");
    for (const Matrix& e : spec_.algebra_basis)
      if (e.rows() != spec_.matrix_size || e.cols() != spec_.matrix_size)
        throw std::invalid_argument("algebra basis shape mismatch");
    if (!spec_.membership || !spec_.exp)
      throw std::invalid_argument("group spec requires membership and exp");
    if (!spec_.membership(Matrix::Identity(spec_.matrix_size, spec_.matrix_size)))
      throw std::invalid_argument("identity fails the group membership test");

    basis_ = MatrixBasis(spec_.algebra_basis);
    const int n = basis_.size();
    struct_.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Matrix c = basis_[i] * basis_[j] - basis_[j] * basis_[i];
        double res = 0.0;
        const Vector coords = basis_.coordinates(c, &res);
        if (res > 1e-10 * std::max(1.0, flatten(c).norm()))
          throw std::invalid_argument("algebra basis is not closed under brackets");
        for (int k = 0; k < n; ++k) {
          struct_[static_cast<std::size_t>(k)](i, j) = coords[k];
          struct_[static_cast<std::size_t>(k)](j, i) = -coords[k];
        }
      }
    }
  }

  Spec spec_;
  MatrixBasis basis_;
  std::vector<Matrix> struct_;
};

inline void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a.get() != b.get()) throw std::invalid_argument("group mismatch");
}

inline GroupElement exp_element(const GroupPtr& group, const Vector& coords) {
  if (coords.size() != group->dim()) throw std::invalid_argument("dimension mismatch");
  Matrix m = group->exp_coords(coords);
  if (!group->member(m))
    throw std::runtime_error("exponential left the group; bad group descriptor");
  return {group, std::move(m)};
}

// d(L_g): (z, A) -> (g z, g A)
inline TangentVector left_translate_diff(const GroupElement& g, const TangentVector& v) {
  require_same_group(g.group, v.base.group);
  return {{g.group, g.matrix * v.base.matrix}, g.matrix * v.matrix};
}

// d(R_g): (z, A) -> (z g, A g)
inline TangentVector right_translate_diff(const GroupElement& g, const TangentVector& v) {
  require_same_group(g.group, v.base.group);
  return {{g.group, v.base.matrix * g.matrix}, v.matrix * g.matrix};
}

// d(inv): (z, A) -> (z^{-1}, -z^{-1} A z^{-1})
inline TangentVector inversion_diff(const TangentVector& v) {
  const Matrix zi = v.base.inverse().matrix;
  return {{v.base.group, zi}, -(zi * v.matrix * zi)};
}

// Inversion acts as -id on the algebra, so it pulls a frame back to its negative.
inline std::vector<Matrix> inversion_pullback_frame(const std::vector<Matrix>& basis) {
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (const Matrix& e : basis) out.push_back(-e);
  return out;
}

// Value at z of the invariant vector field generated by algebra element E:
// E z for the right-invariant field, z E for the left-invariant one.
inline TangentVector invariant_field_value(const Matrix& E, const GroupElement& z,
                                           Side side) {
  double res = 0.0;
  z.group->basis().coordinates(E, &res);
  if (res > 1e-9 * std::max(1.0, flatten(E).norm()))
    throw std::invalid_argument("matrix not in algebra span");
  Matrix m = frame_side(side) == Side::right ? Matrix(E * z.matrix) : Matrix(z.matrix * E);
  return {z, std::move(m)};
}

// Coordinates of the algebra element obtained by translating v back to the
// identity: A z^{-1} for side=right, z^{-1} A for side=left.
inline Vector algebra_coordinates(const TangentVector& v, Side side) {
  const Matrix zi = v.base.inverse().matrix;
  const Matrix w =
      frame_side(side) == Side::right ? Matrix(v.matrix * zi) : Matrix(zi * v.matrix);
  double res = 0.0;
  Vector c = v.base.group->basis().coordinates(w, &res);
  if (res > 1e-8 * std::max(1.0, flatten(w).norm()))
    throw std::invalid_argument("vector not tangent to group");
  return c;
}

inline bool is_valid_tangent(const TangentVector& v, double tol = 1e-9) {
  if (!v.base.group->member(v.base.matrix)) return false;
  const Matrix w = v.matrix * v.base.inverse().matrix;
  double res = 0.0;
  v.base.group->basis().coordinates(w, &res);
  return res <= tol * std::max(1.0, flatten(w).norm());
}

// An invariant Finsler metric: F(z, A) = F0(coordinates of the translate of
// (z, A) back to the identity), with the translation picked by `side`.
struct InvariantMetric {
  GroupPtr group;
  MinkowskiNorm norm0;
  Side side = Side::right;
};

inline InvariantMetric make_invariant_metric(GroupPtr group, MinkowskiNorm norm0,
                                             Side side) {
  if (norm0.dim() != group->dim())
    throw std::invalid_argument("norm dimension does not match group dimension");
  return {std::move(group), std::move(norm0), side};
}

inline double metric_eval(const InvariantMetric& f, const TangentVector& v) {
  require_same_group(f.group, v.base.group);
  return evaluate(f.norm0, algebra_coordinates(v, f.side));
}

// Measures how far the metric is from invariance under each translation
// family, over random (z, g, tangent) triples.
struct InvarianceReport {
  int samples = 0;
  double max_left_deviation = 0.0;
  double max_right_deviation = 0.0;
};

inline InvarianceReport verify_bi_invariance(const InvariantMetric& f, int samples,
                                             std::uint64_t seed, int workers = 1) {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  const int n = f.group->dim();

  auto per_sample = [&](InvarianceReport& acc, int, SampleRng& rng) {
    const GroupElement z = exp_element(f.group, rng.uniform_vec(n));
    const GroupElement g = exp_element(f.group, rng.uniform_vec(n));
    const TangentVector v{z, f.group->basis().combine(rng.uniform_vec(n)) * z.matrix};
    const double fv = metric_eval(f, v);
    acc.max_left_deviation = std::max(
        acc.max_left_deviation, rel_deviation(metric_eval(f, left_translate_diff(g, v)), fv));
    acc.max_right_deviation = std::max(
        acc.max_right_deviation,
        rel_deviation(metric_eval(f, right_translate_diff(g, v)), fv));
    acc.samples += 1;
  };

  auto merge = [](InvarianceReport& acc, const InvarianceReport& p) {
    acc.samples += p.samples;
    acc.max_left_deviation = std::max(acc.max_left_deviation, p.max_left_deviation);
    acc.max_right_deviation = std::max(acc.max_right_deviation, p.max_right_deviation);
  };

  return scan_reduce(samples, seed, workers, InvarianceReport{}, per_sample, merge);
}

}  // namespace finq
