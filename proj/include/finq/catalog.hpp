#pragma once

// Built-in group catalog. Every group is a set of m x m matrices with an
// explicit algebra basis; subgroups are named subsets with a distinguished
// sub-basis and a structural membership test.
//
//   heisenberg3  3x3 unipotent upper-triangular, n = 3
//   ut3pos       3x3 upper-triangular with positive diagonal, n = 6
//   rn           R^n realized as (n+1)x(n+1) translation matrices
//   se2          planar rigid motions, n = 3

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "finq/liegroup.hpp"

namespace finq {

namespace detail {

inline Matrix unit_entry(int m, int r, int c) {
  Matrix e = Matrix::Zero(m, m);
  e(r, c) = 1.0;
  return e;
}

}  // namespace detail

inline GroupPtr heisenberg3() {
  const Matrix e12 = detail::unit_entry(3, 0, 1);
  const Matrix e23 = detail::unit_entry(3, 1, 2);
  const Matrix e13 = detail::unit_entry(3, 0, 2);
  MatrixLieGroup::Spec s;
  s.name = "heisenberg3";
  s.matrix_size = 3;
  s.algebra_basis = {e12, e23, e13};
  s.membership = [](const Matrix& m) {
    const double tol = 1e-9;
    for (int i = 0; i < 3; ++i)
      if (std::abs(m(i, i) - 1.0) > tol) return false;
    return std::abs(m(1, 0)) <= tol && std::abs(m(2, 0)) <= tol && std::abs(m(2, 1)) <= tol;
  };
  s.exp = [e12, e23, e13](const Vector& c) {
    const Matrix a = c[0] * e12 + c[1] * e23 + c[2] * e13;
    // strictly upper-triangular, so a^3 = 0 and the series terminates
    return Matrix(Matrix::Identity(3, 3) + a + 0.5 * a * a);
  };
  return MatrixLieGroup::create(std::move(s));
}

inline GroupPtr ut3pos() {
  MatrixLieGroup::Spec s;
  s.name = "ut3pos";
  s.matrix_size = 3;
  s.algebra_basis = {detail::unit_entry(3, 0, 1), detail::unit_entry(3, 0, 2),
                     detail::unit_entry(3, 1, 2), detail::unit_entry(3, 0, 0),
                     detail::unit_entry(3, 1, 1), detail::unit_entry(3, 2, 2)};
  s.membership = [](const Matrix& m) {
    const double tol = 1e-9;
    if (std::abs(m(1, 0)) > tol || std::abs(m(2, 0)) > tol || std::abs(m(2, 1)) > tol)
      return false;
    return m(0, 0) > tol && m(1, 1) > tol && m(2, 2) > tol;
  };
  const MatrixBasis basis(s.algebra_basis);
  s.exp = [basis](const Vector& c) { return Matrix(basis.combine(c).exp()); };
  return MatrixLieGroup::create(std::move(s));
}

inline GroupPtr rn(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("rn dimension out of range");
  const int m = n + 1;
  MatrixLieGroup::Spec s;
  s.name = "rn";
  s.matrix_size = m;
  for (int i = 0; i < n; ++i) s.algebra_basis.push_back(detail::unit_entry(m, i, n));
  s.membership = [n, m](const Matrix& mat) {
    const double tol = 1e-9;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (j == n && i < n) continue;  // free translation entries
        const double want = i == j ? 1.0 : 0.0;
        if (std::abs(mat(i, j) - want) > tol) return false;
      }
    return true;
  };
  s.exp = [n, m](const Vector& c) {
    Matrix out = Matrix::Identity(m, m);
    for (int i = 0; i < n; ++i) out(i, n) = c[i];
    return out;
  };
  return MatrixLieGroup::create(std::move(s));
}

inline GroupPtr se2() {
  Matrix rot = Matrix::Zero(3, 3);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  MatrixLieGroup::Spec s;
  s.name = "se2";
  s.matrix_size = 3;
  s.algebra_basis = {rot, detail::unit_entry(3, 0, 2), detail::unit_entry(3, 1, 2)};
  s.membership = [](const Matrix& m) {
    const double tol = 1e-9;
    if (std::abs(m(2, 0)) > tol || std::abs(m(2, 1)) > tol || std::abs(m(2, 2) - 1.0) > tol)
      return false;
    const Matrix r = m.topLeftCorner(2, 2);
    if (max_abs(Matrix(r.transpose() * r - Matrix::Identity(2, 2))) > tol) return false;
    return r.determinant() > 0.0;
  };
  const MatrixBasis basis(s.algebra_basis);
  s.exp = [basis](const Vector& c) { return Matrix(basis.combine(c).exp()); };
  return MatrixLieGroup::create(std::move(s));
}

inline std::vector<std::string> catalog_group_names() {
  return {"heisenberg3", "ut3pos", "rn", "se2"};
}

inline GroupPtr make_catalog_group(const std::string& name, int rn_dim = 3) {
  if (name == "heisenberg3") return heisenberg3();
  if (name == "ut3pos") return ut3pos();
  if (name == "rn") return rn(rn_dim);
  if (name == "se2") return se2();
  throw std::invalid_argument("unknown group '" + name + "'");
}

// A named subgroup: indices select the sub-basis of the algebra basis, and
// membership identifies the subgroup's elements structurally.
struct SubgroupDef {
  std::string name;
  std::vector<int> basis_indices;
  std::function<bool(const Matrix&)> membership;
};

inline std::vector<SubgroupDef> named_subgroups(const GroupPtr& g) {
  const double tol = 1e-9;
  const std::string& name = g->name();
  if (name == "heisenberg3") {
    auto member = [g, tol](const Matrix& m) {
      return g->member(m) && std::abs(m(0, 1)) <= tol && std::abs(m(1, 2)) <= tol;
    };
    return {{"center", {2}, member}};
  }
  if (name == "ut3pos") {
    auto member = [g, tol](const Matrix& m) {
      return g->member(m) && std::abs(m(0, 0) - 1.0) <= tol &&
             std::abs(m(1, 1) - 1.0) <= tol && std::abs(m(2, 2) - 1.0) <= tol;
    };
    return {{"unipotent", {0, 1, 2}, member}};
  }
  if (name == "rn") {
    const int n = g->dim();
    auto member = [g, n, tol](const Matrix& m) {
      if (!g->member(m)) return false;
      for (int i = 1; i < n; ++i)
        if (std::abs(m(i, n)) > tol) return false;
      return true;
    };
    return {{"first-axis", {0}, member}};
  }
  if (name == "se2") {
    auto translations = [g, tol](const Matrix& m) {
      return g->member(m) &&
             max_abs(Matrix(m.topLeftCorner(2, 2) - Matrix::Identity(2, 2))) <= tol;
    };
    auto rotations = [g, tol](const Matrix& m) {
      return g->member(m) && std::abs(m(0, 2)) <= tol && std::abs(m(1, 2)) <= tol;
    };
    return {{"translations", {1, 2}, translations}, {"rotations", {0}, rotations}};
  }
  return {};
}

// Membership test for a subgroup given only by an algebra sub-basis: an
// element belongs iff its logarithm stays inside the spanned subalgebra.
// Adequate for the catalog groups, whose exp is onto the components we sample.
inline std::function<bool(const Matrix&)> span_membership(GroupPtr g,
                                                          std::vector<Matrix> h_basis) {
  auto hb = std::make_shared<MatrixBasis>(std::move(h_basis));
  return [g = std::move(g), hb](const Matrix& m) {
    if (!g->member(m)) return false;
    const Matrix lg = m.log();
    double res = 0.0;
    hb->coordinates(lg, &res);
    return res <= 1e-9 * std::max(1.0, flatten(lg).norm());
  };
}

}  // namespace finq
