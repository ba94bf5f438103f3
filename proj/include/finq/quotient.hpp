#pragma once

// Splitting the algebra as g = V (+) h, horizontal lifts along the coset
// projection z -> zH, the induced metric on the quotient, and seeded
// verification of its defining identities:
//
//   * representative independence of the induced value,
//   * invariance of the induced metric under the translated actions,
//   * agreement with orthogonal projection in the euclidean case.
//
// Representative independence is checked on several channels at once. The
// value channel alone is blind to a non-normal subgroup: evaluating through
// matched invariant frames gives the same number at every representative by
// construction. What actually distinguishes an ideal is that the true fiber
// directions z * h fall into the frame's vertical slot at every z, and that
// a fiber transport maps frame coordinates identically. Both are measured
// below and folded into the reported deviation.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finq/liegroup.hpp"

namespace finq {

inline Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

// Bracket-closure audit of a subspace: residuals are Frobenius distances
// from a commutator to its least-squares projection onto span(h_basis).
struct IdealReport {
  bool is_subalgebra = false;
  bool is_ideal = false;
  double max_residual = 0.0;  // worst out-of-span residual over [E_i, h_j]
};

inline IdealReport check_ideal(const MatrixLieGroup& group,
                               const std::vector<Matrix>& h_basis) {
  const MatrixBasis hb(h_basis);
  auto out_of_span = [&](const Matrix& m) {
    double res = 0.0;
    hb.coordinates(m, &res);
    return res;
  };
  double sub_res = 0.0;
  for (std::size_t i = 0; i < h_basis.size(); ++i)
    for (std::size_t j = i + 1; j < h_basis.size(); ++j)
      sub_res = std::max(sub_res, out_of_span(commutator(h_basis[i], h_basis[j])));
  double ideal_res = 0.0;
  for (const Matrix& e : group.algebra_basis())
    for (const Matrix& h : h_basis)
      ideal_res = std::max(ideal_res, out_of_span(commutator(e, h)));

  const double tol = 1e-9;
  IdealReport rep;
  rep.is_subalgebra = sub_res <= tol;
  rep.is_ideal = rep.is_subalgebra && ideal_res <= tol;
  rep.max_residual = std::max(sub_res, ideal_res);
  return rep;
}

// A choice of complement V with g = V (+) h. The combined frame orders the
// subgroup directions first: split coordinates are (h part | V part).
class SubgroupSplit {
 public:
  SubgroupSplit() = default;

  SubgroupSplit(GroupPtr group, std::vector<Matrix> h_basis, std::vector<Matrix> v_basis,
                std::function<bool(const Matrix&)> h_membership)
      : group_(std::move(group)),
        h_basis_(std::move(h_basis)),
        v_basis_(std::move(v_basis)),
        h_membership_(std::move(h_membership)) {
    const int n = group_->dim();
    const int k = static_cast<int>(h_basis_.size());
    if (k < 1 || k >= n)
      throw std::invalid_argument("subgroup basis must be a proper nonzero subspace");
    if (static_cast<int>(v_basis_.size()) != n - k)
      throw std::invalid_argument("complement dimension must be group dim minus subgroup dim");
    if (!h_membership_) throw std::invalid_argument("subgroup requires a membership test");

    h_coords_.resize(n, k);
    v_coords_.resize(n, n - k);
    auto span_coords = [&](const Matrix& e) {
      double res = 0.0;
      Vector c = group_->basis().coordinates(e, &res);
      if (res > 1e-9 * std::max(1.0, flatten(e).norm()))
        throw std::invalid_argument("matrix not in algebra span");
      return c;
    };
    for (int i = 0; i < k; ++i) h_coords_.col(i) = span_coords(h_basis_[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n - k; ++i) v_coords_.col(i) = span_coords(v_basis_[static_cast<std::size_t>(i)]);

    std::vector<Matrix> combined = h_basis_;
    combined.insert(combined.end(), v_basis_.begin(), v_basis_.end());
    frame_ = MatrixBasis(std::move(combined));  // throws if V does not complete h

    const IdealReport rep = check_ideal(*group_, h_basis_);
    is_subalgebra_ = rep.is_subalgebra;
    is_ideal_ = rep.is_ideal;
    ideal_residual_ = rep.max_residual;
  }

  const GroupPtr& group() const { return group_; }
  int n() const { return group_->dim(); }
  int k() const { return static_cast<int>(h_basis_.size()); }
  const std::vector<Matrix>& h_basis() const { return h_basis_; }
  const std::vector<Matrix>& v_basis() const { return v_basis_; }
  const MatrixBasis& frame() const { return frame_; }
  const Matrix& h_coords() const { return h_coords_; }  // n x k, group-basis coords
  const Matrix& v_coords() const { return v_coords_; }  // n x (n-k)
  bool h_member(const Matrix& m) const { return h_membership_(m); }
  bool is_subalgebra() const { return is_subalgebra_; }
  bool is_ideal() const { return is_ideal_; }
  double ideal_residual() const { return ideal_residual_; }

 private:
  GroupPtr group_;
  std::vector<Matrix> h_basis_;
  std::vector<Matrix> v_basis_;
  std::function<bool(const Matrix&)> h_membership_;
  MatrixBasis frame_;
  Matrix h_coords_;
  Matrix v_coords_;
  bool is_subalgebra_ = false;
  bool is_ideal_ = false;
  double ideal_residual_ = 0.0;
};

// Completes h to a splitting by the orthogonal complement under `form`
// (an SPD matrix on algebra coordinates). Greedy over the coordinate
// directions, so axis-aligned subgroups get axis-aligned complements.
inline SubgroupSplit make_orthogonal_split(GroupPtr group, std::vector<Matrix> h_basis,
                                           std::function<bool(const Matrix&)> h_membership,
                                           const Matrix& form) {
  const int n = group->dim();
  const int k = static_cast<int>(h_basis.size());
  if (form.rows() != n || form.cols() != n) throw std::invalid_argument("dimension mismatch");

  Matrix hc(n, k);
  for (int i = 0; i < k; ++i) {
    double res = 0.0;
    hc.col(i) = group->basis().coordinates(h_basis[static_cast<std::size_t>(i)], &res);
    if (res > 1e-9 * std::max(1.0, flatten(h_basis[static_cast<std::size_t>(i)]).norm()))
      throw std::invalid_argument("matrix not in algebra span");
  }
  const Matrix gram = hc.transpose() * form * hc;
  const Eigen::LLT<Matrix> gram_llt(gram);
  auto project_out_h = [&](const Vector& e) {
    return Vector(e - hc * gram_llt.solve(hc.transpose() * (form * e)));
  };

  std::vector<Vector> v_cols;
  std::vector<Vector> v_unit;  // form-orthonormalized copies, for independence tests
  for (int j = 0; j < n && static_cast<int>(v_cols.size()) < n - k; ++j) {
    const Vector r = project_out_h(Vector(Vector::Unit(n, j)));
    Vector q = r;
    for (const Vector& u : v_unit) q -= u * (u.dot(form * q));
    const double qn = std::sqrt(std::max(0.0, q.dot(form * q)));
    if (qn <= 1e-8) continue;  // direction already covered
    v_cols.push_back(r);
    v_unit.push_back(q / qn);
  }
  if (static_cast<int>(v_cols.size()) != n - k)
    throw std::invalid_argument("complement does not split the algebra");

  std::vector<Matrix> v_basis;
  v_basis.reserve(v_cols.size());
  for (const Vector& c : v_cols) v_basis.push_back(group->basis().combine(c));
  return SubgroupSplit(std::move(group), std::move(h_basis), std::move(v_basis),
                       std::move(h_membership));
}

// A tangent vector of the quotient, carried by an upstairs representative:
// coordinates mu with respect to the projected V-frame at `representative`.
struct QuotientTangent {
  GroupElement representative;
  Vector mu;
  Side side = Side::right;  // frame convention used to read the coordinates
};

struct TangentSplit {
  TangentVector vertical;
  TangentVector horizontal;
  Vector mu;      // V-frame coordinates
  Vector coords;  // full split coordinates (h part | V part)
};

// Full split-frame coordinates of v after translating back to the identity.
inline Vector split_coordinates(const SubgroupSplit& s, const TangentVector& v, Side side) {
  require_same_group(s.group(), v.base.group);
  const Matrix zi = v.base.inverse().matrix;
  const Matrix w =
      frame_side(side) == Side::right ? Matrix(v.matrix * zi) : Matrix(zi * v.matrix);
  double res = 0.0;
  Vector c = s.frame().coordinates(w, &res);
  if (res > 1e-8 * std::max(1.0, flatten(w).norm()))
    throw std::invalid_argument("vector not tangent to group");
  return c;
}

inline std::vector<TangentVector> horizontal_space_frame(const SubgroupSplit& s,
                                                         const GroupElement& z, Side side) {
  require_same_group(s.group(), z.group);
  std::vector<TangentVector> out;
  out.reserve(s.v_basis().size());
  for (const Matrix& e : s.v_basis()) out.push_back(invariant_field_value(e, z, side));
  return out;
}

inline TangentSplit split_tangent(const SubgroupSplit& s, const TangentVector& v, Side side) {
  const Vector c = split_coordinates(s, v, side);
  const int k = s.k();
  const int nk = s.n() - k;
  Matrix hw = Matrix::Zero(s.group()->matrix_size(), s.group()->matrix_size());
  Matrix vw = hw;
  for (int i = 0; i < k; ++i) hw += c[i] * s.h_basis()[static_cast<std::size_t>(i)];
  for (int i = 0; i < nk; ++i) vw += c[k + i] * s.v_basis()[static_cast<std::size_t>(i)];
  const bool right = frame_side(side) == Side::right;
  TangentSplit out;
  out.vertical = {v.base, right ? Matrix(hw * v.base.matrix) : Matrix(v.base.matrix * hw)};
  out.horizontal = {v.base, right ? Matrix(vw * v.base.matrix) : Matrix(v.base.matrix * vw)};
  out.mu = c.tail(nk);
  out.coords = c;
  return out;
}

inline QuotientTangent project_tangent(const SubgroupSplit& s, const TangentVector& v,
                                       Side side) {
  Vector c = split_coordinates(s, v, side);
  return {v.base, Vector(c.tail(s.n() - s.k())), frame_side(side)};
}

// The horizontal representative of mu at q.representative.
inline TangentVector lift(const SubgroupSplit& s, const QuotientTangent& q) {
  require_same_group(s.group(), q.representative.group);
  const int nk = s.n() - s.k();
  if (q.mu.size() != nk) throw std::invalid_argument("dimension mismatch");
  Matrix w = Matrix::Zero(s.group()->matrix_size(), s.group()->matrix_size());
  for (int i = 0; i < nk; ++i) w += q.mu[i] * s.v_basis()[static_cast<std::size_t>(i)];
  const Matrix m = frame_side(q.side) == Side::right ? Matrix(w * q.representative.matrix)
                                                     : Matrix(q.representative.matrix * w);
  return {q.representative, m};
}

// Moves the carrier along the fiber: z -> z h, coordinates unchanged.
inline QuotientTangent transport_representative(const SubgroupSplit& s,
                                                const QuotientTangent& q,
                                                const GroupElement& h) {
  require_same_group(s.group(), h.group);
  if (!s.h_member(h.matrix))
    throw std::invalid_argument("representative change must stay in the coset");
  return {{q.representative.group, q.representative.matrix * h.matrix}, q.mu, q.side};
}

struct InducedMetric {
  InvariantMetric upstairs;
  SubgroupSplit split;
};

inline InducedMetric make_induced_metric(InvariantMetric upstairs, SubgroupSplit split) {
  require_same_group(upstairs.group, split.group());
  if (!split.is_ideal())
    throw std::invalid_argument("subgroup algebra must be an ideal to induce a quotient metric");
  return {std::move(upstairs), std::move(split)};
}

inline double induced_eval(const InducedMetric& im, const QuotientTangent& q) {
  if (frame_side(q.side) != frame_side(im.upstairs.side))
    throw std::invalid_argument("quotient tangent frame side does not match the metric side");
  return metric_eval(im.upstairs, lift(im.split, q));
}

// ---------------------------------------------------------------------------
// Seeded verification

struct WorstCase {
  Vector z_coords;
  Vector h_coords;
  Vector g_coords;
  Vector mu;
  double deviation = 0.0;
};

struct DeviationReport {
  int samples = 0;
  double max_deviation = 0.0;
  std::optional<WorstCase> worst;
};

namespace detail {

template <class Draw, class Deviation>
DeviationReport deviation_scan(int samples, std::uint64_t seed, int workers, Draw draw,
                               Deviation deviation) {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  auto per_sample = [&](DeviationScan& acc, int i, SampleRng& rng) {
    acc.offer(deviation(draw(rng)), i);
  };
  auto merge = [](DeviationScan& acc, const DeviationScan& p) { acc.merge(p); };
  const DeviationScan scan =
      scan_reduce(samples, seed, workers, DeviationScan{}, per_sample, merge);

  DeviationReport rep;
  rep.samples = samples;
  rep.max_deviation = scan.max_deviation;
  if (scan.worst_index >= 0) {
    // regenerate the worst draw from its own stream
    SampleRng rng(seed, static_cast<std::uint64_t>(scan.worst_index));
    WorstCase w = draw(rng);
    w.deviation = scan.max_deviation;
    rep.worst = std::move(w);
  }
  return rep;
}

inline GroupElement subgroup_element(const SubgroupSplit& s, const Vector& h_weights) {
  // exp of an element of the subalgebra, reached through group coordinates
  const Vector c = s.h_coords() * h_weights;
  return exp_element(s.group(), c);
}

}  // namespace detail

// Representative independence of the induced value. Per sample, with
// z2 = z1 h for a random subgroup element h and random coordinates mu:
//
//   value    |F(lift at z1)| vs |F(lift at z2)|, same mu;
//   frames   projections of the V-frame fields agree at z1 and z2;
//   fiber    transporting the lift at z2 back by h keeps coordinates mu
//            and keeps the value;
//   kernel   the true fiber directions z1 * h_j project to mu = 0.
//
// All deviations fold into one maximum. For an ideal every channel sits at
// rounding level; for a non-normal subgroup the kernel and fiber channels
// fail at order one.
inline DeviationReport verify_well_defined(const InvariantMetric& f, const SubgroupSplit& s,
                                           int samples, std::uint64_t seed, int workers = 1) {
  require_same_group(f.group, s.group());
  if (f.norm0.dim() != s.n())
    throw std::invalid_argument("norm dimension does not match group dimension");
  const Side fs = frame_side(f.side);
  const int n = s.n();
  const int k = s.k();

  auto draw = [n, k](SampleRng& rng) {
    WorstCase w;
    w.z_coords = rng.uniform_vec(n);
    w.h_coords = rng.uniform_vec(k);
    w.mu = rng.uniform_vec(n - k);
    return w;
  };

  auto deviation = [&, fs, n, k](const WorstCase& in) {
    const GroupElement z1 = exp_element(f.group, in.z_coords);
    const GroupElement h = detail::subgroup_element(s, in.h_coords);
    const GroupElement z2{f.group, Matrix(z1.matrix * h.matrix)};

    const QuotientTangent q1{z1, in.mu, fs};
    const QuotientTangent q2{z2, in.mu, fs};
    const TangentVector l1 = lift(s, q1);
    const TangentVector l2 = lift(s, q2);
    const double f1 = metric_eval(f, l1);
    const double f2 = metric_eval(f, l2);
    double dev = rel_deviation(f1, f2);

    // same quotient vector carried back to z1 along the fiber
    const Matrix hinv = h.inverse().matrix;
    const TangentVector back{z1, Matrix(l2.matrix * hinv)};
    const Vector lam = Vector(split_coordinates(s, back, fs).tail(n - k));
    dev = std::max(dev, max_abs(Vector(lam - in.mu)) / std::max(1.0, max_abs(in.mu)));
    dev = std::max(dev, rel_deviation(metric_eval(f, lift(s, {z1, lam, fs})), f2));

    // projected V-frame coordinates must not depend on the representative
    for (int i = 0; i < n - k; ++i) {
      const Matrix& e = s.v_basis()[static_cast<std::size_t>(i)];
      const Vector m1 =
          Vector(split_coordinates(s, invariant_field_value(e, z1, fs), fs).tail(n - k));
      const Vector m2 =
          Vector(split_coordinates(s, invariant_field_value(e, z2, fs), fs).tail(n - k));
      dev = std::max(dev, max_abs(Vector(m1 - m2)));
    }

    // true fiber directions must be invisible downstairs
    for (int j = 0; j < k; ++j) {
      const TangentVector u{z1, Matrix(z1.matrix * s.h_basis()[static_cast<std::size_t>(j)])};
      const Vector c = split_coordinates(s, u, fs);
      dev = std::max(dev, max_abs(Vector(c.tail(n - k))) / std::max(1.0, max_abs(c)));
    }
    return dev;
  };

  return detail::deviation_scan(samples, seed, workers, draw, deviation);
}

// Invariance of the induced value under the quotient action inherited from
// left or right translation by random group elements.
inline DeviationReport verify_induced_invariance(const InvariantMetric& f,
                                                 const SubgroupSplit& s, Side action,
                                                 int samples, std::uint64_t seed,
                                                 int workers = 1) {
  require_same_group(f.group, s.group());
  if (action == Side::bi) throw std::invalid_argument("action side must be left or right");
  const Side fs = frame_side(f.side);
  const int n = s.n();

  auto draw = [n, k = s.k()](SampleRng& rng) {
    WorstCase w;
    w.z_coords = rng.uniform_vec(n);
    w.g_coords = rng.uniform_vec(n);
    w.mu = rng.uniform_vec(n - k);
    return w;
  };

  auto deviation = [&, fs, action](const WorstCase& in) {
    const GroupElement z = exp_element(f.group, in.z_coords);
    const GroupElement g = exp_element(f.group, in.g_coords);
    const QuotientTangent q{z, in.mu, fs};
    const TangentVector l = lift(s, q);
    const TangentVector moved =
        action == Side::right ? right_translate_diff(g, l) : left_translate_diff(g, l);
    const QuotientTangent q2 = project_tangent(s, moved, fs);
    return rel_deviation(metric_eval(f, lift(s, q2)), metric_eval(f, l));
  };

  return detail::deviation_scan(samples, seed, workers, draw, deviation);
}

// In the euclidean case the induced norm of a projected tangent must equal
// the `a`-length of the a-orthogonal projection of its algebra value along
// the subalgebra. The right side is the machinery; the oracle is direct
// linear algebra on coordinates.
inline DeviationReport verify_riemannian_compatibility(const SubgroupSplit& s,
                                                       const Matrix& a, int samples,
                                                       std::uint64_t seed, int workers = 1) {
  const int n = s.n();
  const int k = s.k();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("dimension mismatch");
  const Matrix ortho = s.v_coords().transpose() * a * s.h_coords();
  if (max_abs(ortho) > 1e-10 * std::max(1.0, max_abs(a)))
    throw std::invalid_argument("complement is not orthogonal");

  const InvariantMetric f =
      make_invariant_metric(s.group(), MinkowskiNorm::euclidean(a), Side::right);
  const Eigen::LLT<Matrix> gram_llt(Matrix(s.h_coords().transpose() * a * s.h_coords()));
  const Matrix projector =
      Matrix::Identity(n, n) -
      s.h_coords() * gram_llt.solve(Matrix(s.h_coords().transpose() * a));

  auto draw = [n](SampleRng& rng) {
    WorstCase w;
    w.z_coords = rng.uniform_vec(n);
    w.mu = rng.uniform_vec(n);  // full split coordinates of the sampled tangent
    return w;
  };

  auto deviation = [&, n, k](const WorstCase& in) {
    const GroupElement z = exp_element(s.group(), in.z_coords);
    Matrix wm = Matrix::Zero(s.group()->matrix_size(), s.group()->matrix_size());
    for (int i = 0; i < k; ++i) wm += in.mu[i] * s.h_basis()[static_cast<std::size_t>(i)];
    for (int i = k; i < n; ++i) wm += in.mu[i] * s.v_basis()[static_cast<std::size_t>(i - k)];
    const TangentVector v{z, Matrix(wm * z.matrix)};

    const QuotientTangent q = project_tangent(s, v, Side::right);
    const double val = metric_eval(f, lift(s, q));

    const Vector w = s.group()->basis().coordinates(wm);
    const Vector wp = projector * w;
    const double oracle = std::sqrt(std::max(0.0, wp.dot(a * wp)));
    return rel_deviation(val, oracle);
  };

  return detail::deviation_scan(samples, seed, workers, draw, deviation);
}

}  // namespace finq
