#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "finq/catalog.hpp"
#include "finq/liegroup.hpp"

using finq::GroupElement;
using finq::GroupPtr;
using finq::InvariantMetric;
using finq::Matrix;
using finq::MinkowskiNorm;
using finq::Side;
using finq::TangentVector;
using finq::Vector;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

std::vector<GroupPtr> all_catalog_groups() {
  return {finq::heisenberg3(), finq::ut3pos(), finq::rn(3), finq::se2()};
}

}  // namespace

TEST(Catalog, GroupShapes) {
  const auto h = finq::heisenberg3();
  EXPECT_EQ(h->name(), "heisenberg3");
  EXPECT_EQ(h->dim(), 3);
  EXPECT_EQ(h->matrix_size(), 3);

  const auto u = finq::ut3pos();
  EXPECT_EQ(u->dim(), 6);
  EXPECT_EQ(u->matrix_size(), 3);

  const auto r = finq::rn(4);
  EXPECT_EQ(r->dim(), 4);
  EXPECT_EQ(r->matrix_size(), 5);

  const auto s = finq::se2();
  EXPECT_EQ(s->dim(), 3);
  EXPECT_EQ(s->matrix_size(), 3);

  EXPECT_THROW(finq::rn(0), std::invalid_argument);
  EXPECT_THROW(finq::make_catalog_group("so17"), std::invalid_argument);
}

TEST(Catalog, IdentityIsAMember) {
  for (const auto& g : all_catalog_groups()) {
    EXPECT_TRUE(g->member(Matrix::Identity(g->matrix_size(), g->matrix_size())))
        << g->name();
  }
}

TEST(StructureConstants, HeisenbergBracketTable) {
  const auto g = finq::heisenberg3();
  // [E1, E2] = E3 and everything else vanishes
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(1, 0, 2), -1.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 1, 0), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 2, 0), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 2, 1), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 2, 2), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(1, 2, 2), 0.0);
}

TEST(StructureConstants, Se2BracketTable) {
  const auto g = finq::se2();
  // [E1, E2] = E3, [E1, E3] = -E2, [E2, E3] = 0
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(0, 2, 1), -1.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(1, 2, 0), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(1, 2, 1), 0.0);
  EXPECT_DOUBLE_EQ(g->structure_constant(1, 2, 2), 0.0);
}

TEST(StructureConstants, ReconstructEveryCommutator) {
  for (const auto& g : all_catalog_groups()) {
    const auto& basis = g->algebra_basis();
    const int n = g->dim();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Matrix direct = basis[i] * basis[j] - basis[j] * basis[i];
        Matrix recon = Matrix::Zero(g->matrix_size(), g->matrix_size());
        for (int k = 0; k < n; ++k) recon += g->structure_constant(i, j, k) * basis[k];
        EXPECT_LT(finq::max_abs(Matrix(direct - recon)), 1e-12)
            << g->name() << " i=" << i << " j=" << j;
      }
    }
  }
}

TEST(Exp, HeisenbergClosedForm) {
  const auto g = finq::heisenberg3();
  const GroupElement z = finq::exp_element(g, vec3(0.7, -1.3, 0.4));
  EXPECT_NEAR(z.matrix(0, 1), 0.7, 1e-14);
  EXPECT_NEAR(z.matrix(1, 2), -1.3, 1e-14);
  // the corner picks up the half commutator term
  EXPECT_NEAR(z.matrix(0, 2), 0.4 + 0.5 * 0.7 * -1.3, 1e-14);
  EXPECT_TRUE(g->member(z.matrix));
}

TEST(Exp, ValuesStayInTheGroup) {
  for (const auto& g : all_catalog_groups()) {
    finq::SampleRng rng(3, 0);
    for (int s = 0; s < 50; ++s) {
      const GroupElement z = finq::exp_element(g, rng.uniform_vec(g->dim()));
      EXPECT_TRUE(g->member(z.matrix)) << g->name();
    }
  }
}

TEST(Exp, InverseOfExpIsExpOfMinus) {
  for (const auto& g : all_catalog_groups()) {
    finq::SampleRng rng(5, 1);
    for (int s = 0; s < 20; ++s) {
      const Vector c = rng.uniform_vec(g->dim());
      const Matrix prod = finq::exp_element(g, c).matrix * finq::exp_element(g, -c).matrix;
      EXPECT_LT(finq::max_abs(Matrix(prod - Matrix::Identity(g->matrix_size(),
                                                             g->matrix_size()))),
                1e-12)
          << g->name();
    }
  }
}

TEST(Exp, ZeroGivesIdentity) {
  for (const auto& g : all_catalog_groups()) {
    const GroupElement z = finq::exp_element(g, Vector::Zero(g->dim()));
    EXPECT_LT(finq::max_abs(Matrix(
                  z.matrix - Matrix::Identity(g->matrix_size(), g->matrix_size()))),
              1e-14);
  }
  EXPECT_THROW(finq::exp_element(finq::se2(), Vector::Zero(2)), std::invalid_argument);
}

TEST(Translations, HeisenbergHandExamples) {
  const auto g = finq::heisenberg3();
  const auto& basis = g->algebra_basis();
  const GroupElement e = g->identity();

  // left translation by exp(E1) of the vector E2 at the identity
  const GroupElement ge = finq::exp_element(g, vec3(1, 0, 0));
  const TangentVector moved = finq::left_translate_diff(ge, {e, basis[1]});
  Matrix expect = basis[1] + basis[2];  // E2 + E1 E2 = E2 + E13
  EXPECT_LT(finq::max_abs(Matrix(moved.matrix - expect)), 1e-14);
  EXPECT_LT(finq::max_abs(Matrix(moved.base.matrix - ge.matrix)), 1e-14);

  // E1 * exp(E3) = E1: the corner direction annihilates it
  const GroupElement gc = finq::exp_element(g, vec3(0, 0, 1));
  const TangentVector right = finq::right_translate_diff(gc, {e, basis[0]});
  EXPECT_LT(finq::max_abs(Matrix(right.matrix - basis[0])), 1e-14);
}

TEST(Translations, InverseTranslationRoundTrip) {
  for (const auto& g : all_catalog_groups()) {
    finq::SampleRng rng(9, 2);
    const GroupElement z = finq::exp_element(g, rng.uniform_vec(g->dim()));
    const GroupElement w = finq::exp_element(g, rng.uniform_vec(g->dim()));
    const TangentVector v{z, g->basis().combine(rng.uniform_vec(g->dim())) * z.matrix};
    const TangentVector back =
        finq::left_translate_diff(w.inverse(), finq::left_translate_diff(w, v));
    EXPECT_LT(finq::max_abs(Matrix(back.matrix - v.matrix)), 1e-12) << g->name();
    EXPECT_LT(finq::max_abs(Matrix(back.base.matrix - v.base.matrix)), 1e-12);
    const TangentVector back_r =
        finq::right_translate_diff(w.inverse(), finq::right_translate_diff(w, v));
    EXPECT_LT(finq::max_abs(Matrix(back_r.matrix - v.matrix)), 1e-12) << g->name();
  }
}

TEST(Translations, GroupMismatchThrows) {
  const auto h = finq::heisenberg3();
  const auto s = finq::se2();
  const TangentVector v{h->identity(), h->algebra_basis()[0]};
  EXPECT_THROW(finq::left_translate_diff(s->identity(), v), std::invalid_argument);
  EXPECT_THROW(finq::right_translate_diff(s->identity(), v), std::invalid_argument);
}

TEST(Inversion, DifferentialBasics) {
  const auto g = finq::se2();
  const GroupElement e = g->identity();
  for (const Matrix& E : g->algebra_basis()) {
    const TangentVector flipped = finq::inversion_diff({e, E});
    EXPECT_LT(finq::max_abs(Matrix(flipped.matrix + E)), 1e-14);
  }

  finq::SampleRng rng(21, 3);
  const GroupElement z = finq::exp_element(g, rng.uniform_vec(3));
  const TangentVector v{z, g->basis().combine(rng.uniform_vec(3)) * z.matrix};
  const TangentVector twice = finq::inversion_diff(finq::inversion_diff(v));
  EXPECT_LT(finq::max_abs(Matrix(twice.matrix - v.matrix)), 1e-12);
  EXPECT_LT(finq::max_abs(Matrix(twice.base.matrix - v.base.matrix)), 1e-12);
  EXPECT_TRUE(finq::is_valid_tangent(finq::inversion_diff(v)));
}

TEST(Inversion, PullbackFrameNegatesBasis) {
  const auto g = finq::heisenberg3();
  const auto frame = finq::inversion_pullback_frame(g->algebra_basis());
  ASSERT_EQ(frame.size(), 3u);
  for (std::size_t i = 0; i < frame.size(); ++i)
    EXPECT_LT(finq::max_abs(Matrix(frame[i] + g->algebra_basis()[i])), 1e-14);
  EXPECT_NO_THROW(finq::MatrixBasis(frame));  // still a basis
}

TEST(InvariantFields, ValueAndLinearity) {
  const auto g = finq::heisenberg3();
  const auto& basis = g->algebra_basis();
  const GroupElement z = finq::exp_element(g, vec3(0.5, -0.25, 1.0));

  const TangentVector right = finq::invariant_field_value(basis[0], z, Side::right);
  EXPECT_LT(finq::max_abs(Matrix(right.matrix - basis[0] * z.matrix)), 1e-14);
  const TangentVector left = finq::invariant_field_value(basis[0], z, Side::left);
  EXPECT_LT(finq::max_abs(Matrix(left.matrix - z.matrix * basis[0])), 1e-14);

  // E3 is central: both invariant fields agree everywhere
  const TangentVector c_r = finq::invariant_field_value(basis[2], z, Side::right);
  const TangentVector c_l = finq::invariant_field_value(basis[2], z, Side::left);
  EXPECT_LT(finq::max_abs(Matrix(c_r.matrix - c_l.matrix)), 1e-14);

  const Matrix combo = 2.0 * basis[0] - 3.0 * basis[1];
  const TangentVector lin = finq::invariant_field_value(combo, z, Side::right);
  const Matrix expect = 2.0 * finq::invariant_field_value(basis[0], z, Side::right).matrix -
                        3.0 * finq::invariant_field_value(basis[1], z, Side::right).matrix;
  EXPECT_LT(finq::max_abs(Matrix(lin.matrix - expect)), 1e-14);

  Matrix lower = Matrix::Zero(3, 3);
  lower(1, 0) = 1.0;
  EXPECT_THROW(finq::invariant_field_value(lower, z, Side::right), std::invalid_argument);
}

TEST(AlgebraCoordinates, RoundTripsAndErrors) {
  const auto g = finq::heisenberg3();
  const auto& basis = g->algebra_basis();
  const GroupElement e = g->identity();

  const Vector got =
      finq::algebra_coordinates({e, 2.0 * basis[0] + 3.0 * basis[1]}, Side::right);
  EXPECT_LT(finq::max_abs(Vector(got - vec3(2, 3, 0))), 1e-12);

  finq::SampleRng rng(33, 4);
  for (int s = 0; s < 20; ++s) {
    const GroupElement z = finq::exp_element(g, rng.uniform_vec(3));
    const Vector c = rng.uniform_vec(3);
    for (Side side : {Side::left, Side::right}) {
      const TangentVector v = finq::invariant_field_value(g->basis().combine(c), z, side);
      EXPECT_LT(finq::max_abs(Vector(finq::algebra_coordinates(v, side) - c)), 1e-12);
    }
  }

  EXPECT_THROW(finq::algebra_coordinates({e, Matrix::Identity(3, 3)}, Side::right),
               std::invalid_argument);
}

TEST(Metric, EvaluatesThroughTheFrame) {
  const auto g = finq::heisenberg3();
  Vector b = Vector::Zero(3);
  b[0] = 0.5;
  const InvariantMetric fr = finq::make_invariant_metric(
      g, MinkowskiNorm::randers(Matrix::Identity(3, 3), b), Side::right);

  // at the identity the metric is the bare norm
  const auto& basis = g->algebra_basis();
  const TangentVector at_e{g->identity(), 2.0 * basis[0] + 3.0 * basis[1]};
  EXPECT_NEAR(finq::metric_eval(fr, at_e), std::sqrt(13.0) + 1.0, 1e-12);

  // right-invariant: moving the same frame vector right leaves the value
  finq::SampleRng rng(41, 5);
  const GroupElement z = finq::exp_element(g, rng.uniform_vec(3));
  const TangentVector at_z{z, (2.0 * basis[0] + 3.0 * basis[1]) * z.matrix};
  EXPECT_NEAR(finq::metric_eval(fr, at_z), std::sqrt(13.0) + 1.0, 1e-12);

  EXPECT_THROW(
      finq::make_invariant_metric(g, MinkowskiNorm::euclidean(Matrix::Identity(2, 2)),
                                  Side::right),
      std::invalid_argument);
}

TEST(Metric, TranslationInvarianceProperty) {
  for (const auto& g : all_catalog_groups()) {
    const InvariantMetric f = finq::make_invariant_metric(
        g, MinkowskiNorm::euclidean(Matrix::Identity(g->dim(), g->dim())), Side::right);
    const auto rep = finq::verify_bi_invariance(f, 200, 7);
    EXPECT_LT(rep.max_right_deviation, 1e-10) << g->name();
  }
  const auto g = finq::se2();
  const InvariantMetric f = finq::make_invariant_metric(
      g, MinkowskiNorm::euclidean(Matrix::Identity(3, 3)), Side::left);
  EXPECT_LT(finq::verify_bi_invariance(f, 200, 7).max_left_deviation, 1e-10);
}

TEST(Metric, AbelianGroupsAreBiInvariant) {
  const auto g = finq::rn(3);
  Vector b = Vector::Zero(3);
  b[2] = 0.4;
  const InvariantMetric f = finq::make_invariant_metric(
      g, MinkowskiNorm::randers(Matrix::Identity(3, 3), b), Side::right);
  const auto rep = finq::verify_bi_invariance(f, 300, 11);
  EXPECT_LT(rep.max_left_deviation, 1e-12);
  EXPECT_LT(rep.max_right_deviation, 1e-12);
}

TEST(Metric, HeisenbergRightMetricFailsLeftInvariance) {
  const auto g = finq::heisenberg3();
  const InvariantMetric f = finq::make_invariant_metric(
      g, MinkowskiNorm::euclidean(Matrix::Identity(3, 3)), Side::right);
  const auto rep = finq::verify_bi_invariance(f, 300, 13);
  EXPECT_LT(rep.max_right_deviation, 1e-10);
  EXPECT_GT(rep.max_left_deviation, 0.1);
}

TEST(Metric, WorkerCountDoesNotChangeInvarianceScan) {
  const auto g = finq::se2();
  const InvariantMetric f = finq::make_invariant_metric(
      g, MinkowskiNorm::quartic(3), Side::right);
  const auto one = finq::verify_bi_invariance(f, 256, 17, 1);
  const auto eight = finq::verify_bi_invariance(f, 256, 17, 8);
  EXPECT_EQ(one.max_left_deviation, eight.max_left_deviation);
  EXPECT_EQ(one.max_right_deviation, eight.max_right_deviation);
}

TEST(Tangency, PreservedByTranslationsAndInversion) {
  for (const auto& g : all_catalog_groups()) {
    finq::SampleRng rng(51, 6);
    const GroupElement z = finq::exp_element(g, rng.uniform_vec(g->dim()));
    const GroupElement w = finq::exp_element(g, rng.uniform_vec(g->dim()));
    const TangentVector v{z, g->basis().combine(rng.uniform_vec(g->dim())) * z.matrix};
    EXPECT_TRUE(finq::is_valid_tangent(v)) << g->name();
    EXPECT_TRUE(finq::is_valid_tangent(finq::left_translate_diff(w, v))) << g->name();
    EXPECT_TRUE(finq::is_valid_tangent(finq::right_translate_diff(w, v))) << g->name();
    EXPECT_TRUE(finq::is_valid_tangent(finq::inversion_diff(v))) << g->name();
  }
}

TEST(GroupSpec, RejectsBadDescriptors) {
  finq::MatrixLieGroup::Spec s;
  s.name = "broken";
  s.matrix_size = 2;
  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  Matrix e10 = Matrix::Zero(2, 2);
  e10(1, 0) = 1.0;
  // sl2-style pair that brackets outside its own span
  s.algebra_basis = {e01, e10};
  s.membership = [](const Matrix&) { return true; };
  s.exp = [](const Vector&) { return Matrix::Identity(2, 2); };
  EXPECT_THROW(finq::MatrixLieGroup::create(s), std::invalid_argument);

  s.algebra_basis = {e01, 2.0 * e01};  // dependent
  EXPECT_THROW(finq::MatrixLieGroup::create(s), std::invalid_argument);
}
