#include <gtest/gtest.h>

#include "l0flow/model.hpp"
#include "l0flow/rng.hpp"
#include "oracles.hpp"

using namespace l0flow;

namespace {

Matrix example_A() {
  Matrix A(3, 2);
  A << 1, 3, 3, 2, 1, 5;
  return A;
}

Vector example_b() { return Eigen::Vector3d(2, 1, 3); }

}  // namespace

TEST(QuadraticGradient, ExampleAtOrigin) {
  const Vector g = quadratic_gradient(example_A(), example_b(), Vector::Zero(2));
  EXPECT_DOUBLE_EQ(g(0), -16);
  EXPECT_DOUBLE_EQ(g(1), -46);
}

TEST(QuadraticGradient, ZeroWhenResidualVanishes) {
  Rng rng(3);
  const Matrix A = rng.normal_matrix(5, 4);
  const Vector x = rng.normal_vector(4);
  const Vector b = A * x;
  EXPECT_LT(quadratic_gradient(A, b, x).norm(), 1e-12);
}

TEST(QuadraticGradient, IdentityCase) {
  const Vector g = quadratic_gradient(Matrix::Identity(2, 2), Vector::Zero(2), Eigen::Vector2d(1, 2));
  EXPECT_EQ(g, Eigen::Vector2d(2, 4));
}

TEST(QuadraticGradient, DimensionMismatchIsConfigError) {
  EXPECT_THROW(quadratic_gradient(example_A(), example_b(), Vector::Zero(3)), ConfigError);
  EXPECT_THROW(quadratic_gradient(example_A(), Vector::Zero(2), Vector::Zero(2)), ConfigError);
}

TEST(QuadraticGradient, FloatInstantiation) {
  Eigen::MatrixXf A = example_A().cast<float>();
  Eigen::VectorXf b = example_b().cast<float>();
  Eigen::VectorXf g = quadratic_gradient(A, b, Eigen::VectorXf::Zero(2));
  EXPECT_FLOAT_EQ(g(1), -46.0f);
}

TEST(QuadraticLoss, GradientMatchesFiniteDifferences) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = rng.normal_matrix(6, 4);
    const Vector b = rng.normal_vector(6);
    const QuadraticLoss loss(A, b);
    const Vector x = rng.uniform_in(Vector::Ones(4));
    const Vector fd = oracle::fd_gradient([&](const Vector& z) { return loss.value(z); }, x, 1e-5);
    const Vector g = loss.gradient(x);
    EXPECT_LE((fd - g).norm(), 1e-7 * std::max(1.0, g.norm()));
  }
}

TEST(QuadraticLoss, RejectsMismatchedData) {
  EXPECT_THROW(QuadraticLoss(example_A(), Vector::Zero(2)), ConfigError);
}

TEST(EstimateGradBound, ExampleShortcut) {
  EXPECT_DOUBLE_EQ(estimate_grad_bound(example_A(), example_b(), 5.0), 474.0);
}

TEST(EstimateGradBound, ExampleGeneralBranch) {
  EXPECT_DOUBLE_EQ(estimate_grad_bound(example_A(), example_b(), 5.0, GradBoundBranch::General), 566.0);
}

TEST(EstimateGradBound, ZeroData) {
  EXPECT_DOUBLE_EQ(estimate_grad_bound(Matrix::Zero(3, 2), Vector::Zero(3), 1.0), 0.0);
}

TEST(EstimateGradBound, NonpositiveKIsConfigError) {
  EXPECT_THROW(estimate_grad_bound(example_A(), example_b(), 0.0), ConfigError);
  EXPECT_THROW(estimate_grad_bound(example_A(), example_b(), -1.0), ConfigError);
}

TEST(EstimateGradBound, ShortcutCoversDominantRhs) {
  // Nonnegative data where ||2 A^T b|| exceeds ||C1||: the gradient at 0 is -2 A^T b.
  Matrix A(1, 1);
  A << 1;
  Vector b(1);
  b << 100;
  const double bound = estimate_grad_bound(A, b, 1.0);
  EXPECT_GE(bound, quadratic_gradient(A, b, Vector::Zero(1)).lpNorm<Eigen::Infinity>());
}

TEST(EstimateGradBound, BoundsGradientOnRandomBoxPoints) {
  Rng rng(5);
  for (int inst = 0; inst < 10; ++inst) {
    const Matrix A = rng.normal_matrix(7, 5);
    const Vector b = rng.normal_vector(7) * (inst % 2 == 0 ? 1.0 : 30.0);
    const double k = rng.uniform(0.5, 4.0);
    const Matrix An = A.cwiseAbs();
    const Vector bn = b.cwiseAbs();
    const double general = estimate_grad_bound(A, b, k);
    const double shortcut = estimate_grad_bound(An, bn, k);
    for (int s = 0; s < 100; ++s) {
      const Vector x = rng.uniform_in(Vector::Constant(5, k));
      EXPECT_LE(quadratic_gradient(A, b, x).lpNorm<Eigen::Infinity>(), general * (1 + 1e-12));
      EXPECT_LE(quadratic_gradient(An, bn, x).lpNorm<Eigen::Infinity>(), shortcut * (1 + 1e-12));
    }
  }
}

TEST(SelectMuStar, ExampleValue) {
  EXPECT_NEAR(select_mu_star(5.0, 1.0, 2, 474.0), 0.9 * 2.0 / 948.0, 1e-15);
  EXPECT_NEAR(select_mu_star(5.0, 1.0, 2, 474.0), 0.0018987341772151898, 1e-15);
}

TEST(SelectMuStar, LargeLambdaLimit) {
  EXPECT_NEAR(select_mu_star(1.0, 1e12, 3, 2.0), 0.9, 1e-9);
}

TEST(SelectMuStar, SmallExample) {
  EXPECT_DOUBLE_EQ(select_mu_star(1.0, 1.0, 1, 0.5), 0.9);
}

TEST(SelectMuStar, NonpositiveInputsAreConfigErrors) {
  EXPECT_THROW(select_mu_star(0.0, 1.0, 2, 1.0), ConfigError);
  EXPECT_THROW(select_mu_star(1.0, 0.0, 2, 1.0), ConfigError);
  EXPECT_THROW(select_mu_star(1.0, 1.0, 0, 1.0), ConfigError);
  EXPECT_THROW(select_mu_star(1.0, 1.0, 2, 0.0), ConfigError);
}

TEST(SelectMuStar, AlwaysPassesConditionOnUniformBoxes) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const double k = std::exp(rng.uniform(-3, 3));
    const double lambda = std::exp(rng.uniform(-4, 4));
    const Index n = 1 + static_cast<Index>(rng.below(50));
    const double L = std::exp(rng.uniform(-3, 8));
    const double mu = select_mu_star(k, lambda, n, L);
    EXPECT_NO_THROW(check_mu_star(BoxSet::uniform(n, k), lambda, L, mu));
    EXPECT_DOUBLE_EQ(mu, select_mu_star(BoxSet::uniform(n, k), lambda, L));
  }
}

TEST(SelectMuStar, HeterogeneousBoxUsesTrueBounds) {
  const BoxSet box = BoxSet::one_sided(Eigen::Vector3d(0.001, 5, 0));
  const double mu = select_mu_star(box, 100.0, 1.0);
  EXPECT_DOUBLE_EQ(mu, 0.9 * 0.001);
  EXPECT_NO_THROW(check_mu_star(box, 100.0, 1.0, mu));
  // the common-bound rule with k = 5 ignores the small bound
  EXPECT_THROW(check_mu_star(box, 100.0, 1.0, select_mu_star(5.0, 100.0, 3, 1.0)), ConfigError);
}

TEST(CheckMuStar, NamesViolatedTerm) {
  const BoxSet box = BoxSet::uniform(2, 5.0);
  try {
    check_mu_star(box, 1.0, 474.0, 0.01);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("3*lambda/(2*(v_max+L_f))"), std::string::npos) << e.what();
  }
  try {
    check_mu_star(box, 1.0, 474.0, 0.0025);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("2*lambda/(n*L_f)"), std::string::npos) << e.what();
  }
  try {
    check_mu_star(BoxSet::uniform(2, 0.1), 100.0, 1.0, 0.2);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("v_min"), std::string::npos) << e.what();
  }
}

TEST(ProjectBox, ClampsBothSides) {
  const BoxSet box = BoxSet::uniform(2, 5.0);
  EXPECT_EQ(project_box(Eigen::Vector2d(-1, 6), box), Eigen::Vector2d(0, 5));
}

TEST(ProjectBox, IdentityInsideBox) {
  const BoxSet box = BoxSet::uniform(3, 1.0);
  const Vector x = Eigen::Vector3d(0.2, 0.0, 1.0);
  EXPECT_EQ(project_box(x, box), x);
}

TEST(ProjectBox, ComponentwiseExample) {
  const BoxSet box = BoxSet::uniform(3, 1.0);
  EXPECT_EQ(project_box(Eigen::Vector3d(2.5, -0.1, 0.3), box), Eigen::Vector3d(1, 0, 0.3));
}

TEST(ProjectBox, IdempotentAndNonexpansive) {
  Rng rng(21);
  const Vector lo = -rng.uniform_in(Vector::Ones(5));
  const Vector hi = rng.uniform_in(Vector::Constant(5, 3.0));
  const BoxSet box(lo, hi);
  for (int i = 0; i < 1000; ++i) {
    const Vector u = 4 * rng.normal_vector(5);
    const Vector w = 4 * rng.normal_vector(5);
    const Vector pu = project_box(u, box);
    EXPECT_TRUE(box.contains(pu));
    EXPECT_EQ(project_box(pu, box), pu);
    EXPECT_LE((pu - project_box(w, box)).norm(), (u - w).norm() + 1e-14);
  }
}

TEST(ProjectBox, TemplatedOnScalar) {
  Eigen::VectorXf x(2), lo(2), hi(2);
  x << -1, 2;
  lo << 0, 0;
  hi << 1, 1;
  const Eigen::VectorXf p = project_box(x, lo, hi);
  EXPECT_EQ(p(0), 0.0f);
  EXPECT_EQ(p(1), 1.0f);
  EXPECT_THROW(project_box(Eigen::VectorXf(3), lo, hi), ConfigError);
}

TEST(BoxSet, Accessors) {
  const BoxSet box = BoxSet::one_sided(Eigen::Vector3d(2, 0, 7));
  EXPECT_TRUE(box.is_one_sided());
  EXPECT_DOUBLE_EQ(box.upper_max(), 7);
  EXPECT_DOUBLE_EQ(box.upper_min_nonzero(), 2);
  EXPECT_TRUE(std::isinf(BoxSet::uniform(2, 0.0).upper_min_nonzero()));
}

TEST(BoxSet, RejectsInvalidBounds) {
  EXPECT_THROW(BoxSet(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), ConfigError);
  EXPECT_THROW(BoxSet(Vector::Zero(2), Vector::Ones(3)), ConfigError);
  EXPECT_THROW(BoxSet::one_sided(Eigen::Vector2d(1, -1)), ConfigError);
}

TEST(ProblemSpec, QuadraticFactory) {
  const ProblemSpec spec = ProblemSpec::quadratic(example_A(), example_b(), BoxSet::uniform(2, 5.0), 1.0);
  EXPECT_EQ(spec.dimension(), 2);
  EXPECT_DOUBLE_EQ(spec.grad_bound(), 474);
  ASSERT_NE(spec.quadratic_loss(), nullptr);
  const Vector x = Eigen::Vector2d(0, 23.0 / 38.0);
  EXPECT_NEAR(spec.objective_true(x), spec.loss().value(x) + 1.0, 1e-15);
}

TEST(ProblemSpec, RejectsNonpositiveLambda) {
  EXPECT_THROW(ProblemSpec::quadratic(example_A(), example_b(), BoxSet::uniform(2, 5.0), 0.0), ConfigError);
  EXPECT_THROW(ProblemSpec::quadratic(example_A(), example_b(), BoxSet::uniform(2, 5.0), -1.0), ConfigError);
}

TEST(ProblemSpec, RejectsTooSmallGradBound) {
  auto loss = std::make_shared<QuadraticLoss>(example_A(), example_b());
  EXPECT_THROW(ProblemSpec(loss, BoxSet::uniform(2, 5.0), 1.0, 100.0), ConfigError);
  EXPECT_NO_THROW(ProblemSpec(loss, BoxSet::uniform(2, 5.0), 1.0, 474.0));
}

TEST(ProblemSpec, SampledCheckOnLargeProblems) {
  Rng rng(2);
  const Matrix A = rng.normal_matrix(20, 30);
  const Vector b = rng.normal_vector(20);
  auto loss = std::make_shared<QuadraticLoss>(A, b);
  EXPECT_THROW(ProblemSpec(loss, BoxSet::uniform(30, 1.0), 1.0, 1e-3), ConfigError);
  EXPECT_NO_THROW(ProblemSpec::quadratic(A, b, BoxSet::uniform(30, 1.0), 1.0));
}

TEST(ProblemSpec, RejectsTwoSidedBoxAndDimensionMismatch) {
  auto loss = std::make_shared<QuadraticLoss>(example_A(), example_b());
  EXPECT_THROW(ProblemSpec(loss, BoxSet(Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 1)), 1.0, 1e3),
               ConfigError);
  EXPECT_THROW(ProblemSpec(loss, BoxSet::uniform(3, 1.0), 1.0, 1e3), ConfigError);
}

TEST(Cardinality, CountsAboveTolerance) {
  EXPECT_EQ(cardinality(Eigen::Vector3d(0, 1e-9, 2)), 2);
  EXPECT_EQ(cardinality(Eigen::Vector3d(0, 1e-9, 2), 1e-6), 1);
}
