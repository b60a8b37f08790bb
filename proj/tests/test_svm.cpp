#include "fsvm/svm.hpp"

#include "fsvm/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fsvm;

namespace {

// z = +1 labeled +1, z = -1 labeled -1, C = 1. Stationarity in the violated
// region gives w = 2C/(1+2C) = 2/3 with w0 = 0 by symmetry, and objective
// (1/2)(2/3)^2 + (1/3)^2 = 1/3.
SvmProblem two_point_problem() {
  Matrix design(2, 1);
  design << 1.0, -1.0;
  IntVector labels(2);
  labels << 1, -1;
  return SvmProblem{design, LabelSequence::binary(labels), 1.0};
}

SvmProblem random_problem(Rng& rng, Index n, Index p, double c) {
  return SvmProblem{oracles::random_matrix(rng, n, p),
                    LabelSequence::binary(oracles::random_signs(rng, n)), c};
}

double oracle_objective(const SvmProblem& problem, const std::vector<double>& params) {
  LinearModel model;
  model.weights.resize(problem.design.cols());
  for (Index k = 0; k < problem.design.cols(); ++k)
    model.weights[k] = params[static_cast<std::size_t>(k)];
  model.bias = params.back();
  return squared_hinge_objective(problem, model);
}

}  // namespace

TEST_CASE("two-point instance solves the scalar stationarity condition") {
  const SvmProblem problem = two_point_problem();
  const SvmSolution sol = train_l2svm(problem);

  CHECK(sol.converged);
  CHECK(sol.model.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(std::abs(sol.model.bias) <= 1e-8);
  CHECK(sol.objective_value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  // Independent check: dense grid refinement over (w, w0).
  const auto oracle = oracles::grid_refine_minimize(
      [&](const std::vector<double>& p) { return oracle_objective(problem, p); }, 2, 3.0,
      1e-4);
  CHECK(sol.objective_value == doctest::Approx(oracle.value).epsilon(1e-6));
}

TEST_CASE("label symmetry mirrors the solution") {
  Rng rng(21, "svm");
  const SvmProblem problem = random_problem(rng, 30, 3, 2.0);
  const SvmSolution a = train_l2svm(problem);

  IntVector flipped(problem.targets.size());
  for (Index i = 0; i < flipped.size(); ++i) flipped[i] = -problem.targets.labels[i];

  SUBCASE("negating the labels negates w and w0") {
    SvmProblem negated = problem;
    negated.targets = LabelSequence::binary(flipped);
    const SvmSolution b = train_l2svm(negated);
    CHECK((a.model.weights + b.model.weights).norm() <= 1e-10);
    CHECK(std::abs(a.model.bias + b.model.bias) <= 1e-10);
    CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-12));
  }
  SUBCASE("negating labels and data keeps w and negates w0") {
    // Margins satisfy (-y)((-z).w + w0') = y(z.w - w0'), so the optimum maps
    // to (w, -w0), with the objective unchanged.
    SvmProblem negated = problem;
    negated.design = -problem.design;
    negated.targets = LabelSequence::binary(flipped);
    const SvmSolution b = train_l2svm(negated);
    CHECK((a.model.weights - b.model.weights).norm() <= 1e-10);
    CHECK(std::abs(a.model.bias + b.model.bias) <= 1e-10);
    CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-12));
  }
}

TEST_CASE("vanishing C shrinks the weights to zero") {
  Rng rng(22, "svm");
  const SvmProblem problem = random_problem(rng, 40, 2, 1e-12);
  const SvmSolution sol = train_l2svm(problem);
  CHECK(sol.model.weights.norm() <= 1e-6);
}

TEST_CASE("decision_values") {
  Rng rng(23, "svm");
  const Matrix design = oracles::random_matrix(rng, 15, 4);

  SUBCASE("zero weights give the constant bias") {
    LinearModel m{Vector::Zero(4), 2.5};
    const Vector scores = decision_values(m, design);
    for (Index i = 0; i < scores.size(); ++i) CHECK(scores[i] == 2.5);
  }
  SUBCASE("a single unit weight picks out the feature column") {
    LinearModel m{Vector::Zero(4), 0.0};
    m.weights[2] = 1.0;
    const Vector scores = decision_values(m, design);
    for (Index i = 0; i < scores.size(); ++i) CHECK(scores[i] == design(i, 2));
  }
  SUBCASE("matches the naive double loop") {
    LinearModel m{Vector(4), -0.7};
    for (Index k = 0; k < 4; ++k) m.weights[k] = rng.normal();
    const Vector got = decision_values(m, design);
    const Vector want = oracles::naive_decision_values(m.weights, m.bias, design);
    for (Index i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch throws") {
    LinearModel m{Vector::Zero(3), 0.0};
    CHECK_THROWS_AS((void)decision_values(m, design), std::invalid_argument);
  }
}

TEST_CASE("squared_hinge_objective closed forms") {
  SUBCASE("all margins at least one leaves only the regularizer") {
    Matrix design(2, 1);
    design << 5.0, -5.0;
    IntVector labels(2);
    labels << 1, -1;
    SvmProblem problem{design, LabelSequence::binary(labels), 3.0};
    LinearModel m{Vector::Ones(1), 0.0};  // margins are 5
    CHECK(squared_hinge_objective(problem, m) == 0.5);
  }
  SUBCASE("zero model costs C*N/2") {
    Rng rng(24, "svm");
    const SvmProblem problem = random_problem(rng, 17, 3, 2.0);
    LinearModel m{Vector::Zero(3), 0.0};
    CHECK(squared_hinge_objective(problem, m) ==
          doctest::Approx(2.0 * 17.0 / 2.0).epsilon(1e-14));
  }
  SUBCASE("two-point optimum evaluates to 1/3") {
    LinearModel m{Vector::Constant(1, 2.0 / 3.0), 0.0};
    CHECK(squared_hinge_objective(two_point_problem(), m) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("solution is a stationary point of the objective") {
  Rng rng(25, "svm");
  int checked = 0;
  for (std::uint64_t attempt = 0; attempt < 20 && checked < 4; ++attempt) {
    const SvmProblem problem = random_problem(rng, 25, 3, 1.5);
    const SvmSolution sol = train_l2svm(problem);
    REQUIRE(sol.converged);

    // Margins exactly at the hinge would contaminate the finite differences;
    // resample those instances.
    const Vector scores = decision_values(sol.model, problem.design);
    bool near_kink = false;
    for (Index i = 0; i < scores.size(); ++i) {
      if (std::abs(1.0 - problem.targets.labels[i] * scores[i]) < 1e-5) near_kink = true;
    }
    if (near_kink) continue;
    ++checked;

    Vector at(problem.design.cols() + 1);
    at.head(problem.design.cols()) = sol.model.weights;
    at[problem.design.cols()] = sol.model.bias;
    const Vector grad = oracles::numerical_gradient(
        [&](const Vector& p) {
          LinearModel m{p.head(problem.design.cols()), p[problem.design.cols()]};
          return squared_hinge_objective(problem, m);
        },
        at, 1e-6);
    CHECK(grad.norm() <= 10.0 * 1e-8);
  }
  CHECK(checked >= 4);
}

TEST_CASE("objective matches the grid-refinement oracle on tiny instances") {
  Rng rng(26, "svm");
  for (int t = 0; t < 3; ++t) {
    const Index n = 8 + 4 * t;
    const Index p = 1 + t;
    const SvmProblem problem = random_problem(rng, n, p, 1.0);
    const SvmSolution sol = train_l2svm(problem);
    const double bound = std::sqrt(problem.cost_c * static_cast<double>(n)) + 1.0;
    const auto oracle = oracles::grid_refine_minimize(
        [&](const std::vector<double>& params) { return oracle_objective(problem, params); },
        static_cast<int>(p + 1), bound, 1e-4);
    CHECK(sol.objective_value == doctest::Approx(oracle.value).epsilon(1e-6));
    CHECK(sol.objective_value <= oracle.value + 1e-6);
  }
}

TEST_CASE("objective trace is non-increasing") {
  Rng rng(27, "svm");
  const SvmProblem problem = random_problem(rng, 60, 5, 10.0);
  const SvmSolution sol = train_l2svm(problem);
  REQUIRE(sol.objective_trace.size() >= 2);
  for (std::size_t k = 1; k < sol.objective_trace.size(); ++k)
    CHECK(sol.objective_trace[k] <= sol.objective_trace[k - 1]);
}

TEST_CASE("different initializations reach the same optimum") {
  Rng rng(28, "svm");
  const SvmProblem problem = random_problem(rng, 50, 4, 2.0);
  const SvmSolution cold = train_l2svm(problem);

  LinearModel warm;
  warm.weights = 5.0 * Vector::Ones(4);
  warm.bias = -3.0;
  const SvmSolution warmed = train_l2svm(problem, {}, &warm);

  CHECK(cold.objective_value ==
        doctest::Approx(warmed.objective_value).epsilon(1e-8));
}

TEST_CASE("single-class input is solved and flagged") {
  Matrix design(3, 2);
  design << 1.0, 0.5, -0.2, 0.8, 0.1, 0.3;
  IntVector labels(3);
  labels << 1, 1, 1;
  SvmProblem problem{design, LabelSequence::binary(labels), 1.0};
  const SvmSolution sol = train_l2svm(problem);
  CHECK(sol.single_class);
  CHECK(sol.converged);
  // All margins can be satisfied through the bias alone.
  CHECK(sol.objective_value <= 1e-10);
}

TEST_CASE("solver input validation") {
  Matrix design(2, 1);
  design << 1.0, -1.0;
  IntVector labels(2);
  labels << 1, -1;

  SUBCASE("non-positive C throws") {
    SvmProblem problem{design, LabelSequence::binary(labels), 0.0};
    CHECK_THROWS_AS((void)train_l2svm(problem), std::invalid_argument);
  }
  SUBCASE("non-finite design throws") {
    Matrix bad = design;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    SvmProblem problem{bad, LabelSequence::binary(labels), 1.0};
    CHECK_THROWS_AS((void)train_l2svm(problem), std::invalid_argument);
  }
  SUBCASE("length mismatch throws") {
    IntVector three(3);
    three << 1, -1, 1;
    SvmProblem problem{design, LabelSequence::binary(three), 1.0};
    CHECK_THROWS_AS((void)train_l2svm(problem), std::invalid_argument);
  }
}
