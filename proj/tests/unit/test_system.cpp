#include <doctest.h>

#include <cmath>
#include <random>

#include "passage/eval.hpp"
#include "passage/gmres.hpp"
#include "passage/system.hpp"
#include "support/brute_force.hpp"
#include "unit/scenes.hpp"

using namespace passage;
using passage::testing::circle_body;

using passage::testing::brute_force_matrix;
using passage::testing::mixed_scene;

TEST_CASE("apply_system equals brute-force dense assembly") {
  const Scene scene = mixed_scene();
  for (int n : {8, 16, 32}) {
    const DiscretizedScene disc = discretize(scene, n);
    for (const Complex s : {Complex(1.0), Complex(0.4, 0.08), Complex(-2.8, 1.9)}) {
      const KernelContext ctx(s);
      const MatrixXc reference = brute_force_matrix(disc, ctx);
      const MatrixXc assembled = assemble_system(disc, ctx);
      CHECK((assembled - reference).cwiseAbs().maxCoeff() <= 1e-13 * reference.cwiseAbs().maxCoeff());

      std::mt19937_64 gen(n);
      std::normal_distribution<double> normal;
      VectorXc v(disc.total_nodes());
      for (auto& e : v) e = Complex(normal(gen), normal(gen));
      const VectorXc lhs = apply_system(disc, ctx, v);
      const VectorXc rhs = reference * v;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13 * rhs.cwiseAbs().maxCoeff());
      CHECK(apply_system(disc, ctx, VectorXc::Zero(v.size())).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  const DiscretizedScene disc = discretize(scene, 8);
  CHECK_THROWS_AS(apply_system(disc, KernelContext(Complex(1.0)), VectorXc::Zero(3)), std::invalid_argument);
}

TEST_CASE("single Dirichlet circle with constant density") {
  const DiscretizedScene disc = discretize(passage::testing::disc_scene(), 16);
  const KernelContext ctx(Complex(1.0));
  const VectorXc e = VectorXc::Ones(16);
  const VectorXc out = apply_system(disc, ctx, e);
  const auto& b = disc.bodies[0];
  for (int i = 0; i < 16; ++i) {
    Complex row = 0.5 + b.h * diagonal_limits(1.0).dlp_self;
    for (int l = 0; l < 16; ++l) {
      if (l != i) row += b.h * kernel_dlp(b.nodes.col(i), b.nodes.col(l), b.normals.col(l), ctx);
    }
    CHECK(std::abs(out(i) - row) <= 1e-13);
  }
}

TEST_CASE("off-diagonal blocks decay with separation") {
  const KernelContext ctx(Complex(4.0));
  double previous = 0.0;
  for (double d : {4.0, 8.0, 12.0}) {
    const Scene scene = make_scene({circle_body(1.0, Vec2::Zero(), BoundaryCondition::kDirichlet),
                                    circle_body(1.0, Vec2(d, 0), BoundaryCondition::kNeumann)},
                                   Vec2(0, 5));
    const MatrixXc a = assemble_system(discretize(scene, 16), ctx);
    const double block = a.topRightCorner(16, 16).cwiseAbs().maxCoeff();
    if (previous > 0.0) CHECK(block / previous < 2.0 * std::exp(-2.0 * (4.0 - 2.0)));
    previous = block;
  }
}

TEST_CASE("GMRES solves small dense systems") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal;
  const int n = 40;
  MatrixXc a = MatrixXc::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) += 0.3 / n * Complex(normal(gen), normal(gen));
  }
  VectorXc b(n);
  for (auto& e : b) e = Complex(normal(gen), normal(gen));
  const auto result = gmres<Complex>([&](const auto& v) -> VectorXc { return a * v; }, b, 1e-13, 100);
  CHECK(result.converged);
  CHECK((a * result.x - b).norm() <= 1e-12 * b.norm());
  CHECK(result.iterations < n);

  const auto zero = gmres<Complex>([&](const auto& v) -> VectorXc { return a * v; }, VectorXc::Zero(n), 1e-12, 10);
  CHECK(zero.converged);
  CHECK(zero.iterations == 0);

  const auto capped = gmres<Complex>([&](const auto& v) -> VectorXc { return a * v; }, b, 1e-13, 3);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 3);

  const auto real_result = gmres<double>([](const auto& v) -> VectorXd { return 2.0 * v; }, VectorXd::Ones(5), 1e-12, 5);
  CHECK((real_result.x - VectorXd::Constant(5, 0.5)).norm() < 1e-14);
}

TEST_CASE("solve_densities") {
  SUBCASE("empty scene gives the free-space field") {
    const DiscretizedScene empty = discretize(make_scene({}, Vec2(1, 1)), 16);
    const KernelContext ctx(Complex(0.5, 0.2));
    const DensitySolution sol = solve_densities(empty, ctx);
    CHECK(sol.densities.empty());
    const Vec2 x(2.5, -1.0);
    CHECK(eval_transform_field(x, empty, ctx, sol).value == kernel_slp(x, Vec2(1, 1), ctx));
  }

  SUBCASE("mirror symmetry about the x-axis") {
    const Scene scene = make_scene({circle_body(1.0, Vec2::Zero(), BoundaryCondition::kDirichlet),
                                    circle_body(0.8, Vec2(3, 0), BoundaryCondition::kNeumann)},
                                   Vec2(-2.5, 0));
    const DiscretizedScene disc = discretize(scene, 64);
    const DensitySolution sol = solve_densities(disc, KernelContext(Complex(0.4, 0.08)));
    CHECK(sol.residual <= 1e-12);
    for (const auto& w : sol.densities) {
      const int n = static_cast<int>(w.size());
      for (int i = 1; i < n; ++i) CHECK(std::abs(w(i) - w(n - i)) <= 1e-10 * w.cwiseAbs().maxCoeff());
    }
  }

  SUBCASE("conjugate symmetry in s") {
    const DiscretizedScene disc = discretize(mixed_scene(), 32);
    const Complex s(0.3, 0.9);
    const VectorXc w = solve_densities(disc, KernelContext(s)).stacked();
    const VectorXc wc = solve_densities(disc, KernelContext(std::conj(s))).stacked();
    CHECK((wc - w.conjugate()).cwiseAbs().maxCoeff() <= 1e-12 * w.cwiseAbs().maxCoeff());
  }

  SUBCASE("matrix-free path agrees with the dense path") {
    const DiscretizedScene disc = discretize(mixed_scene(), 32);
    const KernelContext ctx(Complex(0.4, 0.08));
    SolverOptions matrix_free;
    matrix_free.dense_limit = 0;
    const VectorXc dense = solve_densities(disc, ctx).stacked();
    const VectorXc free = solve_densities(disc, ctx, matrix_free).stacked();
    CHECK((dense - free).cwiseAbs().maxCoeff() <= 1e-11 * dense.cwiseAbs().maxCoeff());
  }

  SUBCASE("iteration cap raises NoConvergence") {
    const DiscretizedScene disc = discretize(mixed_scene(), 32);
    SolverOptions options;
    options.max_iterations = 2;
    CHECK_THROWS_AS(solve_densities(disc, KernelContext(Complex(0.4, 0.08)), options), NoConvergence);
  }
}
