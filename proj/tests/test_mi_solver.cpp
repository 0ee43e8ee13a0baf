#include <cmath>

#include <gtest/gtest.h>

#include "mifit/mi_solver.hpp"
#include "mifit/oracle.hpp"
#include "support.hpp"

using namespace mifit;

TEST(SolveProblem1, FullLengthGivesZeroError) {
  fixtures::Rng rng(21);
  const GridPtr g = rng.grid(4);
  const auto d = rng.data(g, 3, 4);
  for (std::size_t l : {3u, 5u}) {
    const MISolution s = solve_problem1(d, l);
    EXPECT_EQ(s.error, 0.0);
    EXPECT_LE(residual(d, s.range), 1e-12);
    EXPECT_EQ(s.generators.size(), l);
  }
}

TEST(SolveProblem1, TwoFiberExample) {
  const GridPtr g = make_grid({1.0, 1.0});
  const std::vector<VectorField> d{VectorField(g, 2, {{1, 0}, {0, 0}}), VectorField(g, 2, {{0, 0}, {0, 1}})};
  const MISolution s = solve_problem1(d, 1);
  EXPECT_NEAR(s.error, 0.0, 1e-15);
  EXPECT_LE(std::abs(s.generators[0][0][0] - 1.0) + std::abs(s.generators[0][0][1]), 1e-15);
  EXPECT_LE(std::abs(s.generators[0][1][0]) + std::abs(s.generators[0][1][1] - 1.0), 1e-15);
  EXPECT_NEAR(residual(d, s.range), 0.0, 1e-15);
  EXPECT_EQ(s.achieved_length, 1u);
}

TEST(SolveProblem1, OrthonormalPairLosesOne) {
  const GridPtr g = make_grid({1.0});
  const std::vector<VectorField> d{VectorField(g, 2, {{1, 0}}), VectorField(g, 2, {{0, 1}})};
  const MISolution s = solve_problem1(d, 1);
  EXPECT_NEAR(s.error, 1.0, 1e-14);
  EXPECT_NEAR(residual(d, s.range), 1.0, 1e-14);
  const double probe = oracle::mi_candidate_sampler(d, 1, 500, 3);
  EXPECT_GE(probe, s.error - 1e-9);
}

TEST(SolveProblem1, InvalidLength) {
  const GridPtr g = make_grid({1.0});
  const std::vector<VectorField> d{VectorField(g, 1, {{1}})};
  EXPECT_THROW(solve_problem1(d, 0), InvalidInput);
  EXPECT_THROW(solve_problem1(std::vector<VectorField>{}, 1), InvalidInput);
}

TEST(ErrorFormula, Examples) {
  const GridPtr one = make_grid({1.0});
  const SpectralField a(one, {{1.0, 1.0}}, {Matrix::identity(2)}, kDefaultEpsilon);
  EXPECT_EQ(error_formula(a, 1), 1.0);
  EXPECT_EQ(error_formula(a, 2), 0.0);
  EXPECT_EQ(error_formula(a, 7), 0.0);
  const GridPtr two = make_grid({1.0, 2.0});
  const SpectralField b(two, {{5.0, 3.0}, {4.0, 1.0}}, {Matrix::identity(2), Matrix::identity(2)}, kDefaultEpsilon);
  EXPECT_EQ(error_formula(b, 1), 5.0);
}

TEST(Residual, Extremes) {
  fixtures::Rng rng(22);
  const GridPtr g = rng.grid(3);
  const auto d = rng.data(g, 2, 3);
  EXPECT_LE(residual(d, RangeBasis::full(g, 3)), 1e-20);
  double energy = 0.0;
  for (const auto& f : d) energy += norm_squared(f);
  EXPECT_DOUBLE_EQ(residual(d, RangeBasis::empty(g, 3)), energy);
}

TEST(Contains, Examples) {
  const GridPtr g = make_grid({1.0, 1.0});
  const RangeBasis r(g, 2, {{{1, 0}}, {{0, 1}}});
  EXPECT_TRUE(contains(r, VectorField(g, 2, {{1, 0}, {0, 0}})));
  EXPECT_FALSE(contains(r, VectorField(g, 2, {{0, 1}, {0, 0}})));
  const std::vector<VectorField> d{VectorField(g, 2, {{1, 0}, {0, 0}}), VectorField(g, 2, {{0, 0}, {0, 1}})};
  const MISolution s = solve_problem1(d, 1);
  EXPECT_TRUE(contains(s.range, s.generators[0]));
}

TEST(SolveProblem1, RandomizedProperties) {
  fixtures::Rng rng(23);
  for (int t = 0; t < 60; ++t) {
    const GridPtr g = rng.grid(rng.pick(1, 16));
    const std::size_t m = rng.pick(1, 5), n = rng.pick(1, 6);
    const auto d = rng.data(g, m, n);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t l = 1; l <= m + 1; ++l) {
      const MISolution s = solve_problem1(d, l);
      const double res = residual(d, s.range);
      EXPECT_LE(std::abs(res - s.error), 1e-9 * (1.0 + res));
      EXPECT_LE(s.error, prev + 1e-12);
      prev = s.error;
      EXPECT_LE(parseval_deviation(s.generators, s.range), 1e-9);
      EXPECT_LE(s.achieved_length, std::min(l, std::min(m, n)));
      // |Phi_s|^2 = measure of {lambda_s > threshold}
      for (std::size_t j = 0; j < l; ++j) {
        double expected = 0.0;
        for (std::size_t w = 0; w < g->size(); ++w)
          if (j < m && s.spectral->is_nonzero(w, j)) expected += g->weight(w);
        EXPECT_NEAR(norm_squared(s.generators[j]), expected, 1e-9 * (1.0 + expected));
      }
    }
  }
}

TEST(SolveProblem1, ParsevalOnRandomVectorsOfRange) {
  fixtures::Rng rng(24);
  const GridPtr g = rng.grid(5);
  const auto d = rng.data(g, 4, 5);
  const MISolution s = solve_problem1(d, 2);
  for (std::size_t w = 0; w < g->size(); ++w) {
    const CVector v = s.range.project(w, rng.vector(5));
    double energy = 0.0;
    for (const auto& phi : s.generators) energy += std::norm(dot(v, phi[w]));
    EXPECT_NEAR(energy, norm_squared(v), 1e-9 * (1.0 + norm_squared(v)));
  }
}

TEST(SolveProblem1, OptimalityProbe) {
  fixtures::Rng rng(25);
  for (int t = 0; t < 5; ++t) {
    const GridPtr g = rng.grid(rng.pick(1, 4));
    const auto d = rng.data(g, rng.pick(2, 4), rng.pick(2, 4));
    const MISolution s = solve_problem1(d, 1);
    EXPECT_LE(residual(d, s.range), oracle::mi_candidate_sampler(d, 1, 300, t) + 1e-9);
  }
}
