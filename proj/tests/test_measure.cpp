#include <cmath>

#include <gtest/gtest.h>

#include "mifit/measure.hpp"
#include "support.hpp"

using namespace mifit;

namespace {
const Complex I(0, 1);
}

TEST(WeightedGrid, Validation) {
  EXPECT_THROW(make_grid({1.0, 0.0}), InvalidInput);
  EXPECT_THROW(make_grid({1.0, -2.0}), InvalidInput);
  EXPECT_THROW(make_grid({std::nan("")}), InvalidInput);
  EXPECT_THROW(make_grid({"a", "a"}, {1.0, 1.0}), InvalidInput);
  const GridPtr g = make_grid({0.5, 1.5});
  EXPECT_DOUBLE_EQ(g->total_measure(), 2.0);
  try {
    make_grid({"x", "bad"}, {1.0, 0.0});
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

TEST(InnerProduct, Examples) {
  const GridPtr one = make_grid({1.0});
  const VectorField f(one, 2, {{3, 4}});
  EXPECT_EQ(inner_product(f, f), Complex(25));
  EXPECT_EQ(inner_product(VectorField(one, 2, {{1, 0}}), VectorField(one, 2, {{0, 1}})), Complex(0));

  const GridPtr two = make_grid({1.0, 2.0});
  const VectorField a(two, 1, {{1}, {1}});
  const VectorField b(two, 1, {{1}, {I}});
  EXPECT_EQ(inner_product(a, b), Complex(1, -2));
}

TEST(InnerProduct, GridMismatch) {
  const VectorField a(make_grid({1.0}), 1, {{1}});
  const VectorField b(make_grid({1.0}), 1, {{1}});
  const VectorField c(a.grid(), 2, {{1, 0}});
  EXPECT_THROW(inner_product(a, c), DimensionMismatch);
  // equal grids built separately are compatible
  EXPECT_EQ(inner_product(a, b), Complex(1));
  EXPECT_THROW(inner_product(a, VectorField(make_grid({2.0}), 1, {{1}})), DimensionMismatch);
}

TEST(InnerProduct, HermitianSymmetryAndPositivity) {
  fixtures::Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const GridPtr g = rng.grid(rng.pick(1, 6));
    const auto d = rng.data(g, 2, rng.pick(1, 4));
    EXPECT_LE(std::abs(inner_product(d[0], d[1]) - std::conj(inner_product(d[1], d[0]))), 1e-12);
    const Complex ff = inner_product(d[0], d[0]);
    EXPECT_GE(ff.real(), 0.0);
    EXPECT_EQ(ff.imag(), 0.0);
  }
}

TEST(ProjectFiberwise, Examples) {
  const GridPtr g = make_grid({1.0, 3.0});
  const VectorField f(g, 2, {{3, 4}, {I, 2}});
  const VectorField full = project_fiberwise(RangeBasis::full(g, 2), f);
  EXPECT_EQ(full.values(), f.values());
  EXPECT_EQ(norm_squared(project_fiberwise(RangeBasis::empty(g, 2), f)), 0.0);

  const GridPtr one = make_grid({1.0});
  const RangeBasis r(one, 2, {{{1, 0}}});
  const VectorField p = project_fiberwise(r, VectorField(one, 2, {{3, 4}}));
  EXPECT_EQ(p[0], (CVector{3, 0}));
}

TEST(ProjectFiberwise, IdempotenceAndPythagoras) {
  fixtures::Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const GridPtr g = rng.grid(rng.pick(1, 8));
    const std::size_t n = rng.pick(1, 5);
    const auto gens = rng.data(g, rng.pick(1, 3), n);
    const RangeBasis r = RangeBasis::spanned_by(g, n, gens);
    const VectorField f = rng.data(g, 1, n, 0.0)[0];
    const VectorField p = project_fiberwise(r, f);
    EXPECT_LE(norm(project_fiberwise(r, p) - p), 1e-10 * (1.0 + norm(p)));
    const double lhs = norm_squared(f);
    const double rhs = norm_squared(p) + norm_squared(f - p);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * lhs);
  }
}

TEST(RangeBasis, RejectsNonOrthonormal) {
  const GridPtr one = make_grid({1.0});
  EXPECT_THROW(RangeBasis(one, 2, {{{1, 1}}}), InvalidInput);
  EXPECT_THROW(RangeBasis(one, 2, {{{1, 0}, {1, 0}}}), InvalidInput);
  EXPECT_THROW(RangeBasis(one, 2, {}), DimensionMismatch);
}

TEST(ProjectComponent, Examples) {
  const GridPtr one = make_grid({1.0});
  const VectorField f(one, 3, {{1, 2, 3}});
  EXPECT_EQ(project_component(f, Decomposition::whole(3), 0).values(), f.values());
  const Decomposition d(3, {{0}, {1, 2}});
  EXPECT_EQ(project_component(f, d, 0)[0], (CVector{1, 0, 0}));
  EXPECT_THROW(project_component(f, d, 2), InvalidInput);

  const double r = 1.0 / std::sqrt(2.0);
  const Decomposition rot(2, {{0}, {1}}, Matrix{{r, r}, {r, -r}});
  const CVector p = project_component(VectorField(one, 2, {{1, 1}}), rot, 0)[0];
  EXPECT_NEAR(std::abs(p[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p[1] - 1.0), 0.0, 1e-15);
}

TEST(ProjectComponent, ComponentsSumToField) {
  fixtures::Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    const GridPtr g = rng.grid(rng.pick(1, 5));
    const std::size_t n = rng.pick(1, 6);
    const Decomposition d = rng.partition(n, rng.pick(1, n));
    const VectorField f = rng.data(g, 1, n, 0.0)[0];
    VectorField sum = VectorField::zero(g, n);
    for (std::size_t j = 0; j < d.block_count(); ++j) sum = sum + project_component(f, d, j);
    EXPECT_LE(norm(sum - f), 1e-12 * (1.0 + norm(f)));
  }
}

TEST(Decomposition, Validation) {
  EXPECT_THROW(Decomposition(3, {{0}, {1}}), InvalidInput);
  EXPECT_THROW(Decomposition(2, {{0, 1}, {1}}), InvalidInput);
  EXPECT_THROW(Decomposition(2, {{0}, {1}}, Matrix{{1, 1}, {0, 1}}), InvalidInput);
  EXPECT_EQ(Decomposition::singletons(3).block_count(), 3u);
}

TEST(VectorField, ShapeValidation) {
  const GridPtr g = make_grid({1.0, 1.0});
  EXPECT_THROW(VectorField(g, 2, {{1, 0}}), DimensionMismatch);
  EXPECT_THROW(VectorField(g, 2, {{1, 0}, {1}}), DimensionMismatch);
}
