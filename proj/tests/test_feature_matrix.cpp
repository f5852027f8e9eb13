#include <doctest.h>

#include <cmath>
#include <limits>

#include "fcmstop/errors.hpp"
#include "fcmstop/feature_matrix.hpp"

using fcmstop::FeatureMatrix;
using fcmstop::Matrix;

TEST_CASE("feature matrix shape and access") {
  const FeatureMatrix f(3, 2, {1, 2, 3, 4, 5, 6});
  CHECK(f.n_points() == 3);
  CHECK(f.n_dims() == 2);
  CHECK(f(2, 1) == 6);
  CHECK(f.point(1)[0] == 3);
  const FeatureMatrix g = f.scaled(2.0);
  CHECK(g(0, 1) == 4);
}

TEST_CASE("feature matrix rejects empty, ragged and non-finite input") {
  CHECK_THROWS_AS(FeatureMatrix(0, 2, {}), fcmstop::InputError);
  CHECK_THROWS_AS(FeatureMatrix(2, 0, {}), fcmstop::InputError);
  CHECK_THROWS(FeatureMatrix(2, 2, {1, 2, 3}));
  CHECK_THROWS_AS(FeatureMatrix(1, 2, {1, std::nan("")}), fcmstop::InputError);
  CHECK_THROWS_AS(FeatureMatrix(1, 1, {std::numeric_limits<double>::infinity()}), fcmstop::InputError);
}

TEST_CASE("matrix rows are contiguous views") {
  Matrix m(2, 3, 0.0);
  m.row(1)[2] = 7.0;
  CHECK(m(1, 2) == 7.0);
  CHECK(m.data()[5] == 7.0);
  CHECK(m == Matrix(2, 3, {0, 0, 0, 0, 0, 7}));
}
