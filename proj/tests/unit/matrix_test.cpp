#include <gtest/gtest.h>

#include "aml/core/error.hpp"
#include "aml/core/matrix.hpp"
#include "aml/core/random.hpp"

namespace aml {
namespace {

TEST(Matrix, ProductsAgree) {
  Matrix a{{1, 2, 3}, {4, 5, 6}};
  Matrix b{{1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(matmul(a, b), (Matrix{{4, 5}, {10, 11}}));
  EXPECT_EQ(matmul_tn(transpose(a), b), matmul(a, b));
  EXPECT_EQ(matmul_nt(a, transpose(b)), matmul(a, b));
  EXPECT_THROW(matmul(a, a), ShapeError);
  EXPECT_EQ(matmul(Matrix::identity(2), a), a);
}

TEST(Matrix, GatherRowsBounds) {
  Matrix a{{1, 2}, {3, 4}};
  std::vector<std::int32_t> rows{1, 1, 0};
  EXPECT_EQ(gather_rows(a, rows), (Matrix{{3, 4}, {3, 4}, {1, 2}}));
  std::vector<std::int32_t> bad{2};
  EXPECT_THROW(gather_rows(a, bad), BoundsError);
}

TEST(Random, StreamsAreIndependentAndStable) {
  Rng a = stream_rng(1, "init");
  Rng b = stream_rng(1, "init");
  Rng c = stream_rng(1, "sampler");
  Rng d = stream_rng(2, "init");
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

}  // namespace
}  // namespace aml
