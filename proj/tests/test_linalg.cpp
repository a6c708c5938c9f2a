#include <gtest/gtest.h>

#include "sqpt/errors.hpp"
#include "sqpt/linalg.hpp"

namespace sqpt {
namespace {

TEST(Linalg, ApproxEqualUsesAbsoluteTolerance) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  ComplexMatrix b = a;
  b(0, 1) = Complex(0.0, 5e-11);
  EXPECT_TRUE(approx_equal(a, b, 1e-10));
  EXPECT_FALSE(approx_equal(a, b, 1e-11));
  EXPECT_FALSE(approx_equal(a, ComplexMatrix::Identity(3, 3), 1.0));
}

TEST(Linalg, KronOfBasisVectors) {
  const ComplexVector v = kron(basis_vector(1, 2), basis_vector(0, 3));
  EXPECT_EQ(v.size(), 6);
  EXPECT_EQ(v(3), Complex(1.0));
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(Linalg, ConditionNumberOfSingularIsInfinite) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_TRUE(std::isinf(condition_number(m)));
  EXPECT_NEAR(condition_number(ComplexMatrix::Identity(3, 3)), 1.0, 1e-14);
}

TEST(Linalg, BasisVectorRejectsOutOfRange) {
  EXPECT_THROW(basis_vector(2, 2), ArgumentError);
}

} // namespace
} // namespace sqpt
