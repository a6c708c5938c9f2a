#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace sqpt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest absolute entry of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Entrywise comparison with an absolute tolerance; false on shape mismatch.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

bool is_hermitian(const ComplexMatrix& m, double tol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// |v><v|
ComplexMatrix outer(const ComplexVector& v);

/// Computational basis vector |k> in dimension dim.
ComplexVector basis_vector(std::size_t k, std::size_t dim);

/// Ratio of largest to smallest singular value (infinity when singular).
double condition_number(const ComplexMatrix& m);

} // namespace sqpt
