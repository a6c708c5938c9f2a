#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqpt/chi.hpp"
#include "sqpt/linalg.hpp"

namespace sqpt {

inline constexpr double kPhysicalTol = 1e-10;

/// A D x D operator intended as a quantum state.
///
/// Construction only checks the shape; channel outputs of non-trace-preserving
/// maps are legitimately unnormalized. Use `validated` or `is_physical` when the
/// state invariants (Hermitian, unit trace, PSD) matter.
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix rho);

  static DensityMatrix validated(ComplexMatrix rho, double tol = kPhysicalTol);
  static DensityMatrix pure(const ComplexVector& psi);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  Complex trace() const { return rho_.trace(); }
  bool is_physical(double tol = kPhysicalTol) const;

private:
  ComplexMatrix rho_;
};

/// Completely positive map in Kraus form, ε(ρ) = Σ_m E^m ρ E^m†.
class QuantumChannel {
public:
  QuantumChannel(std::size_t dim, std::vector<ComplexMatrix> kraus);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  /// max-norm of Σ E†E - 1
  double tp_deviation() const;
  bool is_trace_preserving(double tol = kPhysicalTol) const { return tp_deviation() <= tol; }

private:
  std::size_t dim_;
  std::vector<ComplexMatrix> kraus_;
};

struct ValidationReport {
  double tp_deviation = 0.0;
  double min_chi_eigenvalue = 0.0;
  Complex chi_trace;
  double tol = kPhysicalTol;

  bool trace_preserving() const { return tp_deviation <= tol; }
  bool completely_positive() const { return min_chi_eigenvalue >= -tol; }
  bool ok() const { return trace_preserving() && completely_positive(); }
};

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho);

/// Kraus sum applied to an arbitrary (possibly non-Hermitian) operator, by linearity.
ComplexMatrix apply_kraus_map(const QuantumChannel& ch, const ComplexMatrix& op);

/// chi_{ef;gh} = Σ_m E^m_{ef} conj(E^m_{gh}), straight from the Kraus entries.
ChiMatrix chi_oracle(const QuantumChannel& ch);

ValidationReport validate_cptp(const QuantumChannel& ch, double tol = kPhysicalTol);

/// Named channels: identity, bit-flip, phase-flip, depolarizing,
/// amplitude-damping, random-cptp. See README for the parameter lists.
QuantumChannel preset_channel(const std::string& name, std::span<const double> params,
                              std::size_t dim);

/// Kraus rank `rank` channel from blocks of a Haar-random (rank*D) x D isometry.
QuantumChannel random_cptp(std::uint64_t seed, std::size_t rank, std::size_t dim);

/// All pairwise tensor products E^m ⊗ F^n.
QuantumChannel kron_channel(const QuantumChannel& first, const QuantumChannel& second);

} // namespace sqpt
