#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sqpt/chi.hpp"
#include "sqpt/linalg.hpp"

namespace sqpt {

inline constexpr double kExactTol = 1e-12;
inline constexpr double kSolveResidualTol = 1e-10;
inline constexpr double kMaxConditionNumber = 1e8;

/// Choi operator Ẽ_ab = |a><b| on a D-level system.
struct ChoiIndex {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t dim = 0;
};

ComplexMatrix choi_op(const ChoiIndex& idx);

/// (|a>+|b>)/√2 and (|a>+i|b>)/√2 for a < b.
std::pair<ComplexVector, ComplexVector> superposition_states(std::size_t a, std::size_t b,
                                                             std::size_t dim);

struct StateTerm {
  Complex weight;
  ComplexVector state;
};

/// Σ_i w_i |ψ_i><ψ_i| together with the operator it represents.
///
/// Construction verifies unit-norm states and that the weighted sum reproduces
/// the target within `tol`.
class PureStateExpansion {
public:
  PureStateExpansion(ComplexMatrix target, std::vector<StateTerm> terms, double tol = kExactTol);

  const ComplexMatrix& target() const { return target_; }
  const std::vector<StateTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  ComplexMatrix reconstruct() const;
  double residual() const { return max_abs_diff(reconstruct(), target_); }

private:
  ComplexMatrix target_;
  std::vector<StateTerm> terms_;
};

struct OperatorTerm {
  Complex weight;
  ComplexMatrix op;
};

class HermitianExpansion {
public:
  HermitianExpansion(ComplexMatrix target, std::vector<OperatorTerm> terms,
                     double tol = kExactTol);

  const ComplexMatrix& target() const { return target_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  ComplexMatrix reconstruct() const;
  double residual() const { return max_abs_diff(reconstruct(), target_); }

private:
  ComplexMatrix target_;
  std::vector<OperatorTerm> terms_;
};

/// D^2 linearly independent Hermitian D x D operators.
class HermitianBasis {
public:
  HermitianBasis(std::size_t dim, std::vector<ComplexMatrix> operators);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  /// G_mn = Tr[O_m O_n]
  const ComplexMatrix& gram() const { return gram_; }

private:
  std::size_t dim_;
  std::vector<ComplexMatrix> operators_;
  ComplexMatrix gram_;
};

/// Four-pure-state expansion of Ẽ_ab (a single projector when a == b).
PureStateExpansion expand_choi_four(const ChoiIndex& idx);

/// Solve target = Σ_m r_m |Ψ_m><Ψ_m| over D^2 states whose projectors span the operator space.
PureStateExpansion expand_operator_in_states(const ComplexMatrix& target,
                                             std::span<const ComplexVector> states);

/// Solve target = Σ_n s_n O_n via the Gram system of the basis.
HermitianExpansion expand_in_hermitian_basis(const ComplexMatrix& target,
                                             const HermitianBasis& basis);

/// Identity followed by the d^2-1 generalized Gell-Mann matrices, Tr[Γ_i Γ_j] = 2δ_ij.
/// Order: identity, then (symmetric, antisymmetric) for each j<k, then the diagonal family.
HermitianBasis sud_generators(std::size_t d);

/// Tensor products of per-site bases, site 1 most significant.
HermitianBasis tensor_basis(const HermitianBasis& local, std::size_t sites);

/// U^{⊗N}, with U mapping (Ē00, Ē01, Ē10, Ē11), Ē = √2 Ẽ, onto (1, X, Y, Z).
ComplexMatrix pauli_choi_unitary(std::size_t n_qubits);

/// The D^2 operators a coefficient matrix of the given basis refers to, in flattening order.
std::vector<ComplexMatrix> operator_basis(ChiBasis basis, std::size_t dim);

/// Σ_ij chi_ij B_i ρ B_j^† over the chi's own operator basis.
ComplexMatrix apply_chi(const ChiMatrix& chi, const ComplexMatrix& rho);

ChiMatrix chi_choi_to_pauli(const ChiMatrix& chi_c, std::size_t n_qubits);
ChiMatrix chi_pauli_to_choi(const ChiMatrix& chi_p, std::size_t n_qubits);

/// log2(dim) when dim is a power of two (>= 2), else throws DimensionError.
std::size_t qubit_count(std::size_t dim);

} // namespace sqpt
