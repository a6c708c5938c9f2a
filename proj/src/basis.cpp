#include "sqpt/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

void require_index(std::size_t level, std::size_t dim, const char* what) {
  if (level >= dim) {
    throw ArgumentError(std::string(what) + ": level " + std::to_string(level) +
                        " out of range for dimension " + std::to_string(dim));
  }
}

// Permutation taking the Choi flattening e*D+f to the site-interleaved order
// Σ_k (2 e_k + f_k) 4^{N-k} used by the tensor-product bases.
std::vector<std::size_t> choi_to_interleaved(std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<std::size_t> perm(dim * dim);
  for (std::size_t e = 0; e < dim; ++e) {
    for (std::size_t f = 0; f < dim; ++f) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < n_qubits; ++k) {
        const std::size_t shift = n_qubits - 1 - k;
        const std::size_t ek = (e >> shift) & 1U;
        const std::size_t fk = (f >> shift) & 1U;
        idx = idx * 4 + 2 * ek + fk;
      }
      perm[choi_flat(e, f, dim)] = idx;
    }
  }
  return perm;
}

ComplexMatrix permute_both(const ComplexMatrix& m, const std::vector<std::size_t>& perm,
                           bool inverse) {
  ComplexMatrix out(m.rows(), m.cols());
  const auto n = static_cast<Eigen::Index>(perm.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto pi = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
      const auto pj = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]);
      if (inverse) {
        out(i, j) = m(pi, pj);
      } else {
        out(pi, pj) = m(i, j);
      }
    }
  }
  return out;
}

} // namespace

std::size_t qubit_count(std::size_t dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a qubit register size");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

ComplexMatrix choi_op(const ChoiIndex& idx) {
  require_index(idx.a, idx.dim, "choi_op");
  require_index(idx.b, idx.dim, "choi_op");
  const auto d = static_cast<Eigen::Index>(idx.dim);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(static_cast<Eigen::Index>(idx.a), static_cast<Eigen::Index>(idx.b)) = 1.0;
  return m;
}

std::pair<ComplexVector, ComplexVector> superposition_states(std::size_t a, std::size_t b,
                                                             std::size_t dim) {
  if (a >= b) throw ArgumentError("superposition_states: requires a < b");
  require_index(b, dim, "superposition_states");
  const ComplexVector va = basis_vector(a, dim);
  const ComplexVector vb = basis_vector(b, dim);
  return {kInvSqrt2 * (va + vb), kInvSqrt2 * (va + kI * vb)};
}

PureStateExpansion::PureStateExpansion(ComplexMatrix target, std::vector<StateTerm> terms,
                                       double tol)
    : target_(std::move(target)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.state.size() != target_.rows() || std::abs(t.state.norm() - 1.0) > kExactTol) {
      throw std::logic_error("PureStateExpansion: states must be unit vectors of the target dimension");
    }
  }
  if (residual() > tol) {
    throw std::logic_error("PureStateExpansion: terms do not reproduce the target");
  }
}

ComplexMatrix PureStateExpansion::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(target_.rows(), target_.cols());
  for (const auto& t : terms_) sum.noalias() += t.weight * outer(t.state);
  return sum;
}

HermitianExpansion::HermitianExpansion(ComplexMatrix target, std::vector<OperatorTerm> terms,
                                       double tol)
    : target_(std::move(target)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!is_hermitian(t.op, kExactTol)) {
      throw std::logic_error("HermitianExpansion: operators must be Hermitian");
    }
  }
  if (residual() > tol) {
    throw std::logic_error("HermitianExpansion: terms do not reproduce the target");
  }
}

ComplexMatrix HermitianExpansion::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(target_.rows(), target_.cols());
  for (const auto& t : terms_) sum.noalias() += t.weight * t.op;
  return sum;
}

HermitianBasis::HermitianBasis(std::size_t dim, std::vector<ComplexMatrix> operators)
    : dim_(dim), operators_(std::move(operators)) {
  if (operators_.size() != dim_ * dim_) {
    throw DimensionError("HermitianBasis: need exactly D^2 operators");
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  for (const auto& op : operators_) {
    if (op.rows() != d || op.cols() != d) throw DimensionError("HermitianBasis: wrong operator shape");
    if (!is_hermitian(op, kExactTol)) throw ArgumentError("HermitianBasis: operator not Hermitian");
  }
  const auto n = static_cast<Eigen::Index>(operators_.size());
  gram_.resize(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      gram_(m, k) = (operators_[static_cast<std::size_t>(m)] *
                     operators_[static_cast<std::size_t>(k)]).trace();
    }
  }
  if (condition_number(gram_) > kMaxConditionNumber) {
    throw SingularSystemError("HermitianBasis: operators are not linearly independent");
  }
}

PureStateExpansion expand_choi_four(const ChoiIndex& idx) {
  ComplexMatrix target = choi_op(idx);
  const std::size_t a = idx.a;
  const std::size_t b = idx.b;
  const std::size_t dim = idx.dim;
  if (a == b) {
    return PureStateExpansion(std::move(target), {{Complex(1.0), basis_vector(a, dim)}});
  }
  // For a > b expand Ẽ_ba and take the adjoint term by term: weights conjugate, states stay.
  const bool upper = a < b;
  const std::size_t lo = upper ? a : b;
  const std::size_t hi = upper ? b : a;
  auto [plus, minus] = superposition_states(lo, hi, dim);
  const Complex w_minus = upper ? kI : -kI;
  const Complex w_diag = upper ? Complex(-0.5, -0.5) : Complex(-0.5, 0.5);
  std::vector<StateTerm> terms{
      {Complex(1.0), std::move(plus)},
      {w_minus, std::move(minus)},
      {w_diag, basis_vector(lo, dim)},
      {w_diag, basis_vector(hi, dim)},
  };
  return PureStateExpansion(std::move(target), std::move(terms));
}

PureStateExpansion expand_operator_in_states(const ComplexMatrix& target,
                                             std::span<const ComplexVector> states) {
  const auto d = target.rows();
  if (target.cols() != d) throw DimensionError("expand_operator_in_states: target must be square");
  const auto n = d * d;
  if (static_cast<Eigen::Index>(states.size()) != n) {
    throw DimensionError("expand_operator_in_states: need exactly D^2 states");
  }
  ComplexMatrix system(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const ComplexVector& psi = states[static_cast<std::size_t>(m)];
    if (psi.size() != d) throw DimensionError("expand_operator_in_states: state dimension mismatch");
    system.col(m) = vectorize(outer(psi));
  }
  if (condition_number(system) > kMaxConditionNumber) {
    throw SingularSystemError("expand_operator_in_states: projectors are linearly dependent");
  }
  const ComplexVector weights = system.fullPivLu().solve(vectorize(target));
  std::vector<StateTerm> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    terms.push_back({weights(m), states[static_cast<std::size_t>(m)]});
  }
  try {
    return PureStateExpansion(target, std::move(terms), kSolveResidualTol);
  } catch (const std::logic_error&) {
    throw SingularSystemError("expand_operator_in_states: residual above tolerance");
  }
}

HermitianExpansion expand_in_hermitian_basis(const ComplexMatrix& target,
                                             const HermitianBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (target.rows() != d || target.cols() != d) {
    throw DimensionError("expand_in_hermitian_basis: target dimension mismatch");
  }
  const auto& ops = basis.operators();
  const auto n = static_cast<Eigen::Index>(ops.size());
  ComplexVector rhs(n);
  for (Eigen::Index m = 0; m < n; ++m) rhs(m) = (ops[static_cast<std::size_t>(m)] * target).trace();
  const ComplexVector weights = basis.gram().fullPivLu().solve(rhs);
  std::vector<OperatorTerm> terms;
  terms.reserve(ops.size());
  for (Eigen::Index m = 0; m < n; ++m) {
    terms.push_back({weights(m), ops[static_cast<std::size_t>(m)]});
  }
  try {
    return HermitianExpansion(target, std::move(terms), kSolveResidualTol);
  } catch (const std::logic_error&) {
    throw SingularSystemError("expand_in_hermitian_basis: residual above tolerance");
  }
}

HermitianBasis sud_generators(std::size_t d) {
  if (d < 2) throw ArgumentError("sud_generators: d must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<ComplexMatrix> ops;
  ops.reserve(d * d);
  ops.push_back(ComplexMatrix::Identity(n, n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      ops.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = -kI;
      anti(k, j) = kI;
      ops.push_back(std::move(anti));
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    const double ld = static_cast<double>(l);
    const double factor = std::sqrt(2.0 / (ld * (ld + 1.0)));
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = factor;
    diag(l, l) = -ld * factor;
    ops.push_back(std::move(diag));
  }
  return HermitianBasis(d, std::move(ops));
}

HermitianBasis tensor_basis(const HermitianBasis& local, std::size_t sites) {
  if (sites == 0) throw ArgumentError("tensor_basis: need at least one site");
  std::vector<ComplexMatrix> ops = local.operators();
  std::size_t dim = local.dim();
  for (std::size_t s = 1; s < sites; ++s) {
    std::vector<ComplexMatrix> next;
    next.reserve(ops.size() * local.operators().size());
    for (const auto& a : ops) {
      for (const auto& b : local.operators()) next.push_back(kron(a, b));
    }
    ops = std::move(next);
    dim *= local.dim();
  }
  return HermitianBasis(dim, std::move(ops));
}

ComplexMatrix pauli_choi_unitary(std::size_t n_qubits) {
  if (n_qubits == 0) throw ArgumentError("pauli_choi_unitary: need at least one qubit");
  const double h = kInvSqrt2;
  ComplexMatrix u(4, 4);
  // clang-format off
  u << h,       0.0,     0.0,    h,
       0.0,     h,       h,      0.0,
       0.0,    -kI * h,  kI * h, 0.0,
       h,       0.0,     0.0,   -h;
  // clang-format on
  ComplexMatrix out = u;
  for (std::size_t k = 1; k < n_qubits; ++k) out = kron(out, u);
  return out;
}

std::vector<ComplexMatrix> operator_basis(ChiBasis basis, std::size_t dim) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(dim * dim);
  if (basis == ChiBasis::choi) {
    for (std::size_t e = 0; e < dim; ++e) {
      for (std::size_t f = 0; f < dim; ++f) ops.push_back(choi_op({e, f, dim}));
    }
    return ops;
  }
  const std::size_t n = qubit_count(dim);
  return tensor_basis(sud_generators(2), n).operators();
}

ComplexMatrix apply_chi(const ChiMatrix& chi, const ComplexMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(chi.dim);
  if (rho.rows() != d || rho.cols() != d) throw DimensionError("apply_chi: state dimension mismatch");
  const auto ops = operator_basis(chi.basis, chi.dim);
  const auto n = static_cast<Eigen::Index>(ops.size());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ComplexMatrix left = ops[static_cast<std::size_t>(i)] * rho;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex c = chi.entries(i, j);
      if (c == Complex(0.0)) continue;
      out.noalias() += c * left * ops[static_cast<std::size_t>(j)].adjoint();
    }
  }
  return out;
}

// The operators satisfy P = U Ē as vectors of operators, so Kraus
// coefficients transform with conj(U) and chi^P = conj(U) chi^Ē U^T.
ChiMatrix chi_choi_to_pauli(const ChiMatrix& chi_c, std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (chi_c.basis != ChiBasis::choi) throw ArgumentError("chi_choi_to_pauli: input is not in the Choi basis");
  const auto n = static_cast<Eigen::Index>(dim * dim);
  if (chi_c.dim != dim || chi_c.entries.rows() != n || chi_c.entries.cols() != n) {
    throw DimensionError("chi_choi_to_pauli: chi is not 4^N x 4^N");
  }
  const ComplexMatrix u = pauli_choi_unitary(n_qubits).conjugate();
  const ComplexMatrix interleaved = permute_both(chi_c.entries, choi_to_interleaved(n_qubits), false);
  const double scale = 1.0 / static_cast<double>(dim);
  return ChiMatrix{dim, u * (scale * interleaved) * u.adjoint(), ChiBasis::pauli};
}

ChiMatrix chi_pauli_to_choi(const ChiMatrix& chi_p, std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (chi_p.basis != ChiBasis::pauli) throw ArgumentError("chi_pauli_to_choi: input is not in the Pauli basis");
  const auto n = static_cast<Eigen::Index>(dim * dim);
  if (chi_p.dim != dim || chi_p.entries.rows() != n || chi_p.entries.cols() != n) {
    throw DimensionError("chi_pauli_to_choi: chi is not 4^N x 4^N");
  }
  const ComplexMatrix u = pauli_choi_unitary(n_qubits).conjugate();
  const ComplexMatrix interleaved = static_cast<double>(dim) * (u.adjoint() * chi_p.entries * u);
  return ChiMatrix{dim, permute_both(interleaved, choi_to_interleaved(n_qubits), true),
                   ChiBasis::choi};
}

} // namespace sqpt
