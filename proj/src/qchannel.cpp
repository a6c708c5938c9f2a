#include "sqpt/qchannel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

void require_square(const ComplexMatrix& m, std::size_t dim, const char* what) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

double probability_param(std::span<const double> params, const std::string& name) {
  if (params.size() != 1) {
    throw ArgumentError(name + " takes exactly one parameter");
  }
  const double p = params[0];
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(name + ": parameter must lie in [0, 1]");
  }
  return p;
}

// Cyclic shift |k> -> |k+1 mod D>.
ComplexMatrix shift_op(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

// Clock |k> -> ω^k |k>, ω = exp(2πi/D).
ComplexMatrix clock_op(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(dim);
    z(k, k) = std::polar(1.0, angle);
  }
  return z;
}

std::uint64_t integral_param(double v, const char* what) {
  if (!(v >= 0.0) || std::floor(v) != v || v > 1.8e19) {
    throw ArgumentError(std::string("random-cptp: ") + what + " must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

} // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw DimensionError("DensityMatrix: matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::validated(ComplexMatrix rho, double tol) {
  DensityMatrix out(std::move(rho));
  if (!out.is_physical(tol)) {
    throw PhysicalityError("DensityMatrix: not Hermitian, unit-trace and positive semidefinite");
  }
  return out;
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  return DensityMatrix(outer(psi.normalized()));
}

bool DensityMatrix::is_physical(double tol) const {
  if (!is_hermitian(rho_, tol)) return false;
  if (std::abs(rho_.trace() - Complex(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

QuantumChannel::QuantumChannel(std::size_t dim, std::vector<ComplexMatrix> kraus)
    : dim_(dim), kraus_(std::move(kraus)) {
  if (dim_ == 0) throw DimensionError("QuantumChannel: dimension must be positive");
  if (kraus_.empty()) throw ArgumentError("QuantumChannel: at least one Kraus operator required");
  for (const auto& k : kraus_) require_square(k, dim_, "QuantumChannel");
}

double QuantumChannel::tp_deviation() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return max_abs_diff(sum, ComplexMatrix::Identity(d, d));
}

ComplexMatrix apply_kraus_map(const QuantumChannel& ch, const ComplexMatrix& op) {
  require_square(op, ch.dim(), "apply_channel");
  const auto d = static_cast<Eigen::Index>(ch.dim());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : ch.kraus()) out.noalias() += k * op * k.adjoint();
  return out;
}

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply_kraus_map(ch, rho.matrix()));
}

ChiMatrix chi_oracle(const QuantumChannel& ch) {
  const std::size_t dim = ch.dim();
  const auto n = static_cast<Eigen::Index>(dim * dim);
  ChiMatrix chi{dim, ComplexMatrix::Zero(n, n), ChiBasis::choi};
  for (const auto& k : ch.kraus()) {
    // e^m_{ef} = Tr[Ẽ_ef^† E^m] = E^m(e, f); row-major flatten puts (e,f) at e*D+f.
    ComplexVector coeffs(n);
    for (std::size_t e = 0; e < dim; ++e) {
      for (std::size_t f = 0; f < dim; ++f) {
        coeffs(static_cast<Eigen::Index>(choi_flat(e, f, dim))) =
            k(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(f));
      }
    }
    chi.entries.noalias() += coeffs * coeffs.adjoint();
  }
  return chi;
}

ValidationReport validate_cptp(const QuantumChannel& ch, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("validate_cptp: tolerance must be positive");
  ValidationReport report;
  report.tol = tol;
  report.tp_deviation = ch.tp_deviation();
  const ChiMatrix chi = chi_oracle(ch);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(chi.entries, Eigen::EigenvaluesOnly);
  report.min_chi_eigenvalue = es.eigenvalues().minCoeff();
  report.chi_trace = chi.trace();
  return report;
}

QuantumChannel random_cptp(std::uint64_t seed, std::size_t rank, std::size_t dim) {
  if (rank == 0) throw ArgumentError("random-cptp: rank must be at least 1");
  if (dim == 0) throw ArgumentError("random-cptp: dimension must be positive");
  const auto d = static_cast<Eigen::Index>(dim);
  const auto rows = static_cast<Eigen::Index>(rank * dim);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix gaussian(rows, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      gaussian(i, j) = Complex(re, im);
    }
  }

  // Thin QR, with R's diagonal phases folded back into Q so the isometry is Haar distributed.
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, d);
  const ComplexMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }

  std::vector<ComplexMatrix> kraus;
  kraus.reserve(rank);
  for (std::size_t m = 0; m < rank; ++m) {
    kraus.emplace_back(q.block(static_cast<Eigen::Index>(m * dim), 0, d, d));
  }
  return QuantumChannel(dim, std::move(kraus));
}

QuantumChannel preset_channel(const std::string& name, std::span<const double> params,
                              std::size_t dim) {
  if (dim < 2) throw ArgumentError("preset_channel: dimension must be at least 2");
  const auto d = static_cast<Eigen::Index>(dim);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  if (name == "identity") {
    if (!params.empty()) throw ArgumentError("identity takes no parameters");
    return QuantumChannel(dim, {id});
  }
  if (name == "bit-flip") {
    const double p = probability_param(params, name);
    return QuantumChannel(dim, {std::sqrt(1.0 - p) * id, std::sqrt(p) * shift_op(dim)});
  }
  if (name == "phase-flip") {
    const double p = probability_param(params, name);
    return QuantumChannel(dim, {std::sqrt(1.0 - p) * id, std::sqrt(p) * clock_op(dim)});
  }
  if (name == "depolarizing") {
    // (1-p) ρ + p 1/D via the D^2 Weyl operators X^j Z^k.
    const double p = probability_param(params, name);
    const double d2 = static_cast<double>(dim * dim);
    const ComplexMatrix x = shift_op(dim);
    const ComplexMatrix z = clock_op(dim);
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p + p / d2) * id);
    ComplexMatrix xj = id;
    for (std::size_t j = 0; j < dim; ++j) {
      ComplexMatrix weyl = xj;
      for (std::size_t k = 0; k < dim; ++k) {
        if (j != 0 || k != 0) kraus.push_back(std::sqrt(p / d2) * weyl);
        weyl = weyl * z;
      }
      xj = x * xj;
    }
    return QuantumChannel(dim, std::move(kraus));
  }
  if (name == "amplitude-damping") {
    const double gamma = probability_param(params, name);
    if (dim != 2) throw ArgumentError("amplitude-damping is defined for dim 2 only");
    ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - gamma);
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
    e1(0, 1) = std::sqrt(gamma);
    return QuantumChannel(2, {e0, e1});
  }
  if (name == "random-cptp") {
    if (params.size() != 2) throw ArgumentError("random-cptp takes two parameters: seed, rank");
    const auto seed = integral_param(params[0], "seed");
    const auto rank = integral_param(params[1], "rank");
    return random_cptp(seed, static_cast<std::size_t>(rank), dim);
  }
  throw ArgumentError("unknown channel preset: " + name);
}

QuantumChannel kron_channel(const QuantumChannel& first, const QuantumChannel& second) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& a : first.kraus()) {
    for (const auto& b : second.kraus()) kraus.push_back(kron(a, b));
  }
  return QuantumChannel(first.dim() * second.dim(), std::move(kraus));
}

} // namespace sqpt
