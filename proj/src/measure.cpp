#include "sqpt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

constexpr double kProbabilitySlack = 1e-9;

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

void append_real(std::string& out, double x) {
  std::int64_t q = std::llround(x * 1e12);
  append_u64(out, static_cast<std::uint64_t>(q));
}

void append_complex(std::string& out, Complex c) {
  append_real(out, c.real());
  append_real(out, c.imag());
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_unit(const ComplexVector& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kExactTol) {
    throw ArgumentError(std::string(what) + ": vector must have unit norm");
  }
}

void require_dims(const QuantumChannel& ch, const MeasurementSetting& s) {
  if (s.dim() != ch.dim()) throw DimensionError("measurement: setting and channel dimensions differ");
}

ComplexMatrix output_state(const QuantumChannel& ch, const MeasurementSetting& s) {
  return apply_channel(ch, DensityMatrix(outer(s.input))).matrix();
}

double clamp_probability(double p) {
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    throw PhysicalityError("sampled backend: outcome probability " + std::to_string(p) +
                           " outside [0, 1]; channel is not CPTP");
  }
  return std::clamp(p, 0.0, 1.0);
}

} // namespace

MeasurementSetting projector_setting(ComplexVector input, ComplexVector phi) {
  require_unit(input, "projector_setting input");
  require_unit(phi, "projector_setting projector");
  if (input.size() != phi.size()) throw DimensionError("projector_setting: dimension mismatch");
  return {std::move(input), ProjectorObservable{std::move(phi)}};
}

MeasurementSetting hermitian_setting(ComplexVector input, ComplexMatrix op) {
  require_unit(input, "hermitian_setting input");
  if (op.rows() != input.size() || op.cols() != input.size()) {
    throw DimensionError("hermitian_setting: dimension mismatch");
  }
  if (!is_hermitian(op, kExactTol)) throw ArgumentError("hermitian_setting: observable not Hermitian");
  return {std::move(input), HermitianObservable{std::move(op)}};
}

std::string canonical_encoding(const MeasurementSetting& setting) {
  std::string out;
  append_u64(out, setting.dim());
  for (Eigen::Index i = 0; i < setting.input.size(); ++i) append_complex(out, setting.input(i));
  if (const auto* proj = std::get_if<ProjectorObservable>(&setting.observable)) {
    out.push_back('P');
    for (Eigen::Index i = 0; i < proj->phi.size(); ++i) append_complex(out, proj->phi(i));
  } else {
    const auto& op = std::get<HermitianObservable>(setting.observable).op;
    out.push_back('H');
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      for (Eigen::Index j = 0; j < op.cols(); ++j) append_complex(out, op(i, j));
    }
  }
  return out;
}

void BackendConfig::validate() const {
  if (mode == BackendMode::sampled && shots == 0) {
    throw ArgumentError("sampled backend requires at least one shot");
  }
}

std::string to_string(BackendMode mode) {
  return mode == BackendMode::exact ? "exact" : "sampled";
}

std::uint64_t setting_seed(std::uint64_t master_seed, const MeasurementSetting& setting) {
  return splitmix64(fnv1a64(canonical_encoding(setting)) ^ splitmix64(master_seed));
}

MeasurementOutcome exact_expectation(const QuantumChannel& ch, const MeasurementSetting& setting) {
  require_dims(ch, setting);
  const ComplexMatrix rho = output_state(ch, setting);
  double value = 0.0;
  if (const auto* proj = std::get_if<ProjectorObservable>(&setting.observable)) {
    value = proj->phi.dot(rho * proj->phi).real();
  } else {
    value = (std::get<HermitianObservable>(setting.observable).op * rho).trace().real();
  }
  return {value, 0.0, 0};
}

MeasurementOutcome sampled_expectation(const QuantumChannel& ch, const MeasurementSetting& setting,
                                       const BackendConfig& cfg) {
  if (cfg.mode != BackendMode::sampled) throw ArgumentError("sampled_expectation: backend is not sampled");
  cfg.validate();
  require_dims(ch, setting);
  std::mt19937_64 rng(setting_seed(cfg.master_seed, setting));
  const ComplexMatrix rho = output_state(ch, setting);
  const double n = static_cast<double>(cfg.shots);

  if (const auto* proj = std::get_if<ProjectorObservable>(&setting.observable)) {
    const double p = clamp_probability(proj->phi.dot(rho * proj->phi).real());
    std::binomial_distribution<std::uint64_t> draw(cfg.shots, p);
    const double p_hat = static_cast<double>(draw(rng)) / n;
    return {p_hat, std::sqrt(p_hat * (1.0 - p_hat) / n), cfg.shots};
  }

  // Eigenbasis measurement; probability lost by a trace-decreasing channel reads as outcome 0.
  const auto& op = std::get<HermitianObservable>(setting.observable).op;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op);
  const auto& eigenvalues = es.eigenvalues();
  const auto& eigenvectors = es.eigenvectors();
  const Eigen::Index k = eigenvalues.size();
  std::vector<double> probs(static_cast<std::size_t>(k) + 1);
  std::vector<double> values(static_cast<std::size_t>(k) + 1, 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const ComplexVector v = eigenvectors.col(i);
    probs[static_cast<std::size_t>(i)] = clamp_probability(v.dot(rho * v).real());
    values[static_cast<std::size_t>(i)] = eigenvalues(i);
    total += probs[static_cast<std::size_t>(i)];
  }
  if (total > 1.0 + kProbabilitySlack) {
    throw PhysicalityError("sampled backend: outcome probabilities sum above 1; channel is not CPTP");
  }
  probs.back() = std::max(0.0, 1.0 - total);

  // Multinomial draw as a chain of conditional binomials.
  std::uint64_t remaining = cfg.shots;
  double remaining_mass = 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    std::uint64_t count = remaining;
    if (i + 1 < probs.size()) {
      const double q = remaining_mass > 0.0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::uint64_t> draw(remaining, q);
      count = draw(rng);
    }
    remaining -= count;
    remaining_mass -= probs[i];
    const double c = static_cast<double>(count);
    sum += c * values[i];
    sum_sq += c * values[i] * values[i];
  }
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(variance / n), cfg.shots};
}

MeasurementOutcome measure(const QuantumChannel& ch, const MeasurementSetting& setting,
                           const BackendConfig& cfg) {
  return cfg.mode == BackendMode::exact ? exact_expectation(ch, setting)
                                        : sampled_expectation(ch, setting, cfg);
}

std::vector<ComplexVector> input_state_set(std::size_t dim) {
  if (dim < 2) throw ArgumentError("input_state_set: dimension must be at least 2");
  std::vector<ComplexVector> states;
  states.reserve(dim * dim);
  for (std::size_t a = 0; a < dim; ++a) states.push_back(basis_vector(a, dim));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a + 1; b < dim; ++b) {
      auto [plus, minus] = superposition_states(a, b, dim);
      states.push_back(std::move(plus));
      states.push_back(std::move(minus));
    }
  }
  return states;
}

double tp_complete(const std::map<std::size_t, double>& partials, std::size_t dim) {
  if (dim < 2 || partials.size() != dim - 1) {
    throw ArgumentError("tp_complete: need exactly D-1 partial expectations");
  }
  double sum = 0.0;
  for (const auto& [level, value] : partials) {
    if (level >= dim) throw ArgumentError("tp_complete: level out of range");
    sum += value;
  }
  return 1.0 - sum;
}

} // namespace sqpt
