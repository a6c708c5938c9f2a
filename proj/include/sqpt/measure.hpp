#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sqpt/linalg.hpp"
#include "sqpt/qchannel.hpp"

namespace sqpt {

/// Projective measurement onto |φ><φ|.
struct ProjectorObservable {
  ComplexVector phi;
};

/// Expectation of a Hermitian operator, measured in its eigenbasis.
struct HermitianObservable {
  ComplexMatrix op;
};

using Observable = std::variant<ProjectorObservable, HermitianObservable>;

/// Prepare |ψ>, send it through the channel, measure the observable.
struct MeasurementSetting {
  ComplexVector input;
  Observable observable;

  std::size_t dim() const { return static_cast<std::size_t>(input.size()); }
  bool is_projector() const { return std::holds_alternative<ProjectorObservable>(observable); }
};

MeasurementSetting projector_setting(ComplexVector input, ComplexVector phi);
MeasurementSetting hermitian_setting(ComplexVector input, ComplexMatrix op);

/// Stable byte encoding: dimension, observable kind, amplitudes rounded to 12 decimals.
/// Used both as the dedup key and as the input of per-setting seed derivation.
std::string canonical_encoding(const MeasurementSetting& setting);

struct MeasurementOutcome {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t shots = 0;
};

enum class BackendMode { exact, sampled };

struct BackendConfig {
  BackendMode mode = BackendMode::exact;
  std::uint64_t shots = 0;
  std::uint64_t master_seed = 0;

  static BackendConfig exact() { return {}; }
  static BackendConfig sampled(std::uint64_t shots, std::uint64_t seed) {
    return {BackendMode::sampled, shots, seed};
  }
  /// Throws ArgumentError when sampled mode has zero shots.
  void validate() const;
};

std::string to_string(BackendMode mode);

/// Tr[O ε(|ψ><ψ|)] with zero error.
MeasurementOutcome exact_expectation(const QuantumChannel& ch, const MeasurementSetting& setting);

/// Finite-shot estimate, deterministic in (cfg.master_seed, canonical_encoding(setting)).
MeasurementOutcome sampled_expectation(const QuantumChannel& ch, const MeasurementSetting& setting,
                                       const BackendConfig& cfg);

/// Dispatch on cfg.mode.
MeasurementOutcome measure(const QuantumChannel& ch, const MeasurementSetting& setting,
                           const BackendConfig& cfg);

std::uint64_t setting_seed(std::uint64_t master_seed, const MeasurementSetting& setting);

/// |a> for every level, then (|a>+|b>)/√2 and (|a>+i|b>)/√2 for every a < b: D^2 states.
std::vector<ComplexVector> input_state_set(std::size_t dim);

/// Missing diagonal-projector expectation of a trace-preserving channel: 1 - Σ partials.
double tp_complete(const std::map<std::size_t, double>& partials, std::size_t dim);

} // namespace sqpt
