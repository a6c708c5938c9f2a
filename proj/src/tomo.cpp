#include "sqpt/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

void require_level(std::size_t level, std::size_t dim) {
  if (level >= dim) {
    throw ArgumentError("level index " + std::to_string(level) + " out of range for dimension " +
                        std::to_string(dim));
  }
}

bool is_top_level_projector(const MeasurementSetting& s) {
  const auto* proj = std::get_if<ProjectorObservable>(&s.observable);
  if (proj == nullptr) return false;
  const Eigen::Index top = proj->phi.size() - 1;
  return std::abs(std::abs(proj->phi(top)) - 1.0) <= kExactTol &&
         proj->phi.head(top).norm() <= kExactTol;
}

// Deduplicated settings keyed by canonical encoding, with the normalization
// shortcut layered on top.
class SettingTable {
public:
  std::size_t add(MeasurementSetting setting) {
    std::string key = canonical_encoding(setting);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::size_t idx = entries_.size();
    entries_.push_back({PlannedSetting{std::move(setting), false}, {}});
    index_.emplace(std::move(key), idx);
    return idx;
  }

  // Mark every |D-1> projector setting as inferred from the other D-1 computational projectors.
  void apply_tp_shortcut(std::size_t dim) {
    const std::size_t original = entries_.size();
    for (std::size_t i = 0; i < original; ++i) {
      if (!is_top_level_projector(entries_[i].planned.setting)) continue;
      entries_[i].planned.inferred = true;
      const ComplexVector input = entries_[i].planned.setting.input;
      std::vector<std::size_t> sources;
      for (std::size_t a = 0; a + 1 < dim; ++a) {
        sources.push_back(add(projector_setting(input, basis_vector(a, dim))));
      }
      entries_[i].completion_from = std::move(sources);
    }
  }

  std::size_t size() const { return entries_.size(); }
  const PlannedSetting& planned(std::size_t i) const { return entries_[i].planned; }
  const std::vector<std::size_t>& completion_from(std::size_t i) const {
    return entries_[i].completion_from;
  }

  std::vector<std::size_t> measured_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!entries_[i].planned.inferred) out.push_back(i);
    }
    return out;
  }

  std::vector<PlannedSetting> planned_settings() const {
    std::vector<PlannedSetting> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.planned);
    return out;
  }

private:
  struct Entry {
    PlannedSetting planned;
    std::vector<std::size_t> completion_from;
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Measured outcomes scattered back to table positions (inferred slots left empty).
std::vector<MeasurementOutcome> measure_table(const SettingTable& table, const QuantumChannel& ch,
                                              const BackendConfig& cfg, Execution exec) {
  const auto measured = table.measured_indices();
  std::vector<MeasurementSetting> settings;
  settings.reserve(measured.size());
  for (std::size_t i : measured) settings.push_back(table.planned(i).setting);
  const auto outcomes = evaluate_settings(ch, settings, cfg, exec);
  std::vector<MeasurementOutcome> out(table.size());
  for (std::size_t k = 0; k < measured.size(); ++k) out[measured[k]] = outcomes[k];
  return out;
}

struct Combined {
  Complex value;
  double variance = 0.0;
};

// Σ w_k outcome_k with inferred outcomes expanded as 1 - Σ sources, so the
// variance is propagated over independent measured settings only.
Combined combine(const std::vector<std::pair<std::size_t, Complex>>& weights,
                 const SettingTable& table, const std::vector<MeasurementOutcome>& outcomes) {
  std::unordered_map<std::size_t, Complex> effective;
  Complex constant{0.0};
  for (const auto& [idx, w] : weights) {
    if (table.planned(idx).inferred) {
      constant += w;
      for (std::size_t src : table.completion_from(idx)) effective[src] -= w;
    } else {
      effective[idx] += w;
    }
  }
  // Accumulate in table order so the sum does not depend on hash iteration order.
  std::vector<std::pair<std::size_t, Complex>> ordered(effective.begin(), effective.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Combined out{constant, 0.0};
  for (const auto& [idx, w] : ordered) {
    const auto& o = outcomes[idx];
    out.value += w * o.value;
    out.variance += std::norm(w) * o.std_error * o.std_error;
  }
  return out;
}

std::string backend_descriptor(const BackendConfig& cfg) {
  if (cfg.mode == BackendMode::exact) return "exact";
  return "sampled(shots=" + std::to_string(cfg.shots) + ",seed=" + std::to_string(cfg.master_seed) + ")";
}

void require_tp_for_shortcut(const QuantumChannel& ch) {
  if (!ch.is_trace_preserving()) {
    throw PhysicalityError("tp shortcut requested for a channel that is not trace preserving");
  }
}

std::vector<std::pair<std::size_t, Complex>> element_terms(const ElementIndex& target,
                                                          std::size_t dim, SettingTable& table) {
  const PureStateExpansion input = expand_choi_four({target.f, target.h, dim});
  const PureStateExpansion observable = expand_choi_four({target.g, target.e, dim});
  std::vector<std::pair<std::size_t, Complex>> out;
  out.reserve(input.size() * observable.size());
  for (const auto& in : input.terms()) {
    for (const auto& obs : observable.terms()) {
      const std::size_t idx = table.add(projector_setting(in.state, obs.state));
      out.emplace_back(idx, in.weight * obs.weight);
    }
  }
  return out;
}

FullSqptResult full_choi_four(const QuantumChannel& ch, const BackendConfig& cfg,
                              const FullSqptOptions& options) {
  const std::size_t dim = ch.dim();
  const std::size_t n = dim * dim;
  SettingTable table;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> element_weights;
  element_weights.reserve(n * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const ElementIndex target{row / dim, row % dim, col / dim, col % dim};
      element_weights.push_back(element_terms(target, dim, table));
    }
  }
  if (options.tp_shortcut) table.apply_tp_shortcut(dim);
  const auto outcomes = measure_table(table, ch, cfg, options.exec);

  const auto nn = static_cast<Eigen::Index>(n);
  FullSqptResult result;
  result.chi = ChiMatrix{dim, ComplexMatrix::Zero(nn, nn), ChiBasis::choi};
  result.std_errors = RealMatrix::Zero(nn, nn);
  for (std::size_t k = 0; k < element_weights.size(); ++k) {
    const Combined c = combine(element_weights[k], table, outcomes);
    const auto row = static_cast<Eigen::Index>(k / n);
    const auto col = static_cast<Eigen::Index>(k % n);
    result.chi.entries(row, col) = c.value;
    result.std_errors(row, col) = std::sqrt(c.variance);
  }
  result.distinct_settings = table.size();
  result.measured_settings = table.measured_indices().size();
  result.inferred_settings = result.distinct_settings - result.measured_settings;
  return result;
}

std::size_t site_count(std::size_t dim, std::size_t local_dim) {
  if (local_dim < 2) throw ArgumentError("product-hermitian: local dimension must be at least 2");
  std::size_t sites = 0;
  std::size_t total = 1;
  while (total < dim) {
    total *= local_dim;
    ++sites;
  }
  if (total != dim) {
    throw DimensionError("product-hermitian: dimension " + std::to_string(dim) +
                         " is not a power of local dimension " + std::to_string(local_dim));
  }
  return sites;
}

FullSqptResult full_product_hermitian(const QuantumChannel& ch, const BackendConfig& cfg,
                                      const FullSqptOptions& options) {
  const std::size_t dim = ch.dim();
  const std::size_t local = options.local_dim == 0 ? dim : options.local_dim;
  const std::size_t sites = site_count(dim, local);
  const std::size_t n = dim * dim;
  const auto nn = static_cast<Eigen::Index>(n);

  // Product input states from the local D^2 set, site 0 most significant.
  const auto local_states = input_state_set(local);
  std::vector<ComplexVector> states{ComplexVector::Ones(1)};
  for (std::size_t s = 0; s < sites; ++s) {
    std::vector<ComplexVector> next;
    next.reserve(states.size() * local_states.size());
    for (const auto& head : states) {
      for (const auto& tail : local_states) next.push_back(kron(head, tail));
    }
    states = std::move(next);
  }
  const HermitianBasis basis = tensor_basis(sud_generators(local), sites);

  // Observable 0 is the identity; its outcome is 1 for a trace-preserving channel.
  std::vector<MeasurementSetting> measured;
  measured.reserve(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      if (options.tp_shortcut && k == 0) continue;
      measured.push_back(hermitian_setting(states[m], basis.operators()[k]));
    }
  }
  const auto outcomes = evaluate_settings(ch, measured, cfg, options.exec);

  RealMatrix values(nn, nn);
  RealMatrix variances(nn, nn);
  std::size_t next = 0;
  for (Eigen::Index m = 0; m < nn; ++m) {
    for (Eigen::Index k = 0; k < nn; ++k) {
      if (options.tp_shortcut && k == 0) {
        values(m, k) = 1.0;
        variances(m, k) = 0.0;
        continue;
      }
      const auto& o = outcomes[next++];
      values(m, k) = o.value;
      variances(m, k) = o.std_error * o.std_error;
    }
  }

  // lambda_{ab;cd} = Σ_mn r^{ab}_m s^{cd}_n M_mn, i.e. Λ = R M S^T.
  ComplexMatrix r(nn, nn);
  ComplexMatrix s(nn, nn);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const auto row = static_cast<Eigen::Index>(choi_flat(a, b, dim));
      const ComplexMatrix op = choi_op({a, b, dim});
      const auto in = expand_operator_in_states(op, states);
      const auto obs = expand_in_hermitian_basis(op.adjoint(), basis);
      for (Eigen::Index m = 0; m < nn; ++m) {
        r(row, m) = in.terms()[static_cast<std::size_t>(m)].weight;
        s(row, m) = obs.terms()[static_cast<std::size_t>(m)].weight;
      }
    }
  }
  const ComplexMatrix values_c = values.cast<Complex>();
  LambdaMatrix lambda{dim, r * values_c * s.transpose()};
  const RealMatrix lambda_var =
      r.cwiseAbs2() * variances * s.cwiseAbs2().transpose();

  FullSqptResult result;
  result.chi = chi_from_lambda(lambda);
  result.std_errors = RealMatrix::Zero(nn, nn);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t d = 0; d < dim; ++d) {
          result.std_errors(static_cast<Eigen::Index>(choi_flat(c, a, dim)),
                            static_cast<Eigen::Index>(choi_flat(d, b, dim))) =
              std::sqrt(lambda_var(static_cast<Eigen::Index>(choi_flat(a, b, dim)),
                                   static_cast<Eigen::Index>(choi_flat(c, d, dim))));
        }
      }
    }
  }
  result.distinct_settings = n * n;
  result.measured_settings = measured.size();
  result.inferred_settings = result.distinct_settings - result.measured_settings;
  return result;
}

} // namespace

int beta_entry(LevelPair ef, LevelPair gh, LevelPair ab, LevelPair cd) {
  return (ef.first == cd.first && ef.second == ab.first && gh.first == cd.second &&
          gh.second == ab.second)
             ? 1
             : 0;
}

BetaPermutation::BetaPermutation(std::size_t dim) : dim_(dim) {
  if (dim < 1) throw ArgumentError("beta_permutation: dimension must be positive");
  const std::size_t d2 = dim * dim;
  forward_.resize(d2 * d2);
  inverse_.resize(d2 * d2);
  for (std::size_t e = 0; e < dim; ++e) {
    for (std::size_t f = 0; f < dim; ++f) {
      for (std::size_t g = 0; g < dim; ++g) {
        for (std::size_t h = 0; h < dim; ++h) {
          const std::size_t chi_pair = choi_flat(e, f, dim) * d2 + choi_flat(g, h, dim);
          const std::size_t lambda_pair = choi_flat(f, h, dim) * d2 + choi_flat(e, g, dim);
          forward_[chi_pair] = lambda_pair;
          inverse_[lambda_pair] = chi_pair;
        }
      }
    }
  }
}

ComplexVector BetaPermutation::apply(const ComplexVector& chi) const {
  if (static_cast<std::size_t>(chi.size()) != size()) throw DimensionError("beta: vector size mismatch");
  ComplexVector out(chi.size());
  for (std::size_t i = 0; i < size(); ++i) {
    out(static_cast<Eigen::Index>(forward_[i])) = chi(static_cast<Eigen::Index>(i));
  }
  return out;
}

ComplexVector BetaPermutation::apply_transpose(const ComplexVector& lambda) const {
  if (static_cast<std::size_t>(lambda.size()) != size()) throw DimensionError("beta: vector size mismatch");
  ComplexVector out(lambda.size());
  for (std::size_t i = 0; i < size(); ++i) {
    out(static_cast<Eigen::Index>(inverse_[i])) = lambda(static_cast<Eigen::Index>(i));
  }
  return out;
}

RealMatrix BetaPermutation::dense() const {
  if (dim_ > 3) throw ArgumentError("beta: dense materialization only for D <= 3");
  const auto n = static_cast<Eigen::Index>(size());
  RealMatrix m = RealMatrix::Zero(n, n);
  for (std::size_t col = 0; col < size(); ++col) {
    m(static_cast<Eigen::Index>(forward_[col]), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return m;
}

BetaPermutation beta_permutation(std::size_t dim) { return BetaPermutation(dim); }

ComplexVector flatten_pairs(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

ComplexMatrix unflatten_pairs(const ComplexVector& v, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim * dim);
  if (v.size() != n * n) throw DimensionError("unflatten_pairs: size mismatch");
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  }
  return m;
}

LambdaMatrix lambda_oracle(const QuantumChannel& ch) {
  const std::size_t dim = ch.dim();
  const auto n = static_cast<Eigen::Index>(dim * dim);
  LambdaMatrix lambda{dim, ComplexMatrix::Zero(n, n)};
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const ComplexMatrix out = apply_kraus_map(ch, choi_op({a, b, dim}));
      // Tr[Ẽ_cd^† X] = X(c, d)
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t d = 0; d < dim; ++d) {
          lambda.at(a, b, c, d) = out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d));
        }
      }
    }
  }
  return lambda;
}

ChiMatrix chi_from_lambda(const LambdaMatrix& lambda) {
  const std::size_t dim = lambda.dim;
  const auto n = static_cast<Eigen::Index>(dim * dim);
  ChiMatrix chi{dim, ComplexMatrix(n, n), ChiBasis::choi};
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t d = 0; d < dim; ++d) chi.at(c, a, d, b) = lambda.at(a, b, c, d);
      }
    }
  }
  return chi;
}

ChiMatrix chi_from_lambda_beta(const LambdaMatrix& lambda, const BetaPermutation& beta) {
  if (beta.dim() != lambda.dim) throw DimensionError("chi_from_lambda_beta: dimension mismatch");
  const ComplexVector chi = beta.apply_transpose(flatten_pairs(lambda.entries));
  return ChiMatrix{lambda.dim, unflatten_pairs(chi, lambda.dim), ChiBasis::choi};
}

LambdaMatrix lambda_from_chi(const ChiMatrix& chi) {
  if (chi.basis != ChiBasis::choi) throw ArgumentError("lambda_from_chi: chi must be in the Choi basis");
  const std::size_t dim = chi.dim;
  const auto n = static_cast<Eigen::Index>(dim * dim);
  LambdaMatrix lambda{dim, ComplexMatrix(n, n)};
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t d = 0; d < dim; ++d) lambda.at(a, b, c, d) = chi.at(c, a, d, b);
      }
    }
  }
  return lambda;
}

std::size_t MeasurementPlan::weighted_setting_count() const {
  std::vector<bool> used(settings.size(), false);
  for (const auto& t : terms) used[t.setting] = true;
  return static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
}

std::size_t MeasurementPlan::measured_setting_count() const {
  return static_cast<std::size_t>(std::count_if(settings.begin(), settings.end(),
                                                [](const PlannedSetting& s) { return !s.inferred; }));
}

std::vector<Complex> MeasurementPlan::setting_weights() const {
  std::vector<Complex> out(settings.size(), Complex(0.0));
  for (const auto& t : terms) out[t.setting] += t.weight;
  return out;
}

MeasurementPlan plan_element(const ElementIndex& target, std::size_t dim, bool tp_shortcut) {
  require_level(target.e, dim);
  require_level(target.f, dim);
  require_level(target.g, dim);
  require_level(target.h, dim);

  const PureStateExpansion input = expand_choi_four({target.f, target.h, dim});
  const PureStateExpansion observable = expand_choi_four({target.g, target.e, dim});

  SettingTable table;
  MeasurementPlan plan;
  plan.dim = dim;
  plan.target = target;
  plan.tp_shortcut = tp_shortcut;
  for (std::size_t i = 0; i < input.size(); ++i) {
    for (std::size_t j = 0; j < observable.size(); ++j) {
      const auto& in = input.terms()[i];
      const auto& obs = observable.terms()[j];
      const std::size_t idx = table.add(projector_setting(in.state, obs.state));
      plan.terms.push_back({idx, i, j, in.weight * obs.weight});
    }
  }
  if (tp_shortcut) table.apply_tp_shortcut(dim);
  plan.settings = table.planned_settings();
  return plan;
}

ChiElementEstimate reconstruct_element(const MeasurementPlan& plan, const QuantumChannel& ch,
                                       const BackendConfig& cfg, Execution exec) {
  if (plan.dim != ch.dim()) throw DimensionError("reconstruct_element: plan and channel dimensions differ");
  cfg.validate();
  if (plan.tp_shortcut) require_tp_for_shortcut(ch);

  // Rebuild the table so inferred settings know their completion sources.
  SettingTable table;
  for (const auto& s : plan.settings) table.add(s.setting);
  if (plan.tp_shortcut) table.apply_tp_shortcut(plan.dim);
  if (table.size() != plan.settings.size()) throw std::logic_error("reconstruct_element: inconsistent plan");

  const auto outcomes = measure_table(table, ch, cfg, exec);
  std::vector<std::pair<std::size_t, Complex>> weights;
  weights.reserve(plan.terms.size());
  for (const auto& t : plan.terms) weights.emplace_back(t.setting, t.weight);
  const Combined c = combine(weights, table, outcomes);
  return {c.value, std::sqrt(c.variance), table.measured_indices().size(), backend_descriptor(cfg)};
}

std::string to_string(SqptStrategy strategy) {
  return strategy == SqptStrategy::choi_four ? "choi-four" : "product-hermitian";
}

FullSqptResult full_sqpt(const QuantumChannel& ch, const BackendConfig& cfg,
                         const FullSqptOptions& options) {
  cfg.validate();
  if (options.tp_shortcut) require_tp_for_shortcut(ch);
  return options.strategy == SqptStrategy::choi_four ? full_choi_four(ch, cfg, options)
                                                     : full_product_hermitian(ch, cfg, options);
}

} // namespace sqpt
