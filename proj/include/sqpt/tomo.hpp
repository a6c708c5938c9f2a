#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sqpt/chi.hpp"
#include "sqpt/kernels.hpp"
#include "sqpt/measure.hpp"
#include "sqpt/qchannel.hpp"

namespace sqpt {

struct LevelPair {
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Target chi_{ef;gh} in Choi indexing.
struct ElementIndex {
  std::size_t e = 0;
  std::size_t f = 0;
  std::size_t g = 0;
  std::size_t h = 0;

  bool is_diagonal() const { return e == g && f == h; }
  friend bool operator==(const ElementIndex&, const ElementIndex&) = default;
};

/// lambda_{ab;cd} = chi_{ca;db}, so the chi element reached through lambda indices.
constexpr ElementIndex element_from_lambda(std::size_t a, std::size_t b, std::size_t c,
                                           std::size_t d) {
  return {c, a, d, b};
}

/// δ_ec δ_fa δ_gd δ_hb
int beta_entry(LevelPair ef, LevelPair gh, LevelPair ab, LevelPair cd);

/// The linear map lambda = β chi as an index bijection on the D^4 flattened pairs.
///
/// A flattened pair (ab;cd) is choi_flat(a,b)*D^2 + choi_flat(c,d), which is the
/// row-major position of the entry in a D^2 x D^2 matrix.
class BetaPermutation {
public:
  explicit BetaPermutation(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return forward_.size(); }

  /// (ef;gh) -> (ab;cd) with a=f, b=h, c=e, d=g.
  std::size_t forward(std::size_t chi_pair) const { return forward_[chi_pair]; }
  /// Transpose, which is also the inverse.
  std::size_t transpose(std::size_t lambda_pair) const { return inverse_[lambda_pair]; }

  /// lambda = β chi on row-major flattened vectors.
  ComplexVector apply(const ComplexVector& chi) const;
  /// chi = β^T lambda.
  ComplexVector apply_transpose(const ComplexVector& lambda) const;

  /// Dense D^4 x D^4 matrix, rows (ab;cd), columns (ef;gh). Only for D <= 3.
  RealMatrix dense() const;

private:
  std::size_t dim_;
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

BetaPermutation beta_permutation(std::size_t dim);

/// Row-major flattening of a D^2 x D^2 matrix into a D^4 vector, and back.
ComplexVector flatten_pairs(const ComplexMatrix& m);
ComplexMatrix unflatten_pairs(const ComplexVector& v, std::size_t dim);

/// lambda_{ab;cd} = Tr[Ẽ_cd^† ε(Ẽ_ab)], applying the Kraus sum to Ẽ_ab directly.
LambdaMatrix lambda_oracle(const QuantumChannel& ch);

/// chi_{ca;db} = lambda_{ab;cd} by index permutation.
ChiMatrix chi_from_lambda(const LambdaMatrix& lambda);

/// Same result through chi = β^T lambda on the flattened vector system.
ChiMatrix chi_from_lambda_beta(const LambdaMatrix& lambda, const BetaPermutation& beta);

LambdaMatrix lambda_from_chi(const ChiMatrix& chi);

/// One r_i s_j product of the double sum, attached to a deduplicated setting.
struct PlanTerm {
  std::size_t setting = 0;
  std::size_t input_term = 0;
  std::size_t observable_term = 0;
  Complex weight;
};

struct PlannedSetting {
  MeasurementSetting setting;
  /// Inferred from the other computational projectors by normalization, never measured.
  bool inferred = false;
};

/// The measurements needed for a single chi element.
///
/// The input operator Ẽ_fh and the observable Ẽ_eg^† are each expanded in at
/// most four pure states; the terms are the cross product of the two expansions.
struct MeasurementPlan {
  std::size_t dim = 0;
  ElementIndex target;
  std::vector<PlannedSetting> settings;
  std::vector<PlanTerm> terms;
  bool tp_shortcut = false;

  /// Settings that carry weight in the double sum (excludes auxiliary completion settings).
  std::size_t weighted_setting_count() const;
  /// Settings that must actually be measured.
  std::size_t measured_setting_count() const;
  /// Weight of each setting with repeated (state, projector) terms summed.
  std::vector<Complex> setting_weights() const;
};

/// Without tp_shortcut the plan has 1, 4 or 16 settings (both operators
/// diagonal, exactly one diagonal, neither). With tp_shortcut, settings whose
/// projector is |D-1> are marked inferred and the other computational
/// projectors for the same input are added as auxiliary settings.
MeasurementPlan plan_element(const ElementIndex& target, std::size_t dim, bool tp_shortcut = false);

struct ChiElementEstimate {
  Complex value;
  double std_error = 0.0;
  std::size_t settings_used = 0;
  std::string backend;
};

ChiElementEstimate reconstruct_element(const MeasurementPlan& plan, const QuantumChannel& ch,
                                       const BackendConfig& cfg,
                                       Execution exec = Execution::parallel);

enum class SqptStrategy { choi_four, product_hermitian };

std::string to_string(SqptStrategy strategy);

struct FullSqptOptions {
  SqptStrategy strategy = SqptStrategy::choi_four;
  bool tp_shortcut = false;
  /// Local dimension d for product-hermitian; 0 means a single site of dimension D.
  std::size_t local_dim = 0;
  Execution exec = Execution::parallel;
};

struct FullSqptResult {
  ChiMatrix chi;
  /// Propagated standard errors, same layout as chi.entries (zero under the exact backend).
  RealMatrix std_errors;
  std::size_t distinct_settings = 0;
  std::size_t measured_settings = 0;
  std::size_t inferred_settings = 0;
};

FullSqptResult full_sqpt(const QuantumChannel& ch, const BackendConfig& cfg,
                         const FullSqptOptions& options = {});

} // namespace sqpt
