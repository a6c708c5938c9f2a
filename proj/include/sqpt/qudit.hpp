#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sqpt/linalg.hpp"

namespace sqpt {

/// Base-d positional map between a level of a d^N system and its local digit
/// string. Site 0 is the most significant digit, matching |a1> ⊗ ... ⊗ |aN>.
class QuditIndexMap {
public:
  QuditIndexMap(std::size_t sites, std::size_t local_dim);

  std::size_t sites() const { return sites_; }
  std::size_t local_dim() const { return local_dim_; }
  std::size_t total_dim() const { return total_dim_; }

  std::size_t compose(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decompose(std::size_t index) const;

private:
  std::size_t sites_;
  std::size_t local_dim_;
  std::size_t total_dim_;
};

/// Entanglement structure of the pair states |ab,±>.
///
/// On the M sites where the digit strings of a and b differ the states are the
/// GHZ-type (|↑..↑> + |↓..↓>)/√2 and (|↑..↑> + i|↓..↓>)/√2 with ↑ = a's digits
/// and ↓ = b's digits; every other site is in the product state |a_j>.
struct GhzProfile {
  std::size_t entangled_sites = 0; // M
  std::vector<std::size_t> differing_sites;
  std::vector<std::size_t> a_digits;
  std::vector<std::size_t> b_digits;
  ComplexVector ghz_plus;  // over the differing sites, dimension d^M
  ComplexVector ghz_minus;
  /// max |direct - factorized| over both states
  double factorization_error = 0.0;

  bool factorizes(double tol) const { return factorization_error <= tol; }
};

GhzProfile ghz_profile(std::size_t a, std::size_t b, const QuditIndexMap& map);

} // namespace sqpt
