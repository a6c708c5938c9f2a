#include "sqpt/qudit.hpp"

#include <cmath>
#include <numbers>

#include "sqpt/errors.hpp"

namespace sqpt {

QuditIndexMap::QuditIndexMap(std::size_t sites, std::size_t local_dim)
    : sites_(sites), local_dim_(local_dim), total_dim_(1) {
  if (local_dim_ < 2) throw ArgumentError("QuditIndexMap: local dimension must be at least 2");
  for (std::size_t s = 0; s < sites_; ++s) total_dim_ *= local_dim_;
}

std::size_t QuditIndexMap::compose(std::span<const std::size_t> digits) const {
  if (digits.size() != sites_) throw ArgumentError("compose: wrong number of digits");
  std::size_t index = 0;
  for (std::size_t digit : digits) {
    if (digit >= local_dim_) throw ArgumentError("compose: digit out of range");
    index = index * local_dim_ + digit;
  }
  return index;
}

std::vector<std::size_t> QuditIndexMap::decompose(std::size_t index) const {
  if (index >= total_dim_) throw ArgumentError("decompose: index out of range");
  std::vector<std::size_t> digits(sites_);
  for (std::size_t s = sites_; s-- > 0;) {
    digits[s] = index % local_dim_;
    index /= local_dim_;
  }
  return digits;
}

GhzProfile ghz_profile(std::size_t a, std::size_t b, const QuditIndexMap& map) {
  GhzProfile profile;
  profile.a_digits = map.decompose(a);
  profile.b_digits = map.decompose(b);
  for (std::size_t s = 0; s < map.sites(); ++s) {
    if (profile.a_digits[s] != profile.b_digits[s]) profile.differing_sites.push_back(s);
  }
  profile.entangled_sites = profile.differing_sites.size();
  const std::size_t m = profile.entangled_sites;

  const double h = 1.0 / std::numbers::sqrt2;
  const auto dim = static_cast<Eigen::Index>(map.total_dim());

  // Direct |ab,±> in the full space (just |a> when a == b).
  ComplexVector direct_plus = ComplexVector::Zero(dim);
  ComplexVector direct_minus = ComplexVector::Zero(dim);
  std::size_t ghz_dim = 1;
  for (std::size_t s = 0; s < m; ++s) ghz_dim *= map.local_dim();
  profile.ghz_plus = ComplexVector::Zero(static_cast<Eigen::Index>(ghz_dim));
  profile.ghz_minus = ComplexVector::Zero(static_cast<Eigen::Index>(ghz_dim));

  if (m == 0) {
    direct_plus(static_cast<Eigen::Index>(a)) = 1.0;
    direct_minus(static_cast<Eigen::Index>(a)) = 1.0;
    profile.ghz_plus(0) = 1.0;
    profile.ghz_minus(0) = 1.0;
  } else {
    direct_plus(static_cast<Eigen::Index>(a)) = h;
    direct_plus(static_cast<Eigen::Index>(b)) = h;
    direct_minus(static_cast<Eigen::Index>(a)) = h;
    direct_minus(static_cast<Eigen::Index>(b)) = Complex(0.0, h);

    const QuditIndexMap sub(m, map.local_dim());
    std::vector<std::size_t> up(m);
    std::vector<std::size_t> down(m);
    for (std::size_t k = 0; k < m; ++k) {
      up[k] = profile.a_digits[profile.differing_sites[k]];
      down[k] = profile.b_digits[profile.differing_sites[k]];
    }
    const auto iu = static_cast<Eigen::Index>(sub.compose(up));
    const auto id = static_cast<Eigen::Index>(sub.compose(down));
    profile.ghz_plus(iu) = h;
    profile.ghz_plus(id) = h;
    profile.ghz_minus(iu) = h;
    profile.ghz_minus(id) = Complex(0.0, h);
  }

  // Factorized form: GHZ amplitude on the differing sites times the product
  // state |a_j> on the rest, embedded back into site order.
  ComplexVector factored_plus = ComplexVector::Zero(dim);
  ComplexVector factored_minus = ComplexVector::Zero(dim);
  const QuditIndexMap sub(m, map.local_dim());
  for (std::size_t x = 0; x < map.total_dim(); ++x) {
    const auto digits = map.decompose(x);
    bool agrees = true;
    std::vector<std::size_t> inner;
    inner.reserve(m);
    std::size_t k = 0;
    for (std::size_t s = 0; s < map.sites(); ++s) {
      if (k < m && profile.differing_sites[k] == s) {
        inner.push_back(digits[s]);
        ++k;
      } else if (digits[s] != profile.a_digits[s]) {
        agrees = false;
        break;
      }
    }
    if (!agrees) continue;
    const auto g = static_cast<Eigen::Index>(sub.compose(inner));
    factored_plus(static_cast<Eigen::Index>(x)) = profile.ghz_plus(g);
    factored_minus(static_cast<Eigen::Index>(x)) = profile.ghz_minus(g);
  }
  profile.factorization_error = std::max((direct_plus - factored_plus).cwiseAbs().maxCoeff(),
                                         (direct_minus - factored_minus).cwiseAbs().maxCoeff());
  return profile;
}

} // namespace sqpt
