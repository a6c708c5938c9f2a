#pragma once

#include <cstddef>

#include "sqpt/linalg.hpp"

namespace sqpt {

/// Operator basis a coefficient matrix is expressed in.
enum class ChiBasis {
  choi,  // Ẽ_ef = |e><f|, flattened e*D + f
  pauli, // tensor Paulis (1, X, Y, Z) per site, site 1 most significant
};

/// Row/column index of the Choi operator |a><b| in a D^2 x D^2 coefficient matrix.
constexpr std::size_t choi_flat(std::size_t a, std::size_t b, std::size_t dim) {
  return a * dim + b;
}

/// Process matrix of a channel over a fixed operator basis.
///
/// `dim` is the Hilbert-space dimension D; `entries` is D^2 x D^2. In the Choi
/// basis the element chi_{ef;gh} lives at (choi_flat(e,f), choi_flat(g,h)).
struct ChiMatrix {
  std::size_t dim = 0;
  ComplexMatrix entries;
  ChiBasis basis = ChiBasis::choi;

  Complex at(std::size_t e, std::size_t f, std::size_t g, std::size_t h) const {
    return entries(static_cast<Eigen::Index>(choi_flat(e, f, dim)),
                   static_cast<Eigen::Index>(choi_flat(g, h, dim)));
  }
  Complex& at(std::size_t e, std::size_t f, std::size_t g, std::size_t h) {
    return entries(static_cast<Eigen::Index>(choi_flat(e, f, dim)),
                   static_cast<Eigen::Index>(choi_flat(g, h, dim)));
  }
  Complex trace() const { return entries.trace(); }
};

/// Raw tomography data lambda_{ab;cd} = Tr[Ẽ_cd^† ε(Ẽ_ab)], same indexing as ChiMatrix.
struct LambdaMatrix {
  std::size_t dim = 0;
  ComplexMatrix entries;

  Complex at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return entries(static_cast<Eigen::Index>(choi_flat(a, b, dim)),
                   static_cast<Eigen::Index>(choi_flat(c, d, dim)));
  }
  Complex& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return entries(static_cast<Eigen::Index>(choi_flat(a, b, dim)),
                   static_cast<Eigen::Index>(choi_flat(c, d, dim)));
  }
};

} // namespace sqpt
