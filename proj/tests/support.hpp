#pragma once

// Helpers shared by the unit tests.

#include <cstdint>
#include <cstdlib>
#include <string>

#include "prodsys/linalg.hpp"
#include "prodsys/random.hpp"

namespace test {

using prodsys::gen::Rng;
using prodsys::linalg::ComplexMatrix;
using prodsys::linalg::ComplexVector;
using prodsys::linalg::Subspace;

/// PRODSYS_SEED when set, otherwise 0; mixed with a per-test salt.
inline Rng rng_for(std::uint64_t salt) {
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("PRODSYS_SEED")) seed = std::stoull(env);
  return Rng(seed ^ (0xD1B54A32D192ED03ULL * (salt + 1)));
}

/// Random subspace of C^ambient of the given rank (generic column span).
inline Subspace random_subspace(Rng& rng, std::size_t ambient, std::size_t rank) {
  if (rank == 0) return Subspace::zero(ambient);
  return prodsys::linalg::orthonormalize(prodsys::gen::complex_matrix(rng, ambient, rank));
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexVector basis_vector(std::size_t dim, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

inline ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

}  // namespace test
