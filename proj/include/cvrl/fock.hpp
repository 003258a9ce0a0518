#pragma once

// Dense linear algebra on truncated n-mode Fock spaces.
//
// Basis ordering for a product |i1 i2 ... im> is row-major: index =
// i1*N^(m-1) + ... + im, which matches Kronecker products A1 ⊗ ... ⊗ Am.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvrl/error.hpp"

namespace cvrl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Largest matrix side any constructor will allocate (8^4 by default).
inline constexpr std::int64_t kDefaultMaxSide = 4096;

/// Square complex matrix on the truncated Fock space of `modes` modes.
class FockOperator {
 public:
  static constexpr double kHermitianTolerance = 1e-12;

  FockOperator(int cutoff, int modes, Matrix data, bool hermitian = false);

  static FockOperator identity(int cutoff, int modes = 1);
  static FockOperator zero(int cutoff, int modes = 1);

  int cutoff() const { return cutoff_; }
  int modes() const { return modes_; }
  Eigen::Index side() const { return data_.rows(); }
  bool hermitian() const { return hermitian_; }
  const Matrix& matrix() const { return data_; }

  Complex trace() const { return data_.trace(); }
  FockOperator adjoint() const;

  /// Largest |A - A^dagger| entry.
  double hermiticity_defect() const;

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(Complex s, const FockOperator& a);

 private:
  int cutoff_;
  int modes_;
  Matrix data_;
  bool hermitian_;
};

/// Density operator (PSD, trace one) with the probability lost to truncation.
class DensityState {
 public:
  static constexpr double kEigenTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-8;

  /// Validates Hermiticity, PSD and tr + tail_mass == 1.
  explicit DensityState(FockOperator op, double tail_mass = 0.0);

  /// Skips the eigenvalue check; the caller guarantees a PSD matrix.
  static DensityState trusted(FockOperator op, double tail_mass);

  static DensityState pure(const Vector& psi, int cutoff, int modes = 1);
  static DensityState fock(int n, int cutoff);
  static DensityState maximally_mixed(int cutoff, int modes = 1);

  const FockOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int cutoff() const { return op_.cutoff(); }
  int modes() const { return op_.modes(); }
  Eigen::Index side() const { return op_.side(); }
  double tail_mass() const { return tail_mass_; }

 private:
  struct Trusted {};
  DensityState(Trusted, FockOperator op, double tail_mass);

  FockOperator op_;
  double tail_mass_;
};

// ---------------------------------------------------------------------------
// Spectral utilities

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns; first nonzero component of each is positive real
};

/// Hermitian eigendecomposition with deterministic eigenvector phases.
Eigensystem hermitian_eigen(const Matrix& a);
RealVector hermitian_eigenvalues(const Matrix& a);

// ---------------------------------------------------------------------------
// Operators

std::pair<FockOperator, FockOperator> ladder_ops(int cutoff);

FockOperator tensor(const FockOperator& a, const FockOperator& b,
                    std::int64_t max_side = kDefaultMaxSide);
DensityState tensor(const DensityState& a, const DensityState& b,
                    std::int64_t max_side = kDefaultMaxSide);
/// rho^{⊗m}.
DensityState tensor_power(const DensityState& rho, int m,
                          std::int64_t max_side = kDefaultMaxSide);

FockOperator swap_operator(int cutoff);

/// Index map of V_m: V_m |j1 j2 ... jm> = |j2 ... jm j1>, so that
/// tr[V_m (A1 ⊗ ... ⊗ Am)] = tr[A1 A2 ... Am]. Entry i holds the column
/// index of the single 1 in row i.
std::vector<Eigen::Index> cyclic_shift_permutation(int m, int cutoff,
                                                   std::int64_t max_side = kDefaultMaxSide);

/// V_m as a dense operator (V_1 = identity, V_2 = swap).
FockOperator cyclic_shift_operator(int m, int cutoff,
                                   std::int64_t max_side = kDefaultMaxSide);

/// tr[W (A ⊗ B)] without materializing the Kronecker product.
Complex trace_with_product(const Matrix& w, const Matrix& a, const Matrix& b);

/// tr[W rho^{⊗m}] for m = 1, 2, 4.
Complex trace_with_power(const Matrix& w, const Matrix& rho, int m);

// ---------------------------------------------------------------------------
// Scalars

struct Norms {
  double trace_norm;
  double op_norm;
  double hs_norm;
};

Norms norms(const FockOperator& a);

enum class LogBase { kNats, kBits };

double von_neumann_entropy(const DensityState& rho, LogBase base = LogBase::kNats);
double purity(const DensityState& rho);

// ---------------------------------------------------------------------------
// Binary serialization: "FOCKOP1\0", cutoff u32, modes u32, then row-major
// (re, im) float64 pairs, all little-endian.

void write_operator(std::ostream& out, const FockOperator& op);
FockOperator read_operator(std::istream& in);

}  // namespace cvrl
