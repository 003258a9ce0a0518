#include "cvrl/fock.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace cvrl {

namespace {

std::int64_t checked_side(int cutoff, int modes, std::int64_t max_side) {
  std::int64_t side = 1;
  for (int i = 0; i < modes; ++i) {
    side *= cutoff;
    if (side > max_side) {
      throw ResourceError(fmt::format("operator side {}^{} exceeds budget {}", cutoff, modes,
                                      max_side));
    }
  }
  return side;
}

void require_cutoff(int cutoff) {
  if (cutoff < 2) throw InvalidDimension(fmt::format("cutoff must be >= 2, got {}", cutoff));
}

}  // namespace

// ---------------------------------------------------------------------------

FockOperator::FockOperator(int cutoff, int modes, Matrix data, bool hermitian)
    : cutoff_(cutoff), modes_(modes), data_(std::move(data)), hermitian_(hermitian) {
  if (cutoff < 1 || modes < 1) {
    throw InvalidDimension(fmt::format("bad cutoff/modes ({}, {})", cutoff, modes));
  }
  std::int64_t side = 1;
  for (int i = 0; i < modes; ++i) side *= cutoff;
  if (data_.rows() != side || data_.cols() != side) {
    throw InvalidDimension(fmt::format("matrix is {}x{}, expected side {} for cutoff {}^{}",
                                       data_.rows(), data_.cols(), side, cutoff, modes));
  }
  if (hermitian_ && hermiticity_defect() > kHermitianTolerance) {
    throw InvalidState(fmt::format("operator flagged Hermitian has defect {:.3e}",
                                   hermiticity_defect()));
  }
}

FockOperator FockOperator::identity(int cutoff, int modes) {
  const auto side = checked_side(cutoff, modes, kDefaultMaxSide);
  return {cutoff, modes, Matrix::Identity(side, side), true};
}

FockOperator FockOperator::zero(int cutoff, int modes) {
  const auto side = checked_side(cutoff, modes, kDefaultMaxSide);
  return {cutoff, modes, Matrix::Zero(side, side), true};
}

FockOperator FockOperator::adjoint() const {
  return {cutoff_, modes_, data_.adjoint(), hermitian_};
}

double FockOperator::hermiticity_defect() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

namespace {
void require_same_space(const FockOperator& a, const FockOperator& b) {
  if (a.cutoff() != b.cutoff() || a.modes() != b.modes()) {
    throw InvalidDimension("operators act on different Fock spaces");
  }
}
}  // namespace

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  require_same_space(a, b);
  return {a.cutoff_, a.modes_, a.data_ + b.data_, false};
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  require_same_space(a, b);
  return {a.cutoff_, a.modes_, a.data_ - b.data_, false};
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  require_same_space(a, b);
  return {a.cutoff_, a.modes_, a.data_ * b.data_, false};
}

FockOperator operator*(Complex s, const FockOperator& a) {
  return {a.cutoff_, a.modes_, s * a.data_, false};
}

// ---------------------------------------------------------------------------

DensityState::DensityState(Trusted, FockOperator op, double tail_mass)
    : op_(std::move(op)), tail_mass_(tail_mass) {}

DensityState::DensityState(FockOperator op, double tail_mass)
    : op_(std::move(op)), tail_mass_(tail_mass) {
  if (!(tail_mass >= 0.0)) throw InvalidState("tail mass must be >= 0");
  const double defect = op_.hermiticity_defect();
  if (defect > FockOperator::kHermitianTolerance) {
    throw InvalidState(fmt::format("density matrix is not Hermitian (defect {:.3e})", defect));
  }
  const double tr = op_.trace().real();
  if (std::abs(tr + tail_mass - 1.0) > kTraceTolerance) {
    throw InvalidState(
        fmt::format("trace {:.12f} plus tail {:.3e} differs from 1", tr, tail_mass));
  }
  const double min_eig = hermitian_eigenvalues(op_.matrix()).minCoeff();
  if (min_eig < -kEigenTolerance) {
    throw InvalidState(fmt::format("density matrix has eigenvalue {:.3e}", min_eig));
  }
  op_ = FockOperator(op_.cutoff(), op_.modes(), op_.matrix(), true);
}

DensityState DensityState::trusted(FockOperator op, double tail_mass) {
  return {Trusted{}, std::move(op), tail_mass};
}

DensityState DensityState::pure(const Vector& psi, int cutoff, int modes) {
  const double norm2 = psi.squaredNorm();
  Matrix rho = psi * psi.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityState(FockOperator(cutoff, modes, std::move(rho)), std::max(0.0, 1.0 - norm2));
}

DensityState DensityState::fock(int n, int cutoff) {
  require_cutoff(cutoff);
  if (n < 0 || n >= cutoff) {
    throw InvalidDimension(fmt::format("Fock level {} not representable at cutoff {}", n, cutoff));
  }
  Vector psi = Vector::Zero(cutoff);
  psi(n) = 1.0;
  return pure(psi, cutoff);
}

DensityState DensityState::maximally_mixed(int cutoff, int modes) {
  const auto side = checked_side(cutoff, modes, kDefaultMaxSide);
  Matrix rho = Matrix::Identity(side, side) / static_cast<double>(side);
  return DensityState(FockOperator(cutoff, modes, std::move(rho), true));
}

// ---------------------------------------------------------------------------

Eigensystem hermitian_eigen(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
  Eigensystem out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    auto col = out.vectors.col(k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col(i));
      if (mag > 1e-12) {
        col *= std::conj(col(i)) / mag;
        break;
      }
    }
  }
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

// ---------------------------------------------------------------------------

std::pair<FockOperator, FockOperator> ladder_ops(int cutoff) {
  require_cutoff(cutoff);
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  FockOperator ann(cutoff, 1, a);
  FockOperator cre(cutoff, 1, a.adjoint());
  return {std::move(ann), std::move(cre)};
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Matrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

FockOperator tensor(const FockOperator& a, const FockOperator& b, std::int64_t max_side) {
  if (a.cutoff() != b.cutoff()) {
    throw InvalidDimension(
        fmt::format("tensor of cutoffs {} and {}", a.cutoff(), b.cutoff()));
  }
  checked_side(a.cutoff(), a.modes() + b.modes(), max_side);
  return {a.cutoff(), a.modes() + b.modes(), kron(a.matrix(), b.matrix()),
          a.hermitian() && b.hermitian()};
}

DensityState tensor(const DensityState& a, const DensityState& b, std::int64_t max_side) {
  const double kept = (1.0 - a.tail_mass()) * (1.0 - b.tail_mass());
  return DensityState::trusted(tensor(a.op(), b.op(), max_side), std::max(0.0, 1.0 - kept));
}

DensityState tensor_power(const DensityState& rho, int m, std::int64_t max_side) {
  if (m < 1) throw InvalidArgument("tensor power needs m >= 1");
  DensityState out = rho;
  for (int k = 1; k < m; ++k) out = tensor(out, rho, max_side);
  return out;
}

FockOperator swap_operator(int cutoff) { return cyclic_shift_operator(2, cutoff); }

std::vector<Eigen::Index> cyclic_shift_permutation(int m, int cutoff, std::int64_t max_side) {
  require_cutoff(cutoff);
  if (m < 1) throw InvalidArgument("shift operator needs m >= 1");
  const auto side = checked_side(cutoff, m, max_side);
  if (m == 1) {
    std::vector<Eigen::Index> id(static_cast<std::size_t>(side));
    for (Eigen::Index i = 0; i < side; ++i) id[static_cast<std::size_t>(i)] = i;
    return id;
  }
  // <i|V|j> = 1 iff i_k = j_{k+1 mod m}, i.e. j = (i_m, i_1, ..., i_{m-1}).
  const Eigen::Index lead = side / cutoff;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(side));
  for (Eigen::Index i = 0; i < side; ++i) {
    const Eigen::Index last = i % cutoff;
    const Eigen::Index rest = i / cutoff;
    perm[static_cast<std::size_t>(i)] = last * lead + rest;
  }
  return perm;
}

FockOperator cyclic_shift_operator(int m, int cutoff, std::int64_t max_side) {
  const auto perm = cyclic_shift_permutation(m, cutoff, max_side);
  const auto side = static_cast<Eigen::Index>(perm.size());
  Matrix v = Matrix::Zero(side, side);
  for (Eigen::Index i = 0; i < side; ++i) v(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return {cutoff, m, std::move(v), m <= 2};
}

Complex trace_with_product(const Matrix& w, const Matrix& a, const Matrix& b) {
  const auto da = a.rows();
  const auto db = b.rows();
  if (w.rows() != da * db || w.cols() != da * db) {
    throw InvalidDimension("trace_with_product: shape mismatch");
  }
  const Matrix bt = b.transpose();
  Complex acc = 0.0;
  for (Eigen::Index r = 0; r < da; ++r) {
    for (Eigen::Index c = 0; c < da; ++c) {
      const Complex coeff = a(c, r);
      if (coeff == Complex(0.0)) continue;
      acc += coeff * w.block(r * db, c * db, db, db).cwiseProduct(bt).sum();
    }
  }
  return acc;
}

Complex trace_with_power(const Matrix& w, const Matrix& rho, int m) {
  switch (m) {
    case 1:
      return (w.cwiseProduct(rho.transpose())).sum();
    case 2:
      return trace_with_product(w, rho, rho);
    case 4: {
      const Matrix pair = kron(rho, rho);
      return trace_with_product(w, pair, pair);
    }
    default:
      throw InvalidArgument(fmt::format("trace_with_power supports m = 1, 2, 4 (got {})", m));
  }
}

// ---------------------------------------------------------------------------

Norms norms(const FockOperator& a) {
  RealVector sv;
  if (a.hermitian()) {
    sv = hermitian_eigenvalues(a.matrix()).cwiseAbs();
  } else {
    Eigen::BDCSVD<Matrix> svd(a.matrix());
    sv = svd.singularValues();
  }
  return {sv.sum(), sv.maxCoeff(), a.matrix().norm()};
}

double von_neumann_entropy(const DensityState& rho, LogBase base) {
  const RealVector eig = hermitian_eigenvalues(rho.matrix());
  if (eig.minCoeff() < -DensityState::kEigenTolerance) {
    throw InvalidState(fmt::format("negative eigenvalue {:.3e}", eig.minCoeff()));
  }
  double s = 0.0;
  for (double l : eig) {
    if (l > 1e-14) s -= l * std::log(l);
  }
  return base == LogBase::kBits ? s / std::log(2.0) : s;
}

double purity(const DensityState& rho) { return rho.matrix().squaredNorm(); }

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'O', 'C', 'K', 'O', 'P', '1', '\0'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
  std::array<char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), sizeof(T))) throw Error("truncated operator stream");
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_operator(std::ostream& out, const FockOperator& op) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(op.cutoff()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(op.modes()));
  const Matrix& m = op.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_le<double>(out, m(i, j).real());
      put_le<double>(out, m(i, j).imag());
    }
  }
  if (!out) throw Error("failed writing operator stream");
}

FockOperator read_operator(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error("not a FOCKOP1 stream");
  }
  const auto cutoff = get_le<std::uint32_t>(in);
  const auto modes = get_le<std::uint32_t>(in);
  if (cutoff < 1 || modes < 1 || modes > 4) throw InvalidDimension("bad FOCKOP1 header");
  const auto side = checked_side(static_cast<int>(cutoff), static_cast<int>(modes),
                                 kDefaultMaxSide);
  Matrix m(side, side);
  for (Eigen::Index i = 0; i < side; ++i) {
    for (Eigen::Index j = 0; j < side; ++j) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      m(i, j) = Complex(re, im);
    }
  }
  return {static_cast<int>(cutoff), static_cast<int>(modes), std::move(m)};
}

}  // namespace cvrl
