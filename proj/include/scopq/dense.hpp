#ifndef SCOPQ_DENSE_HPP
#define SCOPQ_DENSE_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scopq {

using Complex = std::complex<double>;

// Normalization assertions work at 1e-12; structural checks (projector,
// density) at 1e-9. Every number in the model is an exact small rational, so
// double precision leaves wide margin.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kStructuralTol = 1e-9;

// Dense objects are the brute-force oracle. Composite spaces larger than
// this must stay in the sparse representation.
inline constexpr std::uint64_t kDenseDimCap = 4096;

class DenseVector {
public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : entries_(dim, Complex(0.0, 0.0)) {}
  explicit DenseVector(std::vector<Complex> entries) : entries_(std::move(entries)) {}

  std::size_t dim() const { return entries_.size(); }
  Complex& operator[](std::size_t i) { return entries_[i]; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Complex>& entries() const { return entries_; }

private:
  std::vector<Complex> entries_;
};

// Row-major square matrix of complex entries.
class DenseOperator {
public:
  DenseOperator() = default;
  explicit DenseOperator(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex(0.0, 0.0)) {}

  static DenseOperator identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex& at(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

// Conjugate-linear in the first slot, linear in the second.
Complex inner_product(const DenseVector& x, const DenseVector& y);

double norm(const DenseVector& x);

// |<x|y>| / (|x| |y|). Exposed as a convenience; the model itself never
// needs it.
double cosine_similarity(const DenseVector& x, const DenseVector& y);

DenseVector apply(const DenseOperator& a, const DenseVector& x);

Complex trace(const DenseOperator& a);

// outer(x, y) = |x><y|, entries (i,j) = x_i * conj(y_j).
DenseOperator outer(const DenseVector& x, const DenseVector& y);

// P is a projector iff P^2 = P and P = P^H, both within tol (max-norm).
bool is_projector(const DenseOperator& p, double tol = kStructuralTol);

// Self-adjoint within tol, eigenvalues >= -tol, trace within tol of 1.
bool is_density(const DenseOperator& rho, double tol = kStructuralTol);

// <x|P|x> for unit x and projector P. Throws std::invalid_argument if x is
// not normalized or P is not a projector.
double weight_pure(const DenseVector& x, const DenseOperator& p);

// Tr(rho P). Throws std::invalid_argument on invalid rho or P.
double weight_density(const DenseOperator& rho, const DenseOperator& p);

// Raised when a context has zero probability in the current state; the
// collapse formulas divide by that probability.
class ImpossibleContextError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Returns (P x / sqrt(<x|P|x>), <x|P|x>).
std::pair<DenseVector, double> collapse_pure(const DenseVector& x, const DenseOperator& p);

// Returns (P rho P / Tr(rho P), Tr(rho P)).
std::pair<DenseOperator, double> collapse_density(const DenseOperator& rho,
                                                  const DenseOperator& p);

// Index pairing is row-major, (i, j) -> i*dim(y) + j, extended
// left-associatively for more factors.
DenseVector tensor_vec(const DenseVector& x, const DenseVector& y);
DenseOperator tensor_op(const DenseOperator& a, const DenseOperator& b);

// Reduced density operator on factor `keep`, tracing out all others.
DenseOperator partial_trace(const DenseOperator& rho, const std::vector<std::size_t>& dims,
                            std::size_t keep);

}  // namespace scopq

#endif
