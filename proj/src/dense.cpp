#include "scopq/dense.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace scopq {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double max_abs_diff_from_projector(const DenseOperator& p) {
  const std::size_t n = p.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex sq(0.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) sq += p.at(i, k) * p.at(k, j);
      worst = std::max(worst, std::abs(sq - p.at(i, j)));
    }
  }
  return worst;
}

double max_hermitian_defect(const DenseOperator& a) {
  const std::size_t n = a.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
  return worst;
}

double min_eigenvalue_of_hermitian_part(const DenseOperator& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      h(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DenseOperator DenseOperator::identity(std::size_t dim) {
  DenseOperator id(dim);
  for (std::size_t i = 0; i < dim; ++i) id.at(i, i) = Complex(1.0, 0.0);
  return id;
}

Complex inner_product(const DenseVector& x, const DenseVector& y) {
  require_same_dim(x.dim(), y.dim(), "inner_product");
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < x.dim(); ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

double norm(const DenseVector& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) sum += std::norm(x[i]);
  return std::sqrt(sum);
}

double cosine_similarity(const DenseVector& x, const DenseVector& y) {
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx == 0.0 || ny == 0.0)
    throw std::invalid_argument("cosine_similarity: zero vector");
  return std::abs(inner_product(x, y)) / (nx * ny);
}

DenseVector apply(const DenseOperator& a, const DenseVector& x) {
  require_same_dim(a.dim(), x.dim(), "apply");
  DenseVector out(x.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < a.dim(); ++j) sum += a.at(i, j) * x[j];
    out[i] = sum;
  }
  return out;
}

Complex trace(const DenseOperator& a) {
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a.at(i, i);
  return sum;
}

DenseOperator outer(const DenseVector& x, const DenseVector& y) {
  require_same_dim(x.dim(), y.dim(), "outer");
  DenseOperator out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) out.at(i, j) = x[i] * std::conj(y[j]);
  return out;
}

bool is_projector(const DenseOperator& p, double tol) {
  if (tol < 0.0) throw std::invalid_argument("is_projector: negative tolerance");
  return max_hermitian_defect(p) <= tol && max_abs_diff_from_projector(p) <= tol;
}

bool is_density(const DenseOperator& rho, double tol) {
  if (tol < 0.0) throw std::invalid_argument("is_density: negative tolerance");
  if (max_hermitian_defect(rho) > tol) return false;
  if (std::abs(trace(rho) - Complex(1.0, 0.0)) > tol) return false;
  return min_eigenvalue_of_hermitian_part(rho) >= -tol;
}

double weight_pure(const DenseVector& x, const DenseOperator& p) {
  if (std::abs(norm(x) - 1.0) > kStructuralTol)
    throw std::invalid_argument("weight_pure: state is not a unit vector");
  if (!is_projector(p)) throw std::invalid_argument("weight_pure: operator is not a projector");
  return inner_product(x, apply(p, x)).real();
}

double weight_density(const DenseOperator& rho, const DenseOperator& p) {
  require_same_dim(rho.dim(), p.dim(), "weight_density");
  if (!is_density(rho)) throw std::invalid_argument("weight_density: not a density operator");
  if (!is_projector(p)) throw std::invalid_argument("weight_density: not a projector");
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t k = 0; k < rho.dim(); ++k) sum += rho.at(i, k) * p.at(k, i);
  return sum.real();
}

std::pair<DenseVector, double> collapse_pure(const DenseVector& x, const DenseOperator& p) {
  const double prob = inner_product(x, apply(p, x)).real();
  if (prob <= kNormTol)
    throw ImpossibleContextError("collapse_pure: context has zero probability in this state");
  DenseVector projected = apply(p, x);
  const double scale = 1.0 / std::sqrt(prob);
  for (std::size_t i = 0; i < projected.dim(); ++i) projected[i] *= scale;
  return {std::move(projected), prob};
}

std::pair<DenseOperator, double> collapse_density(const DenseOperator& rho,
                                                  const DenseOperator& p) {
  require_same_dim(rho.dim(), p.dim(), "collapse_density");
  const std::size_t n = rho.dim();
  // P rho P in two passes.
  DenseOperator pr(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum(0.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) sum += p.at(i, k) * rho.at(k, j);
      pr.at(i, j) = sum;
    }
  DenseOperator prp(n);
  Complex prob_c(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum(0.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) sum += pr.at(i, k) * p.at(k, j);
      prp.at(i, j) = sum;
    }
    prob_c += prp.at(i, i);
  }
  const double prob = prob_c.real();
  if (prob <= kNormTol)
    throw ImpossibleContextError("collapse_density: context has zero probability in this state");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) prp.at(i, j) /= prob;
  return {std::move(prp), prob};
}

DenseVector tensor_vec(const DenseVector& x, const DenseVector& y) {
  const std::uint64_t dim = static_cast<std::uint64_t>(x.dim()) * y.dim();
  if (dim > kDenseDimCap)
    throw std::length_error("tensor_vec: dimension " + std::to_string(dim) +
                            " exceeds dense cap " + std::to_string(kDenseDimCap));
  DenseVector out(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) out[i * y.dim() + j] = x[i] * y[j];
  return out;
}

DenseOperator tensor_op(const DenseOperator& a, const DenseOperator& b) {
  const std::uint64_t dim = static_cast<std::uint64_t>(a.dim()) * b.dim();
  if (dim > kDenseDimCap)
    throw std::length_error("tensor_op: dimension " + std::to_string(dim) +
                            " exceeds dense cap " + std::to_string(kDenseDimCap));
  DenseOperator out(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          out.at(i * b.dim() + k, j * b.dim() + l) = a.at(i, j) * b.at(k, l);
  return out;
}

DenseOperator partial_trace(const DenseOperator& rho, const std::vector<std::size_t>& dims,
                            std::size_t keep) {
  if (keep >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");
  std::uint64_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != rho.dim())
    throw std::invalid_argument("partial_trace: factor dimensions do not multiply to operator size");

  // Stride of the kept factor under left-associative row-major pairing.
  std::size_t stride = 1;
  for (std::size_t f = keep + 1; f < dims.size(); ++f) stride *= dims[f];
  const std::size_t kept = dims[keep];
  const std::size_t rest = rho.dim() / kept;

  DenseOperator out(kept);
  // Enumerate all joint indices with the kept factor removed.
  for (std::size_t r = 0; r < rest; ++r) {
    // Re-insert the kept factor at its position: indices below `stride` stay,
    // the rest shift up by one kept-slot.
    const std::size_t low = r % stride;
    const std::size_t high = r / stride;
    const std::size_t base = high * stride * kept + low;
    for (std::size_t a = 0; a < kept; ++a)
      for (std::size_t b = 0; b < kept; ++b)
        out.at(a, b) += rho.at(base + a * stride, base + b * stride);
  }
  return out;
}

}  // namespace scopq
