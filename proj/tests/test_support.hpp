#ifndef SCOPQ_TEST_SUPPORT_HPP
#define SCOPQ_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "scopq/concept.hpp"
#include "scopq/dense.hpp"

namespace scopq::test {

inline std::string specs_dir() {
  if (const char* dir = std::getenv("SCOPQ_SPECS")) return dir;
  return "specs";
}

inline DenseVector random_unit_vector(std::size_t dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  const double n = norm(v);
  for (std::size_t i = 0; i < dim; ++i) v[i] /= n;
  return v;
}

// Random mixture of a few random pure states.
inline DenseOperator random_density(std::size_t dim, std::mt19937& rng) {
  std::uniform_int_distribution<int> terms(1, 4);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  const int k = terms(rng);
  std::vector<double> weights;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    weights.push_back(unif(rng));
    total += weights.back();
  }
  DenseOperator rho(dim);
  for (int i = 0; i < k; ++i) {
    const DenseVector v = random_unit_vector(dim, rng);
    const DenseOperator term = outer(v, v);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) rho.at(r, c) += (weights[i] / total) * term.at(r, c);
  }
  return rho;
}

// Diagonal 0/1 projector onto the given indices.
inline DenseOperator diagonal_projector(std::size_t dim, const std::vector<std::size_t>& ones) {
  DenseOperator p(dim);
  for (std::size_t i : ones) p.at(i, i) = Complex(1.0, 0.0);
  return p;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
  return worst;
}

inline double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace scopq::test

#endif
