#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "scopq/dense.hpp"
#include "test_support.hpp"

using namespace scopq;
using namespace scopq::test;

namespace {

DenseVector vec2(Complex a, Complex b) { return DenseVector({a, b}); }

DenseVector uniform_vector(std::size_t dim) {
  DenseVector v(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < dim; ++i) v[i] = Complex(amp, 0.0);
  return v;
}

}  // namespace

TEST_CASE("inner product") {
  CHECK(inner_product(vec2(1, 0), vec2(0, 1)) == Complex(0.0, 0.0));

  // Conjugation in the first slot forces a real norm.
  const DenseVector imag = vec2(Complex(0, 1), 0);
  CHECK(inner_product(imag, imag).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(inner_product(imag, imag).imag() == doctest::Approx(0.0));

  // Hand evaluation: (1/sqrt2)(1/sqrt2) + (1/sqrt2)(-1/sqrt2) = 0.
  const double r = 1.0 / std::sqrt(2.0);
  const Complex hadamard = inner_product(vec2(r, r), vec2(r, -r));
  CHECK(std::abs(hadamard) < 1e-15);

  // Conjugate-linear in the first slot, linear in the second.
  const Complex alpha(0.3, -0.7);
  const DenseVector x = vec2(Complex(0.2, 0.1), Complex(-0.4, 0.5));
  const DenseVector y = vec2(Complex(0.9, -0.2), Complex(0.1, 0.3));
  DenseVector ax = x;
  ax[0] *= alpha;
  ax[1] *= alpha;
  CHECK(std::abs(inner_product(ax, y) - std::conj(alpha) * inner_product(x, y)) < 1e-15);
  DenseVector ay = y;
  ay[0] *= alpha;
  ay[1] *= alpha;
  CHECK(std::abs(inner_product(x, ay) - alpha * inner_product(x, y)) < 1e-15);

  CHECK_THROWS_AS(inner_product(DenseVector(2), DenseVector(3)), std::invalid_argument);
}

TEST_CASE("norm") {
  CHECK(norm(vec2(0.6, 0.8)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(vec2(0, 0)) == 0.0);
  CHECK(norm(uniform_vector(408)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cosine") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(cosine_similarity(vec2(1, 0), vec2(r, r)) == doctest::Approx(r));
  CHECK_THROWS_AS(cosine_similarity(vec2(0, 0), vec2(1, 0)), std::invalid_argument);
}

TEST_CASE("apply") {
  const DenseVector x = vec2(Complex(0.2, 0.4), Complex(-0.5, 0.1));
  CHECK(max_abs_diff(apply(DenseOperator::identity(2), x), x) < 1e-15);

  const DenseOperator p1 = diagonal_projector(2, {0});
  const DenseVector projected = apply(p1, x);
  CHECK(projected[0] == x[0]);
  CHECK(projected[1] == Complex(0.0, 0.0));

  // Rank-100 diagonal projector on the uniform 408-vector: 100 surviving
  // entries of 1/sqrt(408).
  std::vector<std::size_t> e30(100);
  for (std::size_t i = 0; i < 100; ++i) e30[i] = i;
  const DenseVector ground = uniform_vector(408);
  const DenseVector collapsed = apply(diagonal_projector(408, e30), ground);
  const double amp = 1.0 / std::sqrt(408.0);
  for (std::size_t i = 0; i < 408; ++i)
    CHECK(collapsed[i] == (i < 100 ? Complex(amp, 0.0) : Complex(0.0, 0.0)));

  CHECK_THROWS_AS(apply(DenseOperator::identity(2), DenseVector(3)), std::invalid_argument);
}

TEST_CASE("trace and outer") {
  CHECK(trace(DenseOperator::identity(3)) == Complex(3.0, 0.0));

  std::mt19937 rng(11);
  const DenseVector u = random_unit_vector(5, rng);
  CHECK(trace(outer(u, u)).real() == doctest::Approx(1.0).epsilon(1e-12));

  DenseOperator mixture(100);
  for (std::size_t i = 0; i < 100; ++i) mixture.at(i, i) = Complex(0.01, 0.0);
  CHECK(trace(mixture).real() == doctest::Approx(1.0).epsilon(1e-12));

  const DenseOperator e11 = outer(vec2(1, 0), vec2(1, 0));
  CHECK(e11.at(0, 0) == Complex(1.0, 0.0));
  CHECK(e11.at(1, 1) == Complex(0.0, 0.0));

  const DenseVector x = vec2(Complex(0.3, 0.2), Complex(0.1, -0.9));
  CHECK(trace(outer(x, x)).real() == doctest::Approx(norm(x) * norm(x)).epsilon(1e-12));

  // The collapsed 1/sqrt(100) state materializes to a uniform 1/100 block.
  DenseVector p30(408);
  for (std::size_t i = 0; i < 100; ++i) p30[i] = Complex(0.1, 0.0);
  const DenseOperator block = outer(p30, p30);
  CHECK(block.at(0, 99) == Complex(0.01, 0.0));
  CHECK(block.at(99, 0) == Complex(0.01, 0.0));
  CHECK(block.at(0, 100) == Complex(0.0, 0.0));
  CHECK(trace(block).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projector and density checks") {
  CHECK(is_projector(DenseOperator::identity(4)));
  DenseOperator half(2);
  half.at(0, 0) = Complex(1.0, 0.0);
  half.at(1, 1) = Complex(0.5, 0.0);
  CHECK_FALSE(is_projector(half));
  CHECK(is_projector(diagonal_projector(7, {1, 3, 4})));

  std::mt19937 rng(12);
  const DenseVector u = random_unit_vector(4, rng);
  CHECK(is_density(outer(u, u)));

  DenseOperator bad_trace(2);
  bad_trace.at(0, 0) = Complex(0.7, 0.0);
  bad_trace.at(1, 1) = Complex(0.5, 0.0);
  CHECK_FALSE(is_density(bad_trace));

  // Hermitian, trace one, but an eigenvalue is negative.
  DenseOperator indefinite(2);
  indefinite.at(0, 0) = Complex(0.5, 0.0);
  indefinite.at(1, 1) = Complex(0.5, 0.0);
  indefinite.at(0, 1) = Complex(0.6, 0.0);
  indefinite.at(1, 0) = Complex(0.6, 0.0);
  CHECK_FALSE(is_density(indefinite));

  DenseOperator not_hermitian(2);
  not_hermitian.at(0, 1) = Complex(1.0, 0.0);
  not_hermitian.at(0, 0) = Complex(1.0, 0.0);
  CHECK_FALSE(is_density(not_hermitian));
}

TEST_CASE("weights") {
  const DenseVector ground = uniform_vector(408);

  // Pike occupies 20 of the 408 basic contexts, dolphin 28, guppy 32.
  std::vector<std::size_t> pike(20), dolphin(28), guppy(32);
  for (std::size_t i = 0; i < 20; ++i) pike[i] = i;
  for (std::size_t i = 0; i < 28; ++i) dolphin[i] = 20 + i;
  for (std::size_t i = 0; i < 32; ++i) guppy[i] = 48 + i;

  CHECK(weight_pure(ground, diagonal_projector(408, pike)) ==
        doctest::Approx(20.0 / 408.0).epsilon(1e-12));
  CHECK(weight_pure(ground, diagonal_projector(408, dolphin)) ==
        doctest::Approx(28.0 / 408.0).epsilon(1e-12));
  CHECK(weight_pure(ground, DenseOperator::identity(408)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(weight_pure(vec2(1, 1), DenseOperator::identity(2)), std::invalid_argument);
  DenseOperator not_projector(2);
  not_projector.at(0, 0) = Complex(0.5, 0.0);
  CHECK_THROWS_AS(weight_pure(vec2(1, 0), not_projector), std::invalid_argument);

  const DenseOperator rho = outer(ground, ground);
  CHECK(weight_density(rho, DenseOperator::identity(408)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(weight_density(rho, diagonal_projector(408, guppy)) ==
        doctest::Approx(32.0 / 408.0).epsilon(1e-12));
  CHECK(weight_density(rho, diagonal_projector(408, pike)) ==
        doctest::Approx(weight_pure(ground, diagonal_projector(408, pike))).epsilon(1e-12));
}

TEST_CASE("pure collapse") {
  const DenseVector ground = uniform_vector(408);
  std::vector<std::size_t> e30(100);
  for (std::size_t i = 0; i < 100; ++i) e30[i] = i;

  const auto [state, prob] = collapse_pure(ground, diagonal_projector(408, e30));
  CHECK(prob == doctest::Approx(100.0 / 408.0).epsilon(1e-12));
  CHECK(norm(state) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 100; ++i)
    CHECK(state[i].real() == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t i = 100; i < 408; ++i) CHECK(std::abs(state[i]) == 0.0);

  const auto [same, one] = collapse_pure(ground, DenseOperator::identity(408));
  CHECK(one == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs_diff(same, ground) < 1e-12);

  CHECK_THROWS_AS(collapse_pure(vec2(1, 0), diagonal_projector(2, {1})), ImpossibleContextError);
}

TEST_CASE("density collapse") {
  // Uniform diagonal mixture over a 10-element set, collapsed by a projector
  // overlapping 4 of them.
  DenseOperator rho(16);
  for (std::size_t i = 0; i < 10; ++i) rho.at(i, i) = Complex(0.1, 0.0);
  std::vector<std::size_t> overlap{6, 7, 8, 9, 10, 11};
  const auto [collapsed, prob] = collapse_density(rho, diagonal_projector(16, overlap));
  CHECK(prob == doctest::Approx(0.4).epsilon(1e-12));
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(collapsed.at(i, i).real() ==
          doctest::Approx(i >= 6 && i < 10 ? 0.25 : 0.0).epsilon(1e-12));
  CHECK(is_density(collapsed, 1e-9));

  // Pure density collapse agrees with pure collapse + outer.
  std::mt19937 rng(21);
  const DenseVector x = random_unit_vector(6, rng);
  const DenseOperator p = diagonal_projector(6, {0, 2, 3});
  const auto [vec_state, vec_prob] = collapse_pure(x, p);
  const auto [den_state, den_prob] = collapse_density(outer(x, x), p);
  CHECK(den_prob == doctest::Approx(vec_prob).epsilon(1e-12));
  CHECK(max_abs_diff(den_state, outer(vec_state, vec_state)) < 1e-12);

  const auto [unchanged, one] = collapse_density(outer(x, x), DenseOperator::identity(6));
  CHECK(one == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs_diff(unchanged, outer(x, x)) < 1e-12);
}

TEST_CASE("tensor products") {
  std::mt19937 rng(31);
  const DenseVector x = random_unit_vector(5, rng);
  const DenseVector y = random_unit_vector(7, rng);

  const DenseVector xy = tensor_vec(x, y);
  CHECK(xy.dim() == 35);
  CHECK(norm(xy) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(xy[2 * 7 + 3] == x[2] * y[3]);

  const DenseOperator p = diagonal_projector(5, {0, 4});
  const DenseOperator lifted = tensor_op(p, DenseOperator::identity(7));
  CHECK(is_projector(lifted, 1e-9));
  CHECK(max_abs_diff(apply(lifted, xy), tensor_vec(apply(p, x), y)) < 1e-12);
  CHECK(inner_product(xy, apply(lifted, xy)).real() ==
        doctest::Approx(weight_pure(x, p)).epsilon(1e-12));

  CHECK_THROWS_AS(tensor_vec(DenseVector(100), DenseVector(100)), std::length_error);
}

TEST_CASE("partial trace") {
  std::mt19937 rng(41);
  const DenseVector x = random_unit_vector(4, rng);
  const DenseVector y = random_unit_vector(5, rng);
  const DenseOperator joint = outer(tensor_vec(x, y), tensor_vec(x, y));

  CHECK(max_abs_diff(partial_trace(joint, {4, 5}, 0), outer(x, x)) < 1e-12);
  CHECK(max_abs_diff(partial_trace(joint, {4, 5}, 1), outer(y, y)) < 1e-12);

  // Aligned pair state: both reduced states are the same uniform diagonal.
  const std::size_t n = 6;
  DenseVector s(n * n);
  for (std::size_t u = 0; u < n; ++u) s[u * n + u] = Complex(1.0 / std::sqrt(6.0), 0.0);
  const DenseOperator srho = outer(s, s);
  const DenseOperator pet = partial_trace(srho, {n, n}, 0);
  const DenseOperator fish = partial_trace(srho, {n, n}, 1);
  CHECK(max_abs_diff(pet, fish) < 1e-12);
  for (std::size_t u = 0; u < n; ++u)
    CHECK(pet.at(u, u).real() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(is_density(pet, 1e-9));

  CHECK_THROWS_AS(partial_trace(joint, {4, 4}, 0), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(joint, {4, 5}, 2), std::invalid_argument);
}

TEST_CASE("random-vector invariants") {
  std::mt19937 rng(51);
  std::uniform_int_distribution<std::size_t> dims(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = dims(rng);
    const DenseVector x = random_unit_vector(dim, rng);
    const DenseVector y = random_unit_vector(dim, rng);

    const Complex xx = inner_product(x, x);
    CHECK(xx.real() >= 0.0);
    CHECK(std::abs(xx.imag()) < 1e-12);
    CHECK(std::abs(norm(x) * norm(x) - xx.real()) < 1e-12);
    CHECK(std::abs(inner_product(x, y) - std::conj(inner_product(y, x))) < 1e-12);

    // Resolution of unity over the standard basis.
    double total = 0.0;
    for (std::size_t u = 0; u < dim; ++u) total += std::norm(x[u]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::size_t> subset;
    for (std::size_t u = 0; u < dim; ++u)
      if (rng() % 2 == 0) subset.push_back(u);
    const DenseOperator p = diagonal_projector(dim, subset);
    const double w = weight_pure(x, p);
    CHECK(w >= -1e-12);
    CHECK(w <= 1.0 + 1e-12);
    CHECK(weight_pure(x, DenseOperator(dim)) == doctest::Approx(0.0));
    if (w > 1e-6) {
      const auto [state, prob] = collapse_pure(x, p);
      CHECK(norm(state) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(prob == doctest::Approx(w).epsilon(1e-12));
    }

    const DenseOperator rho = random_density(dim, rng);
    CHECK(is_density(rho, 1e-9));
    if (weight_density(rho, p) > 1e-6) {
      const auto [state, prob] = collapse_density(rho, p);
      CHECK(is_density(state, 1e-9));
      CHECK(prob >= -1e-12);
    }
  }
}

TEST_CASE("random tensor invariants") {
  std::mt19937 rng(61);
  std::uniform_int_distribution<std::size_t> dims(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = dims(rng);
    const std::size_t m = dims(rng);
    const DenseOperator rho1 = random_density(n, rng);
    const DenseOperator rho2 = random_density(m, rng);
    DenseOperator joint = tensor_op(rho1, rho2);
    CHECK(max_abs_diff(partial_trace(joint, {n, m}, 0), rho1) < 1e-12);
    CHECK(max_abs_diff(partial_trace(joint, {n, m}, 1), rho2) < 1e-12);
    CHECK(is_density(partial_trace(joint, {n, m}, 0), 1e-9));

    std::vector<std::size_t> subset;
    for (std::size_t u = 0; u < n; ++u)
      if (rng() % 2 == 0) subset.push_back(u);
    const DenseOperator lifted = tensor_op(diagonal_projector(n, subset),
                                           DenseOperator::identity(m));
    CHECK(is_projector(lifted, 1e-9));
  }
}
