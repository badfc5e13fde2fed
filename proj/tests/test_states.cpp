#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mkey/cq.hpp"
#include "mkey/linalg.hpp"
#include "mkey/random.hpp"
#include "mkey/states.hpp"
#include "mkey/tensor.hpp"

using namespace mkey;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

void check_state(const BlockOperator& rho) {
  CHECK(rho.is_hermitian(1e-12));
  CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
  CHECK(min_eigenvalue(rho) >= -1e-9);
  for (const auto& [ij, m] : rho.blocks())
    if (ij.first == ij.second) CHECK(min_eigenvalue(m) >= -1e-10);
}

}  // namespace

TEST_CASE("ghz(2,2) is the Bell projector and every ghz has unit trace") {
  const Matrix g = ghz(2, 2);
  for (std::size_t i : {0u, 3u})
    for (std::size_t j : {0u, 3u}) CHECK(g(i, j).real() == doctest::Approx(0.5));
  CHECK(g(1, 1) == cplx(0));
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::size_t N = 2; N <= 4; ++N) {
      CHECK(ghz(d, N).trace().real() == doctest::Approx(1));
      CHECK(max_diff(ghz(d, N) * ghz(d, N), ghz(d, N)) < 1e-15);
      CHECK(omega(d, N).trace().real() == doctest::Approx(1));
    }
  CHECK_THROWS_AS(ghz(1, 2), ValidationError);
  CHECK_THROWS_AS(ghz(2, 1), ValidationError);
}

TEST_CASE("projectors P, Q, P+ are mutually orthogonal") {
  for (std::size_t D = 2; D <= 4; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      const Matrix p = p_projector(D, N), q = q_projector(D, N), g = ghz(D, N);
      CHECK((p * q).max_abs() == 0);
      CHECK((p * g).max_abs() < 1e-15);
      CHECK((q * g).max_abs() == 0);
      CHECK(max_diff(p * p, p) < 1e-15);
      // decomposition identity for X
      const Matrix lhs = x_matrix(D, N) * x_denominator(D, N) + p * 2.0 - q - g * double(D - 2.0);
      CHECK(lhs.max_abs() < 1e-14);
      CHECK(trace_norm(x_matrix(D, N)) == doctest::Approx(1));
      CHECK(s_matrix(D, N).trace().real() == doctest::Approx(double(ipow(D, N) - D)));
    }
}

TEST_CASE("X at D=2 has no P+ component") {
  for (std::size_t N = 2; N <= 4; ++N) {
    const Matrix x = x_matrix(2, N) * x_denominator(2, N);
    CHECK(max_diff(x, q_projector(2, N) - p_projector(2, N) * 2.0) < 1e-15);
  }
}

TEST_CASE("partially transposed X relates to S and has the closed-form absolute value") {
  for (std::size_t D = 2; D <= 4; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      const Dims dims(N, D);
      const Matrix r = r_projector(D, N);
      for (std::size_t k = 0; k < N; ++k) {
        const Matrix xt = partial_transpose(x_matrix(D, N), dims, {k});
        const Matrix st = partial_transpose(s_matrix(D, N), dims, {k});
        CHECK(max_diff(xt * x_denominator(D, N), st - r) < 1e-14);
        CHECK(max_diff(op_abs(xt), abs_x_transposed(D, N, k)) < 1e-12);
      }
    }
}

TEST_CASE("construction one: layout, normalization and positivity") {
  for (std::size_t D = 2; D <= 4; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      const BlockOperator rho = construction_one(D, N);
      // for N = 2 the index psi_1 coincides with the complement of psi_2
      CHECK(rho.blocks().size() == (N == 2 ? 6 : 2 * (N + 1) + 2));
      check_state(rho);
      for (std::size_t p = 0; p < N; ++p) CHECK(min_eigenvalue(partial_transpose(rho, p)) >= -1e-10);
    }
  CHECK(std::abs(construction_one(3, 3).trace() - 1.0) < 1e-12);
}

TEST_CASE("construction one after transposing party 3 has the 8x8 block pattern") {
  const std::size_t D = 3, N = 3;
  const Dims dims(N, D);
  const double n = normalization_one(D, N);
  const Matrix x = x_matrix(D, N);
  const BlockOperator t = partial_transpose(construction_one(D, N), 2);
  auto abs_t = [&](std::size_t i) { return op_abs(partial_transpose(x, dims, {i})); };
  auto expect = [&](std::size_t r, std::size_t c, const Matrix& m) {
    const Matrix* b = t.find(r, c);
    REQUIRE(b != nullptr);
    CHECK(max_diff(*b * n, m) < 1e-12);
  };
  CHECK(t.blocks().size() == 10);
  expect(0, 0, partial_transpose(op_abs(x), dims, {2}));
  expect(7, 7, partial_transpose(op_abs(x), dims, {2}));
  expect(1, 1, abs_t(2));
  expect(6, 6, abs_t(2));
  expect(1, 6, partial_transpose(x, dims, {2}));
  expect(6, 1, partial_transpose(x, dims, {2}));
  expect(2, 2, partial_transpose(abs_t(1), dims, {1, 2}));
  expect(5, 5, partial_transpose(abs_t(1), dims, {1, 2}));
  expect(3, 3, partial_transpose(abs_t(0), dims, {0, 2}));
  expect(4, 4, partial_transpose(abs_t(0), dims, {0, 2}));
}

TEST_CASE("blockwise and dense positivity checks agree") {
  const BlockOperator rho = construction_one(2, 3);
  CHECK(min_eigenvalue(rho) == doctest::Approx(min_eigenvalue(rho.dense())).epsilon(1e-9));
  for (std::size_t p = 0; p < 3; ++p) {
    const Matrix oracle = partial_transpose(rho.dense(), rho.dense_dims(), rho.party_systems(p));
    CHECK(std::abs(min_eigenvalue(partial_transpose(rho, p)) - min_eigenvalue(oracle)) < 1e-10);
  }
}

TEST_CASE("seed unitaries") {
  const SeedUnitary v2 = vandermonde(2);
  const double h = 1 / std::sqrt(2.0);
  CHECK(std::abs(v2.u(0, 0) - h) < 1e-15);
  CHECK(std::abs(v2.u(1, 1) + h) < 1e-15);
  CHECK(std::abs(v2.u(0, 1) - h) < 1e-15);
  for (std::size_t D = 2; D <= 6; ++D) {
    const Matrix u = vandermonde(D).u;
    CHECK(max_diff(u * u.adjoint(), Matrix::identity(D)) <= 1e-12);
    CHECK(vandermonde(D).flat);
  }
  const SeedUnitary hp = hadamard_power(2);
  CHECK(hp.dim() == 4);
  CHECK(hp.hermitian);
  CHECK(max_diff(hp.u, hp.u.adjoint()) == 0);
  CHECK_THROWS_AS(seed_unitary("fourier", 3), ValidationError);
  CHECK_THROWS_AS(vandermonde(1), ValidationError);
  Matrix bad = Matrix::identity(2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(custom_seed(bad), ValidationError);
  Rng rng(1);
  const SeedUnitary c = custom_seed(random_unitary(3, rng));
  CHECK_FALSE(c.flat);
}

TEST_CASE("the absolute value of X tilde is R for any unitary seed") {
  Rng rng(2);
  for (std::size_t D = 2; D <= 4; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      const SeedUnitary u = custom_seed(random_unitary(D, rng));
      CHECK(max_diff(op_abs(x_tilde(u, N)), r_projector(D, N)) < 1e-12);
    }
}

TEST_CASE("construction two normalization for flat seeds") {
  CHECK(normalization_two(vandermonde(2), 3) == doctest::Approx(12 + 36 * std::sqrt(2.0)));
  for (std::size_t D = 2; D <= 5; ++D)
    for (std::size_t N = 3; N <= 4; ++N)
      CHECK(normalization_two(vandermonde(D), N) ==
            doctest::Approx(2.0 * N * D * (1 + N * std::sqrt(double(D)))));
  // at N = 2 the diagonal blocks hold 2 sum|u| + 4D in trace norm, twice
  for (std::size_t D = 2; D <= 5; ++D) {
    const SeedUnitary u = vandermonde(D);
    double tn = 0;
    const Dims dims(2, D);
    const Matrix xt = x_tilde(u, 2);
    for (std::size_t j = 0; j <= 2; ++j)
      for (std::size_t i = 0; i < 2; ++i) {
        const Matrix z = partial_transpose(xt, dims, {i});
        tn += 2 * trace_norm(j == 0 ? z : partial_transpose(z, dims, {j - 1}));
      }
    CHECK(normalization_two(u, 2) == doctest::Approx(tn));
  }
}

TEST_CASE("construction two is a PPT state") {
  for (std::size_t D = 2; D <= 4; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      const BlockOperator rho = construction_two(vandermonde(D), N);
      check_state(rho);
      for (std::size_t p = 0; p < N; ++p) CHECK(min_eigenvalue(partial_transpose(rho, p)) >= -1e-10);
    }
  CHECK(min_eigenvalue(construction_two(vandermonde(3), 3).dense()) >= -1e-10);
  Rng rng(4);
  const BlockOperator r = construction_two(custom_seed(random_unitary(3, rng)), 2);
  check_state(r);
  for (std::size_t p = 0; p < 2; ++p) CHECK(min_eigenvalue(partial_transpose(r, p)) >= -1e-10);
}

TEST_CASE("construction two with a Hermitian seed has a Hermitian coherence block") {
  const BlockOperator rho = construction_two(hadamard_power(1), 3);
  const Matrix& a = *rho.find(0, 7);
  const Matrix& b = *rho.find(7, 0);
  CHECK(max_diff(a, b.adjoint()) < 1e-12);
  CHECK(max_diff(a, b) < 1e-12);
}

TEST_CASE("permutation operator and the example pdit") {
  const Matrix v = permutation_operator({1, 0}, 2, 2);
  // swap on two qubits
  CHECK(v(1, 2) == cplx(1));
  CHECK(v(0, 0) == cplx(1));
  CHECK(is_unitary(permutation_operator({2, 0, 1}, 3, 3)));
  CHECK_THROWS_AS(permutation_operator({0, 0}, 2, 2), ValidationError);
  for (std::size_t D = 2; D <= 3; ++D)
    for (std::size_t N = 2; N <= 3; ++N) {
      std::vector<std::size_t> id(N);
      for (std::size_t k = 0; k < N; ++k) id[k] = k;
      const std::size_t n = ipow(D, N);
      const BlockOperator g = pdit_example(D, N, id);
      CHECK(max_diff(g.dense(), kron(ghz(2, N), Matrix::identity(n) / double(n))) < 1e-15);
    }
  const BlockOperator g = pdit_example(2, 3, {1, 2, 0});
  CHECK(std::abs(g.trace() - 1.0) < 1e-12);
  CHECK(min_eigenvalue(g.dense()) >= -1e-12);
}

TEST_CASE("pdit from a random spec is a state") {
  Rng rng(8);
  PditSpec s{3, 2, {2, 2}, random_density(4, rng), {}};
  for (int i = 0; i < 3; ++i) s.U.push_back(random_unitary(4, rng));
  const BlockOperator g = pdit(s);
  check_state(g);
  s.U[1] = Matrix::identity(4) * 2.0;
  CHECK_THROWS_AS(pdit(s), ValidationError);
}

TEST_CASE("smolin family") {
  const Matrix s1 = smolin_family(1);
  const Vector b = bell_vector(0);
  CHECK(max_diff(s1, Matrix::outer(b, b)) < 1e-15);
  CHECK(std::abs(s1(1, 2) - 0.5) < 1e-15);
  const Matrix s2 = smolin_family(2);
  CHECK(s2.trace().real() == doctest::Approx(1));
  CHECK(is_psd(s2));
  for (int a = 1; a <= 3; ++a)
    CHECK((s2 * kron_power(pauli(a), 4)).trace().real() == doctest::Approx(1));
  const Matrix s3 = smolin_family(3);
  CHECK(s3.trace().real() == doctest::Approx(1));
  CHECK(is_psd(s3));
  CHECK_THROWS_AS(smolin_family(0), ValidationError);
}

TEST_CASE("ideal cq state") {
  const CqState c = ideal_cq(3, 3);
  validate(c);
  REQUIRE(c.terms.size() == 3);
  for (const auto& t : c.terms) {
    CHECK(t.p == doctest::Approx(1.0 / 3));
    CHECK(t.label == 0);
    CHECK(t.tuple == KeyTuple(3, t.tuple[0]));
  }
  CHECK(c.label_count() == 1);
}

TEST_CASE("cq canonical form, labels and distances") {
  CqState a{2, 2, {{{1, 1}, 0.5, 7, {}}, {{0, 0}, 0.5, 3, {}}}};
  const CqState c = canonical(a);
  CHECK(c.terms[0].tuple == KeyTuple{0, 0});
  CHECK(c.terms[0].label == 0);
  CHECK(c.terms[1].label == 1);
  CHECK(cq_distance(ideal_cq(2, 2), ideal_cq(2, 2)) == 0);
  // labels differ: Eve knows the key, distance is the L1 table distance
  CHECK(cq_distance(a, ideal_cq(2, 2)) == doctest::Approx(1));
  // explicit and labeled forms give the same distance
  CHECK(cq_distance(explicit_form(a), ideal_cq(2, 2)) == doctest::Approx(1));
  const auto back = to_labels(explicit_form(a));
  REQUIRE(back.has_value());
  CHECK(cq_distance(*back, a) == doctest::Approx(0));
  // nonorthogonal Eve states cannot be labeled
  Vector plus(2, 1 / std::sqrt(2.0)), zero(2);
  zero[0] = 1;
  CqState e{2, 2, {{{0, 0}, 0.5, -1, Matrix::outer(zero, zero)}, {{1, 1}, 0.5, -1, Matrix::outer(plus, plus)}}};
  validate(e);
  CHECK_FALSE(to_labels(e).has_value());
  CqState r = reduce(ideal_cq(2, 3), {0, 2});
  CHECK(r.N == 2);
  CHECK(cq_distance(r, ideal_cq(2, 2)) == doctest::Approx(0));
  CqState bad{2, 2, {{{0, 0}, 0.7, 0, {}}}};
  CHECK_THROWS_AS(validate(bad), ValidationError);
}
