#include <cmath>

#include "doctest.h"
#include "mkey/lemmas.hpp"
#include "mkey/linalg.hpp"
#include "mkey/random.hpp"
#include "mkey/states.hpp"

using namespace mkey;

TEST_CASE("block matrices for normal B") {
  const Matrix z = pauli(3);
  CHECK(min_eigenvalue(m_matrix(op_abs(z), z, 2)) == doctest::Approx(0).epsilon(1e-14));
  CHECK(min_eigenvalue(m_matrix(Matrix::identity(2) * 0.5, z, 2)) == doctest::Approx(-0.5));
  // layout
  Rng rng(2);
  const Matrix A = random_hermitian(2, rng), B = random_ginibre(2, 2, rng);
  const Matrix m = m_matrix(A, B, 3), t = m_tilde_matrix(A, B, 3);
  CHECK(max_diff(m.block(0, 0, 2, 2), A * 2.0) == 0);
  CHECK(max_diff(m.block(2, 4, 2, 2), B) == 0);
  CHECK(max_diff(m.block(4, 0, 2, 2), B.adjoint()) == 0);
  CHECK(max_diff(t.block(2, 2, 2, 2), A) == 0);
  CHECK(t.block(2, 4, 2, 2).max_abs() == 0);
  CHECK(max_diff(t.block(0, 4, 2, 2), B) == 0);
  CHECK_THROWS_AS(m_matrix(A, Matrix::identity(3), 2), ValidationError);
}

TEST_CASE("randomized positivity suite") {
  const LemmaReport r = lemma_a1_suite(500, 42);
  CHECK(r.cases.size() == 1000);
  CHECK(r.passed());
  CHECK(r.worst_margin() >= -1e-10);
  // deterministic serialization
  CHECK(to_json(r) == to_json(lemma_a1_suite(500, 42)));
  // A below |B| breaks positivity for some draw
  Rng rng(1);
  int broken = 0;
  for (int t = 0; t < 50; ++t) {
    const Matrix V = random_unitary(3, rng);
    const Matrix B = V * Matrix::diagonal(Vector{cplx(1, 1), cplx(-2, 0), cplx(0, 0.5)}) * V.adjoint();
    if (min_eigenvalue(m_matrix(op_abs(B) * 0.5, B, 3)) < -1e-6) ++broken;
  }
  CHECK(broken == 50);
}

TEST_CASE("closeness of a row spreads to the whole matrix") {
  Matrix J(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) J(i, j) = 1.0 / 3;
  CHECK(lemma_a2_scan(J, 0, 1e-3).eta_observed < 1e-15);
  const LemmaReport r = lemma_a2_suite(50, 42);
  CHECK(r.passed());
  // eta follows eps down
  Rng rng(6);
  for (std::size_t d : {2, 3, 4}) {
    Matrix Jd(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) Jd(i, j) = 1.0 / double(d);
    const Matrix noise = random_density(d, rng);
    double prev = 1;
    for (double e : {1e-2, 1e-3, 1e-4}) {
      const Matrix A = hermitian_part(Jd * (1 - e) + noise * e);
      const A2Scan s = lemma_a2_scan(A, 0, e);
      CHECK(s.eta_observed < prev);
      CHECK(s.eta_observed <= 2 * e);
      CHECK(s.lower_margin >= 0);
      CHECK(s.upper_margin >= 0);
      prev = s.eta_observed;
    }
  }
  Matrix bad = J;
  bad(0, 1) = bad(1, 0) = 0.2;
  CHECK_THROWS_AS(lemma_a2_scan(bad, 0, 1e-3), ValidationError);
  CHECK_THROWS_AS(lemma_a2_scan(J * 2.0, 0, 1e-3), ValidationError);
}

TEST_CASE("positivity lemmas for the first family") {
  for (std::size_t D : {2, 3, 4})
    for (std::size_t N : {2, 3}) {
      CHECK(lemma_v_suite(VLemma::V1, D, N).passed());
      CHECK(lemma_v_suite(VLemma::V2, D, N).passed());
    }
}

TEST_CASE("matrix conditions on X") {
  for (std::size_t D : {3, 4, 5})
    for (std::size_t N : {2, 3}) {
      const LemmaReport r = lemma_v_suite(VLemma::V3, D, N);
      CHECK_MESSAGE(r.passed(), to_json(r));
    }
  // at D = 2 the trace-norm gap (i) is absent: |X^Ti|^Ti has the same norm as X
  const LemmaReport r2 = lemma_v_suite(VLemma::V3, 2, 3);
  CHECK(!r2.passed());
}

TEST_CASE("second family absolute values") {
  for (std::size_t D = 2; D <= 5; ++D)
    for (std::size_t N : {2, 3, 4}) {
      const SeedUnitary u = vandermonde(D);
      const LemmaReport r = lemma_v_suite(VLemma::V4, D, N, &u);
      for (const auto& c : r.cases) {
        if (c.name.find("inequality") != std::string::npos) CHECK_MESSAGE(c.passed, c.name, " D=", D, " N=", N);
        // the untransposed sum is exact
        if (c.name == "j=0 equality") CHECK(c.passed);
      }
    }
  const SeedUnitary u = vandermonde(3);
  CHECK_THROWS_AS(lemma_v_suite(VLemma::V4, 3, 3), ValidationError);
  CHECK_THROWS_AS(lemma_v_suite(VLemma::V4, 4, 3, &u), ValidationError);
  CHECK_THROWS_AS(parse_v_lemma("V5"), ValidationError);
}

TEST_CASE("single-party transposes") {
  for (std::size_t D : {2, 3, 4})
    for (std::size_t N : {2, 3}) {
      CHECK(ppt_suite(construction_one(D, N)).passed());
      CHECK(ppt_suite(construction_two(vandermonde(D), N)).passed());
    }
  const LemmaReport g = ppt_suite(ghz(2, 2), {2, 2});
  CHECK(!g.passed());
  CHECK(g.worst_margin() == doctest::Approx(-0.5));
  // Smolin state: single-qubit cuts are NPT with eigenvalue -1/8, the
  // two-two cuts are PPT
  const Matrix s = smolin_family(2);
  const LemmaReport q = ppt_suite(s, Dims(4, 2));
  CHECK(!q.passed());
  for (const auto& c : q.cases) CHECK(c.margin == doctest::Approx(-0.125).epsilon(1e-12));
  for (const Systems& cut : {Systems{0, 1}, Systems{0, 2}, Systems{0, 3}})
    CHECK(min_eigenvalue(partial_transpose(s, Dims(4, 2), cut)) >= -1e-12);
  CHECK(!ppt_suite(smolin_family(1), {2, 2}).passed());
}
