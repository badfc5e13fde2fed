// Numerical verification suites for the positivity and closeness lemmas
// behind both constructions, and single-party PPT checks.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/matrix.hpp"
#include "mkey/states.hpp"

namespace mkey {

struct LemmaCase {
  std::string name;
  double margin = 0;  // >= 0 means the case holds
  bool passed = false;
  std::string detail;
};

struct LemmaReport {
  std::string suite;
  std::string grid;
  double tolerance = 0;
  std::vector<LemmaCase> cases;
  bool passed() const;
  double worst_margin() const;
  // case with the given margin; passes when margin >= -tolerance
  void add(std::string name, double margin, std::string detail = {});
  // boolean case, margin 0 or -1
  void add_flag(std::string name, bool ok, std::string detail = {});
};

std::string to_json(const LemmaReport& r);
std::string to_json(const std::vector<LemmaReport>& rs);

// N x N block matrices with (N-1)A on the diagonal and B, B† off it, and
// the arrowhead variant with A on the trailing diagonal and zeros elsewhere.
Matrix m_matrix(const Matrix& A, const Matrix& B, std::size_t N);
Matrix m_tilde_matrix(const Matrix& A, const Matrix& B, std::size_t N);
// Random normal B, A = |B| + PSD noise; min eigenvalues of both forms.
LemmaReport lemma_a1_suite(std::size_t trials = 500, std::uint64_t seed = 42, double tol = 1e-10);

struct A2Scan {
  double eta_observed = 0;  // max_{ij} |a_ij - 1/d|
  double lower_margin = 0;  // min_j a_jj - (1/d - 3 eps)
  double upper_margin = 0;  // min_j (1/d + 3(d-1) eps) - a_jj
};
// Needs A PSD, trace <= 1 and |a_{row,j} - 1/d| <= eps < 1/d on the row.
A2Scan lemma_a2_scan(const Matrix& A, std::size_t row, double eps);
// Perturbations (1-t) J/d + t rho for d in {2,3,4}, eps in {1e-2,1e-3,1e-4}.
LemmaReport lemma_a2_suite(std::size_t trials = 50, std::uint64_t seed = 42);

enum class VLemma { V1, V2, V3, V4 };
VLemma parse_v_lemma(const std::string& s);
std::string v_lemma_name(VLemma v);
// V4 needs the seed; the others use x_matrix(D, N).
LemmaReport lemma_v_suite(VLemma which, std::size_t D, std::size_t N, const SeedUnitary* u = nullptr,
                          double tol = 1e-10);

// Joint key+shield transpose of each party; min eigenvalue >= -tol.
LemmaReport ppt_suite(const BlockOperator& rho, double tol = 1e-9);
// Single-factor transposes of a dense state.
LemmaReport ppt_suite(const Matrix& rho, const Dims& dims, double tol = 1e-9);

}  // namespace mkey
