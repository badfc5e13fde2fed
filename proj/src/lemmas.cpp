#include "mkey/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mkey/entropy.hpp"
#include "mkey/linalg.hpp"
#include "mkey/matrix_io.hpp"
#include "mkey/random.hpp"

namespace mkey {

bool LemmaReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const LemmaCase& c) { return c.passed; });
}

double LemmaReport::worst_margin() const {
  double m = kInfinity;
  for (const auto& c : cases) m = std::min(m, c.margin);
  return m;
}

void LemmaReport::add(std::string name, double margin, std::string detail) {
  cases.push_back({std::move(name), margin, margin >= -tolerance, std::move(detail)});
}

void LemmaReport::add_flag(std::string name, bool ok, std::string detail) {
  cases.push_back({std::move(name), ok ? 0.0 : -1.0, ok, std::move(detail)});
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) { return std::isfinite(x) ? format_double(x) : std::string("null"); }

std::string label(std::size_t D, std::size_t N) {
  return "D=" + std::to_string(D) + ",N=" + std::to_string(N);
}

}  // namespace

std::string to_json(const LemmaReport& r) {
  std::ostringstream os;
  os << "{\"suite\":" << quote(r.suite) << ",\"grid\":" << quote(r.grid) << ",\"tolerance\":" << num(r.tolerance)
     << ",\"passed\":" << (r.passed() ? "true" : "false") << ",\"worst_margin\":" << num(r.worst_margin())
     << ",\"cases\":[";
  for (std::size_t i = 0; i < r.cases.size(); ++i) {
    const auto& c = r.cases[i];
    os << (i ? "," : "") << "{\"name\":" << quote(c.name) << ",\"margin\":" << num(c.margin)
       << ",\"passed\":" << (c.passed ? "true" : "false");
    if (!c.detail.empty()) os << ",\"detail\":" << quote(c.detail);
    os << "}";
  }
  os << "]}";
  return os.str();
}

std::string to_json(const std::vector<LemmaReport>& rs) {
  std::string s = "[";
  for (std::size_t i = 0; i < rs.size(); ++i) s += (i ? "," : "") + to_json(rs[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------

namespace {

void check_pair(const Matrix& A, const Matrix& B, std::size_t N) {
  if (!A.square() || !B.square() || A.rows() != B.rows()) throw ValidationError("m_matrix: A and B must be square of equal size");
  if (N < 2) throw ValidationError("m_matrix: need N >= 2");
}

}  // namespace

Matrix m_matrix(const Matrix& A, const Matrix& B, std::size_t N) {
  check_pair(A, B, N);
  const std::size_t d = A.rows();
  const Matrix Bh = B.adjoint(), diag = A * double(N - 1);
  Matrix m(N * d, N * d);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m.set_block(i * d, j * d, i == j ? diag : (i < j ? B : Bh));
  return m;
}

Matrix m_tilde_matrix(const Matrix& A, const Matrix& B, std::size_t N) {
  check_pair(A, B, N);
  const std::size_t d = A.rows();
  const Matrix Bh = B.adjoint();
  Matrix m(N * d, N * d);
  m.set_block(0, 0, A * double(N - 1));
  for (std::size_t i = 1; i < N; ++i) {
    m.set_block(0, i * d, B);
    m.set_block(i * d, 0, Bh);
    m.set_block(i * d, i * d, A);
  }
  return m;
}

LemmaReport lemma_a1_suite(std::size_t trials, std::uint64_t seed, double tol) {
  LemmaReport r{"A1", "N in {2,3,4}, d in 1..8, trials=" + std::to_string(trials) + ", seed=" + std::to_string(seed), tol, {}};
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> unit(0, 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t N = 2 + t % 3, d = dim(rng);
    Vector lam(d);
    for (auto& l : lam) l = cplx(g(rng), g(rng));
    const Matrix V = random_unitary(d, rng);
    const Matrix B = V * Matrix::diagonal(lam) * V.adjoint();
    // every fourth trial sits on the boundary A = |B|
    Matrix A = op_abs(B);
    if (t % 4) A += random_density(d, rng) * unit(rng);
    A = hermitian_part(A);
    const std::string name = "trial " + std::to_string(t) + " N=" + std::to_string(N) + " d=" + std::to_string(d);
    r.add(name + " M", min_eigenvalue(m_matrix(A, B, N)));
    r.add(name + " M~", min_eigenvalue(m_tilde_matrix(A, B, N)));
  }
  return r;
}

A2Scan lemma_a2_scan(const Matrix& A, std::size_t row, double eps) {
  if (!A.square() || A.rows() < 2) throw ValidationError("lemma_a2_scan: need a square matrix of size >= 2");
  const std::size_t d = A.rows();
  const double q = 1.0 / double(d);
  if (row >= d) throw ValidationError("lemma_a2_scan: row out of range");
  if (!(eps > 0) || eps >= q) throw ValidationError("lemma_a2_scan: need 0 < eps < 1/d");
  if (!A.is_hermitian(1e-12) || !is_psd(A, 1e-12)) throw ValidationError("lemma_a2_scan: A must be positive semidefinite");
  if (A.trace().real() > 1 + 1e-12) throw ValidationError("lemma_a2_scan: trace exceeds 1");
  for (std::size_t j = 0; j < d; ++j)
    if (std::abs(A(row, j) - q) > eps + 1e-15) throw ValidationError("lemma_a2_scan: row is not eps-close to 1/d");
  A2Scan s;
  s.lower_margin = s.upper_margin = kInfinity;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.eta_observed = std::max(s.eta_observed, std::abs(A(i, j) - q));
  for (std::size_t j = 0; j < d; ++j) {
    if (j == row) continue;
    const double a = A(j, j).real();
    s.lower_margin = std::min(s.lower_margin, a - (q - 3 * eps));
    s.upper_margin = std::min(s.upper_margin, q + 3 * double(d - 1) * eps - a);
  }
  return s;
}

LemmaReport lemma_a2_suite(std::size_t trials, std::uint64_t seed) {
  LemmaReport r{"A2", "d in {2,3,4}, eps in {1e-2,1e-3,1e-4}, trials=" + std::to_string(trials), 0.0, {}};
  Rng rng(seed);
  for (std::size_t d : {2, 3, 4}) {
    Matrix J(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) J(i, j) = 1.0 / double(d);
    double prev_eta = kInfinity;
    for (double target : {1e-2, 1e-3, 1e-4}) {
      double lo = kInfinity, worst_eta = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        // deviations of t*rho from J/d stay below t, so t = target keeps the row in range
        const Matrix A = hermitian_part(J * (1 - target) + random_density(d, rng) * target);
        const std::size_t row = t % d;
        double eps = 0;
        for (std::size_t j = 0; j < d; ++j) eps = std::max(eps, std::abs(A(row, j) - 1.0 / double(d)));
        const A2Scan s = lemma_a2_scan(A, row, std::max(eps, 1e-300));
        lo = std::min({lo, s.lower_margin, s.upper_margin});
        worst_eta = std::max(worst_eta, s.eta_observed);
      }
      const std::string name = "d=" + std::to_string(d) + " eps=" + format_double(target);
      r.add(name + " diagonal margins", lo);
      r.add(name + " eta shrinks", prev_eta - worst_eta, "eta_observed=" + format_double(worst_eta));
      prev_eta = worst_eta;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

VLemma parse_v_lemma(const std::string& s) {
  if (s == "V1") return VLemma::V1;
  if (s == "V2") return VLemma::V2;
  if (s == "V3") return VLemma::V3;
  if (s == "V4") return VLemma::V4;
  throw ValidationError("unknown lemma suite '" + s + "' (expected V1, V2, V3 or V4)");
}

std::string v_lemma_name(VLemma v) {
  switch (v) {
    case VLemma::V1: return "V1";
    case VLemma::V2: return "V2";
    case VLemma::V3: return "V3";
    case VLemma::V4: return "V4";
  }
  return "";
}

LemmaReport lemma_v_suite(VLemma which, std::size_t D, std::size_t N, const SeedUnitary* u, double tol) {
  if (D < 2 || N < 2) throw ValidationError("lemma_v_suite: need D >= 2 and N >= 2");
  const Dims dims(N, D);
  auto T = [&](const Matrix& m, Systems s) { return partial_transpose(m, dims, s); };
  LemmaReport r{v_lemma_name(which), label(D, N), tol, {}};

  if (which == VLemma::V4) {
    if (!u) throw ValidationError("lemma_v_suite: V4 needs a seed unitary");
    if (u->dim() != D) throw ValidationError("lemma_v_suite: seed dimension differs from D");
    r.grid = label(D, N) + ",seed=" + u->kind;
    const Matrix xt = x_tilde(*u, N);
    std::vector<Matrix> xi;
    for (std::size_t i = 0; i < N; ++i) xi.push_back(T(xt, {i}));
    for (std::size_t j = 0; j <= N; ++j) {
      Matrix sum(xt.rows(), xt.cols()), sum_abs(xt.rows(), xt.cols());
      for (const Matrix& z : xi) {
        const Matrix zj = j == 0 ? z : T(z, {j - 1});
        sum += zj;
        sum_abs += op_abs(zj);
      }
      const Matrix lhs = op_abs(sum);
      const std::string jn = "j=" + std::to_string(j);
      r.add(jn + " equality", -(lhs - sum_abs).norm(), "Frobenius defect of |sum| - sum|.|");
      // the weaker operator inequality |sum| <= sum |.|
      r.add(jn + " inequality", min_eigenvalue(hermitian_part(sum_abs - lhs)));
    }
    return r;
  }

  const Matrix x = x_matrix(D, N);
  if (which == VLemma::V1) {
    for (std::size_t k = 0; k < N; ++k) {
      const Matrix a = op_abs(T(x, {k}));
      for (std::size_t l = 0; l < N; ++l)
        r.add("k=" + std::to_string(k + 1) + " l=" + std::to_string(l + 1), min_eigenvalue(T(a, {l})));
    }
    return r;
  }
  if (which == VLemma::V2) {
    const Matrix ax = op_abs(x);
    for (std::size_t i = 0; i < N; ++i) r.add("|X|^T" + std::to_string(i + 1), min_eigenvalue(T(ax, {i})));
    for (std::size_t i = 0; i < N; ++i) {
      const Matrix a = op_abs(T(x, {i}));
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = j; k < N; ++k) {
          const Systems s = j == k ? Systems{j} : Systems{j, k};
          r.add("i=" + std::to_string(i + 1) + " {j,k}={" + std::to_string(j + 1) + "," + std::to_string(k + 1) + "}",
                min_eigenvalue(T(a, s)));
        }
    }
    return r;
  }
  // V3 on Z = X: hypotheses (i)-(iii), then the conclusion
  const double nz = trace_norm(x);
  for (std::size_t i = 0; i < N; ++i) {
    const Matrix a = T(op_abs(T(x, {i})), {i});
    const std::string in = "i=" + std::to_string(i + 1);
    const double gap = nz - trace_norm(a);
    r.add_flag(in + " (i) trace-norm gap", gap > tol, "||Z||_1 - |||Z^Ti|^Ti||_1 = " + format_double(gap));
    r.add(in + " (ii)", min_eigenvalue(a));
    r.add(in + " (iii)", min_eigenvalue(T(op_abs(x), {i})));
  }
  const double mz = min_eigenvalue(x);
  r.add_flag("Z not PSD", mz < -tol, "min eigenvalue " + format_double(mz));
  for (std::size_t i = 0; i < N; ++i) {
    const double mi = min_eigenvalue(T(x, {i}));
    r.add_flag("Z^T" + std::to_string(i + 1) + " not PSD", mi < -tol, "min eigenvalue " + format_double(mi));
  }
  return r;
}

LemmaReport ppt_suite(const BlockOperator& rho, double tol) {
  LemmaReport r{"PPT", "parties=" + std::to_string(rho.parties()) + ",d=" + std::to_string(rho.d()), tol, {}};
  for (std::size_t i = 0; i < rho.parties(); ++i)
    r.add("T" + std::to_string(i + 1) + " (key+shield)", min_eigenvalue(partial_transpose(rho, i)));
  return r;
}

LemmaReport ppt_suite(const Matrix& rho, const Dims& dims, double tol) {
  if (product(dims) != rho.rows() || !rho.square()) throw ValidationError("ppt_suite: dims do not match the matrix");
  LemmaReport r{"PPT", "factors=" + std::to_string(dims.size()), tol, {}};
  for (std::size_t i = 0; i < dims.size(); ++i)
    r.add("T" + std::to_string(i + 1), min_eigenvalue(partial_transpose(rho, dims, {i})));
  return r;
}

}  // namespace mkey
