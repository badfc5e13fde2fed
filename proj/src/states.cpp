#include "mkey/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mkey/linalg.hpp"
#include "mkey/tensor.hpp"

namespace mkey {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

void check_dn(std::size_t d, std::size_t N, const char* what) {
  if (d < 2 || N < 2) throw ValidationError(std::string(what) + ": need dimension >= 2 and N >= 2");
}

// Index of |i>^{⊗N} in (C^D)^{⊗N}.
std::size_t repeated(std::size_t i, std::size_t D, std::size_t N) {
  std::size_t s = 0;
  for (std::size_t k = 0; k < N; ++k) s = s * D + i;
  return s;
}

// exp(2 pi i m / D), exact at quarter turns
cplx root_of_unity(std::size_t m, std::size_t D) {
  if (4 * m % D == 0) {
    static const cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[4 * m / D];
  }
  return std::polar(1.0, 2 * std::numbers::pi * double(m) / double(D));
}

}  // namespace

Vector ghz_vector(std::size_t d, std::size_t N) {
  check_dn(d, N, "ghz");
  Vector v(ipow(d, N));
  for (std::size_t i = 0; i < d; ++i) v[repeated(i, d, N)] = 1 / std::sqrt(double(d));
  return v;
}

Matrix ghz(std::size_t d, std::size_t N) {
  const Vector v = ghz_vector(d, N);
  return Matrix::outer(v, v);
}

Matrix omega(std::size_t d, std::size_t N) { return r_projector(d, N) / double(d); }

Matrix r_projector(std::size_t D, std::size_t N) {
  check_dn(D, N, "r_projector");
  Matrix r(ipow(D, N), ipow(D, N));
  for (std::size_t i = 0; i < D; ++i) r(repeated(i, D, N), repeated(i, D, N)) = 1;
  return r;
}

Matrix p_projector(std::size_t D, std::size_t N) { return r_projector(D, N) - ghz(D, N); }

Matrix q_projector(std::size_t D, std::size_t N) { return Matrix::identity(ipow(D, N)) - r_projector(D, N); }

double x_denominator(std::size_t D, std::size_t N) {
  check_dn(D, N, "x_matrix");
  return double(ipow(D, N)) + 2.0 * D - 4.0;
}

Matrix x_matrix(std::size_t D, std::size_t N) {
  Matrix x = ghz(D, N) * double(D - 2.0) - p_projector(D, N) * 2.0 + q_projector(D, N);
  return x / x_denominator(D, N);
}

Matrix s_matrix(std::size_t D, std::size_t N) {
  return Matrix::identity(ipow(D, N)) + ghz(D, N) * double(D) - r_projector(D, N) * 2.0;
}

Matrix abs_x_transposed(std::size_t D, std::size_t N, std::size_t k) {
  if (k >= N) throw ValidationError("abs_x_transposed: party index out of range");
  const Matrix st = partial_transpose(s_matrix(D, N), Dims(N, D), {k});
  return (st + r_projector(D, N)) / x_denominator(D, N);
}

std::size_t psi_index(std::size_t N, std::size_t i) {
  if (i > N) throw ValidationError("psi_index: i out of range");
  return i == 0 ? 0 : std::size_t{1} << (N - i);
}

std::size_t psi_bar_index(std::size_t N, std::size_t i) { return ((std::size_t{1} << N) - 1) ^ psi_index(N, i); }

double normalization_one(std::size_t D, std::size_t N) {
  const double c = x_denominator(D, N), dn = double(ipow(D, N));
  return 2.0 * (1.0 + N * dn / c);
}

BlockOperator construction_one(std::size_t D, std::size_t N) {
  const Dims dims(N, D);
  const Matrix x = x_matrix(D, N);
  BlockOperator rho(2, N, dims);
  for (std::size_t i = 0; i <= N; ++i) {
    Matrix blk = i == 0 ? op_abs(x) : partial_transpose(op_abs(partial_transpose(x, dims, {i - 1})), dims, {i - 1});
    blk = hermitian_part(blk);
    rho.add(psi_index(N, i), psi_index(N, i), blk);
    rho.add(psi_bar_index(N, i), psi_bar_index(N, i), blk);
  }
  const std::size_t full = (std::size_t{1} << N) - 1;
  rho.set(0, full, x);
  rho.set(full, 0, x.adjoint());
  rho.scale(1.0 / normalization_one(D, N));
  return rho;
}

SeedUnitary vandermonde(std::size_t D) {
  if (D < 2) throw ValidationError("vandermonde: D must be >= 2");
  SeedUnitary s{Matrix(D, D), "vandermonde", D == 2, true};
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t l = 0; l < D; ++l)
      s.u(k, l) = root_of_unity((k * l) % D, D) / std::sqrt(double(D));
  return s;
}

SeedUnitary hadamard_power(std::size_t m) {
  if (m < 1 || m > 10) throw ValidationError("hadamard-power: m must be in 1..10");
  const Matrix h = vandermonde(2).u;
  return {kron_power(h, m), "hadamard-power", true, true};
}

SeedUnitary custom_seed(const Matrix& u) {
  if (!u.square() || u.rows() < 2) throw ValidationError("seed unitary: must be square with D >= 2");
  if (!is_unitary(u)) throw ValidationError("seed unitary: matrix is not unitary");
  SeedUnitary s{u, "custom", max_diff(u, u.adjoint()) <= 1e-12, true};
  const double f = 1 / std::sqrt(double(u.rows()));
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j)
      if (std::abs(std::abs(u(i, j)) - f) > 1e-10) s.flat = false;
  return s;
}

SeedUnitary seed_unitary(const std::string& kind, std::size_t param) {
  if (kind == "vandermonde") return vandermonde(param);
  if (kind == "hadamard-power") return hadamard_power(param);
  throw ValidationError("seed unitary: unknown kind '" + kind + "'");
}

Matrix x_tilde(const SeedUnitary& u, std::size_t N) {
  const std::size_t D = u.dim();
  check_dn(D, N, "x_tilde");
  if (!is_unitary(u.u)) throw ValidationError("x_tilde: seed is not unitary");
  Matrix x(ipow(D, N), ipow(D, N));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) x(repeated(i, D, N), repeated(j, D, N)) = u.u(i, j);
  return x;
}

double normalization_two(const SeedUnitary& u, std::size_t N) {
  double s = 0;
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < u.dim(); ++j) s += std::abs(u.u(i, j));
  // for N = 2 transposing both parties is a full transpose, whose trace norm is D
  if (N == 2) return 4.0 * s + 8.0 * double(u.dim());
  return 2.0 * N * (double(u.dim()) + N * s);
}

BlockOperator construction_two(const SeedUnitary& u, std::size_t N) {
  const std::size_t D = u.dim();
  const Dims dims(N, D);
  const Matrix xt = x_tilde(u, N);
  std::vector<Matrix> xi;
  Matrix sum(xt.rows(), xt.cols());
  for (std::size_t i = 0; i < N; ++i) {
    xi.push_back(partial_transpose(xt, dims, {i}));
    sum += xi.back();
  }
  BlockOperator rho(2, N, dims);
  for (std::size_t j = 0; j <= N; ++j) {
    Matrix blk(xt.rows(), xt.cols());
    for (const Matrix& z : xi) blk += op_abs(j == 0 ? z : partial_transpose(z, dims, {j - 1}));
    blk = hermitian_part(blk);
    rho.add(psi_index(N, j), psi_index(N, j), blk);
    rho.add(psi_bar_index(N, j), psi_bar_index(N, j), blk);
  }
  const std::size_t full = (std::size_t{1} << N) - 1;
  rho.set(0, full, sum);
  rho.set(full, 0, sum.adjoint());
  rho.scale(1.0 / normalization_two(u, N));
  return rho;
}

void validate(const PditSpec& spec) {
  if (spec.d < 2 || spec.N < 2) throw ValidationError("pdit: need d >= 2 and N >= 2");
  if (spec.shield.size() != spec.N) throw ValidationError("pdit: one shield factor per party required");
  const std::size_t s = product(spec.shield);
  if (spec.rho.rows() != s || !spec.rho.square()) throw ValidationError("pdit: shield state has wrong dimension");
  if (!spec.rho.is_hermitian(1e-10) || std::abs(spec.rho.trace() - 1.0) > 1e-10 || !is_psd(spec.rho))
    throw ValidationError("pdit: shield state is not a density matrix");
  if (spec.U.size() != spec.d) throw ValidationError("pdit: need d unitaries");
  for (const Matrix& u : spec.U)
    if (u.rows() != s || !is_unitary(u)) throw ValidationError("pdit: U_i must be unitary on the shield");
}

BlockOperator pdit(const PditSpec& spec) {
  validate(spec);
  BlockOperator g(spec.d, spec.N, spec.shield);
  for (std::size_t i = 0; i < spec.d; ++i)
    for (std::size_t j = 0; j < spec.d; ++j)
      g.set(g.uniform_index(i), g.uniform_index(j), spec.U[i] * spec.rho * spec.U[j].adjoint() / double(spec.d));
  return g;
}

Matrix permutation_operator(const std::vector<std::size_t>& perm, std::size_t D, std::size_t N) {
  if (perm.size() != N) throw ValidationError("permutation_operator: wrong length");
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < N; ++k)
    if (sorted[k] != k) throw ValidationError("permutation_operator: not a permutation");
  const Dims dims(N, D);
  const std::size_t n = ipow(D, N);
  Matrix v(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto i = digits(r, dims);
    std::vector<std::size_t> j(N);
    for (std::size_t k = 0; k < N; ++k) j[k] = i[perm[k]];
    v(r, flat_index(j, dims)) = 1;
  }
  return v;
}

PditSpec pdit_example_spec(std::size_t D, std::size_t N, const std::vector<std::size_t>& perm) {
  check_dn(D, N, "pdit_example");
  const std::size_t n = ipow(D, N);
  return {2, N, Dims(N, D), Matrix::identity(n) / double(n), {permutation_operator(perm, D, N), Matrix::identity(n)}};
}

BlockOperator pdit_example(std::size_t D, std::size_t N, const std::vector<std::size_t>& perm) {
  return pdit(pdit_example_spec(D, N, perm));
}

Matrix pauli(int m) {
  Matrix s(2, 2);
  switch (m) {
    case 0: s = Matrix::identity(2); break;
    case 1: s(0, 1) = s(1, 0) = 1; break;
    case 2: s(0, 1) = cplx(0, -1), s(1, 0) = cplx(0, 1); break;
    case 3: s(0, 0) = 1, s(1, 1) = -1; break;
    default: throw ValidationError("pauli: index must be 0..3");
  }
  return s;
}

Vector bell_vector(int m) {
  if (m < 0 || m > 3) throw ValidationError("bell_vector: index must be 0..3");
  const double h = 1 / std::sqrt(2.0), sg = (m % 2) ? -h : h;
  Vector v(4);
  if (m < 2)
    v[1] = h, v[2] = sg;
  else
    v[0] = h, v[3] = sg;
  return v;
}

Matrix smolin_family(std::size_t n) {
  if (n < 1) throw ValidationError("smolin_family: n must be >= 1");
  const Vector b = bell_vector(0);
  const Matrix psi0 = Matrix::outer(b, b);
  Matrix rho = psi0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t q = 2 * k;
    Matrix next(ipow(2, q + 2), ipow(2, q + 2));
    for (int m = 0; m < 4; ++m) {
      const Matrix um = kron(Matrix::identity(ipow(2, q - 1)), pauli(m));
      const Matrix sm = kron(Matrix::identity(2), pauli(m));
      next += kron(um * rho * um.adjoint(), sm * psi0 * sm.adjoint());
    }
    rho = next / 4.0;
  }
  return rho;
}

}  // namespace mkey
