#include "mkey/distill.hpp"

#include <cmath>

#include "mkey/linalg.hpp"
#include "mkey/tensor.hpp"

namespace mkey {

namespace {

std::vector<std::size_t> accepted(std::size_t N, KeepRule rule) {
  if (rule == KeepRule::AllZeros) return {0};
  return {0, (std::size_t{1} << N) - 1};
}

void check_pair(const BlockOperator& acc, const BlockOperator& fresh) {
  if (acc.d() != 2 || fresh.d() != 2) throw ValidationError("protocol_step: key parts must be qubits");
  if (acc.parties() != fresh.parties()) throw ValidationError("protocol_step: party counts differ");
}

BlockOperator joint_shell(const BlockOperator& acc, const BlockOperator& fresh) {
  Dims shield = acc.shield();
  shield.insert(shield.end(), fresh.shield().begin(), fresh.shield().end());
  std::vector<std::size_t> owner = acc.owner();
  owner.insert(owner.end(), fresh.owner().begin(), fresh.owner().end());
  return BlockOperator(2, acc.parties(), shield, owner);
}

double pow_size(double base, std::size_t e) { return std::pow(base, double(e)); }

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

void check_copies(std::size_t k, std::size_t shield_dim) {
  if (k < 1) throw ValidationError("recurse: k must be >= 1");
  double s = 1;
  for (std::size_t c = 0; c < k; ++c) s *= double(shield_dim);
  if (s > 4096) throw ValidationError("recurse: k-copy shield too large for an explicit state; use the scalar forms");
}

}  // namespace

StepResult protocol_step(const BlockOperator& acc, const BlockOperator& fresh, KeepRule rule) {
  check_pair(acc, fresh);
  BlockOperator out = joint_shell(acc, fresh);
  for (std::size_t m : accepted(acc.parties(), rule))
    for (const auto& [ij, a] : acc.blocks())
      if (const Matrix* f = fresh.find(ij.first ^ m, ij.second ^ m)) out.add(ij.first, ij.second, kron(a, *f));
  const double t = out.trace().real(), t0 = acc.trace().real() * fresh.trace().real();
  if (!(t > 0)) throw NumericalError("protocol_step: no weight survives post-selection");
  out.scale(1.0 / t);
  return {out, t / t0};
}

StepResult dense_protocol_step(const BlockOperator& acc, const BlockOperator& fresh, KeepRule rule) {
  check_pair(acc, fresh);
  const std::size_t N = acc.parties(), K = acc.key_dim(), sa = acc.shield_dim(), sf = fresh.shield_dim();
  const std::size_t n = K * sa * K * sf;
  if (n > 4096) throw ValidationError("dense_protocol_step: total dimension exceeds 4096");
  // factors: acc keys, acc shield, fresh keys, fresh shield
  Dims dims(N, 2);
  dims.push_back(sa);
  dims.insert(dims.end(), N, 2);
  dims.push_back(sf);
  const Matrix rho = kron(acc.dense(), fresh.dense());
  // CNOT on every party: fresh key p ^= acc key p, as a basis permutation
  std::vector<std::size_t> image(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto dg = digits(x, dims);
    for (std::size_t p = 0; p < N; ++p) dg[N + 1 + p] ^= dg[p];
    image[x] = flat_index(dg, dims);
  }
  Matrix moved(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) moved(image[x], image[y]) = rho(x, y);
  // project the fresh keys on accepted outcomes, then discard them
  Matrix proj(n, n);
  for (std::size_t m : accepted(N, rule))
    for (std::size_t x = 0; x < n; ++x) {
      const auto dg = digits(x, dims);
      std::size_t outcome = 0;
      for (std::size_t p = 0; p < N; ++p) outcome = outcome * 2 + dg[N + 1 + p];
      if (outcome == m) proj(x, x) = 1;
    }
  Systems fresh_keys;
  for (std::size_t p = 0; p < N; ++p) fresh_keys.push_back(N + 1 + p);
  const Matrix kept = partial_trace(proj * moved * proj, dims, fresh_keys);
  const double t = kept.trace().real();
  if (!(t > 0)) throw NumericalError("dense_protocol_step: no weight survives post-selection");
  BlockOperator out = joint_shell(acc, fresh);
  const std::size_t s = sa * sf;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      const Matrix b = kept.block(i * s, j * s, s, s) / t;
      if (b.max_abs() > 0) out.set(i, j, b);
    }
  return {out, t / (acc.trace().real() * fresh.trace().real())};
}

StepResult iterate_protocol(const BlockOperator& rho, std::size_t k, KeepRule rule) {
  if (k < 1) throw ValidationError("iterate_protocol: k must be >= 1");
  StepResult r{rho, 1.0};
  for (std::size_t c = 1; c < k; ++c) {
    StepResult s = protocol_step(r.state, rho, rule);
    r = {std::move(s.state), r.probability * s.probability};
  }
  return r;
}

ProtocolOutput recurse_one(std::size_t D, std::size_t N, std::size_t k) {
  check_copies(k, ipow(D, N));
  Dims shield;
  for (std::size_t c = 0; c < k; ++c) shield.insert(shield.end(), N, D);
  BlockOperator out(2, N, shield);
  const Dims dims(N, D);
  const Matrix x = x_matrix(D, N);
  for (std::size_t i = 0; i <= N; ++i) {
    const Matrix b = i == 0 ? op_abs(x) : partial_transpose(op_abs(partial_transpose(x, dims, {i - 1})), dims, {i - 1});
    const Matrix bk = kron_power(hermitian_part(b), k);
    out.add(psi_index(N, i), psi_index(N, i), bk);
    out.add(psi_bar_index(N, i), psi_bar_index(N, i), bk);
  }
  const std::size_t full = (std::size_t{1} << N) - 1;
  out.set(0, full, kron_power(x, k));
  out.set(full, 0, kron_power(x.adjoint(), k));
  const double nk = normalization_one_k(D, N, k);
  out.scale(1.0 / nk);
  return {out, std::exp2(log2_probability_one(D, N, k)), k, "one", nk};
}

ProtocolOutput recurse_two(const SeedUnitary& u, std::size_t N, std::size_t k) {
  if (!u.flat) throw ValidationError("recurse_two: seed must be flat");
  if (N < 3) throw ValidationError("recurse_two: closed form needs N >= 3");
  const std::size_t D = u.dim();
  check_copies(k, ipow(D, N));
  const Dims dims(N, D);
  const Matrix xt = x_tilde(u, N);
  std::vector<Matrix> xi;
  Matrix sum(xt.rows(), xt.cols());
  for (std::size_t i = 0; i < N; ++i) {
    xi.push_back(partial_transpose(xt, dims, {i}));
    sum += xi.back();
  }
  Dims shield;
  for (std::size_t c = 0; c < k; ++c) shield.insert(shield.end(), N, D);
  BlockOperator out(2, N, shield);
  for (std::size_t j = 0; j <= N; ++j) {
    Matrix blk(xt.rows(), xt.cols());
    for (const Matrix& z : xi) blk += op_abs(j == 0 ? z : partial_transpose(z, dims, {j - 1}));
    const Matrix bk = kron_power(hermitian_part(blk), k);
    out.add(psi_index(N, j), psi_index(N, j), bk);
    out.add(psi_bar_index(N, j), psi_bar_index(N, j), bk);
  }
  const std::size_t full = (std::size_t{1} << N) - 1;
  out.set(0, full, kron_power(sum, k));
  out.set(full, 0, kron_power(sum.adjoint(), k));
  const double log2n = log2_normalization_two_k(D, N, k);
  out.scale(std::exp2(-log2n));
  const auto model = u.hermitian ? ProbabilityModel::Hermitian : ProbabilityModel::NonHermitian;
  return {out, std::exp2(log2_probability_two(D, N, k, model)), k, "two", std::exp2(log2n)};
}

double normalization_one_k(std::size_t D, std::size_t N, std::size_t k) {
  if (k < 1) throw ValidationError("normalization: k must be >= 1");
  const double r = double(ipow(D, N)) / x_denominator(D, N);
  return 2.0 * (1.0 + N * pow_size(r, k));
}

FamilyWeights weights_one(std::size_t D, std::size_t N, std::size_t k) {
  const double nk = normalization_one_k(D, N, k);
  const double r = double(ipow(D, N)) / x_denominator(D, N);
  return {1.0 / nk, pow_size(r, k) / nk};
}

double log2_probability_one(std::size_t D, std::size_t N, std::size_t k) {
  return double(k - 1) + std::log2(normalization_one_k(D, N, k)) - double(k) * std::log2(normalization_one(D, N));
}

double log2_normalization_two_k(std::size_t D, std::size_t N, std::size_t k) {
  if (k < 1) throw ValidationError("normalization: k must be >= 1");
  if (D < 2 || N < 2) throw ValidationError("normalization: need D >= 2 and N >= 2");
  const double sd = std::sqrt(double(D));
  const double rho = (1 + (N - 1) * sd) / (N * sd);
  // 2(N D sqrt D)^k [1 + N rho^k]
  return double(k) * std::log2(N * D * sd) + std::log2(2.0 * (1.0 + N * pow_size(rho, k)));
}

FamilyWeights weights_two(std::size_t D, std::size_t N, std::size_t k) {
  if (k < 1) throw ValidationError("weights: k must be >= 1");
  const double sd = std::sqrt(double(D));
  const double rho = (1 + (N - 1) * sd) / (N * sd);
  const double a = 1.0 / (2.0 + 2.0 * N * pow_size(rho, k));
  return {a, pow_size(rho, k) * a};
}

double log2_probability_two(std::size_t D, std::size_t N, std::size_t k, ProbabilityModel model) {
  const double base = log2_normalization_two_k(D, N, k) - double(k) * log2_normalization_two_k(D, N, 1);
  return model == ProbabilityModel::Hermitian ? double(k - 1) + base : base;
}

Matrix squeezed_key_matrix(std::size_t N, const FamilyWeights& w) {
  const std::size_t K = std::size_t{1} << N, full = K - 1;
  Matrix m(K, K);
  m(0, 0) = m(full, full) = m(0, full) = m(full, 0) = w.a;
  for (std::size_t j = 1; j <= N; ++j) {
    m(psi_index(N, j), psi_index(N, j)) += w.b;
    m(psi_bar_index(N, j), psi_bar_index(N, j)) += w.b;
  }
  return m;
}

}  // namespace mkey
