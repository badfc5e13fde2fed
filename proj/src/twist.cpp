#include "mkey/twist.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mkey/entropy.hpp"
#include "mkey/linalg.hpp"
#include "mkey/matrix_io.hpp"

namespace mkey {

Twisting::Twisting(std::size_t d, std::size_t N, std::size_t shield_dim) : d_(d), n_(N), s_(shield_dim) {
  if (d < 2 || N < 1 || shield_dim < 1) throw ValidationError("Twisting: bad dimensions");
}

void Twisting::assign(std::size_t key_index, Matrix u) {
  std::size_t k = 1;
  for (std::size_t i = 0; i < n_; ++i) k *= d_;
  if (key_index >= k) throw ValidationError("Twisting: key index out of range");
  if (u.rows() != s_ || !is_unitary(u)) throw ValidationError("Twisting: U must be unitary on the shield");
  u_[key_index] = std::move(u);
}

Matrix Twisting::unitary(std::size_t key_index) const {
  auto it = u_.find(key_index);
  return it == u_.end() ? Matrix::identity(s_) : it->second;
}

BlockOperator apply_twisting(const BlockOperator& rho, const Twisting& t) {
  if (rho.d() != t.d() || rho.parties() != t.parties() || rho.shield_dim() != t.shield_dim())
    throw ValidationError("apply_twisting: structure mismatch");
  BlockOperator out(rho.d(), rho.parties(), rho.shield(), rho.owner());
  for (const auto& [ij, m] : rho.blocks()) {
    const auto a = t.assigned().find(ij.first), b = t.assigned().find(ij.second);
    Matrix x = m;
    if (a != t.assigned().end()) x = a->second * x;
    if (b != t.assigned().end()) x = x * b->second.adjoint();
    out.set(ij.first, ij.second, std::move(x));
  }
  return out;
}

Twisting random_twisting(std::size_t d, std::size_t N, std::size_t shield_dim, Rng& rng) {
  Twisting t(d, N, shield_dim);
  std::size_t k = 1;
  for (std::size_t i = 0; i < N; ++i) k *= d;
  for (std::size_t i = 0; i < k; ++i) t.assign(i, random_unitary(shield_dim, rng));
  return t;
}

Twisting squeezing_twist(const BlockOperator& rho, std::size_t row) {
  if (row >= rho.d()) throw ValidationError("squeezing_twist: row out of range");
  Twisting t(rho.d(), rho.parties(), rho.shield_dim());
  const std::size_t ri = rho.uniform_index(row);
  std::optional<Matrix> anchor;  // V_a^dagger
  for (std::size_t j = 0; j < rho.d(); ++j) {
    if (j == row) continue;
    const Matrix* m = rho.find(ri, rho.uniform_index(j));
    if (!m || m->max_abs() == 0) continue;
    // Omega = V D W^dagger; U_j = V_a^dagger V W^dagger makes U_i Omega U_j^dagger = V_a^dagger V D V^dagger V_a
    const Svd s = svd(*m);
    if (!anchor) anchor = s.u.adjoint();
    t.assign(rho.uniform_index(j), *anchor * s.u * s.v.adjoint());
  }
  if (anchor) t.assign(ri, *anchor);
  return t;
}

Matrix privacy_squeeze(const BlockOperator& rho, std::size_t row) {
  return hermitian_part(apply_twisting(rho, squeezing_twist(rho, row)).key_matrix());
}

double sufficient_bound(std::size_t d, std::size_t N, double eta) {
  if (!(eta >= 0)) throw ValidationError("sufficient_bound: eta must be nonnegative");
  const double x = 2 * std::sqrt(d * eta);
  const double h = x > 1 ? 1.0 : binary_entropy(x);
  return std::sqrt(std::numbers::ln2 * (N * x * std::log2(double(d)) + h)) + x;
}

ClosenessReport closeness_report(const BlockOperator& rho, std::size_t row, std::optional<double> eta) {
  if (row >= rho.d()) throw ValidationError("closeness_report: row out of range");
  ClosenessReport r{rho.d(), rho.parties(), row, {}, 0, std::nullopt, std::nullopt, false};
  const std::size_t ri = rho.uniform_index(row);
  for (std::size_t j = 0; j < rho.d(); ++j) {
    const Matrix* m = rho.find(ri, rho.uniform_index(j));
    const double n = m ? trace_norm(*m) : 0.0;
    r.norms.push_back(n);
    r.epsilon = std::max(r.epsilon, std::abs(n - 1.0 / rho.d()));
  }
  if (eta) {
    r.eta = *eta;
  } else if (rho.d() == 2) {
    const Matrix* m = rho.find(rho.uniform_index(0), rho.uniform_index(1));
    r.eta = std::max(0.0, 0.5 - (m ? trace_norm(*m) : 0.0));
    r.relaxed = true;
  }
  if (r.eta) r.sufficient_bound = sufficient_bound(r.d, r.N, *r.eta);
  return r;
}

std::string to_json(const ClosenessReport& r) {
  std::ostringstream os;
  os << "{\"d\":" << r.d << ",\"N\":" << r.N << ",\"row\":" << r.row << ",\"norms\":[";
  for (std::size_t j = 0; j < r.norms.size(); ++j) os << (j ? "," : "") << format_double(r.norms[j]);
  os << "],\"epsilon\":" << format_double(r.epsilon);
  os << ",\"eta\":" << (r.eta ? format_double(*r.eta) : "null");
  os << ",\"sufficient_bound\":" << (r.sufficient_bound ? format_double(*r.sufficient_bound) : "null");
  os << ",\"relaxed\":" << (r.relaxed ? "true" : "false") << "}";
  return os.str();
}

}  // namespace mkey
