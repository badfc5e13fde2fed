// Twistings, the squeezing twist of one key row, privacy-squeezed key
// matrices and closeness-to-private-state certificates.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/random.hpp"

namespace mkey {

// Controlled unitary sum_i |i><i| ⊗ U_i on the shield; unassigned key
// indices carry the identity.
class Twisting {
 public:
  Twisting(std::size_t d, std::size_t N, std::size_t shield_dim);

  std::size_t d() const { return d_; }
  std::size_t parties() const { return n_; }
  std::size_t shield_dim() const { return s_; }
  void assign(std::size_t key_index, Matrix u);
  Matrix unitary(std::size_t key_index) const;
  const std::map<std::size_t, Matrix>& assigned() const { return u_; }

 private:
  std::size_t d_, n_, s_;
  std::map<std::size_t, Matrix> u_;
};

BlockOperator apply_twisting(const BlockOperator& rho, const Twisting& t);
Twisting random_twisting(std::size_t d, std::size_t N, std::size_t shield_dim, Rng& rng);

// Twisting after which block (i..i, j..j) is PSD with trace ||Omega||_1 for
// every j; built from the SVD of each block in the row.
Twisting squeezing_twist(const BlockOperator& rho, std::size_t row);
// Key matrix of the squeezed state (shield traced out).
Matrix privacy_squeeze(const BlockOperator& rho, std::size_t row);

struct ClosenessReport {
  std::size_t d = 2, N = 2, row = 0;
  std::vector<double> norms;  // ||Omega_{i..i}^{j..j}||_1, j = 0..d-1
  double epsilon = 0;         // max_j | norms[j] - 1/d |
  std::optional<double> eta;
  std::optional<double> sufficient_bound;
  bool relaxed = false;  // d = 2 path: eta = max(0, 1/2 - ||Omega_0^1||_1)
};

// Trace-norm distance bound to the nearest private state for a given eta;
// the entropy term saturates at 1 once 2 sqrt(d eta) > 1.
double sufficient_bound(std::size_t d, std::size_t N, double eta);
// For d > 2 the bound is only computed when eta is supplied.
ClosenessReport closeness_report(const BlockOperator& rho, std::size_t row, std::optional<double> eta = {});
std::string to_json(const ClosenessReport& r);

}  // namespace mkey
