// Concrete states: GHZ projectors, the X / S / X̃ matrices, the two bound
// entangled families, private states and the Smolin family.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/matrix.hpp"

namespace mkey {

// Normalized GHZ vector / projector on N parties of dimension d.
Vector ghz_vector(std::size_t d, std::size_t N);
Matrix ghz(std::size_t d, std::size_t N);
// (1/d) sum_i |i><i|^{⊗N}
Matrix omega(std::size_t d, std::size_t N);

Matrix r_projector(std::size_t D, std::size_t N);  // sum_i |i><i|^{⊗N}
Matrix p_projector(std::size_t D, std::size_t N);  // R - P+
Matrix q_projector(std::size_t D, std::size_t N);  // 1 - R
double x_denominator(std::size_t D, std::size_t N);  // D^N + 2D - 4
Matrix x_matrix(std::size_t D, std::size_t N);
Matrix s_matrix(std::size_t D, std::size_t N);  // 1 + D P+ - 2R
// |X^{T_k}| = (S^{T_k} + R) / (D^N + 2D - 4), k a 0-based shield party.
Matrix abs_x_transposed(std::size_t D, std::size_t N, std::size_t k);

// Key index of psi_i: party i (1-based) holds 1, the rest 0; psi_0 = 0...0.
std::size_t psi_index(std::size_t N, std::size_t i);
std::size_t psi_bar_index(std::size_t N, std::size_t i);

double normalization_one(std::size_t D, std::size_t N);
BlockOperator construction_one(std::size_t D, std::size_t N);

struct SeedUnitary {
  Matrix u;
  std::string kind;  // "vandermonde", "hadamard-power", "custom"
  bool hermitian = false;
  bool flat = false;  // all |u_ij| = 1/sqrt(D)
  std::size_t dim() const { return u.rows(); }
};

SeedUnitary vandermonde(std::size_t D);
SeedUnitary hadamard_power(std::size_t m);
// Checks unitarity; flags are detected from the entries.
SeedUnitary custom_seed(const Matrix& u);
// kind is "vandermonde" (param = D) or "hadamard-power" (param = m).
SeedUnitary seed_unitary(const std::string& kind, std::size_t param);

// sum_ij u_ij |i><j|^{⊗N}
Matrix x_tilde(const SeedUnitary& u, std::size_t N);
// 2N(D + N sum|u_ij|) for N >= 3; 4 sum|u_ij| + 8D at N = 2.
double normalization_two(const SeedUnitary& u, std::size_t N);
BlockOperator construction_two(const SeedUnitary& u, std::size_t N);

struct PditSpec {
  std::size_t d = 2, N = 2;
  Dims shield;             // one factor per party
  Matrix rho;              // shield state
  std::vector<Matrix> U;   // d unitaries on the shield
};

void validate(const PditSpec& spec);
BlockOperator pdit(const PditSpec& spec);
// perm is a permutation of {0..N-1}; (V_pi)_{i,j} = prod_k [j_k = i_{perm[k]}].
Matrix permutation_operator(const std::vector<std::size_t>& perm, std::size_t D, std::size_t N);
PditSpec pdit_example_spec(std::size_t D, std::size_t N, const std::vector<std::size_t>& perm);
BlockOperator pdit_example(std::size_t D, std::size_t N, const std::vector<std::size_t>& perm);

// Pauli matrix sigma_m, m = 0..3 (identity, x, y, z).
Matrix pauli(int m);
// Two-qubit Bell vectors: 0,1 = (|01> ± |10>)/√2; 2,3 = (|00> ± |11>)/√2.
Vector bell_vector(int m);
// 2n-qubit member of the Smolin family.
Matrix smolin_family(std::size_t n);

}  // namespace mkey
