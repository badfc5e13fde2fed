// Recurrence protocol on key qubits: every party applies CNOT from the
// accumulator key qubit to a fresh copy's key qubit, measures the target and
// the copy is kept only for accepted outcome patterns.
//
// k counts copies consumed (k - 1 steps). The shield of the output lists the
// accumulator shield factors first, then the fresh ones.
#pragma once

#include <cstddef>
#include <string>

#include "mkey/block_operator.hpp"
#include "mkey/states.hpp"

namespace mkey {

enum class KeepRule { AllEqual, AllZeros };

struct StepResult {
  BlockOperator state;
  double probability = 0;
};

// Exact blockwise step; both inputs need d = 2 and the same N.
StepResult protocol_step(const BlockOperator& acc, const BlockOperator& fresh, KeepRule rule);
// Same step through dense matrices; total dimension at most 4096.
StepResult dense_protocol_step(const BlockOperator& acc, const BlockOperator& fresh, KeepRule rule);
// k copies of rho through k - 1 blockwise steps; probability is cumulative.
StepResult iterate_protocol(const BlockOperator& rho, std::size_t k, KeepRule rule);

struct ProtocolOutput {
  BlockOperator state;
  double success_probability = 1;
  std::size_t k = 1;
  std::string family;
  double normalization = 0;
};

// Closed-form k-copy outputs. States are only built while the k-copy shield
// stays small; the scalar functions below have no such limit.
ProtocolOutput recurse_one(std::size_t D, std::size_t N, std::size_t k);
// Needs a flat seed and N >= 3. Hermitian seeds use the all-equal rule,
// others keep only the all-zeros outcome.
ProtocolOutput recurse_two(const SeedUnitary& u, std::size_t N, std::size_t k);

enum class ProbabilityModel { Hermitian, NonHermitian };

// Weight of each of the tuples 0..0 and 1..1 (a) and of each psi_j,
// complement tuple (b) in the squeezed k-copy state; 2a + 2Nb = 1.
struct FamilyWeights {
  double a = 0, b = 0;
};

double normalization_one_k(std::size_t D, std::size_t N, std::size_t k);
FamilyWeights weights_one(std::size_t D, std::size_t N, std::size_t k);
double log2_probability_one(std::size_t D, std::size_t N, std::size_t k);

// log2 of 2(N D sqrt D)^k + 2N D^k [1 + (N-1) sqrt D]^k
double log2_normalization_two_k(std::size_t D, std::size_t N, std::size_t k);
FamilyWeights weights_two(std::size_t D, std::size_t N, std::size_t k);
double log2_probability_two(std::size_t D, std::size_t N, std::size_t k, ProbabilityModel model);

// Privacy-squeezed key matrices (2^N x 2^N) built from the weights.
Matrix squeezed_key_matrix(std::size_t N, const FamilyWeights& w);

}  // namespace mkey
