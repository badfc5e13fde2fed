// Key extraction and key-rate bounds: cq states of the two families,
// measurement of block operators, Devetak-Winter rates, key curves, the
// closeness checker for cq states, the E_D lower bound for private states,
// relative entropy upper bounds and Bell values.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/cq.hpp"
#include "mkey/distill.hpp"
#include "mkey/random.hpp"
#include "mkey/states.hpp"

namespace mkey {

// Labeled cq states of the squeezed k-copy outputs: tuples 0..0 and 1..1
// share one label, each psi_j / complement tuple has its own.
CqState cq_one(std::size_t D, std::size_t N, std::size_t k);
CqState cq_two(const SeedUnitary& u, std::size_t N, std::size_t k);
CqState cq_from_weights(std::size_t N, const FamilyWeights& w);

enum class EveAccess {
  // Eve purifies rho_AA'; the shield is traced out after the measurement.
  DiscardShield,
  // Eve also receives the shield; only the key matrix matters then.
  ShieldToEve,
};

// Measures every key in the computational basis. The dense path purifies rho
// through the eigendecomposition of each connected block component; it is
// always used for DiscardShield (Eve dimension <= 512). ShieldToEve without
// `dense` works from the key matrix alone. Results are labeled whenever
// the Eve states allow it.
CqState measure_to_cq(const BlockOperator& rho, EveAccess access, bool dense = false);
// Eve holds a purification of the key matrix itself.
CqState measure_key_matrix(const Matrix& key, std::size_t d, std::size_t N);
// Pure Eve states given by their Gram matrix G_ts = <e_t|e_s> (unnormalized,
// p_t = G_tt), indexed by flattened key tuples.
CqState cq_from_gram(const Matrix& gram, std::size_t d, std::size_t N, double tol = 1e-9);

// I(A_i:A_j) - I(A_i:E), parties 0-based.
double mutual_information_keys(const CqState& cq, std::size_t i, std::size_t j);
double eve_information(const CqState& cq, std::size_t i);
double dw_bound(const CqState& cq, std::size_t i, std::size_t j);
// max_i [ min_{j != i} I(A_i:A_j) - I(A_i:E) ]
double dw_best(const CqState& cq);

struct ProtocolPoint {
  std::string family;
  std::size_t D = 0, N = 0, k = 0;
  double p_success = 0;
  double K_DW = 0;      // clamped at 0
  double K_DW_raw = 0;  // signed
  double K_scaled = 0;  // p_success * K_DW
};

// family: "one", "two" (Hermitian probability model) or "two-nonhermitian".
std::vector<ProtocolPoint> key_curve(const std::string& family, std::size_t D, std::size_t N, std::size_t k_first,
                                     std::size_t k_last);
void write_curve_csv(std::ostream& os, const std::vector<ProtocolPoint>& points, bool header = true);

// sum_t || p_t rho_t - q_t sigma ||_1 against the ideal state, sigma the
// p-weighted mean Eve state over the diagonal tuples.
double distance_to_ideal(const CqState& cq);

struct ThmIv3Report {
  double Delta = 0;
  std::vector<double> delta;  // delta[j] for the pair (A_1, A_{j+2})
  double max_delta = 0;
  bool forward = false;   // every delta_j <= Delta
  bool converse = false;  // Delta <= (4N - 3) max delta_j
};
ThmIv3Report thm_iv3_check(const CqState& cq, double slack = 1e-10);
// (1 - t) ideal + t noise: probabilities mixed with a random distribution,
// Eve states with random qubit states.
CqState perturbed_ideal(std::size_t d, std::size_t N, double t, Rng& rng);

struct EdPair {
  std::size_t i = 0, j = 0;
  double eta = 0, a1 = 0, a2 = 0, bound = 0;
  std::vector<Vector> f, g;  // per-party maximizing vectors
};

struct EdBoundReport {
  std::vector<EdPair> pairs;
  double bound = 0;
  bool estimate = true;  // maximizers come from a heuristic search
};

EdBoundReport ed_lower_bound(const PditSpec& spec, std::size_t restarts = 20, std::uint64_t seed = 42);

struct RelativeEntropyBound {
  double value = 0;
  bool separability_assumed = true;  // caller asserts sigma is fully separable
};
RelativeEntropyBound relative_entropy_bound(const Matrix& rho, const Matrix& sigma);

// Two +-1 qubit observables n.sigma per party, as unit Bloch vectors.
struct BellSettings {
  std::vector<std::array<std::array<double, 3>, 2>> n;
};

// |E_00 + E_01 + E_10 - E_11|: E_st has the first m - 1 qubits measuring
// setting s and the last one setting t.
double bell_value(const Matrix& rho, const BellSettings& s);

struct BellResult {
  double value = 0;
  BellSettings settings;
};
// Coordinate ascent over Bloch vectors from seeded random starts. Each
// update is exact: the expression is affine in one Bloch vector.
BellResult bell_optimize(const Matrix& rho, std::size_t restarts = 50, std::uint64_t seed = 42);
BellSettings random_bell_settings(std::size_t qubits, Rng& rng);

}  // namespace mkey
