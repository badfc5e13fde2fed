// Classical-quantum states sum_t p_t |t><t| ⊗ rho^E_t over key tuples t.
//
// Eve's part is either an orthonormal label (labels are mutually orthogonal
// pure states) or an explicit density matrix. A labeled state is compared
// through its canonical form: terms sorted by tuple, labels renumbered in
// order of first appearance.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/matrix.hpp"

namespace mkey {

struct CqTerm {
  KeyTuple tuple;
  double p = 0;
  int label = -1;  // >= 0 for labeled states
  Matrix eve;      // unit trace, used when label < 0
};

struct CqState {
  std::size_t d = 2, N = 2;
  std::vector<CqTerm> terms;

  bool labeled() const;
  std::size_t label_count() const;
  std::size_t eve_dim() const;  // label count for labeled states
};

// Probabilities >= 0 summing to 1, tuples in range, Eve parts valid.
void validate(const CqState& cq);

// Merges duplicate entries, drops zero weights, sorts and relabels.
CqState canonical(const CqState& cq);
// Labels become basis states of C^{label_count}; duplicates of a tuple merge.
CqState explicit_form(const CqState& cq);
// Groups tuples whose Eve states coincide (trace distance <= tol) into
// labels; returns nothing when distinct groups are not orthogonal.
std::optional<CqState> to_labels(const CqState& cq, double tol = 1e-9);

// Marginal on the listed parties (in the given order), Eve kept.
CqState reduce(const CqState& cq, const std::vector<std::size_t>& parties);

// sum_t || p_t rho_t - q_t sigma_t ||_1, on canonical forms.
double cq_distance(const CqState& a, const CqState& b);

// Uniform over the d diagonal tuples, one shared Eve label.
CqState ideal_cq(std::size_t d, std::size_t N);

}  // namespace mkey
