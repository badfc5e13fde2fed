// Operators on (key ⊗ shield) written blockwise in the key basis:
//   rho = sum_{i,j} |i><j| ⊗ Omega_{ij}
// Key multi-indices are flattened with party 0 most significant. Only
// nonzero blocks are stored; the dense form orders all key factors first,
// then the shield factors.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mkey/matrix.hpp"
#include "mkey/matrix_io.hpp"
#include "mkey/tensor.hpp"

namespace mkey {

using KeyTuple = std::vector<std::size_t>;

class BlockOperator {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  BlockOperator() = default;
  // owner[f] is the party holding shield factor f; defaults to f % N.
  BlockOperator(std::size_t d, std::size_t N, Dims shield, std::vector<std::size_t> owner = {});

  std::size_t d() const { return d_; }
  std::size_t parties() const { return n_; }
  const Dims& shield() const { return shield_; }
  const std::vector<std::size_t>& owner() const { return owner_; }
  std::size_t key_dim() const;
  std::size_t shield_dim() const { return product(shield_); }
  std::size_t dim() const { return key_dim() * shield_dim(); }

  KeyTuple tuple(std::size_t index) const;
  std::size_t index(const KeyTuple& t) const;
  // Index of (i, i, ..., i).
  std::size_t uniform_index(std::size_t i) const;

  const std::map<Index, Matrix>& blocks() const { return blocks_; }
  const Matrix* find(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, Matrix m);
  void add(std::size_t i, std::size_t j, const Matrix& m);
  void scale(double s);

  Matrix dense() const;
  Dims dense_dims() const;
  // Dense-factor indices (key and shield) belonging to a party.
  Systems party_systems(std::size_t party) const;
  // Dense matrix reordered party by party, with the matching Shape.
  MatrixFile to_matrix_file() const;

  cplx trace() const;
  Matrix key_matrix() const;  // shield traced out
  bool is_hermitian(double tol) const;

 private:
  void check_block(const Matrix& m) const;
  std::size_t d_ = 2, n_ = 2;
  Dims shield_;
  std::vector<std::size_t> owner_;
  std::map<Index, Matrix> blocks_;
};

// Joint transpose of the key and shield factors of one party.
BlockOperator partial_transpose(const BlockOperator& rho, std::size_t party);
// Transpose of the key factor only.
BlockOperator key_partial_transpose(const BlockOperator& rho, std::size_t party);

// Exact minimum eigenvalue, computed on the connected components of the
// block pattern (absent key indices contribute zero eigenvalues).
double min_eigenvalue(const BlockOperator& rho);
bool is_psd(const BlockOperator& rho, double tol);

std::string to_json(const BlockOperator& rho);
BlockOperator block_operator_from_json(const std::string& text);

}  // namespace mkey
