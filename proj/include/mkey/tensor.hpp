// Multipartite structure: shapes, Kronecker products, partial transpose/trace.
//
// A Shape is an ordered list of parties. Party p owns one local factor of
// dimension key·shield (key index major), and the factors are ordered as the
// parties are. Subsystem indices are 0-based.
#pragma once

#include <cstddef>
#include <vector>

#include "mkey/matrix.hpp"

namespace mkey {

using Dims = std::vector<std::size_t>;
using Systems = std::vector<std::size_t>;

struct Party {
  std::size_t key = 1;
  std::size_t shield = 1;
  std::size_t dim() const { return key * shield; }
  bool operator==(const Party&) const = default;
};

struct Shape {
  std::vector<Party> parties;

  Shape() = default;
  explicit Shape(std::vector<Party> p);
  static Shape qubits(std::size_t n);
  static Shape uniform(std::size_t n, std::size_t key, std::size_t shield = 1);

  std::size_t total_dim() const;
  Dims dims() const;
  bool operator==(const Shape&) const = default;
};

Shape tensor(const Shape& a, const Shape& b);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(const std::vector<Matrix>& factors);
Matrix kron_power(const Matrix& a, std::size_t k);
Vector kron(const Vector& a, const Vector& b);

std::size_t product(const Dims& d);

// Transposes the listed local factors.
Matrix partial_transpose(const Matrix& a, const Dims& dims, const Systems& systems);
Matrix partial_transpose(const Matrix& a, const Shape& shape, const Systems& systems);

// Traces out the listed local factors; the rest keep their order.
Matrix partial_trace(const Matrix& a, const Dims& dims, const Systems& traced);
Matrix partial_trace(const Matrix& a, const Shape& shape, const Systems& traced);

// Reorders factors: new factor k is old factor perm[k].
Matrix permute_systems(const Matrix& a, const Dims& dims, const std::vector<std::size_t>& perm);

// Mixed-radix digits of a flat index (most significant first) and back.
std::vector<std::size_t> digits(std::size_t index, const Dims& dims);
std::size_t flat_index(const std::vector<std::size_t>& digits, const Dims& dims);

}  // namespace mkey
