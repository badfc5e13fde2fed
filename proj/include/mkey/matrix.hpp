// Dense complex matrices with row-major storage.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkey {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

// Bad user input: wrong dimensions, invalid parameters, malformed files.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical postcondition did not hold (non-Hermitian input, no convergence, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);
  static Matrix diagonal(const Vector& d);
  static Matrix outer(const Vector& a, const Vector& b);  // |a><b|

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  bool empty() const { return a_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  cplx* row(std::size_t i) { return a_.data() + i * c_; }
  const cplx* row(std::size_t i) const { return a_.data() + i * c_; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;
  cplx trace() const;
  double norm() const;  // Frobenius
  double max_abs() const;
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  bool is_hermitian(double tol) const;

  Matrix& operator+=(const Matrix& b);
  Matrix& operator-=(const Matrix& b);
  Matrix& operator*=(cplx s);
  Matrix& operator/=(cplx s) { return *this *= (1.0 / s); }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<cplx> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Matrix a, cplx s);
Matrix operator*(cplx s, Matrix a);
Matrix operator/(Matrix a, cplx s);
Vector operator*(const Matrix& a, const Vector& v);

cplx dot(const Vector& a, const Vector& b);  // <a|b>
double vnorm(const Vector& v);

// Hermitian part (A + A†)/2.
Matrix hermitian_part(const Matrix& a);

// Largest |a_ij - b_ij|; throws on shape mismatch.
double max_diff(const Matrix& a, const Matrix& b);

}  // namespace mkey
