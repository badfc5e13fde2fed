// Hermitian eigendecomposition, SVD, operator absolute value and norms.
//
// herm_eig reduces to a real tridiagonal matrix with complex Householder
// reflections and finishes with implicit QL. herm_eig_jacobi is the cyclic
// Jacobi method; slower, kept as an independent cross-check.
#pragma once

#include <vector>

#include "mkey/matrix.hpp"

namespace mkey {

struct Spectrum {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns are eigenvectors
};

struct Svd {
  std::vector<double> s;  // descending
  Matrix u, v;            // a = u diag(s) v†, both unitary
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;

// Throws NumericalError unless `a` is Hermitian within kHermitianTol·max(1,|a|_max);
// returns the symmetrized copy.
Matrix require_hermitian(const Matrix& a, const char* what);

Spectrum herm_eig(const Matrix& a);
Spectrum herm_eig_jacobi(const Matrix& a);
std::vector<double> eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);

// True iff min eigenvalue >= -tol·max(1, trace|a|).
bool is_psd(const Matrix& a, double tol = kPsdTol);

Svd svd(const Matrix& a);
Svd svd_jacobi(const Matrix& a);
std::vector<double> singular_values(const Matrix& a);

// sqrt(a†a)
Matrix op_abs(const Matrix& a);
double trace_norm(const Matrix& a);

bool is_unitary(const Matrix& u, double tol = kUnitaryTol);

// f applied to the spectrum of a Hermitian matrix.
template <class F>
Matrix spectral_apply(const Spectrum& s, F f) {
  const std::size_t n = s.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(s.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = s.vectors(i, k) * fk;
      if (vik == cplx(0)) continue;
      cplx* oi = out.row(i);
      for (std::size_t j = 0; j < n; ++j) oi[j] += vik * std::conj(s.vectors(j, k));
    }
  }
  return out;
}

// Principal square root of a PSD matrix (negative round-off clamped).
Matrix sqrt_psd(const Matrix& a);

}  // namespace mkey
