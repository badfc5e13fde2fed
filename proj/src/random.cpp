#include "mkey/random.hpp"

#include <cmath>

namespace mkey {

Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(std::size_t n, Rng& rng) { return hermitian_part(random_ginibre(n, n, rng)); }

Matrix random_unitary(std::size_t n, Rng& rng) {
  Matrix q = random_ginibre(n, n, rng);
  // modified Gram-Schmidt on columns; the phase of each diagonal of R is
  // absorbed so the result is Haar distributed
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = q.column(j);
    for (std::size_t k = 0; k < j; ++k) {
      const Vector qk = q.column(k);
      const cplx c = dot(qk, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * qk[i];
    }
    const double nv = vnorm(v);
    for (auto& x : v) x /= nv;
    q.set_column(j, v);
  }
  return q;
}

Matrix random_density(std::size_t n, Rng& rng, std::size_t rank) {
  const Matrix g = random_ginibre(n, rank ? rank : n, rng);
  Matrix r = g * g.adjoint();
  return hermitian_part(r / r.trace());
}

Vector random_pure(std::size_t n, Rng& rng) {
  Vector v = random_ginibre(n, 1, rng).column(0);
  const double nv = vnorm(v);
  for (auto& x : v) x /= nv;
  return v;
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0;
  for (auto& x : p) s += (x = e(rng));
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace mkey
