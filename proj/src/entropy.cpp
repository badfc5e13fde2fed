#include "mkey/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "mkey/linalg.hpp"

namespace mkey {

namespace {

std::vector<double> density_spectrum(const Matrix& rho, double tol, const char* what) {
  const Matrix h = require_hermitian(rho, what);
  if (std::abs(h.trace() - 1.0) > kTraceTol) throw ValidationError(std::string(what) + ": trace differs from 1");
  auto v = eigenvalues(h);
  for (auto& x : v) {
    if (x < -tol) throw NumericalError(std::string(what) + ": negative eigenvalue beyond tolerance");
    if (x < 0) x = 0;
  }
  return v;
}

}  // namespace

double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

double binary_entropy(double x) {
  if (x < 0 || x > 1) throw ValidationError("binary_entropy: argument outside [0,1]");
  return shannon_entropy({x, 1 - x});
}

double von_neumann_entropy(const Matrix& rho, double tol) {
  return shannon_entropy(density_spectrum(rho, tol, "von_neumann_entropy"));
}

double relative_entropy(const Matrix& rho, const Matrix& sigma, double tol) {
  if (rho.rows() != sigma.rows()) throw ValidationError("relative_entropy: dimension mismatch");
  const double s_rho = von_neumann_entropy(rho, tol);
  density_spectrum(sigma, tol, "relative_entropy");
  const Spectrum sg = herm_eig(sigma);
  const Matrix h = hermitian_part(rho);
  // -Tr rho log sigma, restricted to the support of sigma; any weight of rho
  // on the kernel of sigma makes the divergence infinite.
  double cross = 0;
  for (std::size_t k = 0; k < sg.values.size(); ++k) {
    const Vector vk = sg.vectors.column(k);
    const double w = dot(vk, h * vk).real();
    if (sg.values[k] <= kSupportTol) {
      if (w > kSupportTol) return kInfinity;
      continue;
    }
    cross -= w * std::log2(sg.values[k]);
  }
  const double d = cross - s_rho;
  return (d < 0 && d > -1e-10) ? 0.0 : d;
}

double mutual_information(const Matrix& rho, const Dims& dims, const Systems& a, const Systems& b) {
  auto reduce_to = [&](Systems keep) {
    std::sort(keep.begin(), keep.end());
    Systems traced;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
    return partial_trace(rho, dims, traced);
  };
  Systems ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return von_neumann_entropy(reduce_to(a)) + von_neumann_entropy(reduce_to(b)) - von_neumann_entropy(reduce_to(ab));
}

}  // namespace mkey
