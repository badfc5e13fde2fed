// Entropic quantities in bits.
#pragma once

#include <limits>
#include <vector>

#include "mkey/matrix.hpp"
#include "mkey/tensor.hpp"

namespace mkey {

inline constexpr double kTraceTol = 1e-8;
inline constexpr double kSupportTol = 1e-10;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// -sum p log2 p over nonnegative weights; zeros contribute nothing.
double shannon_entropy(const std::vector<double>& p);

// Binary entropy h(x) in bits; x outside [0,1] is an error.
double binary_entropy(double x);

// Requires unit trace (kTraceTol); eigenvalues in [-tol, 0) are clamped.
double von_neumann_entropy(const Matrix& rho, double tol = 1e-9);

// S(rho||sigma) in bits, +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const Matrix& rho, const Matrix& sigma, double tol = 1e-9);

// I(A:B) for the bipartition given by factor lists a and b (others traced out).
double mutual_information(const Matrix& rho, const Dims& dims, const Systems& a, const Systems& b);

}  // namespace mkey
