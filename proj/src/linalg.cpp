#include "mkey/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace mkey {

namespace {

void sort_descending(std::vector<double>& vals, Matrix& vecs) {
  const std::size_t n = vals.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return vals[i] > vals[j]; });
  std::vector<double> v2(n);
  Matrix m2(vecs.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    v2[k] = vals[idx[k]];
    for (std::size_t r = 0; r < vecs.rows(); ++r) m2(r, k) = vecs(r, idx[k]);
  }
  vals = std::move(v2);
  vecs = std::move(m2);
}

// Implicit QL on a real symmetric tridiagonal matrix (diagonal d, subdiagonal
// e[i] = T(i+1,i)). Eigenvector i is accumulated into row i of zt.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& zt, std::size_t n) {
  if (n == 0) return;
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (++iter > 200) throw NumericalError("herm_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool early = false;
        for (std::size_t ii = m; ii-- > l;) {
          const double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
          double* zi = zt.data() + ii * n;
          double* zi1 = zt.data() + (ii + 1) * n;
          for (std::size_t k = 0; k < n; ++k) {
            const double fz = zi1[k];
            zi1[k] = s * zi[k] + c * fz;
            zi[k] = c * zi[k] - s * fz;
          }
        }
        if (early) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Complex Jacobi rotation zeroing entry (p,q) of a Hermitian 2x2 pivot
// [[app, b], [conj b, aqq]]. Returns (c, s, phase) so that the unitary
// U = [[c, s], [-s conj(ph), c conj(ph)]] diagonalizes it under U† · U.
struct Rotation {
  double c, s, t;
  cplx ph;
};

Rotation jacobi_rotation(double app, double aqq, cplx b) {
  const double ab = std::abs(b);
  const double tau = (aqq - app) / (2.0 * ab);
  const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, t, b / ab};
}

// Fill the invalid columns of u (m x m) with an orthonormal completion from
// standard basis vectors, falling back to the largest residual.
void complete_unitary(Matrix& u, std::vector<bool>& valid) {
  const std::size_t m = u.rows();
  auto residual = [&](std::size_t b) {
    Vector cand(m, 0.0);
    cand[b] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < m; ++k) {
        if (!valid[k]) continue;
        const Vector uk = u.column(k);
        const cplx proj = dot(uk, cand);
        for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * uk[i];
      }
    return cand;
  };
  std::size_t next = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (valid[j]) continue;
    Vector best;
    double best_norm = 0;
    // cheap pass: next unused basis vector with a large residual
    while (next < m && best_norm <= 0.5) {
      best = residual(next++);
      best_norm = vnorm(best);
    }
    if (best_norm <= 0.5) {
      best_norm = 0;
      for (std::size_t b = 0; b < m; ++b) {
        Vector c = residual(b);
        const double nrm = vnorm(c);
        if (nrm > best_norm) best_norm = nrm, best = std::move(c);
      }
    }
    // the residuals' squared norms sum to the missing dimension, so some exceed 1/sqrt(m)
    if (best_norm < 0.5 / std::sqrt(double(m))) throw NumericalError("svd: could not complete unitary factor");
    for (auto& x : best) x /= best_norm;
    u.set_column(j, best);
    valid[j] = true;
  }
}

Svd finish_svd(const Matrix& a, const Matrix& w, std::vector<double> sig, Matrix aw) {
  // Columns of aw are a·w_k with norms sig[k]; order everything by sig.
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });
  Svd out;
  out.v = Matrix(n, n);
  out.u = Matrix(m, m);
  const std::size_t r = std::min(m, n);
  out.s.assign(r, 0.0);
  const double smax = n ? sig[idx[0]] : 0.0;
  const double thr = 64.0 * DBL_EPSILON * std::max(smax, DBL_MIN) * std::sqrt(double(std::max(m, n)));
  std::vector<bool> valid(m, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = idx[k];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = w(i, src);
    if (k < r) {
      out.s[k] = sig[src];
      if (sig[src] > thr) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = aw(i, src) / sig[src];
        valid[k] = true;
      }
    }
  }
  complete_unitary(out.u, valid);
  return out;
}

}  // namespace

Matrix require_hermitian(const Matrix& a, const char* what) {
  if (!a.square()) throw ValidationError(std::string(what) + ": matrix is not square");
  const double scale = std::max(1.0, a.max_abs());
  if (!a.is_hermitian(kHermitianTol * scale))
    throw NumericalError(std::string(what) + ": matrix is not Hermitian");
  return hermitian_part(a);
}

namespace {

Spectrum herm_eig_dense(Matrix a) {
  const std::size_t n = a.rows();
  Spectrum out;
  if (n == 0) return out;
  Matrix q = Matrix::identity(n);
  Vector v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xn = std::sqrt(tail + std::norm(x0));
    const cplx ph = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -ph * xn;
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx s = 0;
      const cplx* ai = a.row(i);
      for (std::size_t j = k + 1; j < n; ++j) s += ai[j] * v[j];
      p[i] = 2.0 * s;
    }
    cplx kk = 0;
    for (std::size_t i = k + 1; i < n; ++i) kk += std::conj(v[i]) * p[i];
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kk * v[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx* ai = a.row(i);
      for (std::size_t j = k + 1; j < n; ++j) ai[j] -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      cplx* qr = q.row(r);
      cplx s = 0;
      for (std::size_t j = k + 1; j < n; ++j) s += qr[j] * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) qr[j] -= s * std::conj(v[j]);
    }
  }
  // Rotate the complex subdiagonal to a real nonnegative one.
  std::vector<double> d(n), e(n, 0.0);
  Vector phase(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const cplx t = a(k + 1, k);
    const double at = std::abs(t);
    e[k] = at;
    phase[k + 1] = at > 0 ? phase[k] * (t / at) : phase[k];
  }
  std::vector<double> zt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) zt[i * n + i] = 1.0;
  tridiagonal_ql(d, e, zt, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) q(r, k) *= phase[k];
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const cplx* qr = q.row(r);
    cplx* vr = out.vectors.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double* zi = zt.data() + i * n;
      cplx s = 0;
      for (std::size_t k = 0; k < n; ++k) s += qr[k] * zi[k];
      vr[i] = s;
    }
  }
  out.values = std::move(d);
  sort_descending(out.values, out.vectors);
  return out;
}

}  // namespace

// Splits the exact nonzero pattern into connected components first; block
// structured operators then cost only their largest block.
Spectrum herm_eig(const Matrix& a_in) {
  const Matrix a = require_hermitian(a_in, "herm_eig");
  const std::size_t n = a.rows();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) != cplx(0)) parent[root(i)] = root(j);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (slot[r] == n) slot[r] = comps.size(), comps.emplace_back();
    comps[slot[r]].push_back(i);
  }
  if (comps.size() <= 1) return herm_eig_dense(a);

  std::vector<std::pair<double, Vector>> pairs;
  pairs.reserve(n);
  for (const auto& idx : comps) {
    const std::size_t m = idx.size();
    Matrix sub(m, m);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) sub(x, y) = a(idx[x], idx[y]);
    const Spectrum sp = herm_eig_dense(std::move(sub));
    for (std::size_t k = 0; k < m; ++k) {
      Vector v(n);
      for (std::size_t x = 0; x < m; ++x) v[idx[x]] = sp.vectors(x, k);
      pairs.emplace_back(sp.values[k], std::move(v));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) { return p.first > q.first; });
  Spectrum out;
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(pairs[k].first);
    out.vectors.set_column(k, pairs[k].second);
  }
  return out;
}

Spectrum herm_eig_jacobi(const Matrix& a_in) {
  Matrix a = require_hermitian(a_in, "herm_eig_jacobi");
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  const double scale = a.norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a(i, j));
    if (scale == 0.0 || std::sqrt(off) <= 1e-16 * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        if (std::abs(b) == 0.0) continue;
        const Rotation r = jacobi_rotation(a(p, p).real(), a(q, q).real(), b);
        const cplx cph = std::conj(r.ph);
        const double app = a(p, p).real(), aqq = a(q, q).real(), ab = std::abs(b);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = r.c * akp - r.s * cph * akq;
          a(k, q) = r.s * akp + r.c * cph * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = r.c * vkp - r.s * cph * vkq;
          v(k, q) = r.s * vkp + r.c * cph * vkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = r.c * apk - r.s * r.ph * aqk;
          a(q, k) = r.s * apk + r.c * r.ph * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = app - r.t * ab;
        a(q, q) = aqq + r.t * ab;
      }
  }
  Spectrum out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();
  out.vectors = std::move(v);
  sort_descending(out.values, out.vectors);
  return out;
}

std::vector<double> eigenvalues(const Matrix& a) { return herm_eig(a).values; }

double min_eigenvalue(const Matrix& a) {
  const auto v = eigenvalues(a);
  return v.empty() ? 0.0 : v.back();
}

bool is_psd(const Matrix& a, double tol) {
  const auto v = eigenvalues(a);
  double tn = 0.0;
  for (double x : v) tn += std::fabs(x);
  return v.empty() || v.back() >= -tol * std::max(1.0, tn);
}

Svd svd(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) {
    Svd t = svd(a.adjoint());
    return {t.s, t.v, t.u};
  }
  const Spectrum g = herm_eig(a.adjoint() * a);
  Matrix aw = a * g.vectors;
  std::vector<double> sig(n);
  for (std::size_t k = 0; k < n; ++k) sig[k] = vnorm(aw.column(k));
  Svd out = finish_svd(a, g.vectors, sig, std::move(aw));
  // Left factor recovery is unreliable for clustered small singular values.
  const Matrix gram = out.u.adjoint() * out.u;
  if (max_diff(gram, Matrix::identity(m)) > 1e-10) return svd_jacobi(a);
  return out;
}

Svd svd_jacobi(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) {
    Svd t = svd_jacobi(a.adjoint());
    return {t.s, t.v, t.u};
  }
  // Work on columns stored contiguously.
  Matrix cols = a.transpose();  // row k = column k of a
  Matrix vt = Matrix::identity(n);  // row k = column k of v
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        cplx* cp = cols.row(p);
        cplx* cq = cols.row(q);
        double alpha = 0, beta = 0;
        cplx gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(cp[i]);
          beta += std::norm(cq[i]);
          gamma += std::conj(cp[i]) * cq[i];
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) == 0.0) continue;
        rotated = true;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        const cplx cph = std::conj(r.ph);
        for (std::size_t i = 0; i < m; ++i) {
          const cplx x = cp[i], y = cq[i];
          cp[i] = r.c * x - r.s * cph * y;
          cq[i] = r.s * x + r.c * cph * y;
        }
        cplx* vp = vt.row(p);
        cplx* vq = vt.row(q);
        for (std::size_t i = 0; i < n; ++i) {
          const cplx x = vp[i], y = vq[i];
          vp[i] = r.c * x - r.s * cph * y;
          vq[i] = r.s * x + r.c * cph * y;
        }
      }
    if (!rotated) break;
  }
  std::vector<double> sig(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(cols(k, i));
    sig[k] = std::sqrt(s);
  }
  return finish_svd(a, vt.transpose(), sig, cols.transpose());
}

namespace {

// Connected components of the bipartite row/column graph of the nonzero
// entries; rows or columns without entries are left out.
struct PatternBlock {
  std::vector<std::size_t> rows, cols;
};

std::vector<PatternBlock> pattern_blocks(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::size_t> parent(m + n);
  for (std::size_t i = 0; i < m + n; ++i) parent[i] = i;
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(m + n, false);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != cplx(0)) {
        used[i] = used[m + j] = true;
        parent[root(i)] = root(m + j);
      }
  std::vector<PatternBlock> out;
  std::vector<std::size_t> slot(m + n, m + n);
  for (std::size_t x = 0; x < m + n; ++x) {
    if (!used[x]) continue;
    const std::size_t r = root(x);
    if (slot[r] == m + n) slot[r] = out.size(), out.emplace_back();
    if (x < m)
      out[slot[r]].rows.push_back(x);
    else
      out[slot[r]].cols.push_back(x - m);
  }
  return out;
}

Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
  Matrix s(r.size(), c.size());
  for (std::size_t x = 0; x < r.size(); ++x)
    for (std::size_t y = 0; y < c.size(); ++y) s(x, y) = a(r[x], c[y]);
  return s;
}

}  // namespace

std::vector<double> singular_values(const Matrix& a) {
  if (a.square() && a.is_hermitian(1e-13 * std::max(1.0, a.max_abs()))) {
    auto v = eigenvalues(a);
    for (auto& x : v) x = std::fabs(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  }
  std::vector<double> out;
  for (const auto& b : pattern_blocks(a))
    for (double x : svd(submatrix(a, b.rows, b.cols)).s) out.push_back(x);
  out.resize(std::min(a.rows(), a.cols()), 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Matrix op_abs(const Matrix& a) {
  if (!a.square()) throw ValidationError("op_abs: matrix is not square");
  if (a.is_hermitian(1e-13 * std::max(1.0, a.max_abs())))
    return spectral_apply(herm_eig(a), [](double x) { return std::fabs(x); });
  // |A| lives on the column sets of the pattern blocks
  Matrix out(a.rows(), a.cols());
  for (const auto& b : pattern_blocks(a)) {
    const Svd s = svd(submatrix(a, b.rows, b.cols));
    Spectrum sp;
    sp.values = s.s;
    sp.values.resize(b.cols.size(), 0.0);
    sp.vectors = s.v;
    const Matrix m = spectral_apply(sp, [](double x) { return x; });
    for (std::size_t x = 0; x < b.cols.size(); ++x)
      for (std::size_t y = 0; y < b.cols.size(); ++y) out(b.cols[x], b.cols[y]) = m(x, y);
  }
  return out;
}

double trace_norm(const Matrix& a) {
  double t = 0;
  for (double x : singular_values(a)) t += x;
  return t;
}

bool is_unitary(const Matrix& u, double tol) {
  if (!u.square()) return false;
  return max_diff(u.adjoint() * u, Matrix::identity(u.rows())) <= tol;
}

Matrix sqrt_psd(const Matrix& a) {
  return spectral_apply(herm_eig(a), [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

}  // namespace mkey
