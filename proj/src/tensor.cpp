#include "mkey/tensor.hpp"

#include <algorithm>
#include <string>

namespace mkey {

namespace {

void check_dims(const Matrix& a, const Dims& dims, const char* what) {
  if (!a.square()) throw ValidationError(std::string(what) + ": matrix is not square");
  if (dims.empty()) throw ValidationError(std::string(what) + ": missing shape");
  if (product(dims) != a.rows()) throw ValidationError(std::string(what) + ": shape does not match matrix dimension");
}

void check_systems(const Systems& s, std::size_t n, const char* what) {
  for (std::size_t x : s)
    if (x >= n) throw ValidationError(std::string(what) + ": subsystem index out of range");
}

}  // namespace

Shape::Shape(std::vector<Party> p) : parties(std::move(p)) {
  if (parties.empty()) throw ValidationError("Shape: at least one party required");
  for (const auto& q : parties)
    if (q.key == 0 || q.shield == 0) throw ValidationError("Shape: local dimensions must be positive");
}

Shape Shape::qubits(std::size_t n) { return uniform(n, 2, 1); }

Shape Shape::uniform(std::size_t n, std::size_t key, std::size_t shield) {
  return Shape(std::vector<Party>(n, Party{key, shield}));
}

std::size_t Shape::total_dim() const { return product(dims()); }

Dims Shape::dims() const {
  Dims d;
  for (const auto& p : parties) d.push_back(p.dim());
  return d;
}

Shape tensor(const Shape& a, const Shape& b) {
  std::vector<Party> p = a.parties;
  p.insert(p.end(), b.parties.begin(), b.parties.end());
  return Shape(std::move(p));
}

std::size_t product(const Dims& d) {
  std::size_t p = 1;
  for (auto x : d) p *= x;
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        cplx* dst = c.row(i * b.rows() + k) + j * b.cols();
        const cplx* src = b.row(k);
        for (std::size_t l = 0; l < b.cols(); ++l) dst[l] = aij * src[l];
      }
    }
  return c;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  if (factors.empty()) return Matrix::identity(1);
  Matrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

Matrix kron_power(const Matrix& a, std::size_t k) {
  if (k == 0) return Matrix::identity(1);
  Matrix out = a;
  for (std::size_t i = 1; i < k; ++i) out = kron(out, a);
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i * b.size() + j] = a[i] * b[j];
  return c;
}

std::vector<std::size_t> digits(std::size_t index, const Dims& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

std::size_t flat_index(const std::vector<std::size_t>& dg, const Dims& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + dg[k];
  return idx;
}

Matrix partial_transpose(const Matrix& a, const Dims& dims, const Systems& systems) {
  check_dims(a, dims, "partial_transpose");
  check_systems(systems, dims.size(), "partial_transpose");
  std::vector<bool> flip(dims.size(), false);
  for (auto s : systems) flip[s] = true;
  const std::size_t n = a.rows();
  // Strides let us swap digits without decoding full multi-indices.
  Dims stride(dims.size());
  std::size_t st = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    stride[k] = st;
    st *= dims[k];
  }
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = digits(r, dims);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t r2 = r, c2 = c;
      std::size_t rem = c;
      for (std::size_t k = dims.size(); k-- > 0;) {
        const std::size_t cdig = rem % dims[k];
        rem /= dims[k];
        if (!flip[k] || cdig == rd[k]) continue;
        r2 = r2 - rd[k] * stride[k] + cdig * stride[k];
        c2 = c2 - cdig * stride[k] + rd[k] * stride[k];
      }
      out(r2, c2) = a(r, c);
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& a, const Shape& shape, const Systems& systems) {
  return partial_transpose(a, shape.dims(), systems);
}

Matrix partial_trace(const Matrix& a, const Dims& dims, const Systems& traced) {
  check_dims(a, dims, "partial_trace");
  check_systems(traced, dims.size(), "partial_trace");
  std::vector<bool> tr(dims.size(), false);
  for (auto s : traced) tr[s] = true;
  Dims keep_dims, trace_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) (tr[k] ? trace_dims : keep_dims).push_back(dims[k]);
  const std::size_t nk = product(keep_dims), nt = product(trace_dims);
  // Index of (kept digits, traced digits) in the full space.
  std::vector<std::size_t> full(nk * nt);
  for (std::size_t i = 0; i < nk; ++i) {
    const auto kd = digits(i, keep_dims);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto td = digits(t, trace_dims);
      std::vector<std::size_t> fd(dims.size());
      std::size_t ki = 0, ti = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) fd[k] = tr[k] ? td[ti++] : kd[ki++];
      full[i * nt + t] = flat_index(fd, dims);
    }
  }
  Matrix out(nk, nk);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j) {
      cplx s = 0;
      for (std::size_t t = 0; t < nt; ++t) s += a(full[i * nt + t], full[j * nt + t]);
      out(i, j) = s;
    }
  return out;
}

Matrix partial_trace(const Matrix& a, const Shape& shape, const Systems& traced) {
  return partial_trace(a, shape.dims(), traced);
}

Matrix permute_systems(const Matrix& a, const Dims& dims, const std::vector<std::size_t>& perm) {
  check_dims(a, dims, "permute_systems");
  if (perm.size() != dims.size()) throw ValidationError("permute_systems: permutation size mismatch");
  Dims nd(dims.size());
  for (std::size_t k = 0; k < perm.size(); ++k) nd[k] = dims.at(perm[k]);
  const std::size_t n = a.rows();
  std::vector<std::size_t> map(n);  // new index -> old index
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = digits(i, nd);
    std::vector<std::size_t> od(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) od[perm[k]] = d[k];
    map[i] = flat_index(od, dims);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(map[i], map[j]);
  return out;
}

}  // namespace mkey
