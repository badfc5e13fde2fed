#include "mkey/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "mkey/entropy.hpp"
#include "mkey/linalg.hpp"
#include "mkey/matrix_io.hpp"

namespace mkey {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

KeyTuple tuple_of(std::size_t index, std::size_t d, std::size_t N) { return digits(index, Dims(N, d)); }

}  // namespace

CqState cq_from_weights(std::size_t N, const FamilyWeights& w) {
  if (N < 2) throw ValidationError("cq_from_weights: need N >= 2");
  const std::size_t full = ipow(2, N) - 1;
  // index -> (weight, label); coinciding indices keep their first label
  std::map<std::size_t, std::pair<double, int>> table;
  auto put = [&](std::size_t idx, double p, int label) {
    auto [it, fresh] = table.try_emplace(idx, 0.0, label);
    it->second.first += p;
  };
  put(0, w.a, 0);
  put(full, w.a, 0);
  int label = 1;
  for (std::size_t j = 1; j <= N; ++j) {
    put(psi_index(N, j), w.b, label++);
    put(psi_bar_index(N, j), w.b, label++);
  }
  CqState cq{2, N, {}};
  for (const auto& [idx, pl] : table) cq.terms.push_back({tuple_of(idx, 2, N), pl.first, pl.second, {}});
  return canonical(cq);
}

CqState cq_one(std::size_t D, std::size_t N, std::size_t k) { return cq_from_weights(N, weights_one(D, N, k)); }

CqState cq_two(const SeedUnitary& u, std::size_t N, std::size_t k) {
  if (!u.flat) throw ValidationError("cq_two: seed must be flat");
  return cq_from_weights(N, weights_two(u.dim(), N, k));
}

CqState cq_from_gram(const Matrix& gram, std::size_t d, std::size_t N, double tol) {
  const std::size_t K = ipow(d, N);
  if (gram.rows() != K || gram.cols() != K) throw ValidationError("cq_from_gram: Gram matrix has wrong size");
  std::vector<std::size_t> support;
  double total = 0;
  for (std::size_t t = 0; t < K; ++t) {
    const double p = gram(t, t).real();
    if (p > 1e-14) support.push_back(t), total += p;
  }
  if (support.empty()) throw ValidationError("cq_from_gram: zero state");

  // Pure states coincide when the fidelity is 1, are orthogonal when the
  // overlap vanishes; anything else needs explicit Eve matrices.
  std::vector<std::size_t> reps;
  std::vector<int> label(K, -1);
  bool labelable = true;
  for (auto t : support) {
    const double pt = gram(t, t).real();
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const std::size_t s = reps[r];
      const double ov = std::abs(gram(s, t)) / std::sqrt(pt * gram(s, s).real());
      if (ov >= 1 - tol) {
        if (label[t] >= 0) labelable = false;
        label[t] = int(r);
      } else if (ov > tol) {
        labelable = false;
      }
    }
    if (label[t] < 0) {
      label[t] = int(reps.size());
      reps.push_back(t);
    }
  }

  CqState cq{d, N, {}};
  if (labelable) {
    for (auto t : support) cq.terms.push_back({tuple_of(t, d, N), gram(t, t).real() / total, label[t], {}});
    return canonical(cq);
  }
  const std::size_t n = support.size();
  Matrix g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g(a, b) = gram(support[a], support[b]);
  const Matrix root = sqrt_psd(hermitian_part(g));
  for (std::size_t a = 0; a < n; ++a) {
    const Vector phi = root.column(a);
    const double p = gram(support[a], support[a]).real();
    cq.terms.push_back({tuple_of(support[a], d, N), p / total, -1, Matrix::outer(phi, phi) / cplx(p)});
  }
  return cq;
}

CqState measure_key_matrix(const Matrix& key, std::size_t d, std::size_t N) {
  return cq_from_gram(key.transpose(), d, N);
}

namespace {

// Connected components of the block pattern.
std::vector<std::vector<std::size_t>> components(const BlockOperator& rho) {
  const std::size_t K = rho.key_dim();
  std::vector<std::size_t> parent(K);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(K, false);
  for (const auto& [ij, m] : rho.blocks()) {
    used[ij.first] = used[ij.second] = true;
    parent[root(ij.first)] = root(ij.second);
  }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < K; ++i)
    if (used[i]) comps[root(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, idx] : comps) out.push_back(std::move(idx));
  return out;
}

// Per key index t, M_t[s][v] = V[(t,s),v] sqrt(lambda_v) with v running over
// the global purifying basis.
struct Purification {
  std::vector<Matrix> m;  // empty matrix when t carries no weight
  std::size_t eve_dim = 0;
};

Purification purify(const BlockOperator& rho) {
  const std::size_t S = rho.shield_dim();
  struct Piece {
    std::vector<std::size_t> idx;
    Spectrum sp;
    std::vector<std::size_t> keep;
  };
  std::vector<Piece> pieces;
  std::size_t eve = 0;
  for (auto& idx : components(rho)) {
    if (idx.size() * S > 4096) throw ValidationError("measure_to_cq: block component too large for the dense path");
    Matrix sub(idx.size() * S, idx.size() * S);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (const Matrix* m = rho.find(idx[a], idx[b])) sub.set_block(a * S, b * S, *m);
    Piece pc{idx, herm_eig(require_hermitian(sub, "measure_to_cq")), {}};
    for (std::size_t v = 0; v < pc.sp.values.size(); ++v) {
      if (pc.sp.values[v] < -1e-9) throw NumericalError("measure_to_cq: state is not positive semidefinite");
      if (pc.sp.values[v] > 1e-13) pc.keep.push_back(v);
    }
    eve += pc.keep.size();
    pieces.push_back(std::move(pc));
  }
  Purification pur;
  pur.eve_dim = eve;
  pur.m.resize(rho.key_dim());
  std::size_t offset = 0;
  for (const auto& pc : pieces) {
    for (std::size_t a = 0; a < pc.idx.size(); ++a) {
      Matrix m(S, eve);
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t c = 0; c < pc.keep.size(); ++c) {
          const std::size_t v = pc.keep[c];
          m(s, offset + c) = pc.sp.vectors(a * S + s, v) * std::sqrt(pc.sp.values[v]);
        }
      pur.m[pc.idx[a]] = std::move(m);
    }
    offset += pc.keep.size();
  }
  return pur;
}

}  // namespace

CqState measure_to_cq(const BlockOperator& rho, EveAccess access, bool dense) {
  const std::size_t d = rho.d(), N = rho.parties(), K = rho.key_dim();
  if (std::abs(rho.trace() - 1.0) > kTraceTol) throw ValidationError("measure_to_cq: state must have unit trace");
  if (access == EveAccess::ShieldToEve && !dense) return measure_key_matrix(rho.key_matrix(), d, N);

  const Purification pur = purify(rho);
  if (access == EveAccess::ShieldToEve) {
    // Eve's post-measurement states are the pure vectors vec(M_t).
    Matrix gram(K, K);
    for (std::size_t t = 0; t < K; ++t)
      for (std::size_t s = 0; s < K; ++s) {
        if (pur.m[t].empty() || pur.m[s].empty()) continue;
        cplx z = 0;
        const std::size_t n = pur.m[t].rows() * pur.m[t].cols();
        for (std::size_t e = 0; e < n; ++e) z += std::conj(pur.m[t].data()[e]) * pur.m[s].data()[e];
        gram(t, s) = z;
      }
    return cq_from_gram(gram, d, N);
  }

  if (pur.eve_dim > 512) throw ValidationError("measure_to_cq: purification too large to keep the shield away from Eve");
  CqState cq{d, N, {}};
  for (std::size_t t = 0; t < K; ++t) {
    if (pur.m[t].empty()) continue;
    Matrix e = (pur.m[t].adjoint() * pur.m[t]).conjugate();
    const double p = e.trace().real();
    if (p <= 1e-14) continue;
    cq.terms.push_back({tuple_of(t, d, N), p, -1, hermitian_part(e / cplx(p))});
  }
  double total = 0;
  for (const auto& t : cq.terms) total += t.p;
  for (auto& t : cq.terms) t.p /= total;
  if (auto lab = to_labels(cq)) return *lab;
  return cq;
}

// ---------------------------------------------------------------------------
// Devetak-Winter quantities

namespace {

double entropy_of(const std::map<std::vector<std::size_t>, double>& table) {
  std::vector<double> p;
  for (const auto& [k, v] : table) p.push_back(v);
  return shannon_entropy(p);
}

// H over the joint table of chosen key digits, with or without the label.
double labeled_entropy(const CqState& cq, const std::vector<std::size_t>& parties, bool with_label) {
  std::map<std::vector<std::size_t>, double> table;
  for (const auto& t : cq.terms) {
    std::vector<std::size_t> key;
    for (auto p : parties) key.push_back(t.tuple[p]);
    if (with_label) key.push_back(std::size_t(t.label));
    table[key] += t.p;
  }
  return entropy_of(table);
}

void check_party(const CqState& cq, std::size_t i) {
  if (i >= cq.N) throw ValidationError("party index out of range");
}

}  // namespace

double mutual_information_keys(const CqState& cq, std::size_t i, std::size_t j) {
  check_party(cq, i);
  check_party(cq, j);
  std::map<std::vector<std::size_t>, double> a, b, ab;
  for (const auto& t : cq.terms) {
    a[{t.tuple[i]}] += t.p;
    b[{t.tuple[j]}] += t.p;
    ab[{t.tuple[i], t.tuple[j]}] += t.p;
  }
  return entropy_of(a) + entropy_of(b) - entropy_of(ab);
}

double eve_information(const CqState& cq, std::size_t i) {
  check_party(cq, i);
  if (cq.labeled())
    return labeled_entropy(cq, {i}, false) + labeled_entropy(cq, {}, true) - labeled_entropy(cq, {i}, true);
  // S(sum_a P(a) rho_a) - sum_a P(a) S(rho_a)
  std::map<std::size_t, std::pair<double, Matrix>> cond;
  Matrix avg;
  for (const auto& t : cq.terms) {
    auto& [p, m] = cond[t.tuple[i]];
    if (m.empty()) m = Matrix(t.eve.rows(), t.eve.cols());
    if (avg.empty()) avg = Matrix(t.eve.rows(), t.eve.cols());
    p += t.p;
    m += t.eve * t.p;
    avg += t.eve * t.p;
  }
  double info = von_neumann_entropy(hermitian_part(avg / avg.trace()));
  for (const auto& [a, pm] : cond)
    if (pm.first > 0) info -= pm.first * von_neumann_entropy(hermitian_part(pm.second / cplx(pm.first)));
  return std::max(0.0, info);
}

double dw_bound(const CqState& cq, std::size_t i, std::size_t j) {
  check_party(cq, i);
  check_party(cq, j);
  if (i == j) throw ValidationError("dw_bound: parties must differ");
  // Eve's term on the A_i A_j E reduction, as written; it cannot depend on j.
  const CqState red = reduce(cq, {i, j});
  return mutual_information_keys(red, 0, 1) - eve_information(red, 0);
}

double dw_best(const CqState& cq) {
  if (cq.N < 2) throw ValidationError("dw_best: need N >= 2");
  double best = -kInfinity;
  for (std::size_t i = 0; i < cq.N; ++i) {
    double m = kInfinity;
    for (std::size_t j = 0; j < cq.N; ++j)
      if (j != i) m = std::min(m, mutual_information_keys(cq, i, j));
    best = std::max(best, m - eve_information(cq, i));
  }
  return best;
}

std::vector<ProtocolPoint> key_curve(const std::string& family, std::size_t D, std::size_t N, std::size_t k_first,
                                     std::size_t k_last) {
  if (k_first < 1 || k_last < k_first) throw ValidationError("key_curve: empty k range");
  if (family != "one" && family != "two" && family != "two-nonhermitian")
    throw ValidationError("key_curve: family must be one, two or two-nonhermitian");
  std::vector<ProtocolPoint> out;
  for (std::size_t k = k_first; k <= k_last; ++k) {
    ProtocolPoint pt{family, D, N, k};
    FamilyWeights w;
    double lp;
    if (family == "one") {
      w = weights_one(D, N, k);
      lp = log2_probability_one(D, N, k);
    } else {
      w = weights_two(D, N, k);
      lp = log2_probability_two(D, N, k,
                                family == "two" ? ProbabilityModel::Hermitian : ProbabilityModel::NonHermitian);
    }
    pt.p_success = std::exp2(lp);
    pt.K_DW_raw = dw_bound(cq_from_weights(N, w), 0, 1);
    pt.K_DW = std::max(0.0, pt.K_DW_raw);
    pt.K_scaled = pt.p_success * pt.K_DW;
    out.push_back(pt);
  }
  return out;
}

void write_curve_csv(std::ostream& os, const std::vector<ProtocolPoint>& points, bool header) {
  if (header) os << "family,D,N,k,p_success,K_DW,K_DW_raw,K_scaled\n";
  for (const auto& p : points)
    os << p.family << ',' << p.D << ',' << p.N << ',' << p.k << ',' << format_double(p.p_success) << ','
       << format_double(p.K_DW) << ',' << format_double(p.K_DW_raw) << ',' << format_double(p.K_scaled) << '\n';
}

// ---------------------------------------------------------------------------
// Closeness to the ideal state

namespace {

bool diagonal_tuple(const KeyTuple& t) {
  return std::all_of(t.begin(), t.end(), [&](std::size_t x) { return x == t.front(); });
}

Matrix mean_diagonal_eve(const CqState& ex) {
  Matrix sigma;
  double w = 0;
  for (const auto& t : ex.terms) {
    if (!diagonal_tuple(t.tuple)) continue;
    if (sigma.empty()) sigma = Matrix(t.eve.rows(), t.eve.cols());
    sigma += t.eve * t.p;
    w += t.p;
  }
  if (w <= 0) {
    const std::size_t n = ex.terms.front().eve.rows();
    return Matrix::identity(n) / cplx(double(n));
  }
  return sigma / cplx(w);
}

// sum_t || p_t rho_t - q_t sigma ||_1 with q uniform on diagonal tuples.
double distance_with(const CqState& ex, const Matrix& sigma) {
  const double q = 1.0 / double(ex.d);
  double dist = 0;
  std::size_t diag_seen = 0;
  for (const auto& t : ex.terms) {
    if (diagonal_tuple(t.tuple)) {
      dist += trace_norm(t.eve * t.p - sigma * q);
      ++diag_seen;
    } else {
      dist += t.p;
    }
  }
  dist += double(ex.d - diag_seen) * q;
  return dist;
}

}  // namespace

double distance_to_ideal(const CqState& cq) {
  const CqState ex = explicit_form(cq);
  return distance_with(ex, mean_diagonal_eve(ex));
}

ThmIv3Report thm_iv3_check(const CqState& cq, double slack) {
  if (cq.N < 2) throw ValidationError("thm_iv3_check: need N >= 2");
  const CqState ex = explicit_form(cq);
  const Matrix sigma = mean_diagonal_eve(ex);
  ThmIv3Report r;
  r.Delta = distance_with(ex, sigma);
  for (std::size_t j = 1; j < cq.N; ++j) {
    r.delta.push_back(distance_with(explicit_form(reduce(ex, {0, j})), sigma));
    r.max_delta = std::max(r.max_delta, r.delta.back());
  }
  r.forward = std::all_of(r.delta.begin(), r.delta.end(), [&](double x) { return x <= r.Delta + slack; });
  r.converse = r.Delta <= double(4 * cq.N - 3) * r.max_delta + slack;
  return r;
}

CqState perturbed_ideal(std::size_t d, std::size_t N, double t, Rng& rng) {
  if (t < 0 || t > 1) throw ValidationError("perturbed_ideal: t must lie in [0, 1]");
  const std::size_t K = ipow(d, N);
  const std::vector<double> noise = random_distribution(K, rng);
  Matrix zero(2, 2);
  zero(0, 0) = 1;
  CqState cq{d, N, {}};
  for (std::size_t i = 0; i < K; ++i) {
    const KeyTuple tup = tuple_of(i, d, N);
    const double ideal = diagonal_tuple(tup) ? 1.0 / double(d) : 0.0;
    Matrix e = zero * (1 - t) + random_density(2, rng) * t;
    cq.terms.push_back({tup, (1 - t) * ideal + t * noise[i], -1, hermitian_part(e)});
  }
  return cq;
}

// ---------------------------------------------------------------------------
// E_D lower bound for private states

namespace {

struct ProductSearch {
  double value = 0;
  std::vector<Vector> f, g;
};

// <f|M|g> with every site but `site` contracted; returns the dims[site]^2 matrix.
Matrix contract_except(const Matrix& m, const Dims& dims, const std::vector<Vector>& f, const std::vector<Vector>& g,
                       std::size_t site) {
  const std::size_t n = m.rows();
  std::vector<cplx> wf(n), wg(n);
  std::vector<std::size_t> local(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto dg = digits(r, dims);
    cplx a = 1, b = 1;
    for (std::size_t l = 0; l < dims.size(); ++l)
      if (l != site) a *= std::conj(f[l][dg[l]]), b *= g[l][dg[l]];
    wf[r] = a;
    wg[r] = b;
    local[r] = dg[site];
  }
  Matrix out(dims[site], dims[site]);
  for (std::size_t r = 0; r < n; ++r) {
    if (wf[r] == cplx(0)) continue;
    const cplx* row = m.row(r);
    for (std::size_t c = 0; c < n; ++c) out(local[r], local[c]) += wf[r] * row[c] * wg[c];
  }
  return out;
}

ProductSearch maximize_product_overlap(const Matrix& m, const Dims& dims, std::size_t restarts, Rng& rng) {
  ProductSearch best;
  best.value = -1;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::vector<Vector> f, g;
    for (auto dd : dims) f.push_back(random_pure(dd, rng)), g.push_back(random_pure(dd, rng));
    double val = 0;
    for (int sweep = 0; sweep < 500; ++sweep) {
      double now = 0;
      for (std::size_t s = 0; s < dims.size(); ++s) {
        const Svd sv = svd(contract_except(m, dims, f, g, s));
        f[s] = sv.u.column(0);
        g[s] = sv.v.column(0);
        now = sv.s[0];
      }
      const bool done = now - val < 1e-14;
      val = std::max(val, now);
      if (done) break;
    }
    if (val > best.value) best = {val, f, g};
  }
  return best;
}

Vector product_vector(const std::vector<Vector>& v) {
  Vector out{1.0};
  for (const auto& x : v) out = kron(out, x);
  return out;
}

}  // namespace

EdBoundReport ed_lower_bound(const PditSpec& spec, std::size_t restarts, std::uint64_t seed) {
  validate(spec);
  for (auto dd : spec.shield)
    if (dd > 6) throw ValidationError("ed_lower_bound: shield dimension per party must be at most 6");
  Rng rng(seed);
  EdBoundReport rep;
  for (std::size_t i = 0; i < spec.d; ++i)
    for (std::size_t j = i + 1; j < spec.d; ++j) {
      const Matrix mij = spec.U[i] * spec.rho * spec.U[j].adjoint();
      ProductSearch ps = maximize_product_overlap(mij, spec.shield, restarts, rng);
      const Vector f = product_vector(ps.f), g = product_vector(ps.g);
      EdPair e;
      e.i = i;
      e.j = j;
      e.eta = ps.value;
      e.a1 = dot(f, spec.U[i] * spec.rho * spec.U[i].adjoint() * f).real();
      e.a2 = dot(g, spec.U[j] * spec.rho * spec.U[j].adjoint() * g).real();
      const double amax = std::max(e.a1, e.a2);
      const double denom = std::sqrt(std::max(0.0, e.a1 * e.a2));
      if (denom <= 0) throw NumericalError("ed_lower_bound: maximizer has zero weight");
      const double x = std::clamp(0.5 + e.eta / (2 * denom), 0.5, 1.0);
      e.bound = amax * (1 - binary_entropy(x));
      e.f = std::move(ps.f);
      e.g = std::move(ps.g);
      rep.bound = std::max(rep.bound, e.bound);
      rep.pairs.push_back(std::move(e));
    }
  return rep;
}

RelativeEntropyBound relative_entropy_bound(const Matrix& rho, const Matrix& sigma) {
  if (!sigma.square() || sigma.rows() != rho.rows()) throw ValidationError("relative_entropy_bound: dimension mismatch");
  if (std::abs(sigma.trace() - 1.0) > kTraceTol || !is_psd(sigma))
    throw ValidationError("relative_entropy_bound: candidate must be a density matrix");
  return {relative_entropy(rho, sigma), true};
}

}  // namespace mkey
