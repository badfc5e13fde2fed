#include "mkey/cq.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mkey/linalg.hpp"

namespace mkey {

bool CqState::labeled() const {
  return !terms.empty() && std::all_of(terms.begin(), terms.end(), [](const CqTerm& t) { return t.label >= 0; });
}

std::size_t CqState::label_count() const {
  int m = -1;
  for (const auto& t : terms) m = std::max(m, t.label);
  return std::size_t(m + 1);
}

std::size_t CqState::eve_dim() const {
  if (labeled()) return label_count();
  return terms.empty() ? 0 : terms.front().eve.rows();
}

void validate(const CqState& cq) {
  if (cq.d < 2 || cq.N < 1) throw ValidationError("cq state: need d >= 2 and N >= 1");
  if (cq.terms.empty()) throw ValidationError("cq state: no terms");
  const bool lab = cq.terms.front().label >= 0;
  double s = 0;
  for (const auto& t : cq.terms) {
    if (t.tuple.size() != cq.N) throw ValidationError("cq state: tuple length differs from N");
    for (auto x : t.tuple)
      if (x >= cq.d) throw ValidationError("cq state: tuple entry out of range");
    if (!(t.p >= -1e-12)) throw ValidationError("cq state: negative probability");
    if ((t.label >= 0) != lab) throw ValidationError("cq state: mixed labeled and explicit terms");
    if (!lab) {
      if (t.eve.rows() != cq.terms.front().eve.rows() || !t.eve.square())
        throw ValidationError("cq state: Eve matrices differ in dimension");
      if (std::abs(t.eve.trace() - 1.0) > 1e-10 || !t.eve.is_hermitian(1e-10) || !is_psd(t.eve))
        throw ValidationError("cq state: Eve matrix is not a density matrix");
    }
    s += t.p;
  }
  if (std::abs(s - 1) > 1e-10) throw ValidationError("cq state: probabilities do not sum to 1");
}

CqState canonical(const CqState& cq) {
  CqState out{cq.d, cq.N, {}};
  if (cq.labeled()) {
    std::map<std::pair<KeyTuple, int>, double> w;
    for (const auto& t : cq.terms) w[{t.tuple, t.label}] += t.p;
    std::map<int, int> relabel;
    for (const auto& [k, p] : w) {
      if (p == 0) continue;
      auto [it, fresh] = relabel.try_emplace(k.second, int(relabel.size()));
      out.terms.push_back({k.first, p, it->second, {}});
    }
    return out;
  }
  std::map<KeyTuple, std::pair<double, Matrix>> w;
  for (const auto& t : cq.terms) {
    auto& [p, m] = w[t.tuple];
    if (m.empty()) m = Matrix(t.eve.rows(), t.eve.cols());
    p += t.p;
    m += t.eve * t.p;
  }
  for (auto& [tup, pm] : w)
    if (pm.first > 0) out.terms.push_back({tup, pm.first, -1, pm.second / pm.first});
  return out;
}

CqState explicit_form(const CqState& cq) {
  if (!cq.labeled()) return canonical(cq);
  const CqState c = canonical(cq);
  const std::size_t n = c.label_count();
  std::map<KeyTuple, std::vector<double>> w;
  for (const auto& t : c.terms) {
    auto& v = w[t.tuple];
    v.resize(n);
    v[t.label] += t.p;
  }
  CqState out{cq.d, cq.N, {}};
  for (const auto& [tup, v] : w) {
    double p = 0;
    for (double x : v) p += x;
    std::vector<double> e(v);
    for (double& x : e) x /= p;
    out.terms.push_back({tup, p, -1, Matrix::diagonal(e)});
  }
  return out;
}

std::optional<CqState> to_labels(const CqState& cq, double tol) {
  if (cq.labeled()) return canonical(cq);
  const CqState c = canonical(cq);
  std::vector<Matrix> reps;
  CqState out{cq.d, cq.N, {}};
  for (const auto& t : c.terms) {
    int found = -1;
    for (std::size_t r = 0; r < reps.size() && found < 0; ++r)
      if (0.5 * trace_norm(t.eve - reps[r]) <= tol) found = int(r);
    if (found < 0) {
      found = int(reps.size());
      reps.push_back(t.eve);
    }
    out.terms.push_back({t.tuple, t.p, found, {}});
  }
  for (std::size_t a = 0; a < reps.size(); ++a) {
    // a label must be a pure state, and different labels orthogonal
    if (std::abs((reps[a] * reps[a]).trace() - 1.0) > tol) return std::nullopt;
    for (std::size_t b = a + 1; b < reps.size(); ++b)
      if (std::abs((reps[a] * reps[b]).trace()) > tol) return std::nullopt;
  }
  return canonical(out);
}

CqState reduce(const CqState& cq, const std::vector<std::size_t>& parties) {
  for (auto p : parties)
    if (p >= cq.N) throw ValidationError("reduce: party index out of range");
  CqState out{cq.d, parties.size(), {}};
  for (const auto& t : cq.terms) {
    KeyTuple r;
    for (auto p : parties) r.push_back(t.tuple[p]);
    out.terms.push_back({r, t.p, t.label, t.eve});
  }
  return canonical(out);
}

namespace {

Matrix pad(const Matrix& m, std::size_t n) {
  if (m.rows() == n) return m;
  Matrix out(n, n);
  out.set_block(0, 0, m);
  return out;
}

}  // namespace

double cq_distance(const CqState& a, const CqState& b) {
  if (a.N != b.N) throw ValidationError("cq_distance: party counts differ");
  if (a.labeled() && b.labeled()) {
    std::map<std::pair<KeyTuple, int>, double> w;
    for (const auto& t : canonical(a).terms) w[{t.tuple, t.label}] += t.p;
    for (const auto& t : canonical(b).terms) w[{t.tuple, t.label}] -= t.p;
    double s = 0;
    for (const auto& [k, x] : w) s += std::abs(x);
    return s;
  }
  const CqState ea = explicit_form(a), eb = explicit_form(b);
  const std::size_t n = std::max(ea.eve_dim(), eb.eve_dim());
  std::map<KeyTuple, Matrix> w;
  for (const auto& t : ea.terms) w[t.tuple] = pad(t.eve, n) * t.p;
  for (const auto& t : eb.terms) {
    auto it = w.find(t.tuple);
    if (it == w.end())
      w[t.tuple] = pad(t.eve, n) * (-t.p);
    else
      it->second -= pad(t.eve, n) * t.p;
  }
  double s = 0;
  for (const auto& [k, m] : w) s += trace_norm(hermitian_part(m));
  return s;
}

CqState ideal_cq(std::size_t d, std::size_t N) {
  if (d < 2 || N < 2) throw ValidationError("ideal_cq: need d >= 2 and N >= 2");
  CqState cq{d, N, {}};
  for (std::size_t i = 0; i < d; ++i) cq.terms.push_back({KeyTuple(N, i), 1.0 / d, 0, {}});
  return cq;
}

}  // namespace mkey
