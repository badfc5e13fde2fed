#include <cmath>

#include "mkey/bounds.hpp"
#include "mkey/linalg.hpp"

namespace mkey {

namespace {

std::size_t qubit_count(const Matrix& rho) {
  std::size_t m = 0, n = rho.rows();
  if (!rho.square() || n < 4) throw ValidationError("bell: need a square matrix on at least two qubits");
  while (n > 1) {
    if (n % 2) throw ValidationError("bell: dimension is not a power of two");
    n /= 2;
    ++m;
  }
  return m;
}

Matrix observable(const std::array<double, 3>& n) {
  return pauli(1) * n[0] + pauli(2) * n[1] + pauli(3) * n[2];
}

double expectation(const Matrix& rho, const std::vector<Matrix>& ops) {
  const Matrix o = kron_all(ops);
  cplx s = 0;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) s += rho(i, j) * o(j, i);
  return s.real();
}

// Signed expression with explicit observables; obs[p][s] for party p, setting s.
double signed_value(const Matrix& rho, const std::vector<std::array<Matrix, 2>>& obs) {
  const std::size_t m = obs.size();
  double total = 0;
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      std::vector<Matrix> ops;
      for (std::size_t p = 0; p + 1 < m; ++p) ops.push_back(obs[p][s]);
      ops.push_back(obs[m - 1][t]);
      total += (s == 1 && t == 1 ? -1.0 : 1.0) * expectation(rho, ops);
    }
  return total;
}

std::vector<std::array<Matrix, 2>> observables(const BellSettings& st) {
  std::vector<std::array<Matrix, 2>> obs;
  for (const auto& party : st.n) obs.push_back({observable(party[0]), observable(party[1])});
  return obs;
}

void check_settings(const BellSettings& s, std::size_t m) {
  if (s.n.size() != m) throw ValidationError("bell: settings do not match the number of qubits");
  for (const auto& party : s.n)
    for (const auto& v : party)
      if (std::abs(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - 1) > 1e-12)
        throw ValidationError("bell: Bloch vectors must have unit norm");
}

}  // namespace

double bell_value(const Matrix& rho, const BellSettings& s) {
  check_settings(s, qubit_count(rho));
  return std::abs(signed_value(rho, observables(s)));
}

BellSettings random_bell_settings(std::size_t qubits, Rng& rng) {
  std::normal_distribution<double> g;
  BellSettings s;
  for (std::size_t p = 0; p < qubits; ++p) {
    std::array<std::array<double, 3>, 2> party;
    for (auto& v : party) {
      double r = 0;
      while (r < 1e-6) {
        v = {g(rng), g(rng), g(rng)};
        r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      }
      for (auto& x : v) x /= r;
    }
    s.n.push_back(party);
  }
  return s;
}

BellResult bell_optimize(const Matrix& rho, std::size_t restarts, std::uint64_t seed) {
  const std::size_t m = qubit_count(rho);
  Rng rng(seed);
  BellResult best;
  best.value = -1;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    BellSettings st = random_bell_settings(m, rng);
    auto obs = observables(st);
    double val = std::abs(signed_value(rho, obs));
    for (int sweep = 0; sweep < 500; ++sweep) {
      const double before = val;
      for (std::size_t p = 0; p < m; ++p)
        for (int s = 0; s < 2; ++s) {
          // F(n) = c + w.n for this slot; |c + w.n| peaks at n = sign(c) w/|w|.
          obs[p][s] = Matrix(2, 2);
          const double c = signed_value(rho, obs);
          std::array<double, 3> w;
          for (int a = 0; a < 3; ++a) {
            obs[p][s] = pauli(a + 1);
            w[a] = signed_value(rho, obs) - c;
          }
          const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
          if (wn > 1e-15) {
            const double sg = c < 0 ? -1.0 : 1.0;
            for (int a = 0; a < 3; ++a) st.n[p][s][a] = sg * w[a] / wn;
          }
          obs[p][s] = observable(st.n[p][s]);
          val = std::abs(c) + wn;
        }
      val = std::abs(signed_value(rho, obs));
      if (val - before < 1e-13) break;
    }
    if (val > best.value) best = {val, st};
  }
  return best;
}

}  // namespace mkey
