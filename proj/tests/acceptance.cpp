// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// code is nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mkey/block_operator.hpp"
#include "mkey/bounds.hpp"
#include "mkey/distill.hpp"
#include "mkey/entropy.hpp"
#include "mkey/lemmas.hpp"
#include "mkey/linalg.hpp"
#include "mkey/random.hpp"
#include "mkey/states.hpp"
#include "mkey/twist.hpp"

using namespace mkey;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  int failures = 0;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
    ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double block_diff(const BlockOperator& a, const BlockOperator& b) {
  if (a.dim() != b.dim()) return 1e300;
  double m = 0;
  for (const auto& [ij, x] : a.blocks()) {
    const Matrix* y = b.find(ij.first, ij.second);
    m = std::max(m, y ? max_diff(x, *y) : x.max_abs());
  }
  for (const auto& [ij, y] : b.blocks())
    if (!a.find(ij.first, ij.second)) m = std::max(m, y.max_abs());
  return m;
}

Vector random_product(const Dims& dims, Rng& rng) {
  Vector v{1.0};
  for (auto d : dims) v = kron(v, random_pure(d, rng));
  return v;
}

Vector basis_vector(std::size_t index, std::size_t n) {
  Vector v(n);
  v[index] = 1;
  return v;
}

std::vector<BlockOperator> family_grid() {
  std::vector<BlockOperator> out;
  for (std::size_t D : {2u, 3u, 4u})
    for (std::size_t N : {2u, 3u}) {
      out.push_back(construction_one(D, N));
      out.push_back(construction_two(vandermonde(D), N));
    }
  return out;
}

Outcome state_validity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (const BlockOperator& rho : family_grid()) {
    if (!rho.is_hermitian(1e-12)) o.fail("non-Hermitian state");
    if (std::abs(rho.trace() - cplx(1)) > 1e-10) o.fail("trace off by " + fmt("%.3g", std::abs(rho.trace() - cplx(1))));
    const double e = min_eigenvalue(rho);
    worst = std::min(worst, e);
    if (e < -1e-9) o.fail("min eigenvalue " + fmt("%.3g", e));
  }
  const double t = seconds_since(t0);
  if (t >= 30) o.fail("took " + fmt("%.1f", t) + " s");
  if (o.ok) o.note = "12 states, worst min eigenvalue " + fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s";
  return o;
}

Outcome ppt() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 1;
  for (const BlockOperator& rho : family_grid()) {
    const LemmaReport r = ppt_suite(rho, 1e-9);
    worst = std::min(worst, r.worst_margin());
    if (!r.passed()) o.fail("partial transpose with min eigenvalue " + fmt("%.3g", r.worst_margin()));
  }
  const double t = seconds_since(t0);
  if (t >= 120) o.fail("took " + fmt("%.1f", t) + " s");
  if (o.ok) o.note = "worst min eigenvalue " + fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s";
  return o;
}

Outcome protocol_oracle() {
  Outcome o;
  std::size_t matched = 0;
  struct Point {
    std::size_t D, N;
  };
  for (Point pt : {Point{2, 2}, Point{3, 2}, Point{2, 3}}) {
    const BlockOperator c = construction_one(pt.D, pt.N);
    for (std::size_t k = 2; k <= 3; ++k) {
      const StepResult it = iterate_protocol(c, k, KeepRule::AllEqual);
      const ProtocolOutput cf = recurse_one(pt.D, pt.N, k);
      const double diff = block_diff(it.state, cf.state);
      const double dp = std::abs(it.probability - cf.success_probability);
      if (diff > 1e-9 || dp > 1e-12)
        o.fail("family one (D,N,k)=(" + std::to_string(pt.D) + "," + std::to_string(pt.N) + "," + std::to_string(k) +
               "): block diff " + fmt("%.3g", diff) + ", probability diff " + fmt("%.3g", dp));
      else
        ++matched;
    }
  }
  const SeedUnitary u = vandermonde(2);
  const BlockOperator c2 = construction_two(u, 3);
  for (std::size_t k = 2; k <= 3; ++k) {
    const StepResult it = iterate_protocol(c2, k, KeepRule::AllEqual);
    const ProtocolOutput cf = recurse_two(u, 3, k);
    const double diff = block_diff(it.state, cf.state);
    const double dp = std::abs(it.probability - cf.success_probability);
    if (diff > 1e-9 || dp > 1e-12)
      o.fail("family two k=" + std::to_string(k) + ": block diff " + fmt("%.3g", diff));
    else
      ++matched;
  }
  // block simulator against dense matrices
  std::size_t dense_points = 0;
  for (const BlockOperator& rho : family_grid()) {
    if (rho.dim() * rho.dim() > 4096) continue;
    const StepResult a = protocol_step(rho, rho, KeepRule::AllEqual);
    const StepResult b = dense_protocol_step(rho, rho, KeepRule::AllEqual);
    ++dense_points;
    if (block_diff(a.state, b.state) > 1e-10 || std::abs(a.probability - b.probability) > 1e-10)
      o.fail("block and dense steps differ by " + fmt("%.3g", block_diff(a.state, b.state)));
  }
  if (dense_points == 0) o.fail("no state small enough for the dense step");
  const std::string counts = std::to_string(matched) + "/8 closed-form matches, " + std::to_string(dense_points) + " dense comparisons";
  o.note = o.ok ? counts : o.note + "; " + counts;
  return o;
}

Outcome entropic_identities() {
  Outcome o;
  for (std::size_t d = 2; d <= 5; ++d)
    for (std::size_t N : {2u, 3u}) {
      const double expect = std::log2(double(d));
      const double re = relative_entropy(ghz(d, N), omega(d, N));
      if (std::abs(re - expect) > 1e-10) o.fail("relative entropy " + fmt("%.17g", re) + " at d=" + std::to_string(d));
      const double dw = dw_best(ideal_cq(d, N));
      if (std::abs(dw - expect) > 1e-12) o.fail("dw_best " + fmt("%.17g", dw) + " at d=" + std::to_string(d));
    }
  return o;
}

std::optional<std::size_t> first_positive(const std::vector<ProtocolPoint>& pts) {
  for (const auto& p : pts)
    if (p.K_DW_raw > 0) return p.k;
  return std::nullopt;
}

Outcome first_family_trend() {
  Outcome o;
  std::string summary;
  for (std::size_t D : {3u, 4u, 5u}) {
    const auto k2 = first_positive(key_curve("one", D, 2, 1, 60));
    const auto k3 = first_positive(key_curve("one", D, 3, 1, 60));
    if (!k2 || !k3) {
      o.fail("no positive rate for D=" + std::to_string(D));
      continue;
    }
    if (*k3 < *k2) o.fail("D=" + std::to_string(D) + ": N=3 turns positive before N=2");
    summary += " D=" + std::to_string(D) + ":" + std::to_string(*k2) + "/" + std::to_string(*k3);
  }
  for (std::size_t N : {2u, 3u})
    if (first_positive(key_curve("one", 2, N, 1, 60))) o.fail("D=2 has a positive rate at N=" + std::to_string(N));
  if (o.ok) o.note = "first positive k (N=2/N=3)" + summary;
  return o;
}

Outcome second_family_trend() {
  Outcome o;
  std::vector<std::optional<std::size_t>> reach;
  std::string summary;
  for (std::size_t D : {2u, 3u, 4u}) {
    const auto pts = key_curve("two", D, 3, 1, 40);
    double best = 0;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0 && pts[i].K_DW < pts[i - 1].K_DW)
        o.fail("D=" + std::to_string(D) + ": decreasing at k=" + std::to_string(pts[i].k));
      best = std::max(best, pts[i].K_DW);
      if (!first && pts[i].K_DW >= 0.99) first = pts[i].k;
    }
    reach.push_back(first);
    summary += " D=" + std::to_string(D) + " max " + fmt("%.17g", best);
    if (D == 4 && !first) o.fail("D=4 never reaches 0.99 for k <= 40 (max " + fmt("%.17g", best) + ")");
  }
  for (std::size_t i = 1; i < reach.size(); ++i)
    if (reach[i - 1] && (!reach[i] || *reach[i] > *reach[i - 1])) o.fail("threshold k increases with D");
  if (o.ok) o.note = summary.substr(1);
  return o;
}

Outcome scaled_bounds() {
  Outcome o;
  bool one = false, two = false, two_nh = false;
  for (std::size_t D : {3u, 4u, 5u})
    for (const auto& p : key_curve("one", D, 3, 1, 60)) one = one || p.K_scaled > 0;
  for (std::size_t D : {2u, 3u, 4u}) {
    const auto h = key_curve("two", D, 3, 1, 40);
    const auto n = key_curve("two-nonhermitian", D, 3, 1, 40);
    for (std::size_t i = 0; i < h.size(); ++i) {
      two = two || h[i].K_scaled > 0;
      two_nh = two_nh || n[i].K_scaled > 0;
      if (h[i].K_scaled < n[i].K_scaled)
        o.fail("non-Hermitian scaled bound larger at D=" + std::to_string(D) + " k=" + std::to_string(h[i].k));
    }
  }
  if (!one) o.fail("no positive scaled bound for family one");
  if (!two) o.fail("no positive scaled bound for family two (Hermitian)");
  if (!two_nh) o.fail("no positive scaled bound for family two (non-Hermitian)");
  return o;
}

Outcome closeness() {
  Outcome o;
  auto oracle = [](std::size_t k) { return 0.5 - 1.0 / (2.0 * (1.0 + 3.0 * std::pow(27.0 / 29.0, double(k)))); };
  double prev = 1;
  for (std::size_t k = 1; k <= 40; ++k) {
    double eps;
    if (k <= 2) {
      eps = closeness_report(recurse_one(3, 3, k).state, 0).epsilon;
    } else {
      // squeezed key matrix as a state with a trivial shield
      const Matrix key = squeezed_key_matrix(3, weights_one(3, 3, k));
      BlockOperator rho(2, 3, {});
      for (std::size_t i = 0; i < key.rows(); ++i)
        for (std::size_t j = 0; j < key.cols(); ++j)
          if (key(i, j) != cplx(0)) {
            Matrix b(1, 1);
            b(0, 0) = key(i, j);
            rho.set(i, j, b);
          }
      eps = closeness_report(rho, 0).epsilon;
    }
    if (std::abs(eps - oracle(k)) > 1e-12) o.fail("k=" + std::to_string(k) + ": epsilon " + fmt("%.17g", eps));
    if (eps >= prev) o.fail("not decreasing at k=" + std::to_string(k));
    prev = eps;
  }
  const double e0 = closeness_report(pdit_example(2, 2, {0, 1}), 0).epsilon;
  if (e0 > 1e-12) o.fail("private state epsilon " + fmt("%.3g", e0));
  if (o.ok) o.note = "epsilon at k=40 " + fmt("%.17g", prev);
  return o;
}

Outcome lemma_suites() {
  Outcome o;
  const LemmaReport a1 = lemma_a1_suite(500, 42, 1e-10);
  if (!a1.passed()) o.fail("A1 worst margin " + fmt("%.3g", a1.worst_margin()));
  double v4_worst = 0;
  std::string v4_where;
  for (std::size_t D = 2; D <= 5; ++D) {
    const SeedUnitary u = vandermonde(D);
    for (std::size_t N = 2; N <= 4; ++N) {
      const LemmaReport r = lemma_v_suite(VLemma::V4, D, N, &u, 1e-10);
      for (const auto& c : r.cases)
        if (c.name.find("equality") != std::string::npos && c.margin < v4_worst) {
          v4_worst = c.margin;
          v4_where = "D=" + std::to_string(D) + " N=" + std::to_string(N) + " " + c.name;
        }
    }
  }
  if (v4_worst < -1e-10) o.fail("V4 equality defect " + fmt("%.4g", -v4_worst) + " at " + v4_where);
  for (std::size_t D : {3u, 4u, 5u})
    for (std::size_t N : {2u, 3u}) {
      const LemmaReport r = lemma_v_suite(VLemma::V3, D, N);
      if (!r.passed()) o.fail("V3 fails at D=" + std::to_string(D) + " N=" + std::to_string(N));
    }
  Rng rng(42);
  std::uniform_real_distribution<double> t(0.0, 0.05);
  for (int rep = 0; rep < 200; ++rep) {
    const CqState cq = perturbed_ideal(2 + rep % 2, 2 + rep % 3, t(rng), rng);
    const ThmIv3Report r = thm_iv3_check(cq);
    if (!r.forward || !r.converse) {
      o.fail("distance inequalities fail on perturbed state " + std::to_string(rep));
      break;
    }
  }
  if (o.ok) o.note = "A1 worst margin " + fmt("%.3g", a1.worst_margin());
  return o;
}

Outcome bell() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double v1 = bell_optimize(smolin_family(1), 50, 42).value;
  const double v2 = bell_optimize(smolin_family(2), 50, 42).value;
  const double t = seconds_since(t0);
  o.note = "values " + fmt("%.17g", v1) + " and " + fmt("%.17g", v2) + ", " + fmt("%.2f", t) + " s";
  if (v1 < 2.82) o.fail("four-qubit value " + fmt("%.17g", v1));
  if (v2 <= 2.0) o.fail("eight-qubit value " + fmt("%.17g", v2));
  if (t >= 60) o.fail("took " + fmt("%.1f", t) + " s");
  return o;
}

Outcome ed_bound() {
  Outcome o;
  const PditSpec spec = pdit_example_spec(2, 2, {0, 1});
  const EdBoundReport r = ed_lower_bound(spec);
  if (std::abs(r.bound - 0.25) > 1e-6) o.fail("bound " + fmt("%.17g", r.bound));
  // oracle: basis product vectors, then random product vectors
  const Matrix m = spec.U[0] * spec.rho * spec.U[1].adjoint();
  const std::size_t n = m.rows();
  double best = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) best = std::max(best, std::abs(dot(basis_vector(a, n), m * basis_vector(b, n))));
  Rng rng(1);
  for (int rep = 0; rep < 10000; ++rep)
    best = std::max(best, std::abs(dot(random_product(spec.shield, rng), m * random_product(spec.shield, rng))));
  if (r.pairs.empty() || std::abs(best - r.pairs[0].eta) > 1e-6)
    o.fail("oracle eta " + fmt("%.17g", best));
  std::vector<EdBoundReport> reports{r};
  Rng srng(77);
  for (int rep = 0; rep < 6; ++rep) {
    const Dims shield = rep % 2 ? Dims{2, 3} : Dims{2, 2, 2};
    const std::size_t d = rep % 3 ? 2 : 3;
    PditSpec s{d, shield.size(), shield, random_density(product(shield), srng), {}};
    for (std::size_t i = 0; i < d; ++i) s.U.push_back(random_unitary(product(shield), srng));
    reports.push_back(ed_lower_bound(s, 10, 1000 + rep));
  }
  for (const auto& rep : reports)
    for (const auto& p : rep.pairs)
      if (p.eta > std::sqrt(p.a1 * p.a2) + 1e-10) o.fail("eta exceeds sqrt(a1 a2)");
  if (o.ok) o.note = "bound " + fmt("%.17g", r.bound);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"state validity", state_validity},
      {"single-party partial transposes", ppt},
      {"protocol oracle equivalence", protocol_oracle},
      {"entropic identities", entropic_identities},
      {"first family key rate trend", first_family_trend},
      {"second family key rate trend", second_family_trend},
      {"success-weighted rates", scaled_bounds},
      {"closeness certificates", closeness},
      {"lemma suites", lemma_suites},
      {"Bell violation", bell},
      {"E_D lower bound", ed_bound},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    if (o.failures > 1) o.note += " (" + std::to_string(o.failures) + " failed checks)";
    std::printf("%s criterion %zu: %s%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.note.empty() ? "" : " | ", o.note.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
