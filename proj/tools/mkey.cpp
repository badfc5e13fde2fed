// mkey: build states, run checks and lemma suites, emit key-rate curves.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mkey/bounds.hpp"
#include "mkey/distill.hpp"
#include "mkey/lemmas.hpp"
#include "mkey/linalg.hpp"
#include "mkey/matrix_io.hpp"
#include "mkey/states.hpp"
#include "mkey/twist.hpp"

using namespace mkey;

namespace {

struct Globals {
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::size_t restarts = 50;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--in: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

bool power_of_two(std::size_t D, std::size_t& m) {
  m = 0;
  while ((std::size_t{1} << m) < D) ++m;
  return (std::size_t{1} << m) == D;
}

SeedUnitary make_seed(const std::string& kind, std::size_t D) {
  if (kind == "vandermonde") return vandermonde(D);
  if (kind == "hadamard-power") {
    std::size_t m;
    if (!power_of_two(D, m) || m == 0) throw ValidationError("--unitary hadamard-power needs --D a power of two");
    return hadamard_power(m);
  }
  throw ValidationError("--unitary must be vandermonde or hadamard-power");
}

// Key-only operator (no shield) from a dense matrix on d^N.
BlockOperator key_only(const Matrix& m, std::size_t d, std::size_t N) {
  BlockOperator rho(d, N, {});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != cplx(0)) {
        Matrix b(1, 1);
        b(0, 0) = m(i, j);
        rho.set(i, j, b);
      }
  return rho;
}

std::string csv_of(const std::vector<ProtocolPoint>& pts) {
  std::ostringstream os;
  write_curve_csv(os, pts);
  return os.str();
}

// ---------------------------------------------------------------------------

struct ConstructOpts {
  std::string family = "one", unitary = "vandermonde", out;
  std::size_t D = 3, N = 3, k = 1, d = 2, n = 2;
  std::vector<std::size_t> perm;
};

int run_construct(const ConstructOpts& o) {
  BlockOperator rho;
  if (o.family == "one") {
    rho = o.k == 1 ? construction_one(o.D, o.N) : recurse_one(o.D, o.N, o.k).state;
  } else if (o.family == "two") {
    const SeedUnitary u = make_seed(o.unitary, o.D);
    rho = o.k == 1 ? construction_two(u, o.N) : recurse_two(u, o.N, o.k).state;
  } else if (o.family == "pdit") {
    std::vector<std::size_t> perm = o.perm;
    if (perm.empty())
      for (std::size_t i = 0; i < o.N; ++i) perm.push_back(i);
    rho = pdit_example(o.D, o.N, perm);
  } else if (o.family == "ghz") {
    rho = key_only(ghz(o.d, o.N), o.d, o.N);
  } else if (o.family == "smolin") {
    rho = key_only(smolin_family(o.n), 2, 2 * o.n);
  } else {
    throw ValidationError("--family must be one, two, pdit, ghz or smolin");
  }
  write_text(o.out, to_json(rho) + "\n");
  return 0;
}

struct CheckOpts {
  std::string in;
  bool ppt = false, psd = false, hermitian = false, closeness = false;
  std::size_t row = 0;
};

int run_check(const CheckOpts& o, const Globals& g) {
  const BlockOperator rho = block_operator_from_json(read_file(o.in));
  const bool all = !o.ppt && !o.psd && !o.hermitian && !o.closeness;
  bool ok = true;
  std::ostringstream os;
  os << "{\"dim\":" << rho.dim() << ",\"trace\":" << format_double(rho.trace().real());
  if (all || o.hermitian) {
    const bool h = rho.is_hermitian(1e-12) && std::abs(rho.trace() - 1.0) <= 1e-10;
    os << ",\"hermitian_unit_trace\":" << (h ? "true" : "false");
    ok = ok && h;
  }
  if (all || o.psd) {
    const double m = min_eigenvalue(rho);
    os << ",\"min_eigenvalue\":" << format_double(m);
    ok = ok && m >= -g.tol;
  }
  if (all || o.ppt) {
    const LemmaReport r = ppt_suite(rho, g.tol);
    os << ",\"ppt\":" << to_json(r);
    ok = ok && r.passed();
  }
  if (o.closeness) os << ",\"closeness\":" << to_json(closeness_report(rho, o.row));
  os << ",\"passed\":" << (ok ? "true" : "false") << "}\n";
  std::cout << os.str();
  return ok ? 0 : 2;
}

struct DistillOpts {
  std::string family = "one", unitary = "vandermonde", model = "auto", csv;
  std::size_t D = 3, N = 3, k_min = 1, k_max = 40;
};

int run_distill(const DistillOpts& o) {
  std::string fam = o.family;
  if (o.family == "two") {
    const SeedUnitary u = make_seed(o.unitary, o.D);
    if (!u.flat) throw ValidationError("--unitary: seed is not flat");
    bool herm = u.hermitian;
    if (o.model == "hermitian") herm = true;
    else if (o.model == "nonhermitian") herm = false;
    else if (o.model != "auto") throw ValidationError("--model must be auto, hermitian or nonhermitian");
    fam = herm ? "two" : "two-nonhermitian";
  } else if (o.family != "one") {
    throw ValidationError("--family must be one or two");
  }
  write_text(o.csv, csv_of(key_curve(fam, o.D, o.N, o.k_min, o.k_max)));
  return 0;
}

struct FiguresOpts {
  std::string out_dir = "figures";
  std::size_t d_max = 5, k_one = 60, k_two = 40;
};

int run_figures(const FiguresOpts& o) {
  if (o.d_max < 2) throw ValidationError("--D-max must be at least 2");
  std::filesystem::create_directories(o.out_dir);
  auto grid = [&](const std::string& fam, std::size_t N, std::size_t kmax) {
    std::vector<ProtocolPoint> pts;
    for (std::size_t D = 2; D <= o.d_max; ++D) {
      auto c = key_curve(fam, D, N, 1, kmax);
      pts.insert(pts.end(), c.begin(), c.end());
    }
    return pts;
  };
  const auto f1a = grid("one", 3, o.k_one), f1b = grid("one", 2, o.k_one);
  const auto f3 = grid("two", 3, o.k_two), f4b = grid("two-nonhermitian", 3, o.k_two);
  const auto path = [&](const char* name) { return (std::filesystem::path(o.out_dir) / name).string(); };
  // K_DW and the probability-scaled K_scaled share one row schema
  write_text(path("fig1a.csv"), csv_of(f1a));
  write_text(path("fig1b.csv"), csv_of(f1b));
  write_text(path("fig2a.csv"), csv_of(f1a));
  write_text(path("fig2b.csv"), csv_of(f1b));
  write_text(path("fig3.csv"), csv_of(f3));
  write_text(path("fig4a.csv"), csv_of(f3));
  write_text(path("fig4b.csv"), csv_of(f4b));
  std::cout << "wrote fig1a fig1b fig2a fig2b fig3 fig4a fig4b to " << o.out_dir << "\n";
  return 0;
}

struct BellOpts {
  std::size_t n = 2;
  std::string in;
};

int run_bell(const BellOpts& o, const Globals& g) {
  const Matrix rho = o.in.empty() ? smolin_family(o.n) : block_operator_from_json(read_file(o.in)).dense();
  const BellResult r = bell_optimize(rho, g.restarts, g.seed);
  std::ostringstream os;
  os << "{\"value\":" << format_double(r.value) << ",\"restarts\":" << g.restarts << ",\"seed\":" << g.seed
     << ",\"lower_bound_only\":true,\"settings\":[";
  for (std::size_t p = 0; p < r.settings.n.size(); ++p) {
    os << (p ? "," : "") << "[";
    for (int s = 0; s < 2; ++s) {
      const auto& v = r.settings.n[p][s];
      os << (s ? "," : "") << "[" << format_double(v[0]) << "," << format_double(v[1]) << "," << format_double(v[2]) << "]";
    }
    os << "]";
  }
  os << "]}\n";
  std::cout << os.str();
  return 0;
}

struct LemmasOpts {
  std::vector<std::string> suites{"all"};
  std::size_t trials = 500, D = 0, N = 0;
  std::string out;
};

int run_lemmas(const LemmasOpts& o, const Globals& g) {
  std::vector<std::string> names;
  for (const auto& s : o.suites) {
    if (s == "all")
      names.insert(names.end(), {"A1", "A2", "V1", "V2", "V3", "V4", "PPT"});
    else
      names.push_back(s);
  }
  auto grid = [&](std::vector<std::size_t> Ds, std::vector<std::size_t> Ns) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (o.D && o.N) return std::vector<std::pair<std::size_t, std::size_t>>{{o.D, o.N}};
    for (auto D : Ds)
      for (auto N : Ns) out.push_back({D, N});
    return out;
  };
  std::vector<LemmaReport> reports;
  for (const auto& s : names) {
    if (s == "A1") {
      reports.push_back(lemma_a1_suite(o.trials, g.seed));
    } else if (s == "A2") {
      reports.push_back(lemma_a2_suite(50, g.seed));
    } else if (s == "V1" || s == "V2") {
      for (auto [D, N] : grid({2, 3, 4}, {2, 3})) reports.push_back(lemma_v_suite(parse_v_lemma(s), D, N));
    } else if (s == "V3") {
      for (auto [D, N] : grid({3, 4, 5}, {2, 3})) reports.push_back(lemma_v_suite(VLemma::V3, D, N));
    } else if (s == "V4") {
      for (auto [D, N] : grid({2, 3, 4, 5}, {2, 3, 4})) {
        const SeedUnitary u = vandermonde(D);
        reports.push_back(lemma_v_suite(VLemma::V4, D, N, &u));
      }
    } else if (s == "PPT") {
      for (auto [D, N] : grid({2, 3, 4}, {2, 3})) {
        reports.push_back(ppt_suite(construction_one(D, N), g.tol));
        reports.back().suite = "PPT construction one";
        reports.back().grid = "D=" + std::to_string(D) + ",N=" + std::to_string(N);
        reports.push_back(ppt_suite(construction_two(vandermonde(D), N), g.tol));
        reports.back().suite = "PPT construction two";
        reports.back().grid = "D=" + std::to_string(D) + ",N=" + std::to_string(N) + ",seed=vandermonde";
      }
    } else {
      throw ValidationError("--suite must be A1, A2, V1, V2, V3, V4, PPT or all");
    }
  }
  write_text(o.out, to_json(reports) + "\n");
  bool ok = true;
  for (const auto& r : reports) {
    std::cerr << (r.passed() ? "pass " : "FAIL ") << r.suite << " [" << r.grid << "]\n";
    ok = ok && r.passed();
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mkey: multipartite private-state and key-rate toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "tolerance for PSD/PPT checks")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--restarts", g.restarts, "optimizer restarts")->check(CLI::PositiveNumber);

  ConstructOpts co;
  auto* construct = app.add_subcommand("construct", "build a state and write it as JSON");
  construct->add_option("--family", co.family, "one | two | pdit | ghz | smolin");
  construct->add_option("--unitary", co.unitary, "vandermonde | hadamard-power (family two)");
  construct->add_option("--D", co.D, "shield dimension per party");
  construct->add_option("--N", co.N, "number of parties");
  construct->add_option("--k", co.k, "copies consumed by the recurrence (1 = single copy)");
  construct->add_option("--d", co.d, "key dimension (ghz)");
  construct->add_option("--n", co.n, "Smolin family index");
  construct->add_option("--perm", co.perm, "party permutation (pdit)");
  construct->add_option("--out", co.out, "output file (default stdout)");

  CheckOpts ck;
  auto* check = app.add_subcommand("check", "validate a state file");
  check->add_option("--in", ck.in, "state JSON")->required();
  check->add_flag("--ppt", ck.ppt, "every single-party transpose is PSD");
  check->add_flag("--psd", ck.psd, "state is PSD");
  check->add_flag("--hermitian", ck.hermitian, "Hermitian with unit trace");
  check->add_flag("--closeness", ck.closeness, "report closeness to a private state");
  check->add_option("--row", ck.row, "key row for the closeness report");

  DistillOpts dz;
  auto* distill = app.add_subcommand("distill", "key-rate curve over k as CSV");
  distill->add_option("--family", dz.family, "one | two");
  distill->add_option("--unitary", dz.unitary, "vandermonde | hadamard-power (family two)");
  distill->add_option("--model", dz.model, "auto | hermitian | nonhermitian success probability (family two)");
  distill->add_option("--D", dz.D);
  distill->add_option("--N", dz.N);
  distill->add_option("--k-min", dz.k_min);
  distill->add_option("--k-max", dz.k_max);
  distill->add_option("--csv", dz.csv, "output CSV (default stdout)");

  FiguresOpts fo;
  auto* figures = app.add_subcommand("figures", "CSV data for every figure");
  figures->add_option("--out-dir", fo.out_dir);
  figures->add_option("--D-max", fo.d_max);
  figures->add_option("--k-max-one", fo.k_one, "k range of the first family");
  figures->add_option("--k-max-two", fo.k_two, "k range of the second family");

  BellOpts bo;
  auto* bell = app.add_subcommand("bell", "optimize the Bell expression");
  bell->add_option("--n", bo.n, "Smolin family index (2n qubits)");
  bell->add_option("--in", bo.in, "state JSON instead of the Smolin family");

  LemmasOpts lo;
  auto* lemmas = app.add_subcommand("lemmas", "run lemma suites, JSON report");
  lemmas->add_option("--suite", lo.suites, "A1 A2 V1 V2 V3 V4 PPT all");
  lemmas->add_option("--trials", lo.trials);
  lemmas->add_option("--D", lo.D, "single grid point (with --N)");
  lemmas->add_option("--N", lo.N);
  lemmas->add_option("--out", lo.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (*construct) return run_construct(co);
    if (*check) return run_check(ck, g);
    if (*distill) return run_distill(dz);
    if (*figures) return run_figures(fo);
    if (*bell) return run_bell(bo, g);
    if (*lemmas) return run_lemmas(lo, g);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
