#include "mkey/block_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mkey/entropy.hpp"
#include "mkey/linalg.hpp"

namespace mkey {

BlockOperator::BlockOperator(std::size_t d, std::size_t N, Dims shield, std::vector<std::size_t> owner)
    : d_(d), n_(N), shield_(std::move(shield)), owner_(std::move(owner)) {
  if (d < 2 || N < 1) throw ValidationError("BlockOperator: need d >= 2 and N >= 1");
  if (owner_.empty())
    for (std::size_t f = 0; f < shield_.size(); ++f) owner_.push_back(f % N);
  if (owner_.size() != shield_.size()) throw ValidationError("BlockOperator: owner list does not match shield factors");
  for (std::size_t f = 0; f < shield_.size(); ++f) {
    if (shield_[f] == 0) throw ValidationError("BlockOperator: shield dimensions must be positive");
    if (owner_[f] >= N) throw ValidationError("BlockOperator: shield owner out of range");
  }
}

std::size_t BlockOperator::key_dim() const {
  std::size_t k = 1;
  for (std::size_t i = 0; i < n_; ++i) k *= d_;
  return k;
}

KeyTuple BlockOperator::tuple(std::size_t index) const { return digits(index, Dims(n_, d_)); }

std::size_t BlockOperator::index(const KeyTuple& t) const {
  if (t.size() != n_) throw ValidationError("key tuple has wrong length");
  for (auto x : t)
    if (x >= d_) throw ValidationError("key tuple entry out of range");
  return flat_index(t, Dims(n_, d_));
}

std::size_t BlockOperator::uniform_index(std::size_t i) const { return index(KeyTuple(n_, i)); }

void BlockOperator::check_block(const Matrix& m) const {
  const std::size_t s = shield_dim();
  if (m.rows() != s || m.cols() != s) throw ValidationError("BlockOperator: block does not match shield dimension");
}

const Matrix* BlockOperator::find(std::size_t i, std::size_t j) const {
  auto it = blocks_.find({i, j});
  return it == blocks_.end() ? nullptr : &it->second;
}

void BlockOperator::set(std::size_t i, std::size_t j, Matrix m) {
  check_block(m);
  if (i >= key_dim() || j >= key_dim()) throw ValidationError("BlockOperator: key index out of range");
  blocks_[{i, j}] = std::move(m);
}

void BlockOperator::add(std::size_t i, std::size_t j, const Matrix& m) {
  auto it = blocks_.find({i, j});
  if (it == blocks_.end())
    set(i, j, m);
  else
    it->second += m;
}

void BlockOperator::scale(double s) {
  for (auto& [k, m] : blocks_) m *= s;
}

Matrix BlockOperator::dense() const {
  const std::size_t s = shield_dim();
  Matrix out(dim(), dim());
  for (const auto& [ij, m] : blocks_) out.set_block(ij.first * s, ij.second * s, m);
  return out;
}

Dims BlockOperator::dense_dims() const {
  Dims d(n_, d_);
  d.insert(d.end(), shield_.begin(), shield_.end());
  return d;
}

Systems BlockOperator::party_systems(std::size_t party) const {
  Systems s{party};
  for (std::size_t f = 0; f < shield_.size(); ++f)
    if (owner_[f] == party) s.push_back(n_ + f);
  return s;
}

MatrixFile BlockOperator::to_matrix_file() const {
  std::vector<std::size_t> perm;
  std::vector<Party> parties;
  for (std::size_t p = 0; p < n_; ++p) {
    const Systems s = party_systems(p);
    perm.insert(perm.end(), s.begin(), s.end());
    std::size_t sh = 1;
    for (std::size_t k = 1; k < s.size(); ++k) sh *= shield_[s[k] - n_];
    parties.push_back({d_, sh});
  }
  return {permute_systems(dense(), dense_dims(), perm), Shape(parties)};
}

cplx BlockOperator::trace() const {
  cplx t = 0;
  for (const auto& [ij, m] : blocks_)
    if (ij.first == ij.second) t += m.trace();
  return t;
}

Matrix BlockOperator::key_matrix() const {
  Matrix k(key_dim(), key_dim());
  for (const auto& [ij, m] : blocks_) k(ij.first, ij.second) = m.trace();
  return k;
}

bool BlockOperator::is_hermitian(double tol) const {
  for (const auto& [ij, m] : blocks_) {
    const Matrix* t = find(ij.second, ij.first);
    if (!t) {
      if (m.max_abs() > tol) return false;
      continue;
    }
    if (max_diff(m, t->adjoint()) > tol) return false;
  }
  return true;
}

namespace {

BlockOperator transpose_party(const BlockOperator& rho, std::size_t party, bool with_shield) {
  if (party >= rho.parties()) throw ValidationError("partial_transpose: party index out of range");
  BlockOperator out(rho.d(), rho.parties(), rho.shield(), rho.owner());
  Systems shield_sys;
  for (std::size_t f = 0; f < rho.shield().size(); ++f)
    if (rho.owner()[f] == party) shield_sys.push_back(f);
  for (const auto& [ij, m] : rho.blocks()) {
    KeyTuple r = rho.tuple(ij.first), c = rho.tuple(ij.second);
    std::swap(r[party], c[party]);
    Matrix b = (with_shield && !shield_sys.empty()) ? partial_transpose(m, rho.shield(), shield_sys) : m;
    out.set(rho.index(r), rho.index(c), std::move(b));
  }
  return out;
}

}  // namespace

BlockOperator partial_transpose(const BlockOperator& rho, std::size_t party) { return transpose_party(rho, party, true); }

BlockOperator key_partial_transpose(const BlockOperator& rho, std::size_t party) {
  return transpose_party(rho, party, false);
}

double min_eigenvalue(const BlockOperator& rho) {
  const std::size_t K = rho.key_dim(), S = rho.shield_dim();
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
  bool missing = false;
  for (std::size_t i = 0; i < K; ++i) {
    if (used[i])
      comps[root(i)].push_back(i);
    else
      missing = true;
  }
  double lo = missing ? 0.0 : kInfinity;
  for (const auto& [r, idx] : comps) {
    Matrix sub(idx.size() * S, idx.size() * S);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (const Matrix* m = rho.find(idx[a], idx[b])) sub.set_block(a * S, b * S, *m);
    lo = std::min(lo, mkey::min_eigenvalue(sub));
  }
  return lo;
}

bool is_psd(const BlockOperator& rho, double tol) {
  return min_eigenvalue(rho) >= -tol * std::max(1.0, std::abs(rho.trace()));
}

std::string to_json(const BlockOperator& rho) {
  std::ostringstream os;
  os << "{\"d\":" << rho.d() << ",\"N\":" << rho.parties() << ",\"shield_parties\":[";
  for (std::size_t f = 0; f < rho.shield().size(); ++f)
    os << (f ? "," : "") << "{\"dim\":" << rho.shield()[f] << ",\"owner\":" << rho.owner()[f] << "}";
  os << "],\"blocks\":[";
  bool first = true;
  for (const auto& [ij, m] : rho.blocks()) {
    os << (first ? "" : ",") << "{\"row\":[";
    const KeyTuple r = rho.tuple(ij.first), c = rho.tuple(ij.second);
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
    os << "],\"col\":[";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << "],\"data\":" << matrix_data_json(m) << "}";
    first = false;
  }
  os << "]}";
  return os.str();
}

BlockOperator block_operator_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("block operator file: ") + e.what());
  }
  for (const char* key : {"d", "N", "shield_parties", "blocks"})
    if (!j.contains(key)) throw ValidationError(std::string("block operator file: missing \"") + key + "\"");
  Dims shield;
  std::vector<std::size_t> owner;
  for (const auto& f : j["shield_parties"]) {
    shield.push_back(f.at("dim").get<std::size_t>());
    owner.push_back(f.at("owner").get<std::size_t>());
  }
  BlockOperator rho(j["d"].get<std::size_t>(), j["N"].get<std::size_t>(), shield, owner);
  const std::size_t s = rho.shield_dim();
  for (const auto& b : j["blocks"]) {
    const auto r = b.at("row").get<KeyTuple>();
    const auto c = b.at("col").get<KeyTuple>();
    rho.set(rho.index(r), rho.index(c), matrix_from_data(b.at("data"), s, s));
  }
  return rho;
}

}  // namespace mkey
