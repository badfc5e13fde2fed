#include "mkey/matrix_io.hpp"

#include <cstdio>
#include <sstream>

namespace mkey {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_data_json(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i || j) s += ",";
      s += "[" + format_double(m(i, j).real()) + "," + format_double(m(i, j).imag()) + "]";
    }
  return s + "]";
}

Matrix matrix_from_data(const nlohmann::json& data, std::size_t rows, std::size_t cols) {
  if (!data.is_array() || data.size() != rows * cols) throw ValidationError("matrix data: wrong number of entries");
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ValidationError("matrix data: entries must be [re, im] pairs");
    m(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

std::string to_json(const MatrixFile& f) {
  std::ostringstream os;
  os << "{\"dim\":" << f.matrix.rows() << ",\"parties\":[";
  if (f.shape)
    for (std::size_t i = 0; i < f.shape->parties.size(); ++i)
      os << (i ? "," : "") << "{\"key\":" << f.shape->parties[i].key << ",\"shield\":" << f.shape->parties[i].shield << "}";
  os << "],\"data\":" << matrix_data_json(f.matrix) << "}";
  return os.str();
}

MatrixFile matrix_file_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("matrix file: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("data")) throw ValidationError("matrix file: missing \"dim\" or \"data\"");
  const auto dim = j["dim"].get<std::size_t>();
  MatrixFile f;
  f.matrix = matrix_from_data(j["data"], dim, dim);
  if (j.contains("parties") && !j["parties"].empty()) {
    std::vector<Party> ps;
    for (const auto& p : j["parties"]) ps.push_back({p.value("key", std::size_t{1}), p.value("shield", std::size_t{1})});
    f.shape = Shape(std::move(ps));
    if (f.shape->total_dim() != dim) throw ValidationError("matrix file: parties do not match dim");
  }
  return f;
}

}  // namespace mkey
