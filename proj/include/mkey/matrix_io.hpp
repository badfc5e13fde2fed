// JSON encoding of matrices. Complex entries are [re, im] pairs printed with
// 17 significant digits, so a parse/print cycle reproduces the text exactly.
#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mkey/matrix.hpp"
#include "mkey/tensor.hpp"

namespace mkey {

std::string format_double(double x);  // %.17g

// Row-major array of [re, im] pairs, written as raw JSON text.
std::string matrix_data_json(const Matrix& m);
Matrix matrix_from_data(const nlohmann::json& data, std::size_t rows, std::size_t cols);

struct MatrixFile {
  Matrix matrix;
  std::optional<Shape> shape;
};

std::string to_json(const MatrixFile& f);
MatrixFile matrix_file_from_json(const std::string& text);

}  // namespace mkey
