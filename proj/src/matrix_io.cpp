#include "dqc1/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace dqc1 {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  if (!is_square(m)) throw ValidationError("matrix_to_json: matrix must be square");
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

void read_part(const nlohmann::json& part, const char* name, Index dim, ComplexMatrix& m,
               bool imaginary) {
  if (!part.is_array() || static_cast<Index>(part.size()) != dim) {
    throw ValidationError(std::string("matrix json: \"") + name + "\" must have " +
                          std::to_string(dim) + " rows");
  }
  for (Index i = 0; i < dim; ++i) {
    const auto& row = part[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw ValidationError(std::string("matrix json: row ") + std::to_string(i) + " of \"" +
                            name + "\" must have " + std::to_string(dim) + " entries");
    }
    for (Index j = 0; j < dim; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ValidationError(std::string("matrix json: non-numeric entry in \"") + name + "\"");
      }
      const double x = v.get<double>();
      if (imaginary) {
        m(i, j).imag(x);
      } else {
        m(i, j).real(x);
      }
    }
  }
}

}  // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("matrix json: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "dim" && key != "re" && key != "im") {
      throw ValidationError("matrix json: unknown key \"" + key + "\"");
    }
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<Index>() < 1) {
    throw ValidationError("matrix json: \"dim\" must be a positive integer");
  }
  if (!j.contains("re") || !j.contains("im")) {
    throw ValidationError("matrix json: both \"re\" and \"im\" are required");
  }
  const Index dim = j["dim"].get<Index>();
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  read_part(j["re"], "re", dim, m, false);
  read_part(j["im"], "im", dim, m, true);
  return m;
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("matrix file " + path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file " + path.string());
  out << matrix_to_json(m).dump() << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dqc1
