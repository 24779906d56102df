#pragma once

#include <filesystem>

#include <json.hpp>

#include "dqc1/numerics.hpp"

namespace dqc1 {

// {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

}  // namespace dqc1
