#pragma once

#include "vartopic/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace vartopic {

// A fitted model as one JSON object. Matrices are {"rows", "cols", "data"}
// with data in row-major order.

void write_model(std::ostream& out, const FittedModel& model);
FittedModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const FittedModel& model);
FittedModel load_model(const std::filesystem::path& path);

} // namespace vartopic
