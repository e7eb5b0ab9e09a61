#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gammalim/mesh.hpp"

namespace gammalim {

/// Round-trip decimal form (%.17g), used for every numeric CSV cell.
std::string format_double(double x);

/// Writes `header` then one comma-separated line per row.
void write_rows(std::ostream& out, const std::string& header, const std::vector<std::vector<double>>& rows);

/// Field CSV: header `x,value`, one row per node in mesh order.
void write_field_csv(const Field& f, std::ostream& out);
void write_field_csv(const Field& f, const std::filesystem::path& path);

/// Reads a field CSV and checks its x column against `mesh` (to 1e-9 * h).
Field read_field_csv(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace gammalim
