#include "gammalim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gammalim/errors.hpp"

namespace gammalim {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_rows(std::ostream& out, const std::string& header, const std::vector<std::vector<double>>& rows) {
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << ',';
            out << format_double(row[k]);
        }
        out << '\n';
    }
}

void write_field_csv(const Field& f, std::ostream& out) {
    out << "x,value\n";
    for (std::size_t k = 0; k < f.size(); ++k) out << format_double(f.mesh().node(k)) << ',' << format_double(f[k]) << '\n';
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path.string());
    write_field_csv(f, out);
}

Field read_field_csv(const Mesh& mesh, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open field file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("field file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,value") throw ArgumentError("field file header must be `x,value`");
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        double x = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> x >> comma >> v) || comma != ',') throw ArgumentError("malformed field row: " + line);
        const std::size_t k = values.size();
        if (k >= mesh.size() || std::abs(mesh.node(k) - x) > 1e-9 * mesh.spacing())
            throw ShapeError("field file does not match the declared mesh at row " + std::to_string(k + 1));
        values.push_back(v);
    }
    return Field(mesh, std::move(values));
}

}  // namespace gammalim
