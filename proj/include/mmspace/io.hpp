#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmspace/core.hpp"

namespace mmspace::io {

using nlohmann::json;

/// Plain matrix text: a header line "n" (square) or "rows cols", then the
/// rows as whitespace-separated reals.
Grid read_matrix(std::istream& in);
Grid read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Grid& g);

/// FiniteMMS object: {"labels": [...], "dist": [[...]] | "coords": [[...]],
/// "mass": [...]}. Missing labels default to indices; missing mass to uniform.
FiniteMMS mms_from_json(const json& j, double tol = kDefaultTolerance);
json mms_to_json(const FiniteMMS& s);
FiniteMMS read_mms_file(const std::string& path, double tol = kDefaultTolerance);

/// Accepts a bare JSON array or an object with a "mass" field.
std::vector<double> mass_from_json(const json& j);

json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);
json coupling_to_json(const Coupling& c);

json read_json_file(const std::string& path);

}  // namespace mmspace::io
