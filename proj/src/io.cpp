#include "mmspace/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mmspace::io {

Grid read_matrix(std::istream& in) {
  std::string header;
  while (std::getline(in, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream hs(header);
  long long rows = -1, cols = -1;
  if (!(hs >> rows) || rows <= 0) throw Error("matrix file: bad header '" + header + "'");
  if (!(hs >> cols)) cols = rows;
  if (cols <= 0) throw Error("matrix file: bad column count");
  Grid g(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!(in >> g(i, j)))
        throw Error("matrix file: expected " + std::to_string(rows * cols) + " entries");
  return g;
}

Grid read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Grid& g) {
  const auto old = out.precision(17);
  if (g.square())
    out << g.rows() << '\n';
  else
    out << g.rows() << ' ' << g.cols() << '\n';
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) out << (j ? " " : "") << g(i, j);
    out << '\n';
  }
  out.precision(old);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

Grid grid_from_json(const json& j) {
  if (!j.is_array()) throw Error("expected a 2-D array");
  return Grid::from_rows(j.get<std::vector<std::vector<double>>>());
}

json grid_to_json(const Grid& g) { return g.to_rows(); }

std::vector<double> mass_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object() && j.contains("mass")) return j.at("mass").get<std::vector<double>>();
  throw Error("expected a mass array or an object with \"mass\"");
}

FiniteMMS mms_from_json(const json& j, double tol) {
  if (!j.is_object()) throw Error("space: expected a JSON object");
  Grid d;
  if (j.contains("dist"))
    d = grid_from_json(j.at("dist"));
  else if (j.contains("coords"))
    d = euclidean_distances(j.at("coords").get<std::vector<std::vector<double>>>());
  else
    throw Error("space: needs \"dist\" or \"coords\"");

  const std::size_t n = d.rows();
  std::vector<double> mass = j.contains("mass") ? j.at("mass").get<std::vector<double>>()
                                                : std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
  } else {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  return FiniteMMS(std::move(labels), DistanceMatrix::from_grid(d, tol), std::move(mass), tol);
}

json mms_to_json(const FiniteMMS& s) {
  return {{"labels", s.labels()}, {"dist", grid_to_json(s.dist().grid())}, {"mass", s.mass()}};
}

FiniteMMS read_mms_file(const std::string& path, double tol) {
  return mms_from_json(read_json_file(path), tol);
}

json coupling_to_json(const Coupling& c) {
  return {{"mass", grid_to_json(c.mass)}, {"ground", grid_to_json(c.ground)}};
}

}  // namespace mmspace::io
