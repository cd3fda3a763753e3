#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mmspace/core.hpp"
#include "mmspace/coupling.hpp"
#include "mmspace/entropy.hpp"
#include "mmspace/experiments.hpp"
#include "mmspace/ghp.hpp"
#include "mmspace/io.hpp"
#include "mmspace/matmetric.hpp"
#include "mmspace/sampling.hpp"

using namespace mmspace;
using nlohmann::json;

namespace {

json dm_json(const DmWitness& w) {
  return {{"value", w.value}, {"excluded", w.excluded}, {"max_residual", w.max_residual}};
}

json gluing_json(const GluedSpace& g) {
  json bridges = json::array();
  for (const auto& b : g.bridges) bridges.push_back({{"left", b.left}, {"right", b.right}, {"length", b.length}});
  return {{"left", io::mms_to_json(g.left)},
          {"right", io::mms_to_json(g.right)},
          {"cross", io::grid_to_json(g.cross)},
          {"bridges", bridges}};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distances between finite metric measure spaces and distance matrices"};
  app.require_subcommand(1);
  double tol = kDefaultTolerance;
  app.add_option("--tol", tol, "comparison tolerance")->capture_default_str();
  int exit_code = 0;

  // validate
  std::string m_path;
  auto* validate = app.add_subcommand("validate", "check that a matrix is a distance matrix");
  validate->add_option("matrix", m_path)->required();
  validate->callback([&] {
    const auto v = validate_distance_matrix(io::read_matrix_file(m_path), tol);
    json out{{"valid", v.ok()}, {"violations", json::array()}};
    for (const auto& x : v.violations) out["violations"].push_back(x.describe());
    emit(out);
    exit_code = v.ok() ? 0 : 1;
  });

  // dm / dpi
  std::string a_path, b_path;
  auto* dm = app.add_subcommand("dm", "exclusion-tolerant matrix distance");
  dm->add_option("A", a_path)->required();
  dm->add_option("B", b_path)->required();
  dm->callback([&] {
    emit(dm_json(dm_distance(io::read_matrix_file(a_path), io::read_matrix_file(b_path), tol)));
  });

  PiOptions pi;
  bool heuristic = false;
  auto* dpi = app.add_subcommand("dpi", "permutation-invariant matrix distance");
  dpi->add_option("A", a_path)->required();
  dpi->add_option("B", b_path)->required();
  auto* exact_flag = dpi->add_flag("--exact", "exhaustive pruned search (default)");
  dpi->add_flag("--heuristic", heuristic, "seeded local search upper bound")->excludes(exact_flag);
  dpi->add_option("--limit", pi.exact_limit, "largest n for exact search")->capture_default_str();
  dpi->add_option("--seed", pi.seed)->capture_default_str();
  dpi->add_option("--restarts", pi.restarts)->capture_default_str();
  dpi->callback([&] {
    pi.mode = heuristic ? SearchMode::Heuristic : SearchMode::Exact;
    pi.tolerance = tol;
    const auto w = dpi_distance(io::read_matrix_file(a_path), io::read_matrix_file(b_path), pi);
    emit({{"value", w.value}, {"permutation", w.permutation}, {"excluded", w.inner.excluded},
          {"max_residual", w.inner.max_residual}, {"exact", w.exact}});
  });

  // prokhorov / birkhoff
  std::string p_path, q_path, d_path;
  bool rational = false;
  auto* pr = app.add_subcommand("prokhorov", "Levy-Prokhorov distance over a cross-distance grid");
  pr->add_option("P", p_path)->required();
  pr->add_option("Q", q_path)->required();
  pr->add_option("D", d_path)->required();
  pr->add_flag("--rational", rational, "exact rational max-flow");
  pr->callback([&] {
    const auto p = io::mass_from_json(io::read_json_file(p_path));
    const auto q = io::mass_from_json(io::read_json_file(q_path));
    const auto r = prokhorov_distance(p, q, io::read_matrix_file(d_path),
                                      rational ? FlowArithmetic::Rational : FlowArithmetic::Floating, tol);
    emit({{"value", r.value}, {"coupling", io::coupling_to_json(r.coupling)}});
  });

  auto* bk = app.add_subcommand("birkhoff", "Birkhoff decomposition of a doubly stochastic matrix");
  bk->add_option("S", m_path)->required();
  bk->callback([&] {
    const Grid s = io::read_matrix_file(m_path);
    const auto d = birkhoff_decompose(s, tol);
    json terms = json::array();
    for (const auto& t : d.terms) terms.push_back({{"coefficient", t.coefficient}, {"permutation", t.permutation}});
    const Grid back = d.reconstruct(s.rows());
    double err = 0.0;
    for (std::size_t k = 0; k < s.data().size(); ++k) err = std::max(err, std::abs(back.data()[k] - s.data()[k]));
    emit({{"terms", terms}, {"reconstruction_error", err}});
  });

  // ghp
  std::string x_path, y_path, strategy = "best";
  auto* ghp = app.add_subcommand("ghp", "certified Gromov-Hausdorff-Prokhorov bounds");
  ghp->add_option("X", x_path)->required();
  ghp->add_option("Y", y_path)->required();
  ghp->add_option("--strategy", strategy, "permutation | identify | net | best")->capture_default_str();
  ghp->callback([&] {
    GhpOptions go;
    go.tolerance = tol;
    go.pi.tolerance = tol;
    const auto x = io::read_mms_file(x_path, tol), y = io::read_mms_file(y_path, tol);
    const auto b = ghp_upper_bound(x, y, parse_strategy(strategy), go);
    json out{{"upper", b.upper}, {"lower", b.lower}, {"method", b.method},
             {"gluing", gluing_json(b.gluing)}, {"coupling", io::coupling_to_json(b.coupling)}};
    const bool uniform_case = x.size() == y.size() && x.size() <= go.pi.exact_limit &&
                              theta_map(x.dist()).mass() == x.mass() && theta_map(y.dist()).mass() == y.mass();
    if (uniform_case) {
      const auto u = ghp_bounds_uniform(x.dist(), y.dist(), go);
      out["lower"] = u.bound.lower;
      out["dpi"] = u.pi.value;
    }
    emit(out);
  });

  // sample / ensemble
  std::string space_path, format = "json";
  std::size_t n = 0, count = 1;
  std::uint64_t seed = 0, budget = 1'000'000;
  auto* sample = app.add_subcommand("sample", "distance matrices of i.i.d. samples");
  sample->add_option("SPACE", space_path)->required();
  sample->add_option("--n", n)->required();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--format", format, "json | mat")->check(CLI::IsMember({"json", "mat"}))->capture_default_str();
  sample->callback([&] {
    const auto space = model_from_json(io::read_json_file(space_path), tol);
    json all = json::array();
    for (std::size_t k = 0; k < count; ++k) {
      const auto s = empirical_space(space, n, seed, k);
      if (format == "mat")
        io::write_matrix(std::cout, s.dist().grid());
      else
        all.push_back(io::grid_to_json(s.dist().grid()));
    }
    if (format == "json") emit(all);
  });

  auto* ensemble = app.add_subcommand("ensemble", "exact law of the sampled distance matrix");
  ensemble->add_option("SPACE", space_path)->required();
  ensemble->add_option("--n", n)->required();
  ensemble->add_option("--budget", budget)->capture_default_str();
  ensemble->callback([&] {
    const auto e = enumerate_matrix_ensemble(as_finite(model_from_json(io::read_json_file(space_path), tol)), n,
                                             budget);
    json atoms = json::array();
    for (const auto& a : e.atoms())
      atoms.push_back({{"matrix", io::grid_to_json(a.matrix.grid())}, {"probability", a.probability}});
    emit({{"n", n}, {"atoms", atoms}});
  });

  // entropy
  auto* ent = app.add_subcommand("entropy", "relative entropy I_X(Y)");
  ent->add_option("Y", y_path)->required();
  ent->add_option("X", x_path)->required();
  ent->callback([&] {
    const auto r = relative_entropy(io::read_mms_file(y_path, tol), io::read_mms_file(x_path, tol), tol);
    json value = std::isinf(r.value) ? json("inf") : json(r.value);
    emit({{"value", value}, {"argmin", r.argmin}, {"embeddings", r.embeddings}});
  });

  // check
  std::string which, out_path, csv_path, space2_path;
  std::optional<std::size_t> opt_n;
  std::size_t trials = 0;
  bool trials_set = false;
  std::optional<double> eps;
  double c = 1.0, alpha = 0.75;
  auto* check = app.add_subcommand("check", "run an experiment and report");
  check->add_option("experiment", which)
      ->required()
      ->check(CLI::IsMember({"finspc", "hoelder", "sharp", "sampconv", "gpaction"}));
  check->add_option("--n", opt_n);
  auto* trials_opt = check->add_option("--trials", trials);
  check->add_option("--seed", seed)->capture_default_str();
  check->add_option("--eps", eps);
  check->add_option("--c", c)->capture_default_str();
  check->add_option("--alpha", alpha)->capture_default_str();
  check->add_option("--budget", budget)->capture_default_str();
  check->add_option("--space", space_path, "finite space JSON (sampconv, gpaction)");
  check->add_option("--space2", space2_path, "second finite space JSON (gpaction)");
  check->add_option("--out", out_path);
  check->add_option("--csv", csv_path);
  check->callback([&] {
    trials_set = trials_opt->count() > 0;
    ExperimentOptions eo;
    eo.tolerance = tol;
    eo.budget = budget;
    eo.seed = seed;
    eo.pi.tolerance = tol;
    auto load = [&](const std::string& path) { return as_finite(model_from_json(io::read_json_file(path), tol)); };
    ExperimentReport rep;
    if (which == "finspc") {
      rep = check_finspc_sandwich(opt_n.value_or(5), trials_set ? trials : 200, eo);
    } else if (which == "hoelder") {
      rep = check_hoelder_small_n(eps.value_or(0.04), opt_n.value_or(4), trials_set ? trials : 0, eo);
    } else if (which == "sharp") {
      rep = check_sharp_exponent(c, alpha, eps.value_or(0.01), opt_n, eo);
    } else if (which == "sampconv") {
      const FiniteMMS space = space_path.empty() ? unit_square_corners() : load(space_path);
      rep = check_sampling_convergence(space, eps.value_or(0.1), opt_n.value_or(1000), trials_set ? trials : 200, eo);
    } else {
      const double e = eps.value_or(0.1);
      const FiniteMMS x = space_path.empty() ? two_point_space("a", "b", 0.5, e) : load(space_path);
      const FiniteMMS y = space2_path.empty() ? two_point_space("a", "d", 1.0, e) : load(space2_path);
      rep = check_group_invariance(x, y, opt_n.value_or(3), eo);
    }
    const json j = rep.to_json();
    if (!out_path.empty()) write_text(out_path, j.dump(2) + "\n");
    if (!csv_path.empty()) write_text(csv_path, rep.to_csv());
    emit(j);
    exit_code = rep.all_pass() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
