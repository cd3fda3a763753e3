#include "mmspace/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "mmspace/matmetric.hpp"
#include "mmspace/rng.hpp"
#include "mmspace/sampling.hpp"

namespace mmspace {

Assertion make_assertion(std::string name, double observed, std::string relation, double bound, double tolerance,
                         bool allow_boundary) {
  Assertion a{std::move(name), observed, std::move(relation), bound, tolerance, false, false};
  const bool near = std::abs(observed - bound) <= tolerance;
  if (a.relation == "<=") {
    a.pass = observed <= bound + tolerance;
  } else if (a.relation == ">=") {
    a.pass = observed >= bound - tolerance;
  } else if (a.relation == "<" || a.relation == ">") {
    a.pass = a.relation == "<" ? observed < bound : observed > bound;
    if (allow_boundary && near) {
      a.boundary = true;
      a.pass = true;
    }
  } else if (a.relation == "==") {
    a.pass = near;
  } else {
    throw Error("unknown relation '" + a.relation + "'");
  }
  return a;
}

void ExperimentReport::check(std::string n, double obs, std::string relation, double b, double tolerance,
                             bool allow_boundary) {
  assertions.push_back(make_assertion(std::move(n), obs, std::move(relation), b, tolerance, allow_boundary));
}

bool ExperimentReport::all_pass() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["config"] = config;
  j["observed"] = observed;
  j["bound"] = bound;
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"observed", a.observed},
                               {"relation", a.relation},
                               {"bound", a.bound},
                               {"tolerance", a.tolerance},
                               {"pass", a.pass},
                               {"boundary", a.boundary}});
  j["notes"] = notes;
  j["pass"] = all_pass();
  if (!rows.empty()) j["trials"] = {{"columns", columns}, {"rows", rows}};
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "section,name,value,relation,bound,pass,boundary\n";
  for (const auto& [k, v] : config) out << "config," << k << ',' << v << ",,,,\n";
  for (const auto& [k, v] : observed) out << "observed," << k << ',' << v << ",,,,\n";
  for (const auto& [k, v] : bound) out << "bound," << k << ',' << v << ",,,,\n";
  for (const auto& a : assertions)
    out << "assertion," << a.name << ',' << a.observed << ',' << a.relation << ',' << a.bound << ','
        << (a.pass ? 1 : 0) << ',' << (a.boundary ? 1 : 0) << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < columns.size() && c < rows[r].size(); ++c)
      out << "trial," << r << ':' << columns[c] << ',' << rows[r][c] << ",,,,\n";
  return out.str();
}

namespace {

double log_binomial_pmf(std::size_t n, std::size_t k, double p) {
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) + kd * std::log(p) +
         (nd - kd) * std::log1p(-p);
}

double binomial_cdf(std::size_t n, double p, std::size_t k) { return 1.0 - binomial_tail_above(n, p, static_cast<double>(k)); }

GhpOptions ghp_options(const ExperimentOptions& opt) {
  GhpOptions g;
  g.pi = opt.pi;
  g.tolerance = opt.tolerance;
  return g;
}

void require_exact(std::size_t n, const ExperimentOptions& opt) {
  if (n > opt.pi.exact_limit)
    throw Error("N=" + std::to_string(n) + " is above the exact d_pi limit " + std::to_string(opt.pi.exact_limit));
}

std::vector<std::vector<double>> unit_square_points(std::size_t n, CounterRng& rng) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(2));
  for (auto& p : pts)
    for (auto& c : p) c = rng.uniform();
  return pts;
}

}  // namespace

double binomial_tail_above(std::size_t n, double p, double x) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("binomial: p outside [0, 1]");
  const double start = std::floor(x) + 1.0;
  if (start > static_cast<double>(n)) return 0.0;
  const std::size_t k0 = start <= 0.0 ? 0 : static_cast<std::size_t>(start);
  if (k0 == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double s = 0.0;
  for (std::size_t k = k0; k <= n; ++k) s += std::exp(log_binomial_pmf(n, k, p));
  return std::min(1.0, s);
}

double binomial_upper_limit(std::size_t k, std::size_t n, double confidence) {
  if (n == 0 || k >= n) return 1.0;
  const double alpha = 1.0 - confidence;
  double lo = static_cast<double>(k) / static_cast<double>(n), hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(n, mid, k) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double coupled_sampling_bound(const Coupling& witness, std::size_t n) {
  if (n == 0) throw Error("coupled_sampling_bound: N must be positive");
  std::vector<double> deltas{0.0};
  for (std::size_t k = 0; k < witness.mass.data().size(); ++k)
    if (witness.mass.data()[k] > 0.0) deltas.push_back(witness.ground.data()[k]);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  const double nd = static_cast<double>(n);
  double best = 1.0;
  for (double delta : deltas) {
    double far = 0.0;
    for (std::size_t k = 0; k < witness.mass.data().size(); ++k)
      if (witness.ground.data()[k] > delta) far += witness.mass.data()[k];
    far = std::clamp(far, 0.0, 1.0);
    // P(B > N r) is constant for r in [m/N, (m+1)/N).
    for (std::size_t m = 0; m <= n; ++m) {
      const double tail = binomial_tail_above(n, far, static_cast<double>(m));
      const double r = std::max({2.0 * delta, static_cast<double>(m) / nd, tail});
      if (m < n && r >= static_cast<double>(m + 1) / nd) continue;
      best = std::min(best, r);
    }
  }
  return best;
}

Grid ensemble_ground(const MatrixEnsemble& x, const MatrixEnsemble& y, EnsembleGround ground, const PiOptions& pi) {
  Grid g(x.size(), y.size());
  PiOptions po = pi;
  po.mode = SearchMode::Exact;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      const Grid& a = x.atoms()[i].matrix.grid();
      const Grid& b = y.atoms()[j].matrix.grid();
      g(i, j) = ground == EnsembleGround::Dm ? dm_distance(a, b, pi.tolerance).value : dpi_distance(a, b, po).value;
    }
  return g;
}

ProkhorovResult ensemble_prokhorov(const MatrixEnsemble& x, const MatrixEnsemble& y, EnsembleGround ground,
                                   const PiOptions& pi) {
  return prokhorov_distance(x.probabilities(), y.probabilities(), ensemble_ground(x, y, ground, pi),
                            FlowArithmetic::Rational, pi.tolerance);
}

FiniteMMS two_point_space(const std::string& l0, const std::string& l1, double d, double eps) {
  return FiniteMMS({l0, l1}, DistanceMatrix::from_grid(Grid::from_rows({{0.0, d}, {d, 0.0}})), {1.0 - eps, eps});
}

FiniteMMS unit_square_corners() {
  return FiniteMMS({"00", "10", "01", "11"},
                   DistanceMatrix::from_grid(euclidean_distances({{0, 0}, {1, 0}, {0, 1}, {1, 1}})),
                   {0.25, 0.25, 0.25, 0.25});
}

ExperimentReport check_finspc_sandwich(std::size_t n, std::size_t trials, const ExperimentOptions& opt) {
  require_exact(n, opt);
  if (n == 0) throw Error("finspc: n must be positive");
  ExperimentReport rep;
  rep.name = "finspc";
  rep.config = {{"n", double(n)}, {"trials", double(trials)}, {"seed", double(opt.seed)}, {"tolerance", opt.tolerance}};
  rep.columns = {"trial", "dpi", "upper", "lower"};

  double worst_upper = -1.0, worst_lower = -1.0, sum_dpi = 0.0, sum_upper = 0.0;
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(opt.seed, t);
    const auto pa = unit_square_points(n, rng);
    const auto pb = unit_square_points(n, rng);
    const auto va = validate_distance_matrix(euclidean_distances(pa), opt.tolerance);
    const auto vb = validate_distance_matrix(euclidean_distances(pb), opt.tolerance);
    if (!va.matrix || !vb.matrix) throw Error("finspc: generated matrix failed validation");
    const auto res = ghp_bounds_uniform(*va.matrix, *vb.matrix, ghp_options(opt));
    const double dpi = res.pi.value, upper = res.bound.upper;
    worst_upper = std::max(worst_upper, upper - dpi);
    worst_lower = std::max(worst_lower, dpi - 2.0 * upper);
    if (upper > dpi + opt.tolerance || dpi > 2.0 * upper + opt.tolerance) ++violations;
    sum_dpi += dpi;
    sum_upper += upper;
    rep.rows.push_back({double(t), dpi, upper, res.bound.lower});
  }
  const double tn = trials ? double(trials) : 1.0;
  rep.observed = {{"max_upper_minus_dpi", worst_upper},
                  {"max_dpi_minus_2upper", worst_lower},
                  {"violations", double(violations)},
                  {"mean_dpi", sum_dpi / tn},
                  {"mean_upper", sum_upper / tn}};
  rep.bound = {{"slack", 0.0}};
  rep.check("upper_le_dpi", worst_upper, "<=", 0.0, opt.tolerance);
  rep.check("dpi_le_2upper", worst_lower, "<=", 0.0, opt.tolerance);
  return rep;
}

ExperimentReport check_hoelder_small_n(double epsilon, std::size_t n, std::size_t mc_trials,
                                       const ExperimentOptions& opt) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw Error("hoelder: epsilon must lie in (0, 1/4)");
  require_exact(n, opt);
  const FiniteMMS x = two_point_space("a", "b", 0.5, epsilon);
  const FiniteMMS y = two_point_space("a", "d", 1.0, epsilon);
  const auto ghp = ghp_upper_bound(x, y, GhpStrategy::Best, ghp_options(opt));
  const auto ex = enumerate_matrix_ensemble(x, n, opt.budget);
  const auto ey = enumerate_matrix_ensemble(y, n, opt.budget);
  const double dp = ensemble_prokhorov(ex, ey, EnsembleGround::Dpi, opt.pi).value;
  const double chain = coupled_sampling_bound(ghp.coupling, n);
  const double root = std::sqrt(epsilon);
  const double tail = binomial_tail_above(n, epsilon, double(n) * root);

  ExperimentReport rep;
  rep.name = "hoelder";
  rep.config = {{"epsilon", epsilon}, {"n", double(n)}, {"trials", double(mc_trials)}, {"seed", double(opt.seed)},
                {"budget", double(opt.budget)}, {"tolerance", opt.tolerance}};
  rep.observed = {{"dP", dp},
                  {"ghp_upper", ghp.upper},
                  {"atoms_x", double(ex.size())},
                  {"atoms_y", double(ey.size())},
                  {"finite_chain_bound", chain},
                  {"trend_slack", std::max(0.0, chain - 2.0 * ghp.upper)},
                  {"binomial_tail", tail}};
  rep.bound = {{"sqrt_upper", std::sqrt(ghp.upper)}, {"sqrt_epsilon", root}, {"two_upper", 2.0 * ghp.upper}};
  rep.notes.push_back("ghp upper bound from strategy '" + ghp.method + "'");
  rep.check("dP_le_sqrt_upper", dp, "<=", std::sqrt(ghp.upper), opt.tolerance);
  rep.check("dP_le_sqrt_epsilon", dp, "<=", root, opt.tolerance);
  rep.check("dP_le_2upper_plus_slack", dp, "<=", chain, opt.tolerance);
  rep.check("binomial_tail_lt_sqrt_epsilon", tail, "<", root);

  if (mc_trials > 0) {
    const auto cdf = cumulative(ghp.coupling.mass.data());
    const std::size_t cols = ghp.coupling.cols();
    double worst = -1.0;
    rep.columns = {"trial", "B", "dM", "dpi", "case_bound"};
    for (std::size_t t = 0; t < mc_trials; ++t) {
      CounterRng rng(opt.seed, t);
      std::vector<std::size_t> xi(n), yi(n);
      std::size_t b = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t cell = draw_categorical(cdf, rng);
        xi[k] = cell / cols;
        yi[k] = cell % cols;
        if (ghp.gluing.cross(xi[k], yi[k]) >= epsilon) ++b;
      }
      Grid mx(n, n), my(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          mx(i, j) = x.distance(xi[i], xi[j]);
          my(i, j) = y.distance(yi[i], yi[j]);
        }
      const double dm = dm_distance(mx, my, opt.tolerance).value;
      PiOptions po = opt.pi;
      po.mode = SearchMode::Exact;
      const double dpi = dpi_distance(mx, my, po).value;
      const double cb = std::max(double(b) / double(n), 2.0 * epsilon);
      worst = std::max({worst, dm - cb, dpi - cb});
      rep.rows.push_back({double(t), double(b), dm, dpi, cb});
    }
    rep.observed["mc_worst_excess"] = worst;
    rep.check("mc_dpi_le_max_B_over_N_2eps", worst, "<=", 0.0, opt.tolerance);
  }
  return rep;
}

ExperimentReport check_sharp_exponent(double c, double alpha, double epsilon, std::optional<std::size_t> n,
                                      const ExperimentOptions& opt) {
  if (!(c > 0.0)) throw Error("sharp: C must be positive");
  if (!(alpha > 0.5 && alpha < 1.0)) throw Error("sharp: alpha must lie in (1/2, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("sharp: epsilon must lie in (0, 1)");
  const double target = c * std::pow(epsilon, alpha);
  auto in_window = [&](std::size_t k) { return double(k) * target > 0.5 && double(k) * target < 1.0; };
  std::size_t smallest = static_cast<std::size_t>(std::floor(0.5 / target));
  while (!(double(smallest) * target > 0.5)) ++smallest;
  const std::size_t big_n = n.value_or(smallest);
  if (!in_window(big_n))
    throw Error("sharp: no integer N with 1/2 < N C eps^alpha < 1 (tried N=" + std::to_string(big_n) + ")");

  ExperimentReport rep;
  rep.name = "sharp";
  rep.config = {{"c", c}, {"alpha", alpha}, {"epsilon", epsilon}, {"n", double(big_n)},
                {"budget", double(opt.budget)}, {"tolerance", opt.tolerance}};
  const FiniteMMS x = two_point_space("a", "b", 2.0 * c, epsilon);
  const FiniteMMS y = two_point_space("c", "d", 4.0 * c, epsilon);
  const double p_nonzero = 1.0 - std::pow(1.0 - epsilon, double(big_n)) - std::pow(epsilon, double(big_n));

  const auto glued = glue_by_relation(x, y, {{0, 0}}, 0.0, opt.tolerance);
  const double upper =
      prokhorov_distance(x.mass(), y.mass(), glued.cross, FlowArithmetic::Floating, opt.tolerance).value;

  rep.observed = {{"n_c_eps_alpha", double(big_n) * target},
                  {"smallest_n_in_window", double(smallest)},
                  {"p_matrix_nonzero", p_nonzero},
                  {"ghp_upper_identify", upper}};
  rep.bound = {{"c_eps_alpha", target}, {"epsilon", epsilon}};
  rep.check("p_nonzero_gt_c_eps_alpha", p_nonzero, ">", target);
  rep.check("ghp_upper_le_epsilon", upper, "<=", epsilon, opt.tolerance);
  if (rep.assertions.front().pass) rep.observed["certified_dP_lower"] = target;

  const double tuples = std::pow(2.0, double(big_n));
  if (tuples <= double(opt.budget) && big_n <= opt.pi.exact_limit) {
    const auto ex = enumerate_matrix_ensemble(x, big_n, opt.budget);
    const auto ey = enumerate_matrix_ensemble(y, big_n, opt.budget);
    const double dp = ensemble_prokhorov(ex, ey, EnsembleGround::Dpi, opt.pi).value;
    rep.observed["dP_exact"] = dp;
    rep.check("dP_exact_gt_c_eps_alpha", dp, ">", target, opt.tolerance, true);
  } else {
    rep.notes.push_back("exact ensemble d_P skipped: 2^N above budget or N above the exact d_pi limit");
  }
  return rep;
}

namespace {

double sampling_bound(const FiniteMMS& space, std::size_t n, CounterRng& rng, double tol) {
  const auto idx = sample_indices(space.mass(), n, rng);
  std::vector<double> q(space.size(), 0.0);
  for (auto i : idx) q[i] += 1.0;
  for (auto& v : q) v /= double(n);
  return prokhorov_distance(q, space.mass(), space.dist().grid(), FlowArithmetic::Floating, tol).value;
}

}  // namespace

ExperimentReport check_sampling_convergence(const FiniteMMS& space, double epsilon, std::size_t n,
                                            std::size_t trials, const ExperimentOptions& opt) {
  if (n == 0 || trials == 0) throw Error("sampconv: N and trials must be positive");
  if (!(epsilon > 0.0)) throw Error("sampconv: epsilon must be positive");
  ExperimentReport rep;
  rep.name = "sampconv";
  rep.config = {{"epsilon", epsilon}, {"n", double(n)}, {"trials", double(trials)}, {"seed", double(opt.seed)},
                {"points", double(space.size())}, {"tolerance", opt.tolerance}};
  rep.columns = {"trial", "bound"};
  std::size_t exceed = 0;
  double sum = 0.0, worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(opt.seed, t);
    const double b = sampling_bound(space, n, rng, opt.tolerance);
    if (b > 3.0 * epsilon + opt.tolerance) ++exceed;
    sum += b;
    worst = std::max(worst, b);
    rep.rows.push_back({double(t), b});
  }
  const double freq = double(exceed) / double(trials);
  const double upper95 = binomial_upper_limit(exceed, trials, 0.95);
  rep.observed = {{"frequency", freq},
                  {"exceedances", double(exceed)},
                  {"mean_bound", sum / double(trials)},
                  {"max_bound", worst},
                  {"frequency_upper95", upper95},
                  {"slack95", upper95 - freq}};
  rep.bound = {{"epsilon", epsilon}, {"threshold", 3.0 * epsilon}};
  rep.check("frequency_lt_epsilon", freq, "<", epsilon);
  return rep;
}

ExperimentReport sampling_sweep(const FiniteMMS& space, double epsilon, const std::vector<std::size_t>& ns,
                                std::size_t trials, const ExperimentOptions& opt) {
  if (trials == 0) throw Error("sweep: trials must be positive");
  ExperimentReport rep;
  rep.name = "sampconv_sweep";
  rep.config = {{"epsilon", epsilon}, {"trials", double(trials)}, {"seed", double(opt.seed)}};
  rep.columns = {"n", "mean_bound", "frequency"};
  double prev_mean = 2.0, prev_freq = 2.0, worst_mean = -1.0, worst_freq = -1.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    double sum = 0.0;
    std::size_t exceed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      CounterRng rng(CounterRng::mix(opt.seed + k), t);
      const double b = sampling_bound(space, ns[k], rng, opt.tolerance);
      sum += b;
      if (b > 3.0 * epsilon + opt.tolerance) ++exceed;
    }
    const double mean = sum / double(trials), freq = double(exceed) / double(trials);
    worst_mean = std::max(worst_mean, mean - prev_mean);
    worst_freq = std::max(worst_freq, freq - prev_freq);
    prev_mean = mean;
    prev_freq = freq;
    rep.rows.push_back({double(ns[k]), mean, freq});
    rep.observed["mean_bound_n" + std::to_string(ns[k])] = mean;
    rep.observed["frequency_n" + std::to_string(ns[k])] = freq;
  }
  rep.check("mean_bound_nonincreasing", worst_mean, "<=", 0.0, opt.tolerance);
  rep.check("frequency_nonincreasing", worst_freq, "<=", 0.0, opt.tolerance);
  return rep;
}

ExperimentReport check_group_invariance(const FiniteMMS& x, const FiniteMMS& y, std::size_t n,
                                        const ExperimentOptions& opt) {
  require_exact(n, opt);
  constexpr double kAgreement = 1e-9;
  const auto ex = enumerate_matrix_ensemble(x, n, opt.budget);
  const auto ey = enumerate_matrix_ensemble(y, n, opt.budget);
  const double with_dm = ensemble_prokhorov(ex, ey, EnsembleGround::Dm, opt.pi).value;
  const double with_dpi = ensemble_prokhorov(ex, ey, EnsembleGround::Dpi, opt.pi).value;

  ExperimentReport rep;
  rep.name = "gpaction";
  rep.config = {{"n", double(n)}, {"budget", double(opt.budget)}, {"tolerance", opt.tolerance}};
  rep.observed = {{"dP_ground_dM", with_dm}, {"dP_ground_dpi", with_dpi}, {"difference", std::abs(with_dm - with_dpi)}};
  rep.bound = {{"agreement", kAgreement}};
  rep.check("dM_ground_equals_dpi_ground", with_dm, "==", with_dpi, kAgreement);

  // Negative control: drop an atom whose matrix is not permutation invariant.
  auto symmetric_under_all = [](const Grid& g) {
    const std::size_t k = g.rows();
    double first = k > 1 ? g(0, 1) : 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j && g(i, j) != first) return false;
    return true;
  };
  std::vector<EnsembleAtom> kept;
  bool dropped = false;
  double removed = 0.0;
  for (const auto& a : ex.atoms()) {
    if (!dropped && !symmetric_under_all(a.matrix.grid())) {
      dropped = true;
      removed = a.probability;
      continue;
    }
    kept.push_back(a);
  }
  if (dropped && removed < 1.0) {
    for (auto& a : kept) a.probability /= (1.0 - removed);
    const MatrixEnsemble control(std::move(kept));
    const double c_dm = ensemble_prokhorov(control, ey, EnsembleGround::Dm, opt.pi).value;
    const double c_dpi = ensemble_prokhorov(control, ey, EnsembleGround::Dpi, opt.pi).value;
    rep.observed["control_dP_ground_dM"] = c_dm;
    rep.observed["control_dP_ground_dpi"] = c_dpi;
    rep.observed["control_difference"] = std::abs(c_dm - c_dpi);
    rep.notes.push_back("negative control (one asymmetric atom removed) is reported, not asserted");
  } else {
    rep.notes.push_back("negative control skipped: every atom is permutation invariant");
  }
  return rep;
}

}  // namespace mmspace
