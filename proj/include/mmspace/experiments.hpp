#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmspace/core.hpp"
#include "mmspace/coupling.hpp"
#include "mmspace/ghp.hpp"

namespace mmspace {

/// One comparison `observed relation bound`. For "<=" and ">=" the tolerance
/// widens the bound; for "<" and ">" it only matters when boundary cases are
/// allowed, in which case a value within tolerance of the bound passes with
/// the boundary flag set.
struct Assertion {
  std::string name;
  double observed = 0.0;
  std::string relation;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool boundary = false;
};

Assertion make_assertion(std::string name, double observed, std::string relation, double bound,
                         double tolerance = 0.0, bool allow_boundary = false);

struct ExperimentReport {
  std::string name;
  std::map<std::string, double> config;
  std::map<std::string, double> observed;
  std::map<std::string, double> bound;
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;
  /// Optional per-trial table.
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void check(std::string name, double observed, std::string relation, double bound, double tolerance = 0.0,
             bool allow_boundary = false);
  bool all_pass() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct ExperimentOptions {
  double tolerance = kDefaultTolerance;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  PiOptions pi;
};

// ---- statistics helpers ----

/// P(B > x) for B ~ Binomial(n, p), by exact summation of the pmf.
double binomial_tail_above(std::size_t n, double p, double x);

/// One-sided exact (Clopper-Pearson) upper confidence limit for a binomial
/// proportion after k successes in n trials.
double binomial_upper_limit(std::size_t k, std::size_t n, double confidence = 0.95);

/// Upper bound on d_P(theta_N^X, theta_N^Y; d_pi) from N i.i.d. pairs drawn
/// from a coupling on a common space: for every threshold delta the matrices
/// agree up to 2 delta outside the B pairs farther than delta apart, so the
/// least r >= 2 delta with P(B > N r) <= r bounds Delta of the induced
/// coupling. Minimized over the distinct distances of the coupling.
double coupled_sampling_bound(const Coupling& witness, std::size_t n);

/// Ground grid between two matrix ensembles.
enum class EnsembleGround { Dm, Dpi };
Grid ensemble_ground(const MatrixEnsemble& x, const MatrixEnsemble& y, EnsembleGround ground,
                     const PiOptions& pi = {});

/// Exact d_P between two ensembles over the given ground grid.
ProkhorovResult ensemble_prokhorov(const MatrixEnsemble& x, const MatrixEnsemble& y, EnsembleGround ground,
                                   const PiOptions& pi = {});

/// Two-point space {l0, l1} at distance d with masses (1 - eps, eps).
FiniteMMS two_point_space(const std::string& l0, const std::string& l1, double d, double eps);

// ---- checks ----

/// Random A, B from point clouds in the unit square: upper <= d_pi and
/// d_pi <= 2 upper for every trial.
ExperimentReport check_finspc_sandwich(std::size_t n, std::size_t trials, const ExperimentOptions& opt = {});

/// Exact ensembles of the two-point spaces with distances 0.5 and 1.0:
/// d_P <= sqrt(ghp upper), the finite-N coupled-sampling chain, and the
/// binomial-tail step. With mc_trials > 0 also checks, on coupled samples,
/// d_M(M^X, M^Y) <= max(B/N, 2 eps).
ExperimentReport check_hoelder_small_n(double epsilon, std::size_t n, std::size_t mc_trials = 0,
                                       const ExperimentOptions& opt = {});

/// Two-point spaces at distances 2C and 4C. N defaults to the least integer
/// with 1/2 < N C eps^alpha < 1.
ExperimentReport check_sharp_exponent(double c, double alpha, double epsilon,
                                      std::optional<std::size_t> n = std::nullopt,
                                      const ExperimentOptions& opt = {});

/// Frequency over trials of d_P(mu_N, mu; X) > 3 eps must stay below eps.
ExperimentReport check_sampling_convergence(const FiniteMMS& space, double epsilon, std::size_t n,
                                            std::size_t trials, const ExperimentOptions& opt = {});

/// Mean sampling bound for each N in turn; asserts it does not increase.
ExperimentReport sampling_sweep(const FiniteMMS& space, double epsilon, const std::vector<std::size_t>& ns,
                                std::size_t trials, const ExperimentOptions& opt = {});

/// d_P between exact ensembles under ground d_M and under ground d_pi agree.
ExperimentReport check_group_invariance(const FiniteMMS& x, const FiniteMMS& y, std::size_t n,
                                        const ExperimentOptions& opt = {});

/// Corners of the unit square with uniform mass.
FiniteMMS unit_square_corners();

}  // namespace mmspace
