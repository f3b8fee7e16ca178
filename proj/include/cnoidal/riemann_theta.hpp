#pragma once

/// Multi-dimensional Riemann theta by truncated lattice sums, the degenerate
/// period matrix of the soliton limit, and checks built on them.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cnoidal/elliptic.hpp"
#include "cnoidal/soliton_tau.hpp"

namespace cnoidal {

void validate_period_matrix(const Eigen::MatrixXcd& omega);

struct ThetaSum {
  Complex value;
  double tail_bound;  // bound on the omitted terms |nu|_inf > radius
};

/// Throws TruncationInsufficient when the tail bound exceeds tol (tol <= 0 disables).
ThetaSum theta_lattice_sum(const Eigen::VectorXcd& X, const Eigen::MatrixXcd& omega, int radius,
                           double tol = 0.0);

double theta_tail_bound(const Eigen::VectorXcd& X, const Eigen::MatrixXcd& omega, int radius);

/// Lattice sum with the quadratic exponents cached, for many evaluations at
/// one period matrix.
class LatticeTheta {
 public:
  LatticeTheta(const Eigen::MatrixXcd& omega, int radius);
  /// ln Theta(X), principal branch of the argument.
  Complex log_eval(const Eigen::VectorXcd& X) const;
  Complex eval(const Eigen::VectorXcd& X) const { return std::exp(log_eval(X)); }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<int> nu_;          // flattened lattice points
  std::vector<Complex> quad_;    // i pi nu^T Omega nu
};

/// (N+1)x(N+1) period matrix with diagonal i ln(1/epsilon) in the soliton block.
Eigen::MatrixXcd degenerate_period_matrix(const SolitonSpectrum& s, const CurveParams& c,
                                          double epsilon);

/// |Theta(X - Omega u/2) - det(1+G) theta3(beta - A)|, u = (1,...,1,0), X = (psi, beta).
double degeneration_residual(const std::vector<Complex>& psi, Complex beta,
                             const SolitonSpectrum& s, const CurveParams& c, double epsilon,
                             int radius);

/// |lhs - rhs| of the genus-one Fay identity.
double fay_residual(const std::vector<Complex>& x, const std::vector<Complex>& xhat, Complex E,
                    const CurveParams& c);

struct FayConfiguration {
  std::vector<Complex> x, xhat;
  Complex E;
};

/// Uniform points in the fundamental rectangle, redrawn until |theta3(E)| >= 0.5
/// and every |theta1(x_j - xhat_k)| >= 0.05.
FayConfiguration sample_fay_configuration(int n, const CurveParams& c, std::mt19937_64& rng);

struct PhaseTrialSetup {
  std::vector<double> xs;  // sample points
  double t = 0.0;
  int radius = 6;
};

/// sup over xs of |2 d^2 ln Theta(X(x,t) - Omega(1-phi,0)/2) - 2 d^2 ln theta3(x/(4 i varpi3))|.
double random_phase_trial(const SolitonSpectrum& s, const CurveParams& c, double epsilon,
                          const std::vector<double>& phi, const PhaseTrialSetup& setup);

struct MonteCarloResult {
  std::vector<double> epsilons;
  std::vector<double> mean_deviation;
  std::vector<double> fraction_below;  // share of draws with deviation < threshold
};

/// Draws phi uniformly from [-1,1]^N, shared across epsilons; draw k uses a
/// stream seeded by (seed, k).
MonteCarloResult monte_carlo_phases(const SolitonSpectrum& s, const CurveParams& c,
                                    const std::vector<double>& epsilons, int draws,
                                    std::uint64_t seed, const PhaseTrialSetup& setup,
                                    double threshold);

}  // namespace cnoidal
