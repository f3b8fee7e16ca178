#include "cnoidal/riemann_theta.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace cnoidal {

void validate_period_matrix(const Eigen::MatrixXcd& omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "period matrix must be square and non-empty");
  double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::NonSymmetricPeriodMatrix, "period matrix is not symmetric");
  Eigen::MatrixXd Y = omega.imag();
  Y = 0.5 * (Y + Y.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorCode::NotPositiveDefinite, "Im of period matrix is not positive definite");
}

namespace {

template <class F>
void for_each_lattice_point(int dim, int radius, F&& f) {
  std::vector<int> nu(dim, -radius);
  while (true) {
    f(nu);
    int k = 0;
    while (k < dim && nu[k] == radius) nu[k++] = -radius;
    if (k == dim) break;
    ++nu[k];
  }
}

}  // namespace

double theta_tail_bound(const Eigen::VectorXcd& X, const Eigen::MatrixXcd& omega, int radius) {
  validate_period_matrix(omega);
  if (X.size() != omega.rows())
    throw Error(ErrorCode::DimensionMismatch, "argument length differs from period matrix size");
  const int d = static_cast<int>(X.size());
  Eigen::MatrixXd Y = omega.imag();
  Y = 0.5 * (Y + Y.transpose());
  Eigen::VectorXd y = X.imag();
  Eigen::VectorXd c = Y.ldlt().solve(y);
  double lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Y, Eigen::EigenvaluesOnly)
                   .eigenvalues()
                   .minCoeff();
  double peak = kPi * c.dot(Y * c);
  double cinf = c.cwiseAbs().maxCoeff();
  double total = 0.0;
  for (int k = radius + 1; k < radius + 100000; ++k) {
    double count = std::pow(2.0 * k + 1, d) - std::pow(2.0 * k - 1, d);
    double gap = std::max(0.0, k - cinf);
    double term = count * std::exp(peak - kPi * lam * gap * gap);
    total += term;
    if (gap > 0 && term < 1e-18 * total) break;
    if (!std::isfinite(total)) break;
  }
  return total;
}

ThetaSum theta_lattice_sum(const Eigen::VectorXcd& X, const Eigen::MatrixXcd& omega, int radius,
                           double tol) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "negative lattice radius");
  validate_period_matrix(omega);
  if (X.size() != omega.rows())
    throw Error(ErrorCode::DimensionMismatch, "argument length differs from period matrix size");
  LatticeTheta lt(omega, radius);
  ThetaSum out{lt.eval(X), theta_tail_bound(X, omega, radius)};
  if (tol > 0.0 && !(out.tail_bound <= tol))
    throw Error(ErrorCode::TruncationInsufficient,
                "lattice tail bound " + std::to_string(out.tail_bound) + " above tolerance");
  return out;
}

LatticeTheta::LatticeTheta(const Eigen::MatrixXcd& omega, int radius)
    : dim_(static_cast<int>(omega.rows())) {
  validate_period_matrix(omega);
  for_each_lattice_point(dim_, radius, [&](const std::vector<int>& nu) {
    Complex q = 0.0;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) q += double(nu[a] * nu[b]) * omega(a, b);
    nu_.insert(nu_.end(), nu.begin(), nu.end());
    quad_.push_back(kI * kPi * q);
  });
}

Complex LatticeTheta::log_eval(const Eigen::VectorXcd& X) const {
  if (X.size() != dim_)
    throw Error(ErrorCode::DimensionMismatch, "argument length differs from period matrix size");
  const std::size_t n = quad_.size();
  std::vector<Complex> ex(n);
  double top = -std::numeric_limits<double>::infinity();
  const Complex w = 2.0 * kPi * kI;
  for (std::size_t k = 0; k < n; ++k) {
    Complex lin = 0.0;
    const int* nu = &nu_[k * dim_];
    for (int a = 0; a < dim_; ++a) lin += double(nu[a]) * X[a];
    ex[k] = quad_[k] + w * lin;
    top = std::max(top, ex[k].real());
  }
  Complex acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::exp(ex[k] - top);
  return top + std::log(acc);
}

Eigen::MatrixXcd degenerate_period_matrix(const SolitonSpectrum& s, const CurveParams& c,
                                          double epsilon) {
  const int n = static_cast<int>(s.size());
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
  for (int l = 0; l < n; ++l)
    for (int j = l + 1; j < n; ++j)
      if (std::abs(s.points[l].beta - s.points[j].beta) < 1e-10)
        throw Error(ErrorCode::CoincidentSolitons, "spectral points closer than 1e-10");
  Eigen::MatrixXcd om = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int l = 0; l < n; ++l) {
    om(l, l) = Complex(0.0, std::log(1.0 / epsilon));
    for (int j = l + 1; j < n; ++j) {
      const auto& pj = s.points[j];
      const auto& pl = s.points[l];
      double L = std::log(std::abs(theta1(pj.beta - pl.beta, c) / theta1(pj.beta - pl.star(c), c)));
      om(l, j) = om(j, l) = L / (kI * kPi);
    }
    om(l, n) = om(n, l) = s.points[l].delta(c);
  }
  om(n, n) = c.tau;
  return om;
}

double degeneration_residual(const std::vector<Complex>& psi, Complex beta,
                             const SolitonSpectrum& s, const CurveParams& c, double epsilon,
                             int radius) {
  const int n = static_cast<int>(s.size());
  if (static_cast<int>(psi.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "phase vector length differs from spectrum size");
  Eigen::MatrixXcd om = degenerate_period_matrix(s, c, epsilon);
  Eigen::VectorXcd u = Eigen::VectorXcd::Ones(n + 1);
  u[n] = 0.0;
  Eigen::VectorXcd X(n + 1);
  for (int j = 0; j < n; ++j) X[j] = psi[j];
  X[n] = beta;
  X -= 0.5 * om * u;
  Complex theta = LatticeTheta(om, radius).eval(X);
  Complex limit = det_one_plus_g(c, s, psi, beta) * theta3(beta - background_shift(s, c), c);
  return std::abs(theta - limit);
}

double fay_residual(const std::vector<Complex>& x, const std::vector<Complex>& xhat, Complex E,
                    const CurveParams& c) {
  const int n = static_cast<int>(x.size());
  if (n == 0 || xhat.size() != x.size())
    throw Error(ErrorCode::DimensionMismatch, "Fay identity needs two point lists of equal length");
  Complex tE = theta3(E, c);
  if (std::abs(tE) < 1e-12) throw Error(ErrorCode::SingularConfiguration, "theta3(E) vanishes");
  Eigen::MatrixXcd M(n, n);
  Complex cross = 1.0;
  Complex shift = E;
  for (int l = 0; l < n; ++l) {
    shift += x[l] - xhat[l];
    for (int m = 0; m < n; ++m) {
      Complex t1 = theta1(x[l] - xhat[m], c);
      if (std::abs(t1) < 1e-12) throw Error(ErrorCode::SingularConfiguration, "coincident points");
      M(l, m) = theta3(x[l] - xhat[m] + E, c) / (t1 * tE);
      cross *= t1;
    }
  }
  Complex pairs = 1.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) pairs *= theta1(x[j] - x[k], c) * theta1(xhat[k] - xhat[j], c);
  Complex rhs = theta3(shift, c) / tE * pairs / cross;
  return std::abs(M.determinant() - rhs);
}

FayConfiguration sample_fay_configuration(int n, const CurveParams& c, std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Fay configuration needs n >= 1");
  std::uniform_real_distribution<double> re(0.0, 1.0), im(0.0, c.tau.imag());
  auto draw = [&] { return Complex(re(rng), im(rng)); };
  for (int attempt = 0; attempt < 100000; ++attempt) {
    FayConfiguration f;
    for (int j = 0; j < n; ++j) f.x.push_back(draw());
    for (int j = 0; j < n; ++j) f.xhat.push_back(draw());
    f.E = draw();
    bool ok = std::abs(theta3(f.E, c)) >= 0.5;
    for (int j = 0; ok && j < n; ++j)
      for (int k = 0; ok && k < n; ++k) ok = std::abs(theta1(f.x[j] - f.xhat[k], c)) >= 0.05;
    if (ok) return f;
  }
  throw Error(ErrorCode::NonConvergence, "no admissible Fay configuration found");
}

namespace {

Eigen::VectorXcd trial_argument(const SolitonSpectrum& s, const CurveParams& c,
                                const Eigen::VectorXcd& shift, double x, double t) {
  const int n = static_cast<int>(s.size());
  Eigen::VectorXcd X(n + 1);
  for (int j = 0; j < n; ++j) X[j] = ((x - s.x_shift[j]) * s.P[j] + t * s.E[j]) / (2.0 * kPi);
  X[n] = x / (4.0 * kI * c.varpi3);
  return X - shift;
}

}  // namespace

double random_phase_trial(const SolitonSpectrum& s, const CurveParams& c, double epsilon,
                          const std::vector<double>& phi, const PhaseTrialSetup& setup) {
  const int n = static_cast<int>(s.size());
  if (static_cast<int>(phi.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "phi length differs from spectrum size");
  Eigen::MatrixXcd om = degenerate_period_matrix(s, c, epsilon);
  LatticeTheta lt(om, setup.radius);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n + 1);
  for (int j = 0; j < n; ++j) u[j] = 1.0 - phi[j];
  Eigen::VectorXcd shift = 0.5 * om * u;
  const double h = 1e-3 * c.period();
  const double kappa = (1.0 / (4.0 * kI * c.varpi3)).real();
  double worst = 0.0;
  for (double x : setup.xs) {
    double f[5];
    for (int k = -2; k <= 2; ++k)
      f[k + 2] = lt.log_eval(trial_argument(s, c, shift, x + k * h, setup.t)).real();
    double d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    double bg = kappa * kappa * log_theta_derivs(ThetaKind::three, x * kappa, c)[1].real();
    worst = std::max(worst, std::abs(2.0 * d2 - 2.0 * bg));
  }
  return worst;
}

MonteCarloResult monte_carlo_phases(const SolitonSpectrum& s, const CurveParams& c,
                                    const std::vector<double>& epsilons, int draws,
                                    std::uint64_t seed, const PhaseTrialSetup& setup,
                                    double threshold) {
  const std::size_t n = s.size();
  std::vector<std::vector<double>> phis(draws, std::vector<double>(n));
  for (int k = 0; k < draws; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& p : phis[k]) p = dist(rng);
  }
  MonteCarloResult out;
  out.epsilons = epsilons;
  for (double eps : epsilons) {
    double sum = 0.0;
    int below = 0;
    for (int k = 0; k < draws; ++k) {
      double dev = random_phase_trial(s, c, eps, phis[k], setup);
      sum += dev;
      if (dev < threshold) ++below;
    }
    out.mean_deviation.push_back(sum / draws);
    out.fraction_below.push_back(double(below) / draws);
  }
  return out;
}

}  // namespace cnoidal
