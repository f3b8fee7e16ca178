#pragma once

/// N-soliton tau function on the cnoidal background: Fredholm-type determinant
/// det(1 + G) times the genus-one theta function of the background wave.

#include <vector>

#include <Eigen/Dense>

#include "cnoidal/elliptic.hpp"

namespace cnoidal {

struct SolitonSpectrum {
  std::vector<JacobianPoint> points;
  std::vector<double> b;
  std::vector<Complex> P;        // quasi-momenta, on the positive imaginary axis
  std::vector<Complex> E;        // quasi-energies
  std::vector<double> norming;   // C_j > 0
  std::vector<double> x_shift;   // x_j

  std::size_t size() const { return points.size(); }
  double abs_p(std::size_t j) const { return P[j].imag(); }
  double velocity(std::size_t j) const { return (-E[j] / P[j]).real(); }
};

Complex quasi_momentum(const JacobianPoint& p, const CurveParams& c);
Complex quasi_energy(const JacobianPoint& p, const CurveParams& c);

SolitonSpectrum build_spectrum(const CurveParams& c, const std::vector<double>& b,
                               const std::vector<double>& x_shift = {});
SolitonSpectrum build_spectrum(const CurveParams& c, const std::vector<JacobianPoint>& pts,
                               const std::vector<double>& x_shift = {});

/// A = (1/2) sum (beta_j - beta_j*), real.
double background_shift(const SolitonSpectrum& s, const CurveParams& c);

/// x-independent part of G: K_lm with G = D K D, D = diag(exp(i pi psi)).
Eigen::MatrixXcd g_kernel(const CurveParams& c, const SolitonSpectrum& s, Complex beta, double A);

/// ln det(1 + D K D) where log_d holds i pi psi_j. Entries with Re log_d > 0
/// are factored out of the determinant unless `scale_mask` says otherwise.
Complex log_det_scaled(const Eigen::MatrixXcd& K, const std::vector<Complex>& log_d,
                       const std::vector<bool>& scale_mask);
std::vector<bool> default_scale_mask(const std::vector<Complex>& log_d);

/// det(1 + G) for arbitrary complex phases psi and background argument beta.
Complex det_one_plus_g(const CurveParams& c, const SolitonSpectrum& s,
                       const std::vector<Complex>& psi, Complex beta);

struct Grid {
  double xmin = -10, xmax = 10;
  int nx = 201;
  double tmin = 0, tmax = 0;
  int nt = 2;
  double dx() const { return (xmax - xmin) / (nx - 1); }
  double dt() const { return nt > 1 ? (tmax - tmin) / (nt - 1) : 0.0; }
  double x(int i) const { return xmin + i * dx(); }
  double t(int k) const { return tmin + k * dt(); }
};

class TauContext {
 public:
  TauContext(const CurveParams& curve, SolitonSpectrum spectrum, double x0 = 0.0,
             double galilean_v = 0.0);

  const CurveParams& curve() const { return curve_; }
  const SolitonSpectrum& spectrum() const { return spec_; }
  double quad_const() const { return quad_const_; }
  double p_carrier() const { return p_carrier_; }
  double shift_a() const { return a_; }
  double x0() const { return x0_; }
  double galilean_v() const { return v_; }

  /// i pi psi_j(x, t) for the normalized (v = 0) frame.
  std::vector<Complex> log_d(double x, double t) const;
  Eigen::MatrixXcd g_matrix(double x, double t) const;
  /// ln det(1+G), real part; the determinant is real and positive.
  double log_det(double x, double t) const;
  double dlog_det_dx(double x, double t) const;

  double log_tau(double x, double t) const;
  double tau(double x, double t) const;
  double u(double x, double t) const;
  /// Samples u on grid; row-major [it * nx + ix].
  std::vector<double> u_grid(const Grid& g) const;

  /// Position where G_11 = 1 for a single soliton, by bisection.
  double core_position(std::size_t j, double t) const;

 private:
  double background_d2(double x) const;
  double u_frame(double x, double t) const;

  CurveParams curve_;
  SolitonSpectrum spec_;
  double x0_ = 0, v_ = 0;
  double quad_const_ = 0, p_carrier_ = 0, a_ = 0;
  double kappa_ = 0;  // dy/dx
  double fd_h_ = 0;
};

/// max |u_t + u_xxx + 6 u u_x| over interior grid points.
double kdv_residual(const TauContext& ctx, const Grid& g);
double kdv_residual(const std::vector<double>& u, const Grid& g);

}  // namespace cnoidal
