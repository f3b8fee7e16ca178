#include "cnoidal/soliton_tau.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cnoidal {

Complex quasi_momentum(const JacobianPoint& p, const CurveParams& c) {
  auto d = log_theta_derivs(ThetaKind::one, p.beta, c);
  Complex P = d[0] / (2.0 * c.varpi3) + chi(p.kind) * kI * kPi / (2.0 * c.varpi3);
  return Complex(0.0, P.imag());
}

Complex quasi_energy(const JacobianPoint& p, const CurveParams& c) {
  Complex E = -0.5 * weierstrass(2.0 * c.varpi3 * p.beta, c).wp_prime;
  return Complex(0.0, E.imag());
}

namespace {

void fill_spectrum(SolitonSpectrum& s, const CurveParams& c, const std::vector<double>& x_shift) {
  const std::size_t n = s.points.size();
  if (!x_shift.empty() && x_shift.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "x_shift length differs from spectrum size");
  s.x_shift = x_shift.empty() ? std::vector<double>(n, 0.0) : x_shift;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (s.points[i].kind == s.points[j].kind &&
          std::abs(s.points[i].beta - s.points[j].beta) < 1e-12)
        throw Error(ErrorCode::DuplicateSpectralPoint, "repeated spectral point");
  s.P.resize(n);
  s.E.resize(n);
  s.norming.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.P[j] = quasi_momentum(s.points[j], c);
    s.E[j] = quasi_energy(s.points[j], c);
  }
  for (std::size_t l = 0; l < n; ++l) {
    const auto& pl = s.points[l];
    Complex star = pl.star(c);
    double C = std::abs(theta1(pl.beta - star, c));
    for (std::size_t k = 0; k < n; ++k) {
      if (k == l) continue;
      const auto& pk = s.points[k];
      Complex kstar = pk.star(c);
      C *= std::sqrt(std::abs(theta1(pk.beta - star, c) * theta1(kstar - pl.beta, c) /
                              (theta1(pk.beta - pl.beta, c) * theta1(kstar - star, c))));
    }
    s.norming[l] = C;
  }
}

}  // namespace

SolitonSpectrum build_spectrum(const CurveParams& c, const std::vector<double>& b,
                               const std::vector<double>& x_shift) {
  SolitonSpectrum s;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (std::abs(b[i] - b[j]) <= 1e-10 * std::max(1.0, std::abs(b[i])))
        throw Error(ErrorCode::DuplicateSpectralPoint, "b values must be distinct");
  for (double bj : b) s.points.push_back(invert_wp(bj, c));
  s.b = b;
  fill_spectrum(s, c, x_shift);
  return s;
}

SolitonSpectrum build_spectrum(const CurveParams& c, const std::vector<JacobianPoint>& pts,
                               const std::vector<double>& x_shift) {
  SolitonSpectrum s;
  s.points = pts;
  for (const auto& p : pts) s.b.push_back(wp_of(p, c));
  fill_spectrum(s, c, x_shift);
  return s;
}

double background_shift(const SolitonSpectrum& s, const CurveParams& c) {
  double a = 0.0;
  for (const auto& p : s.points) a += 0.5 * p.delta(c);
  return a;
}

Eigen::MatrixXcd g_kernel(const CurveParams& c, const SolitonSpectrum& s, Complex beta, double A) {
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXcd K(n, n);
  Complex base = theta3(beta - A, c);
  if (std::abs(base) < 1e-13)
    throw Error(ErrorCode::BackgroundThetaZero, "background theta3 vanishes");
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      Complex diff = s.points[l].beta - s.points[m].star(c);
      // sqrt(C_l C_m) carries the sign of theta1(beta - beta*) < 0
      double root = std::sqrt(s.norming[l] * s.norming[m]);
      K(l, m) = -root * theta3(diff + beta - A, c) / (theta1(diff, c) * base);
    }
  }
  return K;
}

std::vector<bool> default_scale_mask(const std::vector<Complex>& log_d) {
  std::vector<bool> mask(log_d.size());
  for (std::size_t j = 0; j < log_d.size(); ++j) mask[j] = log_d[j].real() > 0.0;
  return mask;
}

Complex log_det_scaled(const Eigen::MatrixXcd& K, const std::vector<Complex>& log_d,
                       const std::vector<bool>& scale_mask) {
  const int n = static_cast<int>(K.rows());
  if (n == 0) return 0.0;
  Eigen::VectorXcd d(n), diag(n);
  Complex shift = 0.0;
  for (int j = 0; j < n; ++j) {
    if (scale_mask[j]) {
      d[j] = 1.0;
      diag[j] = std::exp(-2.0 * log_d[j]);
      shift += 2.0 * log_d[j];
    } else {
      d[j] = std::exp(log_d[j]);
      diag[j] = 1.0;
    }
  }
  Eigen::MatrixXcd M = d.asDiagonal() * K * d.asDiagonal();
  M.diagonal() += diag;
  if (n == 1) return shift + std::log(M(0, 0));
  if (n == 2) return shift + std::log(M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0));
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const auto& U = lu.matrixLU();
  Complex acc = shift;
  for (int j = 0; j < n; ++j) acc += std::log(U(j, j));
  if (lu.permutationP().determinant() < 0) acc += Complex(0.0, kPi);
  return acc;
}

Complex det_one_plus_g(const CurveParams& c, const SolitonSpectrum& s,
                       const std::vector<Complex>& psi, Complex beta) {
  if (psi.size() != s.size())
    throw Error(ErrorCode::DimensionMismatch, "phase vector length differs from spectrum size");
  double A = background_shift(s, c);
  auto K = g_kernel(c, s, beta, A);
  std::vector<Complex> ld(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) ld[j] = kI * kPi * psi[j];
  return std::exp(log_det_scaled(K, ld, default_scale_mask(ld)));
}

TauContext::TauContext(const CurveParams& curve, SolitonSpectrum spectrum, double x0,
                       double galilean_v)
    : curve_(curve), spec_(std::move(spectrum)), x0_(x0), v_(galilean_v) {
  Complex q = curve_.zeta3 / (8.0 * curve_.varpi3);
  if (std::abs(q.imag()) > 1e-12 * std::max(1.0, std::abs(q)))
    throw Error(ErrorCode::NonRealTau, "quadratic exponent is not real");
  quad_const_ = q.real();
  p_carrier_ = (-kI * kPi / (2.0 * curve_.varpi3)).real();
  a_ = background_shift(spec_, curve_);
  kappa_ = (1.0 / (4.0 * kI * curve_.varpi3)).real();
  fd_h_ = 1e-3 * curve_.period();
}

std::vector<Complex> TauContext::log_d(double x, double t) const {
  std::vector<Complex> ld(spec_.size());
  for (std::size_t j = 0; j < spec_.size(); ++j) {
    Complex psi = ((x - spec_.x_shift[j]) * spec_.P[j] + t * spec_.E[j]) / (2.0 * kPi);
    ld[j] = Complex((kI * kPi * psi).real(), 0.0);
  }
  return ld;
}

Eigen::MatrixXcd TauContext::g_matrix(double x, double t) const {
  auto K = g_kernel(curve_, spec_, (x - x0_) * kappa_, a_);
  auto ld = log_d(x, t);
  for (int l = 0; l < K.rows(); ++l)
    for (int m = 0; m < K.cols(); ++m) K(l, m) *= std::exp(ld[l] + ld[m]);
  return K;
}

double TauContext::log_det(double x, double t) const {
  x -= 2.0 * v_ * t;
  if (spec_.size() == 0) return 0.0;
  auto K = g_kernel(curve_, spec_, (x - x0_) * kappa_, a_);
  auto ld = log_d(x, t);
  Complex r = log_det_scaled(K, ld, default_scale_mask(ld));
  double s = std::sin(r.imag());
  if (std::abs(s) > 1e-9 || std::cos(r.imag()) < 0)
    throw Error(ErrorCode::NonRealTau, "det(1+G) is not real positive at x = " + std::to_string(x));
  return r.real();
}

double TauContext::dlog_det_dx(double x, double t) const {
  x -= 2.0 * v_ * t;
  const int n = static_cast<int>(spec_.size());
  if (n == 0) return 0.0;
  Complex y = (x - x0_) * kappa_;
  Complex base = log_theta_derivs(ThetaKind::three, y - a_, curve_)[0];
  Eigen::MatrixXcd G = g_matrix(x, t);
  Eigen::MatrixXcd dG(n, n);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      Complex diff = spec_.points[l].beta - spec_.points[m].star(curve_);
      Complex lt = log_theta_derivs(ThetaKind::three, diff + y - a_, curve_)[0];
      double dd = -0.5 * (spec_.abs_p(l) + spec_.abs_p(m));
      dG(l, m) = G(l, m) * (kappa_ * (lt - base) + dd);
    }
  }
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n) + G;
  return one.partialPivLu().solve(dG).trace().real();
}

double TauContext::log_tau(double x, double t) const {
  double xf = x - 2.0 * v_ * t;
  Complex th = theta3((xf - x0_) * kappa_ - a_, curve_);
  return -quad_const_ * xf * xf + log_det(x, t) + std::log(th.real());
}

double TauContext::tau(double x, double t) const { return std::exp(log_tau(x, t)); }

double TauContext::background_d2(double x) const {
  Complex y = (x - x0_) * kappa_;
  return (kappa_ * kappa_ * log_theta_derivs(ThetaKind::three, y - a_, curve_)[1]).real();
}

double TauContext::u_frame(double x, double t) const {
  double u = 2.0 * background_d2(x) - 4.0 * quad_const_;
  if (spec_.size() == 0) return u;
  const double h = fd_h_;
  auto mask = default_scale_mask(log_d(x, t));
  double f[5];
  for (int k = -2; k <= 2; ++k) {
    double xs = x + k * h;
    auto K = g_kernel(curve_, spec_, (xs - x0_) * kappa_, a_);
    f[k + 2] = log_det_scaled(K, log_d(xs, t), mask).real();
  }
  double d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
  return u + 2.0 * d2;
}

double TauContext::u(double x, double t) const {
  return u_frame(x - 2.0 * v_ * t, t) + v_ / 3.0;
}

std::vector<double> TauContext::u_grid(const Grid& g) const {
  std::vector<double> out(static_cast<std::size_t>(g.nx) * g.nt);
  if (v_ != 0.0 || spec_.size() == 0) {
    for (int k = 0; k < g.nt; ++k)
      for (int i = 0; i < g.nx; ++i) out[static_cast<std::size_t>(k) * g.nx + i] = u(g.x(i), g.t(k));
    return out;
  }
  const double h = fd_h_;
  for (int i = 0; i < g.nx; ++i) {
    double x = g.x(i);
    double bg = 2.0 * background_d2(x) - 4.0 * quad_const_;
    Eigen::MatrixXcd K[5];
    for (int k = -2; k <= 2; ++k) K[k + 2] = g_kernel(curve_, spec_, (x + k * h - x0_) * kappa_, a_);
    for (int it = 0; it < g.nt; ++it) {
      double t = g.t(it);
      auto mask = default_scale_mask(log_d(x, t));
      double f[5];
      for (int k = -2; k <= 2; ++k) f[k + 2] = log_det_scaled(K[k + 2], log_d(x + k * h, t), mask).real();
      double d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
      out[static_cast<std::size_t>(it) * g.nx + i] = bg + 2.0 * d2;
    }
  }
  return out;
}

double TauContext::core_position(std::size_t j, double t) const {
  if (j >= spec_.size()) throw Error(ErrorCode::InvalidArgument, "soliton index out of range");
  const double p = spec_.abs_p(j);
  const auto& pt = spec_.points[j];
  double delta = pt.delta(curve_);
  auto log_g = [&](double x) {
    Complex y = (x - x0_) * kappa_;
    double r = std::log(spec_.norming[j] / std::abs(theta1(delta, curve_))) +
               std::log((theta3(delta + y - a_, curve_) / theta3(y - a_, curve_)).real());
    return r - p * (x - spec_.x_shift[j] - spec_.velocity(j) * t);
  };
  double osc = std::log((theta3(0.0, curve_) / theta3(0.5, curve_)).real());
  double centre = spec_.x_shift[j] + spec_.velocity(j) * t;
  double span = (2.0 * osc + std::abs(std::log(spec_.norming[j])) +
                 std::abs(std::log(std::abs(theta1(delta, curve_)))) + 1.0) / p;
  double lo = centre - span, hi = centre + span;
  if (!(log_g(lo) > 0 && log_g(hi) < 0))
    throw Error(ErrorCode::NonConvergence, "core position not bracketed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (log_g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) + 2.0 * v_ * t;
}

double kdv_residual(const std::vector<double>& u, const Grid& g) {
  if (g.nx < 7 || g.nt < 5)
    throw Error(ErrorCode::GridTooCoarse, "residual needs nx >= 7 and nt >= 5");
  const double hx = g.dx(), ht = g.dt();
  auto at = [&](int i, int k) { return u[static_cast<std::size_t>(k) * g.nx + i]; };
  double worst = 0.0;
  for (int k = 2; k < g.nt - 2; ++k) {
    for (int i = 3; i < g.nx - 3; ++i) {
      double ux = (at(i - 2, k) - 8.0 * at(i - 1, k) + 8.0 * at(i + 1, k) - at(i + 2, k)) / (12.0 * hx);
      double uxxx = (at(i - 3, k) - 8.0 * at(i - 2, k) + 13.0 * at(i - 1, k) - 13.0 * at(i + 1, k) +
                     8.0 * at(i + 2, k) - at(i + 3, k)) / (8.0 * hx * hx * hx);
      double ut = (at(i, k - 2) - 8.0 * at(i, k - 1) + 8.0 * at(i, k + 1) - at(i, k + 2)) / (12.0 * ht);
      worst = std::max(worst, std::abs(ut + uxxx + 6.0 * at(i, k) * ux));
    }
  }
  return worst;
}

double kdv_residual(const TauContext& ctx, const Grid& g) {
  if (g.dx() > ctx.curve().period() / 9.0)
    throw Error(ErrorCode::GridTooCoarse, "fewer than 9 grid points per background period");
  return kdv_residual(ctx.u_grid(g), g);
}

}  // namespace cnoidal
