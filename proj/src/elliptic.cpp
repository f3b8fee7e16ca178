#include "cnoidal/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cnoidal {

namespace {

std::string fmt3(double a, double b, double c) {
  return std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c);
}

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) <= 1e-16 * a) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

double ellip_k(double m) {
  if (!(m >= 0.0 && m < 1.0))
    throw Error(ErrorCode::ModulusOutOfRange, "elliptic parameter outside [0,1)");
  return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

GalileanSplit split_trace(double e1, double e2, double e3) {
  double v = e1 + e2 + e3;
  return {e1 - v / 3.0, e2 - v / 3.0, e3 - v / 3.0, v};
}

CurveParams half_periods(double e1, double e2, double e3) {
  double scale = std::max({1.0, std::abs(e1), std::abs(e2), std::abs(e3)});
  if (std::abs(e1 - e2) <= 1e-12 * scale || std::abs(e2 - e3) <= 1e-12 * scale ||
      std::abs(e1 - e3) <= 1e-12 * scale)
    throw Error(ErrorCode::NonDistinctBranchPoints, "branch points coincide: " + fmt3(e1, e2, e3));
  if (!(e3 < e2 && e2 < e1))
    throw Error(ErrorCode::UnorderedBranchPoints, "need e3 < e2 < e1: " + fmt3(e1, e2, e3));
  if (std::abs(e1 + e2 + e3) > 1e-10 * scale)
    throw Error(ErrorCode::TraceNotZero, "e1+e2+e3 != 0: " + fmt3(e1, e2, e3));

  CurveParams c;
  c.e1 = e1;
  c.e2 = e2;
  c.e3 = e3;
  c.g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
  c.g3 = 4.0 * e1 * e2 * e3;
  double m = (e2 - e3) / (e1 - e3);
  double s = std::sqrt(e1 - e3);
  c.varpi1 = ellip_k(m) / s;
  c.varpi3 = Complex(0.0, -ellip_k(1.0 - m) / s);
  c.tau = c.varpi1 / c.varpi3;
  c.tau = Complex(0.0, c.tau.imag());
  if (c.tau.imag() < 0.05)
    throw Error(ErrorCode::ModulusOutOfRange, "Im tau below 0.05");
  c.nome = std::exp(-kPi * c.tau.imag());
  c.zeta3 = zeta_half_period(c);
  return c;
}

std::array<Complex, 4> theta_jet(ThetaKind kind, Complex beta, const CurveParams& c,
                                 int max_order) {
  const bool three = kind == ThetaKind::three;
  const double a = kPi * c.tau.imag();
  const Complex arg = three ? beta : beta - 0.5;
  std::array<Complex, 4> sum{};
  double running = 0.0;
  if (three) {
    sum[0] = 1.0;
    running = 1.0;
  }
  int quiet = 0;
  for (int k = three ? 1 : 0; k < 100000; ++k) {
    double h = three ? k : k + 0.5;
    double lq = -a * h * h;
    Complex w = 2.0 * kPi * kI * h;
    Complex ep = std::exp(lq + w * arg);
    Complex em = std::exp(lq - w * arg);
    Complex f = 1.0;
    for (int r = 0; r <= max_order; ++r) {
      sum[r] += f * ((r % 2 == 0) ? ep + em : ep - em);
      f *= w;
    }
    double mag = (std::abs(ep) + std::abs(em)) * std::pow(std::max(1.0, std::abs(w)), max_order);
    running = std::max(running, mag);
    if (mag < 1e-16 * running) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  return sum;
}

Complex theta_eval(ThetaKind kind, int order, Complex beta, const CurveParams& c) {
  if (order < 0 || order > 3)
    throw Error(ErrorCode::InvalidArgument, "theta derivative order must be 0..3");
  return theta_jet(kind, beta, c, order)[order];
}

std::array<Complex, 3> log_theta_derivs(ThetaKind kind, Complex beta, const CurveParams& c) {
  auto t = theta_jet(kind, beta, c, 3);
  Complex r1 = t[1] / t[0], r2 = t[2] / t[0], r3 = t[3] / t[0];
  return {r1, r2 - r1 * r1, r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1};
}

Complex zeta_half_period(const CurveParams& c) {
  auto t = theta_jet(ThetaKind::one, 0.0, c, 3);
  return -t[3] / (12.0 * c.varpi3 * t[1]);
}

WeierstrassValues weierstrass(Complex s, const CurveParams& c) {
  Complex beta = s / (2.0 * c.varpi3);
  double m = std::round(beta.imag() / c.tau.imag());
  double n = std::round(beta.real() - m * c.tau.real());
  if (std::abs(s - 2.0 * c.varpi3 * (n + m * c.tau)) < 1e-10)
    throw Error(ErrorCode::LatticePoint, "argument within 1e-10 of a lattice point");
  auto d = log_theta_derivs(ThetaKind::one, beta, c);
  const Complex w3 = c.varpi3;
  WeierstrassValues out;
  out.zeta = (d[0] + 4.0 * w3 * c.zeta3 * beta) / (2.0 * w3);
  out.wp = -(d[1] + 4.0 * w3 * c.zeta3) / (4.0 * w3 * w3);
  out.wp_prime = -d[2] / (8.0 * w3 * w3 * w3);
  return out;
}

const char* kind_name(SpectralKind k) { return k == SpectralKind::cool ? "cool" : "hot"; }

JacobianPoint jacobian_point(double rho, SpectralKind kind, const CurveParams& c) {
  if (!(rho > 0.0 && rho < 0.5))
    throw Error(ErrorCode::InvalidArgument, "Re beta must lie in (0, 1/2)");
  return {Complex(rho, 0.0) + 0.5 * chi(kind) * c.tau, kind};
}

double wp_of(const JacobianPoint& p, const CurveParams& c) {
  return weierstrass(2.0 * c.varpi3 * p.beta, c).wp.real();
}

JacobianPoint invert_wp(double b, const CurveParams& c) {
  const double close = 1e-9;
  if (b >= c.e1 || (b >= c.e3 && b <= c.e2)) {
    if (std::abs(b - c.e1) < close || std::abs(b - c.e2) < close || std::abs(b - c.e3) < close)
      throw Error(ErrorCode::TooCloseToBranchPoint, "b at a branch point");
    throw Error(ErrorCode::SpectrumInGap, "b = " + std::to_string(b) + " is not in the spectrum");
  }
  if (std::abs(b - c.e1) < close || std::abs(b - c.e2) < close || std::abs(b - c.e3) < close)
    throw Error(ErrorCode::TooCloseToBranchPoint, "b within 1e-9 of a branch point");

  SpectralKind kind = b < c.e3 ? SpectralKind::hot : SpectralKind::cool;
  // wp increases on the hot segment and decreases on the cool one
  double sgn = kind == SpectralKind::hot ? 1.0 : -1.0;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    JacobianPoint p{Complex(mid, 0.0) + 0.5 * chi(kind) * c.tau, kind};
    double f = sgn * (wp_of(p, c) - b);
    if (f < 0)
      lo = mid;
    else
      hi = mid;
  }
  double rho = 0.5 * (lo + hi);
  if (!(rho > 0.0 && rho < 0.5))
    throw Error(ErrorCode::NonConvergence, "wp inversion left the segment");
  return {Complex(rho, 0.0) + 0.5 * chi(kind) * c.tau, kind};
}

}  // namespace cnoidal
