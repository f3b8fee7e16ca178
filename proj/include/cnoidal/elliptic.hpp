#pragma once

/// Elliptic curve data, theta functions and Weierstrass functions for the
/// real curve y^2 = 4(z-e1)(z-e2)(z-e3) with e3 < e2 < e1 and e1+e2+e3 = 0.

#include <array>
#include <complex>

#include "cnoidal/error.hpp"

namespace cnoidal {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
inline const Complex kI{0.0, 1.0};

struct CurveParams {
  double e1 = 0, e2 = 0, e3 = 0;
  double g2 = 0, g3 = 0;
  double varpi1 = 0;   // real half-period
  Complex varpi3;      // on the negative imaginary axis
  Complex tau;         // varpi1 / varpi3, purely imaginary, Im > 0
  double nome = 0;     // exp(i pi tau)
  Complex zeta3;       // zeta(varpi3)

  /// 4 i varpi3, the (real, positive) spatial period of the background wave.
  double period() const { return (4.0 * kI * varpi3).real(); }
};

/// Normalizes arbitrary real branch points to zero trace. Returns the shift v
/// such that e_i = e_i' + v/3.
struct GalileanSplit {
  double e1, e2, e3;
  double v;
};
GalileanSplit split_trace(double e1, double e2, double e3);

CurveParams half_periods(double e1, double e2, double e3);

/// Complete elliptic integral of the first kind, parameter m.
double ellip_k(double m);

enum class ThetaKind { one, three };

/// theta_1 with theta_1(beta) = sum exp(i pi (n-1/2)^2 tau + 2 i pi (n-1/2)(beta-1/2)),
/// theta_3(beta) = sum exp(i pi n^2 tau + 2 i pi n beta). Periods 1 and tau.
/// Returns derivatives of orders 0..max_order in beta.
std::array<Complex, 4> theta_jet(ThetaKind kind, Complex beta, const CurveParams& c,
                                 int max_order = 3);
Complex theta_eval(ThetaKind kind, int order, Complex beta, const CurveParams& c);

inline Complex theta1(Complex beta, const CurveParams& c) {
  return theta_eval(ThetaKind::one, 0, beta, c);
}
inline Complex theta3(Complex beta, const CurveParams& c) {
  return theta_eval(ThetaKind::three, 0, beta, c);
}

/// d^k/dbeta^k ln theta(beta) for k = 1, 2, 3.
std::array<Complex, 3> log_theta_derivs(ThetaKind kind, Complex beta, const CurveParams& c);

struct WeierstrassValues {
  Complex wp;
  Complex wp_prime;
  Complex zeta;
};

WeierstrassValues weierstrass(Complex s, const CurveParams& c);
Complex zeta_half_period(const CurveParams& c);

enum class SpectralKind { hot, cool };

inline double chi(SpectralKind k) { return k == SpectralKind::cool ? 1.0 : 0.0; }
const char* kind_name(SpectralKind k);

struct JacobianPoint {
  Complex beta;
  SpectralKind kind = SpectralKind::hot;

  double rho() const { return beta.real(); }
  Complex star(const CurveParams& c) const { return 1.0 - beta + chi(kind) * c.tau; }
  /// beta - beta*, real on both segments.
  double delta(const CurveParams& c) const { return (beta - star(c)).real(); }
};

JacobianPoint jacobian_point(double rho, SpectralKind kind, const CurveParams& c);

/// Preimage of b under beta -> wp(2 varpi3 beta). Hot for b < e3, cool for
/// e2 < b < e1.
JacobianPoint invert_wp(double b, const CurveParams& c);

/// wp(2 varpi3 beta), real on both spectral segments.
double wp_of(const JacobianPoint& p, const CurveParams& c);

}  // namespace cnoidal
