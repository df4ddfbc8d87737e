#include "cavishift/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cavishift/errors.hpp"

namespace cavishift::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kRescale = 1e200;

std::string describe(int order, cplx z) {
  return "order " + std::to_string(order) + " at z = (" + std::to_string(z.real()) + ", " +
         std::to_string(z.imag()) + ")";
}

void check_envelope(BesselKind kind, int order, cplx z) {
  if (order < 0) throw Error(ErrorKind::DomainError, "negative order " + describe(order, z));
  if (order > kMaxOrder || std::abs(z) > kMaxAbsArg || std::abs(z.imag()) > kMaxAbsImag)
    throw Error(ErrorKind::LossOfAccuracy, "outside validated envelope, " + describe(order, z));
  if (kind == BesselKind::J) return;
  if (z == cplx{0.0, 0.0})
    throw Error(ErrorKind::DomainError, "singular kind at zero argument, " + describe(order, z));
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw Error(ErrorKind::DomainError, "argument on the branch cut, " + describe(order, z));
}

// Start index for backward recurrence: march the three-term recurrence
// forward from n0 until the growing solution dominates by ~1e12, which
// bounds the relative contamination of the minimal solution below 1e-20.
int miller_start(int n0, cplx z) {
  cplx prev{0.0, 0.0};
  cplx cur{1.0, 0.0};
  int n = n0;
  while (std::abs(cur) < 1e12) {
    cplx next = (2.0 * n / z) * cur - prev;
    prev = cur;
    cur = next;
    ++n;
    if (n > n0 + 2000) break;
  }
  return n + 8;
}

// J_0..J_n via backward recurrence normalized with
// exp(i s z) = J_0 + 2 sum_k (i s)^k J_k, choosing s so |exp(i s z)| >= 1.
std::vector<cplx> bessel_j_all(int max_order, cplx z) {
  std::vector<cplx> j(static_cast<std::size_t>(max_order) + 1, cplx{0.0, 0.0});
  if (z == cplx{0.0, 0.0}) {
    j[0] = 1.0;
    return j;
  }
  const double az = std::abs(z);
  const int n0 = std::max(max_order, static_cast<int>(std::ceil(az))) + 1;
  const int top = miller_start(n0, z);

  std::vector<cplx> f(static_cast<std::size_t>(top) + 2, cplx{0.0, 0.0});
  f[top + 1] = 0.0;
  f[top] = 1e-30;
  for (int n = top; n >= 1; --n) {
    f[n - 1] = (2.0 * n / z) * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > kRescale) {
      for (int k = n - 1; k <= top; ++k) f[k] /= kRescale;
    }
  }

  const double s = z.imag() <= 0.0 ? 1.0 : -1.0;
  const cplx is = I * s;
  cplx sum{0.0, 0.0};
  cplx phase{1.0, 0.0};
  for (int n = 1; n <= top; ++n) {
    phase *= is;
    sum += phase * f[n];
  }
  sum = f[0] + 2.0 * sum;
  const cplx scale = std::exp(is * z) / sum;
  for (int n = 0; n <= max_order; ++n) j[n] = f[n] * scale;
  return j;
}

// K_0 and K_1 for Re x >= 0, x != 0. Ascending series for |x| <= 2,
// Steed/Temme continued fraction beyond.
struct KPair {
  cplx k0, k1;
};

KPair bessel_k01(cplx x) {
  if (std::abs(x) <= 2.0) {
    const cplx q = 0.25 * x * x;
    const cplx lg = std::log(0.5 * x);
    // I_0, I_1 and the digamma-weighted sums share the same powers of q.
    cplx i0{0.0, 0.0}, i1{0.0, 0.0}, s0{0.0, 0.0}, s1{0.0, 0.0};
    cplx term0{1.0, 0.0};  // q^k / (k!)^2
    cplx term1{1.0, 0.0};  // q^k / (k! (k+1)!)
    double psi_k1 = -kEulerGamma;            // psi(k+1)
    double psi_k2 = 1.0 - kEulerGamma;       // psi(k+2)
    for (int k = 0; k < 200; ++k) {
      i0 += term0;
      i1 += term1;
      s0 += psi_k1 * term0;
      s1 += (psi_k1 + psi_k2) * term1;
      const double kk = static_cast<double>(k + 1);
      term0 *= q / (kk * kk);
      term1 *= q / (kk * (kk + 1.0));
      psi_k1 += 1.0 / kk;
      psi_k2 += 1.0 / (kk + 1.0);
      if (std::abs(term0) < 1e-18 * std::abs(i0) && std::abs(term1) < 1e-18 * std::abs(i1)) break;
    }
    i1 *= 0.5 * x;
    const cplx k0 = -lg * i0 + s0;
    const cplx k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    return {k0, k1};
  }
  // Temme's CF2 at order 0 (Numerical Recipes bessik, complex arithmetic).
  const double a1 = 0.25;
  cplx b = 2.0 * (1.0 + x);
  cplx d = 1.0 / b;
  cplx h = d;
  cplx delh = d;
  cplx q1{0.0, 0.0};
  cplx q2{1.0, 0.0};
  cplx q{a1, 0.0};
  cplx c{a1, 0.0};
  double a = -a1;
  cplx s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s)) break;
  }
  h = a1 * h;
  const cplx k0 = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
  const cplx k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

// The Hankel function that is recessive at low order (H2 below the real
// axis, H1 on or above it) grows fastest with order, so forward recurrence
// is stable for it. J comes from Miller; the rest follows from
// H1 + H2 = 2J.
struct HankelSet {
  std::vector<cplx> j, y, h1;
};

HankelSet hankel_all(int max_order, cplx z) {
  HankelSet out;
  out.j = bessel_j_all(max_order, z);
  std::vector<cplx> h(static_cast<std::size_t>(max_order) + 1);
  const bool lower = z.imag() < 0.0;
  if (lower) {
    // H2_nu(z) = -(2/(pi i)) e^{i nu pi/2} K_nu(i z)
    const KPair k = bessel_k01(I * z);
    h[0] = (2.0 * I / pi) * k.k0;
    if (max_order >= 1) h[1] = -(2.0 / pi) * k.k1;
  } else {
    // H1_nu(z) = (2/(pi i)) e^{-i nu pi/2} K_nu(-i z)
    const KPair k = bessel_k01(-I * z);
    h[0] = (-2.0 * I / pi) * k.k0;
    if (max_order >= 1) h[1] = -(2.0 / pi) * k.k1;
  }
  for (int n = 1; n < max_order; ++n) h[n + 1] = (2.0 * n / z) * h[n] - h[n - 1];

  out.y.resize(h.size());
  out.h1.resize(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (lower) {
      out.h1[n] = 2.0 * out.j[n] - h[n];
      out.y[n] = -I * (out.j[n] - h[n]);
    } else {
      out.h1[n] = h[n];
      out.y[n] = -I * (h[n] - out.j[n]);
    }
  }
  return out;
}

}  // namespace

cplx CylTable::at(int n) const {
  const int a = n < 0 ? -n : n;
  const cplx v = value.at(static_cast<std::size_t>(a));
  return (n < 0 && (a % 2 == 1)) ? -v : v;
}

cplx CylTable::deriv_at(int n) const {
  const int a = n < 0 ? -n : n;
  const cplx v = derivative.at(static_cast<std::size_t>(a));
  return (n < 0 && (a % 2 == 1)) ? -v : v;
}

CylTable cyl_bessel_table(BesselKind kind, int max_order, cplx z) {
  check_envelope(kind, max_order, z);
  const int n = max_order + 1;
  std::vector<cplx> f;
  switch (kind) {
    case BesselKind::J: f = bessel_j_all(n, z); break;
    case BesselKind::Y: f = hankel_all(n, z).y; break;
    case BesselKind::H1: f = hankel_all(n, z).h1; break;
  }
  CylTable t;
  t.value.assign(f.begin(), f.begin() + max_order + 1);
  t.derivative.resize(static_cast<std::size_t>(max_order) + 1);
  if (z == cplx{0.0, 0.0}) {
    // only J reaches here
    for (int m = 0; m <= max_order; ++m) t.derivative[m] = (m == 1) ? 0.5 : 0.0;
  } else {
    t.derivative[0] = -f[1];
    for (int m = 1; m <= max_order; ++m)
      t.derivative[m] = f[m - 1] - (static_cast<double>(m) / z) * f[m];
  }
  for (int m = 0; m <= max_order; ++m) {
    if (!std::isfinite(t.value[m].real()) || !std::isfinite(t.value[m].imag()) ||
        !std::isfinite(t.derivative[m].real()) || !std::isfinite(t.derivative[m].imag()))
      throw Error(ErrorKind::LossOfAccuracy, "non-finite result, " + describe(m, z));
  }
  return t;
}

CylValue cyl_bessel(BesselKind kind, int order, cplx z) {
  check_envelope(kind, order, z);
  const CylTable t = cyl_bessel_table(kind, order, z);
  return {t.value[order], t.derivative[order]};
}

CylValue sph_hankel1(int order, cplx z) {
  if (order < 0) throw Error(ErrorKind::DomainError, "negative order " + describe(order, z));
  if (z == cplx{0.0, 0.0}) throw Error(ErrorKind::DomainError, "zero argument");
  // h_n(z) = (-i)^{n+1} e^{iz}/z * sum_k a_k(n) (i/(2z))^k,
  // a_k = (n+k)! / (k! (n-k)!).
  auto value = [z](int n) {
    cplx sum{0.0, 0.0};
    cplx term{1.0, 0.0};
    double a = 1.0;
    const cplx step = I / (2.0 * z);
    for (int k = 0; k <= n; ++k) {
      sum += a * term;
      a *= static_cast<double>(n + k + 1) * static_cast<double>(n - k) / static_cast<double>(k + 1);
      term *= step;
    }
    return std::pow(-I, n + 1) * std::exp(I * z) / z * sum;
  };
  const cplx h = value(order);
  cplx dh;
  if (order == 0) {
    dh = -value(1);
  } else {
    dh = value(order - 1) - (static_cast<double>(order + 1) / z) * h;
  }
  return {h, dh};
}

}  // namespace cavishift::specfun
