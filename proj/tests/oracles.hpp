#pragma once

// Naive reference implementations used only by the tests. Plain loops over
// std::complex arrays; nothing here touches the library's linear algebra.

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

using C = std::complex<double>;
using V2 = std::array<C, 2>;
using V4 = std::array<C, 4>;
using M2 = std::array<std::array<C, 2>, 2>;
using M4 = std::array<std::array<C, 4>, 4>;

inline V2 equator_ket(double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  return {C(s, 0.0), s * std::exp(C(0.0, phi))};
}

inline V2 equator_ket_perp(double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  return {C(s, 0.0), -s * std::exp(C(0.0, phi))};
}

inline M2 pauli_equator(double theta) {
  return {{{C(0.0), std::exp(C(0.0, -theta))}, {std::exp(C(0.0, theta)), C(0.0)}}};
}

inline M2 identity2() { return {{{C(1.0), C(0.0)}, {C(0.0), C(1.0)}}}; }

inline M2 projector(double theta, int sign) {
  M2 p = pauli_equator(theta);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + static_cast<double>(sign) * p[i][j]);
  }
  return p;
}

inline V4 kron(const V2& a, const V2& b) {
  V4 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[2 * i + j] = a[i] * b[j];
  return out;
}

inline M4 kron(const M2& a, const M2& b) {
  M4 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return out;
}

inline M4 mul(const M4& a, const M4& b) {
  M4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline M4 dagger(const M4& a) {
  M4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = std::conj(a[j][i]);
  return out;
}

inline V4 apply(const M4& m, const V4& v) {
  V4 out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) out[i] += m[i][k] * v[k];
  return out;
}

inline C braket(const V4& a, const V4& b) {
  C s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline M4 outer(const V4& a) {
  M4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = a[i] * std::conj(a[j]);
  return out;
}

inline C trace(const M4& m) { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

/// Partial trace with explicit index loops; keep_first selects the object.
inline M2 partial_trace(const M4& rho, bool keep_first) {
  M2 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k) {
        out[a][b] += keep_first ? rho[2 * a + k][2 * b + k] : rho[2 * k + a][2 * k + b];
      }
  return out;
}

/// Cloner written column by column from its action on the basis.
inline M4 pcc(double eta, double completion_phase = 0.0) {
  const double c = std::cos(eta), s = std::sin(eta);
  const C ph = std::exp(C(0.0, completion_phase));
  M4 u{};
  u[0][0] = 1.0;          // |00> -> |00>
  u[2][2] = c;            // |10> -> c|10> + s|01>
  u[1][2] = s;
  u[1][1] = ph * c;       // |01> -> e^{ic}(c|01> - s|10>)
  u[2][1] = -ph * s;
  u[3][3] = ph;           // |11> -> e^{ic}|11>
  return u;
}

inline M4 swap() {
  M4 u{};
  u[0][0] = u[3][3] = 1.0;
  u[1][2] = u[2][1] = 1.0;
  return u;
}

inline M4 identity4() {
  M4 u{};
  for (int i = 0; i < 4; ++i) u[i][i] = 1.0;
  return u;
}

/// Joint probabilities p[(1 - o_a)/2][(1 - o_b)/2] of the decoding: clone,
/// read A on the probe, read B on the object (equivalent to reading it on a
/// second probe after a swap). Density-matrix route throughout.
inline std::array<std::array<double, 2>, 2> decode_table(const V2& bob, double eta, double a,
                                                         double b) {
  const V4 in = kron(bob, V2{C(1.0), C(0.0)});
  const M4 u = pcc(eta);
  const M4 rho = mul(mul(u, outer(in)), dagger(u));
  std::array<std::array<double, 2>, 2> p{};
  for (int oa = 0; oa < 2; ++oa) {
    const M4 pa = kron(identity2(), projector(a, oa == 0 ? 1 : -1));
    const M4 after_a = mul(mul(pa, rho), pa);
    for (int ob = 0; ob < 2; ++ob) {
      const M4 pb = kron(projector(b, ob == 0 ? 1 : -1), identity2());
      p[oa][ob] = trace(mul(pb, after_a)).real();
    }
  }
  return p;
}

/// Success probabilities of the two channels for a direction phi whose
/// quadrant bits are (xa, xb), averaged over the announced bit.
inline std::array<double, 2> success(double phi, double eta, double a, double b) {
  const int xa = std::cos(phi - a) > 0.0 ? 0 : 1;
  const int xb = std::cos(phi - b) > 0.0 ? 0 : 1;
  std::array<double, 2> s{0.0, 0.0};
  for (int beta = 0; beta < 2; ++beta) {
    const V2 bob = beta == 1 ? equator_ket_perp(phi) : equator_ket(phi);
    const auto t = decode_table(bob, eta, a, b);
    for (int oa = 0; oa < 2; ++oa) {
      for (int ob = 0; ob < 2; ++ob) {
        const int ga = (oa + beta) % 2;
        const int gb = (ob + beta) % 2;
        if (ga == xa) s[0] += 0.5 * t[oa][ob];
        if (gb == xb) s[1] += 0.5 * t[oa][ob];
      }
    }
  }
  return s;
}

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// I(x:g) of a 2x2 joint table by direct summation.
inline double mutual_information(const std::array<std::array<double, 2>, 2>& t) {
  double mi = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int g = 0; g < 2; ++g) {
      const double px = t[x][0] + t[x][1];
      const double pg = t[0][g] + t[1][g];
      if (t[x][g] > 0.0) mi += t[x][g] * std::log2(t[x][g] / (px * pg));
    }
  return mi;
}

/// <psi (x) probe| (out - in)^2 |psi (x) probe>^{1/2} with both operators
/// given as dense 4x4 matrices.
inline double rms(const M4& out_op, const M4& in_op, const V4& state) {
  M4 d{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = out_op[i][j] - in_op[i][j];
  const V4 dv = oracle::apply(d, state);
  return std::sqrt(std::max(0.0, braket(dv, dv).real()));
}

}  // namespace oracle
