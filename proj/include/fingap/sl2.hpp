// Complex 2x2 linear algebra, the sl2 basis, projective lines and the
// Hermitian-matrix model of hyperbolic 3-space.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fingap {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

constexpr double kPi = 3.14159265358979323846;

// Input that violates an operation's precondition (caller error).
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside an otherwise valid computation. `stage` tags the
// pipeline step for diagnostics.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& stage, const std::string& msg)
      : std::runtime_error(stage + ": " + msg), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Mat2 {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  cplx tr() const { return a + d; }
  cplx det() const { return a * d - b * c; }

  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 conjugate() const {
    return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)};
  }
  // Conjugate transpose.
  Mat2 star() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
  }
  // Adjugate; equals the inverse for unimodular matrices.
  Mat2 adjugate() const { return {d, -b, -c, a}; }

  Mat2 inverse() const {
    const cplx dt = det();
    if (std::abs(dt) < 1e-300) throw numeric_error("sl2", "singular 2x2 inverse");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  double frob() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

  Vec2 apply(const Vec2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }
};

inline Mat2 operator*(cplx s, const Mat2& m) { return m * s; }
inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

inline bool is_sl2(const Mat2& m, double tol = 1e-9) {
  return std::abs(m.det() - 1.0) <= tol;
}
inline bool is_hermitian(const Mat2& m, double tol = 1e-9) {
  return (m - m.star()).frob() <= tol * (1.0 + m.frob());
}
inline bool is_tracefree(const Mat2& m, double tol = 1e-9) {
  return std::abs(m.tr()) <= tol * (1.0 + m.frob());
}

// Fixed sl2(C) basis.
inline const Mat2 kEpsMinus{0.0, 0.0, -1.0, 0.0};
inline const Mat2 kEpsPlus{0.0, 1.0, 0.0, 0.0};
inline const Mat2 kEps{cplx(0.0, 1.0), 0.0, 0.0, cplx(0.0, -1.0)};

namespace detail {
// sin(w)/w, series near 0 to avoid cancellation.
inline cplx sinc(cplx w) {
  if (std::abs(w) < 1e-4) {
    const cplx w2 = w * w;
    return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0));
  }
  return std::sin(w) / w;
}
inline cplx cos_c(cplx w) { return std::cos(w); }
}  // namespace detail

// Closed-form exponential of a tracefree 2x2 matrix:
//   exp(A) = cos(w) 1 + sinc(w) A  with  w^2 = det A.
// Branch-independent since cos and sinc are even.
inline Mat2 exp_tracefree(const Mat2& A, double trace_tol = 1e-10) {
  if (!is_tracefree(A, trace_tol))
    throw input_error("exp_tracefree: matrix is not tracefree");
  const cplx w = std::sqrt(A.det());
  const cplx cw = detail::cos_c(w);
  const cplx sw = detail::sinc(w);
  return {cw + sw * A.a, sw * A.b, sw * A.c, cw + sw * A.d};
}

// A point of CP^1, stored as a unit vector with the first component of
// magnitude above threshold normalized to be real and positive.
class CPLine {
 public:
  CPLine() : v_{1.0, 0.0} {}
  CPLine(cplx v1, cplx v2) : v_{v1, v2} { normalize(); }
  explicit CPLine(const Vec2& v) : v_{v[0], v[1]} { normalize(); }

  const Vec2& v() const { return v_; }
  cplx v1() const { return v_[0]; }
  cplx v2() const { return v_[1]; }

  // Hermitian-orthogonal line.
  CPLine perp() const { return CPLine(-std::conj(v_[1]), std::conj(v_[0])); }

  // Phase-insensitive equality: |<v,w>| close to 1.
  bool same_line(const CPLine& o, double tol = 1e-9) const {
    const cplx ip = std::conj(v_[0]) * o.v_[0] + std::conj(v_[1]) * o.v_[1];
    return std::abs(ip) > 1.0 - tol;
  }

  bool is_real(double tol = 1e-9) const {
    return std::abs(v_[0].imag()) <= tol && std::abs(v_[1].imag()) <= tol;
  }

 private:
  void normalize() {
    const double n = std::sqrt(std::norm(v_[0]) + std::norm(v_[1]));
    if (!(n > 0.0) || !std::isfinite(n))
      throw input_error("CPLine: zero or non-finite homogeneous vector");
    v_[0] /= n;
    v_[1] /= n;
    const cplx lead = std::abs(v_[0]) > 1e-12 ? v_[0] : v_[1];
    const cplx phase = lead / std::abs(lead);
    v_[0] /= phase;
    v_[1] /= phase;
    if (std::abs(v_[0].imag()) < 1e-15) v_[0].imag(0.0);
  }

  Vec2 v_;
};

// pi_L = v v* for the unit representative; rank-1 Hermitian idempotent.
inline Mat2 hermitian_projection(const CPLine& L) {
  const cplx v1 = L.v1(), v2 = L.v2();
  return {v1 * std::conj(v1), v1 * std::conj(v2),
          v2 * std::conj(v1), v2 * std::conj(v2)};
}

// Hyperboloid / Pauli decomposition with sigma3 = diag(1,-1):
//   X = x0*1 + x1*sigma1 + x2*sigma2 + x3*sigma3.
struct Vec4 {
  double x0{0.0}, x1{0.0}, x2{0.0}, x3{0.0};

  Vec4 operator+(const Vec4& o) const { return {x0 + o.x0, x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
  Vec4 operator-(const Vec4& o) const { return {x0 - o.x0, x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
  Vec4 operator*(double s) const { return {x0 * s, x1 * s, x2 * s, x3 * s}; }
};

// Minkowski product of signature (+,-,-,-).
inline double mink(const Vec4& x, const Vec4& y) {
  return x.x0 * y.x0 - x.x1 * y.x1 - x.x2 * y.x2 - x.x3 * y.x3;
}

inline Vec4 pauli_components(const Mat2& X) {
  Vec4 r;
  r.x0 = 0.5 * (X.a + X.d).real();
  r.x3 = 0.5 * (X.a - X.d).real();
  r.x1 = 0.5 * (X.b + X.c).real();
  r.x2 = 0.5 * (X.c - X.b).imag();
  return r;
}

inline Mat2 from_pauli(const Vec4& x) {
  return {cplx(x.x0 + x.x3, 0.0), cplx(x.x1, -x.x2),
          cplx(x.x1, x.x2), cplx(x.x0 - x.x3, 0.0)};
}

// Hermitian positive matrix with det 1: a point of H^3.
class H3Point {
 public:
  explicit H3Point(const Mat2& X, double tol = 1e-7) : X_(X) {
    if (!is_hermitian(X, tol))
      throw input_error("H3Point: matrix is not Hermitian");
    if (std::abs(X.det() - 1.0) > tol * (1.0 + X.frob()))
      throw input_error("H3Point: determinant is not 1");
    if (X.tr().real() <= 0.0)
      throw input_error("H3Point: matrix is not positive definite");
    // Re-symmetrize so later arithmetic sees an exactly Hermitian matrix.
    X_ = (X + X.star()) * 0.5;
  }

  const Mat2& matrix() const { return X_; }

  Vec4 hyperboloid() const { return pauli_components(X_); }

  std::array<double, 3> ball() const {
    const Vec4 h = hyperboloid();
    const double s = 1.0 / (1.0 + h.x0);
    return {h.x1 * s, h.x2 * s, h.x3 * s};
  }

 private:
  Mat2 X_;
};

inline H3Point h3_from_hyperboloid(const Vec4& x) {
  return H3Point(from_pauli(x));
}

// (hyperboloid 4-vector, Poincare-ball 3-vector) of a point.
inline std::pair<Vec4, std::array<double, 3>> h3_coordinates(const H3Point& p) {
  return {p.hyperboloid(), p.ball()};
}

// Geodesic distance; cosh d = <x,y> with the Minkowski pairing, which for
// unimodular Hermitian matrices is (1/2) tr(X adj(Y)).
inline double h3_distance(const H3Point& X, const H3Point& Y) {
  const double c = 0.5 * (X.matrix() * Y.matrix().adjugate()).tr().real();
  return std::acosh(std::max(1.0, c));
}

}  // namespace fingap
