#pragma once

// Truncated multivariate Taylor jets in the real coordinates (x, y, t) with
// complex coefficients. A Jet<N> at a point p stores the Taylor polynomial of
// a smooth function up to total degree N in the displacement (dx, dy, dt).
// Arithmetic and elementary functions propagate exactly (up to roundoff), so
// every derivative appearing in the Wirtinger operators Z, Zbar, T is exact.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace hckit {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Highest jet order carried by type-erased fields.
inline constexpr int kMaxOrder = 4;

namespace detail {

constexpr int monomial_count(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) * (n + 3) / 6; }

// Monomials ordered by total degree, then by descending x and y exponents.
// The ordering of degree <= M entries does not depend on N, so truncation is
// a prefix copy.
template <int N>
struct Monomials {
  static constexpr int kSize = monomial_count(N);
  static constexpr int kSide = N + 1;
  std::array<std::array<int, 3>, kSize> exps{};
  std::array<int, kSide * kSide * kSide> index{};

  constexpr Monomials() {
    for (auto& v : index) v = -1;
    int k = 0;
    for (int d = 0; d <= N; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          exps[k] = {a, b, c};
          index[(a * kSide + b) * kSide + c] = k;
          ++k;
        }
  }

  constexpr int find(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0 || a + b + c > N) return -1;
    return index[(a * kSide + b) * kSide + c];
  }

  constexpr int degree(int k) const { return exps[k][0] + exps[k][1] + exps[k][2]; }
};

template <int N>
inline constexpr Monomials<N> kMonomials{};

template <int N>
constexpr int product_term_count() {
  int n = 0;
  for (int i = 0; i < monomial_count(N); ++i)
    for (int j = 0; j < monomial_count(N); ++j)
      if (kMonomials<N>.degree(i) + kMonomials<N>.degree(j) <= N) ++n;
  return n;
}

// (i, j, k): coefficient i times coefficient j contributes to coefficient k.
template <int N>
struct ProductTable {
  std::array<std::array<int, 3>, product_term_count<N>()> terms{};
  constexpr ProductTable() {
    const auto& m = kMonomials<N>;
    int n = 0;
    for (int i = 0; i < monomial_count(N); ++i)
      for (int j = 0; j < monomial_count(N); ++j)
        if (m.degree(i) + m.degree(j) <= N) {
          terms[n++] = {i, j,
                        m.find(m.exps[i][0] + m.exps[j][0], m.exps[i][1] + m.exps[j][1],
                               m.exps[i][2] + m.exps[j][2])};
        }
  }
};

template <int N>
inline constexpr ProductTable<N> kProducts{};

constexpr double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

template <int N>
class Jet {
  static_assert(N >= 0 && N <= 8, "unsupported jet order");

 public:
  static constexpr int kOrder = N;
  static constexpr int kSize = detail::monomial_count(N);

  constexpr Jet() : c_{} {}
  explicit Jet(cplx value) : c_{} { c_[0] = value; }
  explicit Jet(double value) : Jet(cplx(value)) {}

  /// The coordinate function `axis` (0 = x, 1 = y, 2 = t) evaluated at `at`.
  static Jet variable(int axis, double at) {
    Jet j(at);
    if constexpr (N >= 1) j.c_[1 + axis] = 1.0;
    return j;
  }

  cplx value() const { return c_[0]; }

  cplx& operator[](int k) { return c_[k]; }
  const cplx& operator[](int k) const { return c_[k]; }

  static constexpr const std::array<int, 3>& exponents(int k) {
    return detail::kMonomials<N>.exps[k];
  }

  /// Taylor coefficient of dx^a dy^b dt^c (zero above the truncation order).
  cplx coeff(int a, int b, int c) const {
    const int k = detail::kMonomials<N>.find(a, b, c);
    return k < 0 ? cplx{} : c_[k];
  }

  /// Mixed partial derivative d^(a+b+c) / dx^a dy^b dt^c at the base point.
  cplx partial(int a, int b, int c) const {
    return coeff(a, b, c) * detail::factorial(a) * detail::factorial(b) * detail::factorial(c);
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& [i, j, k] : detail::kProducts<N>.terms) r.c_[k] += a.c_[i] * b.c_[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(Jet a, cplx s) { a.c_[0] += s; return a; }
  friend Jet operator+(cplx s, Jet a) { a.c_[0] += s; return a; }
  friend Jet operator+(Jet a, double s) { a.c_[0] += s; return a; }
  friend Jet operator+(double s, Jet a) { a.c_[0] += s; return a; }
  friend Jet operator-(Jet a, cplx s) { a.c_[0] -= s; return a; }
  friend Jet operator-(cplx s, const Jet& a) { return (-a) + s; }
  friend Jet operator-(Jet a, double s) { a.c_[0] -= s; return a; }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, cplx s) { return a *= (1.0 / s); }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(cplx s, const Jet& a) { return reciprocal(a) * s; }
  friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

  /// h(f) given the derivatives h^(k)(f(p)), k = 0..N.
  static Jet compose_univariate(const Jet& f, const std::array<cplx, N + 1>& derivs) {
    Jet delta = f;
    delta.c_[0] = 0.0;
    Jet r(derivs[N] / detail::factorial(N));
    for (int k = N - 1; k >= 0; --k) {
      r = r * delta;
      r.c_[0] += derivs[k] / detail::factorial(k);
    }
    return r;
  }

  friend Jet reciprocal(const Jet& f) {
    const cplx inv = 1.0 / f.value();
    std::array<cplx, N + 1> d{};
    cplx p = inv;
    for (int k = 0; k <= N; ++k) {
      d[k] = ((k % 2) ? -1.0 : 1.0) * detail::factorial(k) * p;
      p *= inv;
    }
    return compose_univariate(f, d);
  }

 private:
  std::array<cplx, kSize> c_;
};

// -- elementary functions ----------------------------------------------------

template <int N>
Jet<N> exp(const Jet<N>& f) {
  std::array<cplx, N + 1> d;
  d.fill(std::exp(f.value()));
  return Jet<N>::compose_univariate(f, d);
}

template <int N>
Jet<N> log(const Jet<N>& f) {
  std::array<cplx, N + 1> d{};
  d[0] = std::log(f.value());
  const cplx inv = 1.0 / f.value();
  cplx p = inv;
  for (int k = 1; k <= N; ++k) {
    d[k] = ((k % 2) ? 1.0 : -1.0) * detail::factorial(k - 1) * p;
    p *= inv;
  }
  return Jet<N>::compose_univariate(f, d);
}

/// Principal-branch power with a real exponent.
template <int N>
Jet<N> pow(const Jet<N>& f, double alpha) {
  std::array<cplx, N + 1> d{};
  const cplx f0 = f.value();
  const cplx base = std::pow(f0, alpha);
  const cplx inv = 1.0 / f0;
  cplx falling = 1.0;
  cplx p = 1.0;
  for (int k = 0; k <= N; ++k) {
    d[k] = falling * base * p;
    falling *= (alpha - k);
    p *= inv;
  }
  return Jet<N>::compose_univariate(f, d);
}

template <int N>
Jet<N> sqrt(const Jet<N>& f) {
  return pow(f, 0.5);
}

template <int N>
Jet<N> sin(const Jet<N>& f) {
  const cplx s = std::sin(f.value()), c = std::cos(f.value());
  const std::array<cplx, 4> cycle{s, c, -s, -c};
  std::array<cplx, N + 1> d{};
  for (int k = 0; k <= N; ++k) d[k] = cycle[k % 4];
  return Jet<N>::compose_univariate(f, d);
}

template <int N>
Jet<N> cos(const Jet<N>& f) {
  const cplx s = std::sin(f.value()), c = std::cos(f.value());
  const std::array<cplx, 4> cycle{c, -s, -c, s};
  std::array<cplx, N + 1> d{};
  for (int k = 0; k <= N; ++k) d[k] = cycle[k % 4];
  return Jet<N>::compose_univariate(f, d);
}

template <int N>
Jet<N> tan(const Jet<N>& f) {
  return sin(f) / cos(f);
}

// atan(w) = (1/2i) [log(1 + iw) - log(1 - iw)], differentiated termwise.
template <int N>
Jet<N> atan(const Jet<N>& f) {
  const cplx w = f.value();
  std::array<cplx, N + 1> d{};
  d[0] = std::atan(w);
  const cplx a = 1.0 / (1.0 + kI * w), b = 1.0 / (1.0 - kI * w);
  cplx pa = kI * a, pb = -kI * b;
  for (int k = 1; k <= N; ++k) {
    const double sign = (k % 2) ? 1.0 : -1.0;
    d[k] = sign * detail::factorial(k - 1) * (pa - pb) / (2.0 * kI);
    pa *= kI * a;
    pb *= -kI * b;
  }
  return Jet<N>::compose_univariate(f, d);
}

/// atan2 of two real-valued jets; the constant term follows std::atan2, the
/// derivatives come from whichever quotient is well conditioned.
template <int N>
Jet<N> atan2(const Jet<N>& y, const Jet<N>& x) {
  const double y0 = y.value().real(), x0 = x.value().real();
  Jet<N> r = std::abs(x0) >= std::abs(y0) ? atan(y / x) : -atan(x / y);
  r[0] = std::atan2(y0, x0);
  return r;
}

template <int N>
Jet<N> conj(Jet<N> f) {
  for (int k = 0; k < Jet<N>::kSize; ++k) f[k] = std::conj(f[k]);
  return f;
}

template <int N>
Jet<N> real(Jet<N> f) {
  for (int k = 0; k < Jet<N>::kSize; ++k) f[k] = f[k].real();
  return f;
}

template <int N>
Jet<N> imag(Jet<N> f) {
  for (int k = 0; k < Jet<N>::kSize; ++k) f[k] = f[k].imag();
  return f;
}

/// |f|^2 as a real-valued jet.
template <int N>
Jet<N> norm(const Jet<N>& f) {
  return real(f * conj(f));
}

/// |f| for a real-valued jet whose value is nonzero.
template <int N>
Jet<N> abs_real(const Jet<N>& f) {
  return f.value().real() < 0.0 ? -f : f;
}

template <int N>
Jet<N> ipow(const Jet<N>& f, int n) {
  Jet<N> r(1.0);
  for (int i = 0; i < n; ++i) r = r * f;
  return r;
}

// -- structural operations ---------------------------------------------------

/// Partial derivative along `axis`; drops one order.
template <int N>
Jet<N - 1> diff(const Jet<N>& f, int axis) {
  static_assert(N >= 1);
  Jet<N - 1> r;
  for (int k = 0; k < Jet<N - 1>::kSize; ++k) {
    auto e = Jet<N - 1>::exponents(k);
    const double factor = e[axis] + 1;
    e[axis] += 1;
    r[k] = factor * f[detail::kMonomials<N>.find(e[0], e[1], e[2])];
  }
  return r;
}

template <int M, int N>
Jet<M> truncate(const Jet<N>& f) {
  static_assert(M <= N);
  Jet<M> r;
  for (int k = 0; k < Jet<M>::kSize; ++k) r[k] = f[k];
  return r;
}

/// Taylor composition: `outer` is a jet at the point (inner[0](p), inner[1](p),
/// inner[2](p)); the result is the jet of outer o inner at p. The inner jets
/// must be real-valued.
template <int N>
Jet<N> compose(const Jet<N>& outer, const std::array<Jet<N>, 3>& inner) {
  std::array<std::array<Jet<N>, N + 1>, 3> powers;
  for (int v = 0; v < 3; ++v) {
    Jet<N> delta = inner[v];
    delta[0] = 0.0;
    powers[v][0] = Jet<N>(1.0);
    for (int e = 1; e <= N; ++e) powers[v][e] = powers[v][e - 1] * delta;
  }
  Jet<N> r;
  for (int k = 0; k < Jet<N>::kSize; ++k) {
    if (outer[k] == cplx{}) continue;
    const auto& e = Jet<N>::exponents(k);
    r += (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]) * outer[k];
  }
  return r;
}

/// Second-order jet in the layout value / gradient / Hessian; the Hessian is
/// stored as (xx, xy, xt, yy, yt, tt).
struct Jet2 {
  cplx value;
  std::array<cplx, 3> grad;
  std::array<cplx, 6> hess;
};

template <int N>
Jet2 to_jet2(const Jet<N>& f) {
  static_assert(N >= 2);
  return Jet2{f.value(),
              {f.partial(1, 0, 0), f.partial(0, 1, 0), f.partial(0, 0, 1)},
              {f.partial(2, 0, 0), f.partial(1, 1, 0), f.partial(1, 0, 1), f.partial(0, 2, 0),
               f.partial(0, 1, 1), f.partial(0, 0, 2)}};
}

}  // namespace hckit
