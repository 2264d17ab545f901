#pragma once

// Scalar fields on domains of the Heisenberg group and the left-invariant
// frame (Z, Zbar, T):
//
//   Z    = d/dz    + i conj(z) d/dt
//   Zbar = d/dzbar - i z d/dt
//   T    = d/dt
//
// with d/dz = (d/dx - i d/dy)/2. The frame satisfies [Zbar, Z] = 2iT.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "hckit/errors.hpp"
#include "hckit/heisenberg.hpp"
#include "hckit/jet.hpp"

namespace hckit {

/// Coordinate functions of a point, as jets (or plain doubles).
template <class J>
struct Coords {
  J x, y, t;

  auto z() const { return x + kI * y; }
  auto zbar() const { return x - kI * y; }
  /// |z|^2
  J abs2() const { return x * x + y * y; }
};

template <int K>
Coords<Jet<K>> seed(const HPoint& p) {
  return {Jet<K>::variable(0, p.x()), Jet<K>::variable(1, p.y()), Jet<K>::variable(2, p.t)};
}

// -- frame applied to jets -----------------------------------------------------

template <int N>
Jet<N - 1> apply_Z(const Jet<N>& f, const HPoint& p) {
  const Jet<N - 1> zbar = Jet<N - 1>::variable(0, p.x()) - kI * Jet<N - 1>::variable(1, p.y());
  return 0.5 * (diff(f, 0) - kI * diff(f, 1)) + kI * zbar * diff(f, 2);
}

template <int N>
Jet<N - 1> apply_Zbar(const Jet<N>& f, const HPoint& p) {
  const Jet<N - 1> z = Jet<N - 1>::variable(0, p.x()) + kI * Jet<N - 1>::variable(1, p.y());
  return 0.5 * (diff(f, 0) + kI * diff(f, 1)) - kI * z * diff(f, 2);
}

template <int N>
Jet<N - 1> apply_T(const Jet<N>& f, const HPoint&) {
  return diff(f, 2);
}

using DomainPredicate = std::function<bool(const HPoint&)>;

/// A smooth complex-valued function with exact jets up to kMaxOrder.
///
/// Fields are immutable and cheap to copy (the evaluators are shared).
class ScalarField {
  template <int K>
  using Eval = std::function<Jet<K>(const HPoint&)>;

  template <class Seq>
  struct EvalTuple;
  template <int... Ks>
  struct EvalTuple<std::integer_sequence<int, Ks...>> {
    using type = std::tuple<Eval<Ks>...>;
  };
  using Evals = typename EvalTuple<std::make_integer_sequence<int, kMaxOrder + 1>>::type;

 public:
  ScalarField() = default;

  /// Builds a field from a generic expression `expr(const Coords<J>&) -> J`,
  /// instantiated for every jet order.
  template <class Expr>
  static ScalarField expression(std::string name, Expr expr, DomainPredicate domain = {}) {
    return generated(
        std::move(name),
        [expr](auto order, const HPoint& p) {
          constexpr int K = decltype(order)::value;
          return Jet<K>(expr(seed<K>(p)));
        },
        std::move(domain));
  }

  /// Builds a field from `gen(std::integral_constant<int, K>, const HPoint&) -> Jet<K>`.
  template <class Gen>
  static ScalarField generated(std::string name, Gen gen, DomainPredicate domain = {}) {
    ScalarField f;
    f.name_ = std::move(name);
    f.domain_ = std::move(domain);
    f.evals_ = std::make_shared<Evals>(
        make_evals(gen, std::make_integer_sequence<int, kMaxOrder + 1>{}));
    return f;
  }

  static ScalarField constant(cplx c, std::string name = {}) {
    if (name.empty()) name = "const";
    return generated(std::move(name), [c](auto order, const HPoint&) {
      return Jet<decltype(order)::value>(c);
    });
  }

  template <int K>
  Jet<K> jet(const HPoint& p) const {
    static_assert(K >= 0 && K <= kMaxOrder);
    return std::get<K>(*evals_)(p);
  }

  cplx operator()(const HPoint& p) const { return jet<0>(p).value(); }

  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(evals_); }
  bool has_domain() const { return static_cast<bool>(domain_); }
  bool in_domain(const HPoint& p) const { return !domain_ || domain_(p); }
  const DomainPredicate& domain() const { return domain_; }

  void require_in_domain(const HPoint& p) const {
    if (!in_domain(p))
      fail(ErrorKind::kDomainError, "point outside the domain of field '" + name_ + "'");
  }

  ScalarField renamed(std::string name) const {
    ScalarField f = *this;
    f.name_ = std::move(name);
    return f;
  }

 private:
  template <class Gen, int... Ks>
  static Evals make_evals(const Gen& gen, std::integer_sequence<int, Ks...>) {
    return Evals{Eval<Ks>([gen](const HPoint& p) {
      return gen(std::integral_constant<int, Ks>{}, p);
    })...};
  }

  std::string name_;
  DomainPredicate domain_;
  std::shared_ptr<const Evals> evals_;
};

/// Evaluates `f` at order K + Extra and hands the jet to `op`, which must drop
/// exactly `Extra` orders. Orders beyond kMaxOrder raise OrderExceeded.
template <int Extra, int K, class Op>
auto lift_order(const ScalarField& f, const HPoint& p, Op op) -> Jet<K> {
  if constexpr (K + Extra <= kMaxOrder) {
    return op(f.template jet<K + Extra>(p));
  } else {
    (void)f;
    (void)p;
    (void)op;
    fail(ErrorKind::kOrderExceeded, "jet order " + std::to_string(K + Extra) + " exceeds kMaxOrder");
  }
}

// -- pointwise evaluation of the frame -----------------------------------------

inline cplx eval_Z(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Z(f.jet<1>(p), p).value();
}
inline cplx eval_Zbar(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Zbar(f.jet<1>(p), p).value();
}
inline cplx eval_T(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_T(f.jet<1>(p), p).value();
}
/// Z(Zbar f)
inline cplx eval_ZZbar(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Z(apply_Zbar(f.jet<2>(p), p), p).value();
}
/// Zbar(Z f)
inline cplx eval_ZbarZ(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Zbar(apply_Z(f.jet<2>(p), p), p).value();
}
inline cplx eval_Z2(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Z(apply_Z(f.jet<2>(p), p), p).value();
}
inline cplx eval_Zbar2(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Zbar(apply_Zbar(f.jet<2>(p), p), p).value();
}
inline cplx eval_ZT(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Z(apply_T(f.jet<2>(p), p), p).value();
}
inline cplx eval_ZbarT(const ScalarField& f, const HPoint& p) {
  f.require_in_domain(p);
  return apply_Zbar(apply_T(f.jet<2>(p), p), p).value();
}

/// Zbar f(p); zero exactly when f satisfies the tangential CR equation at p.
inline cplx cr_defect(const ScalarField& f, const HPoint& p) { return eval_Zbar(f, p); }

// -- derived fields ----------------------------------------------------------------

inline ScalarField Z(const ScalarField& f) {
  return ScalarField::generated("Z(" + f.name() + ")", [f](auto order, const HPoint& p) {
    return lift_order<1, decltype(order)::value>(f, p, [&](const auto& j) { return apply_Z(j, p); });
  }, f.domain());
}

inline ScalarField Zbar(const ScalarField& f) {
  return ScalarField::generated("Zbar(" + f.name() + ")", [f](auto order, const HPoint& p) {
    return lift_order<1, decltype(order)::value>(f, p, [&](const auto& j) { return apply_Zbar(j, p); });
  }, f.domain());
}

inline ScalarField T(const ScalarField& f) {
  return ScalarField::generated("T(" + f.name() + ")", [f](auto order, const HPoint& p) {
    return lift_order<1, decltype(order)::value>(f, p, [&](const auto& j) { return apply_T(j, p); });
  }, f.domain());
}

inline ScalarField conj(const ScalarField& f) {
  return ScalarField::generated("conj(" + f.name() + ")", [f](auto order, const HPoint& p) {
    return conj(f.template jet<decltype(order)::value>(p));
  }, f.domain());
}

namespace detail {
inline DomainPredicate both(const DomainPredicate& a, const DomainPredicate& b) {
  if (!a) return b;
  if (!b) return a;
  return [a, b](const HPoint& p) { return a(p) && b(p); };
}
}  // namespace detail

inline ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  return ScalarField::generated("(" + f.name() + "+" + g.name() + ")", [f, g](auto order, const HPoint& p) {
    constexpr int K = decltype(order)::value;
    return f.template jet<K>(p) + g.template jet<K>(p);
  }, detail::both(f.domain(), g.domain()));
}

inline ScalarField operator-(const ScalarField& f, const ScalarField& g) {
  return ScalarField::generated("(" + f.name() + "-" + g.name() + ")", [f, g](auto order, const HPoint& p) {
    constexpr int K = decltype(order)::value;
    return f.template jet<K>(p) - g.template jet<K>(p);
  }, detail::both(f.domain(), g.domain()));
}

inline ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  return ScalarField::generated("(" + f.name() + "*" + g.name() + ")", [f, g](auto order, const HPoint& p) {
    constexpr int K = decltype(order)::value;
    return f.template jet<K>(p) * g.template jet<K>(p);
  }, detail::both(f.domain(), g.domain()));
}

inline ScalarField operator*(cplx c, const ScalarField& f) {
  return ScalarField::generated(f.name(), [c, f](auto order, const HPoint& p) {
    return f.template jet<decltype(order)::value>(p) * c;
  }, f.domain());
}

inline ScalarField operator-(const ScalarField& f) { return cplx(-1.0) * f; }

inline ScalarField operator*(const ScalarField& f, cplx c) { return c * f; }

/// outer o (inner_z, inner_t), where inner_z is the complex coordinate and
/// inner_t the real vertical coordinate of a map into the Heisenberg group.
inline ScalarField compose(const ScalarField& outer, const ScalarField& inner_z, const ScalarField& inner_t) {
  return ScalarField::generated(
      outer.name() + "o(" + inner_z.name() + "," + inner_t.name() + ")",
      [outer, inner_z, inner_t](auto order, const HPoint& p) {
        constexpr int K = decltype(order)::value;
        const Jet<K> w = inner_z.template jet<K>(p);
        const Jet<K> s = real(inner_t.template jet<K>(p));
        const HPoint image{w.value(), s.value().real()};
        return compose(outer.template jet<K>(image), std::array<Jet<K>, 3>{real(w), imag(w), s});
      },
      inner_z.domain());
}

// -- polynomials in (z, zbar, t) ----------------------------------------------------

struct Monomial {
  cplx coeff;
  int z = 0;
  int zbar = 0;
  int t = 0;
};

using Polynomial = std::vector<Monomial>;

template <class J>
auto evaluate_polynomial(const Polynomial& poly, const Coords<J>& c) {
  using R = decltype(c.z());
  R z = c.z(), zb = c.zbar(), t = c.t * cplx(1.0);
  R sum = z * cplx(0.0);
  auto power = [](const R& base, int n) {
    R r = base * cplx(0.0) + cplx(1.0);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
  };
  for (const auto& m : poly) sum = sum + power(z, m.z) * power(zb, m.zbar) * power(t, m.t) * m.coeff;
  return sum;
}

inline ScalarField polynomial_field(const Polynomial& poly, std::string name = "poly") {
  return ScalarField::expression(std::move(name), [poly](const auto& c) { return evaluate_polynomial(poly, c); });
}

// -- named fields ---------------------------------------------------------------------

inline ScalarField field_z() {
  return ScalarField::expression("z", [](const auto& c) { return c.z(); });
}
inline ScalarField field_zbar() {
  return ScalarField::expression("zbar", [](const auto& c) { return c.zbar(); });
}
inline ScalarField field_t() {
  return ScalarField::expression("t", [](const auto& c) { return c.t * cplx(1.0); });
}
/// Pi = t + i |z|^2, a CR function.
inline ScalarField field_pi() {
  return ScalarField::expression("Pi", [](const auto& c) { return c.t + kI * c.abs2(); });
}

}  // namespace hckit
