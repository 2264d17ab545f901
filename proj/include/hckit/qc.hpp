#pragma once

// Contact maps of the Heisenberg group, their Beltrami coefficient and
// distortion, and densities.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hckit/domain.hpp"
#include "hckit/errors.hpp"
#include "hckit/field.hpp"
#include "hckit/parallel.hpp"

namespace hckit {

/// f = (f1, f2) with f1 complex and f2 real valued.
struct ContactMap {
  std::string name;
  ScalarField f1;
  ScalarField f2;
  std::shared_ptr<const ContactMap> inverse;

  HPoint operator()(const HPoint& p) const { return {f1(p), f2(p).real()}; }
  bool in_domain(const HPoint& p) const { return f1.in_domain(p); }
};

inline ContactMap identity_map() {
  ContactMap id{"identity", field_z(), field_t(), nullptr};
  id.inverse = std::make_shared<ContactMap>(id);
  return id;
}

/// g o h
inline ContactMap compose(const ContactMap& g, const ContactMap& h) {
  ContactMap m{g.name + "o" + h.name, compose(g.f1, h.f1, h.f2), compose(g.f2, h.f1, h.f2), nullptr};
  if (g.inverse && h.inverse) {
    ContactMap inv{"(" + m.name + ")^-1", compose(h.inverse->f1, g.inverse->f1, g.inverse->f2),
                   compose(h.inverse->f2, g.inverse->f1, g.inverse->f2), nullptr};
    m.inverse = std::make_shared<ContactMap>(inv);
  }
  return m;
}

/// Frame derivatives of f1 and f2 at a point.
struct MapDerivatives {
  cplx f1, Zf1, Zbarf1, Tf1;
  cplx f2, Zf2, Zbarf2, Tf2;
};

inline MapDerivatives derivatives(const ContactMap& f, const HPoint& p) {
  const Jet<1> a = f.f1.jet<1>(p), b = f.f2.jet<1>(p);
  return {a.value(), apply_Z(a, p).value(), apply_Zbar(a, p).value(), apply_T(a, p).value(),
          b.value(), apply_Z(b, p).value(), apply_Zbar(b, p).value(), apply_T(b, p).value()};
}

/// (f*w)(Z), (f*w)(Zbar) and lambda = (f*w)(T) for f*w = df2 - i conj(f1) df1 + i f1 d conj(f1).
struct ContactDefect {
  cplx on_Z;
  cplx on_Zbar;
  cplx lambda;

  double norm() const { return std::max(std::abs(on_Z), std::abs(on_Zbar)); }
};

inline ContactDefect contact_defect(const ContactMap& f, const HPoint& p) {
  const MapDerivatives d = derivatives(f, p);
  const cplx f1b = std::conj(d.f1);
  // V(conj f1) = conj(Vbar f1)
  auto pull = [&](cplx vf2, cplx vf1, cplx vbar_f1) { return vf2 - kI * f1b * vf1 + kI * d.f1 * std::conj(vbar_f1); };
  return {pull(d.Zf2, d.Zf1, d.Zbarf1), pull(d.Zbarf2, d.Zbarf1, d.Zf1), pull(d.Tf2, d.Tf1, d.Tf1)};
}

inline constexpr double kDerivativeFloor = 1e-12;

struct Beltrami {
  cplx mu;
  /// |Zbar g - mu Z g| for g = f2 + i|f1|^2.
  double second_equation_defect;
};

inline Beltrami beltrami(const ContactMap& f, const HPoint& p) {
  const MapDerivatives d = derivatives(f, p);
  if (std::abs(d.Zf1) < kDerivativeFloor) fail(ErrorKind::kDegenerateDerivative, "Z f1 vanishes");
  const cplx mu = d.Zbarf1 / d.Zf1;
  // Z|f1|^2 = conj(f1) Z f1 + f1 conj(Zbar f1)
  const cplx Zg = d.Zf2 + kI * (std::conj(d.f1) * d.Zf1 + d.f1 * std::conj(d.Zbarf1));
  const cplx Zbarg = d.Zbarf2 + kI * (std::conj(d.f1) * d.Zbarf1 + d.f1 * std::conj(d.Zf1));
  return {mu, std::abs(Zbarg - mu * Zg)};
}

/// K(p, f) = (|Z f1| + |Zbar f1|) / (|Z f1| - |Zbar f1|).
inline double distortion(const ContactMap& f, const HPoint& p) {
  const MapDerivatives d = derivatives(f, p);
  const double a = std::abs(d.Zf1), b = std::abs(d.Zbarf1);
  if (a < kDerivativeFloor || b >= a)
    fail(ErrorKind::kDegenerateDerivative,
         "|Zbar f1| >= |Z f1| at (" + std::to_string(p.x()) + "," + std::to_string(p.y()) + "," + std::to_string(p.t) + ")");
  return (a + b) / (a - b);
}

struct MaxDistortion {
  double K = 1.0;
  HPoint at;
  std::size_t samples = 0;
};

/// Max of K over the given points (a lower bound for the essential sup).
inline MaxDistortion max_distortion(const ContactMap& f, const std::vector<HPoint>& points) {
  const auto Ks = parallel_map<double>(points.size(), [&](std::size_t i) { return distortion(f, points[i]); });
  MaxDistortion r;
  r.samples = points.size();
  for (std::size_t i = 0; i < Ks.size(); ++i)
    if (Ks[i] > r.K || i == 0) {
      r.K = Ks[i];
      r.at = points[i];
    }
  return r;
}

/// Default sampler: n^3 grid plus `random` uniform points of the domain box.
inline std::vector<HPoint> distortion_samples(const NamedDomain& domain, std::mt19937_64& rng, int grid = 64,
                                              std::size_t random = 10000) {
  std::vector<HPoint> pts = domain.grid(grid);
  const auto extra = domain.random(random, rng);
  pts.insert(pts.end(), extra.begin(), extra.end());
  return pts;
}

// -- densities ------------------------------------------------------------------------

struct Density {
  std::string name;
  ScalarField rho;

  double operator()(const HPoint& p) const { return rho.jet<0>(p).value().real(); }

  Density scaled(double c) const { return {std::to_string(c) + "*" + name, cplx(c) * rho}; }
};

inline Density constant_density(double c, std::string name = "const") {
  return {std::move(name), ScalarField::constant(c)};
}

/// int K(p,f)^2 rho^4 dL^3 over the domain.
inline double mean_distortion(const ContactMap& f, const Density& rho, const NamedDomain& domain, QuadOptions opt = {}) {
  return domain.integrate(
      [&](const HPoint& p) {
        const double r = rho(p);
        if (r == 0.0) return 0.0;
        const double K = distortion(f, p);
        return K * K * r * r * r * r;
      },
      opt);
}

}  // namespace hckit
