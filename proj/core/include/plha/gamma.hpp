// Representation descriptors for GL(1), GL(2), GL(3) (principal series and
// dihedral) with their local L-factors and gamma factors as rational
// functions of X = q^{-s}. Gamma factors follow the functional-equation
// convention Z(1-s, inverse-Fourier(Phi), chi^{-1}) = gamma(s, chi, psi) Z(s, Phi, chi)
// with the self-dual measure and conductor-O psi fixed in field.hpp.
#pragma once

#include <memory>

#include "plha/ext.hpp"
#include "plha/laurent.hpp"

namespace plha {

// Tate gamma factor of a quasi-character of F^x; delta_unit twists psi by a
// unit (psi^{-1} corresponds to delta = -1).
inline LaurentRational tate_gamma(const FieldDesc& F, const QuasiCharacter& chi,
                                  std::int64_t delta_unit = 1) {
  double q = static_cast<double>(F.p);
  const Cx z = chi.z;
  if (chi.xi.is_trivial()) {
    // (1 - zX) / (1 - z^{-1} q^{-1} X^{-1}) = -zq X (1 - zX) / (1 - zqX).
    LaurentRational g = LaurentRational::geometric(-z * q, 1, z * q, 1);
    g = g * (LaurentRational::constant(Cx(1, 0)) - LaurentRational::monomial(z, 1));
    return g;
  }
  int c = chi.xi.c;
  std::int64_t pc = F.pk(c);
  Cx G = 0.0;
  UnitCharacter xii = chi.xi.inverse();
  for (std::int64_t w = 1; w < pc; ++w) {
    if (w % F.p == 0) continue;
    // psi(-delta * w / p^c); the delta-dependence of the twisted transform is
    // entirely inside this sum (substituting w -> delta w gives xi(delta) times
    // the untwisted sum).
    G += xii.eval_unit(w) * unit_root(-mulmod(delta_unit % pc, w, pc), pc);
  }
  return LaurentRational::monomial(std::pow(z, c) * G, c);
}

// Tate gamma over the unramified quadratic extension E, re-expressed in the
// base variable X via X_E = X^2 (conductor exponent of eta at most 1).
inline LaurentRational tate_gamma_ext(const ExtField& E, const ExtCharacter& eta,
                                      std::int64_t delta_unit = 1) {
  double qE = static_cast<double>(E.q());
  const Cx z = eta.z;
  if (eta.c == 0) {
    // (1 - z X_E) / (1 - z^{-1} qE^{-1} X_E^{-1}) with X_E = X^2,
    // every quadratic 1 - B X^2 kept factored as (1 - bX)(1 + bX).
    auto quad = [](Cx B) {
      Cx b = std::sqrt(B);
      LaurentRational f = LaurentRational::constant(Cx(1, 0)) - LaurentRational::monomial(b, 1);
      return f * (LaurentRational::constant(Cx(1, 0)) + LaurentRational::monomial(b, 1));
    };
    Cx bden = std::sqrt(z * qE);
    LaurentRational g = LaurentRational::geometric(-z * qE, 2, bden, 1) *
                        LaurentRational::geometric(Cx(1, 0), 0, -bden, 1);
    return g * quad(z);
  }
  assert(eta.c == 1);
  std::int64_t p = E.F.p;
  Cx G = 0.0;
  ExtCharacter etai = eta.inverse(E);
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b) {
      if (a == 0 && b == 0) continue;
      // psi_E(-delta w / p) = psi(-2 a delta / p) for w = (a, b).
      G += etai.eval_residue(a, b) * unit_root(-2 * a * delta_unit, p);
    }
  return LaurentRational::monomial(z * G, 2);  // X_E^1 = X^2
}

// Weil index lambda(E/F, psi_delta) for unramified E: equals eta_E(delta),
// the unramified quadratic character at delta (1 for the base psi).
inline Cx weil_index(const ExtField& E, const Padic& delta) {
  (void)E;
  if (delta.is_zero()) throw std::domain_error("weil_index: zero twist");
  return (delta.val() % 2 == 0) ? Cx(1, 0) : Cx(-1, 0);
}
inline Cx weil_index(const ExtField& E) { return Cx(1, 0); }

struct RepDescriptor {
  enum class Kind { GL1, PS2, PS3, Dihedral, Induced3 };
  Kind kind = Kind::GL1;
  FieldDesc F;
  std::vector<QuasiCharacter> mu;       // principal-series data
  std::shared_ptr<ExtField> E;          // dihedral
  ExtCharacter eta;                     // dihedral
  std::shared_ptr<RepDescriptor> sub;   // Induced3: the GL(2) factor
  QuasiCharacter mu3;                   // Induced3: the GL(1) factor

  static RepDescriptor gl1(const FieldDesc& F, QuasiCharacter chi) {
    RepDescriptor r;
    r.kind = Kind::GL1;
    r.F = F;
    r.mu = {chi};
    return r;
  }
  static RepDescriptor ps2(const FieldDesc& F, QuasiCharacter m1, QuasiCharacter m2) {
    RepDescriptor r;
    r.kind = Kind::PS2;
    r.F = F;
    r.mu = {m1, m2};
    return r;
  }
  static RepDescriptor ps3(const FieldDesc& F, QuasiCharacter m1, QuasiCharacter m2,
                           QuasiCharacter m3) {
    RepDescriptor r;
    r.kind = Kind::PS3;
    r.F = F;
    r.mu = {m1, m2, m3};
    return r;
  }
  static RepDescriptor dihedral(const FieldDesc& F, ExtCharacter eta_) {
    RepDescriptor r;
    r.kind = Kind::Dihedral;
    r.F = F;
    r.E = std::make_shared<ExtField>(F);
    r.eta = eta_;
    if (!eta_.is_regular(*r.E))
      throw std::domain_error("dihedral: character factors through the norm (not regular)");
    return r;
  }
  static RepDescriptor induced3(RepDescriptor pi2, QuasiCharacter chi) {
    RepDescriptor r;
    r.kind = Kind::Induced3;
    r.F = pi2.F;
    r.sub = std::make_shared<RepDescriptor>(std::move(pi2));
    r.mu3 = chi;
    return r;
  }

  int rank() const {
    switch (kind) {
      case Kind::GL1: return 1;
      case Kind::PS2:
      case Kind::Dihedral: return 2;
      default: return 3;
    }
  }

  QuasiCharacter central_character() const {
    switch (kind) {
      case Kind::GL1: return mu[0];
      case Kind::PS2: return mu[0] * mu[1];
      case Kind::PS3: return mu[0] * mu[1] * mu[2];
      case Kind::Dihedral: {
        // eta restricted to F^x times the quadratic class character of E/F.
        QuasiCharacter r = eta.restrict_to_base(*E);
        return r * QuasiCharacter::unramified_quadratic(F.p);
      }
      case Kind::Induced3: return sub->central_character() * mu3;
    }
    throw std::logic_error("unreachable");
  }

  // The twist rep (x) (chi o det).
  RepDescriptor twist(const QuasiCharacter& chi) const {
    RepDescriptor r = *this;
    switch (kind) {
      case Kind::GL1:
      case Kind::PS2:
      case Kind::PS3:
        for (auto& m : r.mu) m = m * chi;
        break;
      case Kind::Dihedral:
        r.eta = mul_norm_pullback(*E, eta, chi);
        break;
      case Kind::Induced3:
        r.sub = std::make_shared<RepDescriptor>(sub->twist(chi));
        r.mu3 = mu3 * chi;
        break;
    }
    return r;
  }

  RepDescriptor contragredient() const {
    RepDescriptor r = *this;
    switch (kind) {
      case Kind::GL1:
      case Kind::PS2:
      case Kind::PS3:
        for (auto& m : r.mu) m = m.inverse();
        break;
      case Kind::Dihedral:
        r.eta = eta.inverse(*E);
        break;
      case Kind::Induced3:
        r.sub = std::make_shared<RepDescriptor>(sub->contragredient());
        r.mu3 = mu3.inverse();
        break;
    }
    return r;
  }
};

// Local L-factor L(s, rep x twist) as a factored rational function of X.
inline LaurentRational l_factor(const RepDescriptor& rep, const QuasiCharacter& twist) {
  const FieldDesc& F = rep.F;
  switch (rep.kind) {
    case RepDescriptor::Kind::GL1: {
      QuasiCharacter chi = rep.mu[0] * twist;
      if (!chi.is_unramified()) return LaurentRational::constant(Cx(1, 0));
      return LaurentRational::geometric(Cx(1, 0), 0, chi.z, 1);
    }
    case RepDescriptor::Kind::PS2:
    case RepDescriptor::Kind::PS3: {
      LaurentRational L = LaurentRational::constant(Cx(1, 0));
      for (const auto& m : rep.mu) L = L * l_factor(RepDescriptor::gl1(F, m), twist);
      return L;
    }
    case RepDescriptor::Kind::Dihedral: {
      // For twists of conductor >= 2 the combined character eta * (twist o Nr)
      // is ramified (eta has conductor <= 1), so the L-factor is 1.
      if (twist.xi.c > 1) return LaurentRational::constant(Cx(1, 0));
      ExtCharacter comb = mul_norm_pullback(*rep.E, rep.eta, twist);
      if (comb.c != 0) return LaurentRational::constant(Cx(1, 0));
      // 1 / (1 - z X_E) with X_E = X^2, factored.
      Cx b = std::sqrt(comb.z);
      return LaurentRational::geometric(Cx(1, 0), 0, b, 1) *
             LaurentRational::geometric(Cx(1, 0), 0, -b, 1);
    }
    case RepDescriptor::Kind::Induced3:
      return l_factor(*rep.sub, twist) * l_factor(RepDescriptor::gl1(F, rep.mu3), twist);
  }
  throw std::logic_error("unreachable");
}

// gamma(s, rep x twist, psi_delta) as a rational function of X.
inline LaurentRational rep_gamma(const RepDescriptor& rep, const QuasiCharacter& twist,
                                 std::int64_t delta_unit = 1) {
  const FieldDesc& F = rep.F;
  switch (rep.kind) {
    case RepDescriptor::Kind::GL1:
      return tate_gamma(F, rep.mu[0] * twist, delta_unit);
    case RepDescriptor::Kind::PS2:
    case RepDescriptor::Kind::PS3: {
      LaurentRational g = LaurentRational::constant(Cx(1, 0));
      for (const auto& m : rep.mu) g = g * tate_gamma(F, m * twist, delta_unit);
      return g;
    }
    case RepDescriptor::Kind::Dihedral: {
      // lambda(E/F, psi_delta) = 1 for unramified E and unit delta.
      if (twist.xi.c <= 1) {
        ExtCharacter comb = mul_norm_pullback(*rep.E, rep.eta, twist);
        return tate_gamma_ext(*rep.E, comb, delta_unit);
      }
      // Twist conductor c >= 2: Theta = eta * (twist o Nr) has conductor
      // exactly c over E (eta is shallower), and its gamma factor is the
      // Gauss sum over (O_E / P^c)^x in the pattern of tate_gamma, with
      // psi_E(w) = psi(2a) for w = a + b sqrt(rho) and X_E = X^2.
      const ExtField& E = *rep.E;
      int c = twist.xi.c;
      std::int64_t pm = F.pk(c);
      ExtCharacter etai = rep.eta.inverse(E);
      UnitCharacter xii = twist.xi.inverse();
      std::int64_t d = ((-2 * delta_unit) % pm + pm) % pm;
      Cx G = 0.0;
      for (std::int64_t a = 0; a < pm; ++a)
        for (std::int64_t b = 0; b < pm; ++b) {
          if (a % F.p == 0 && b % F.p == 0) continue;
          std::int64_t nr = (mulmod(a, a, pm) - mulmod(E.rho, mulmod(b, b, pm), pm)) % pm;
          if (nr < 0) nr += pm;
          G += etai.eval_residue(a % F.p, b % F.p) * xii.eval_unit(nr) *
               unit_root(mulmod(d, a, pm), pm);
        }
      Cx zTheta = rep.eta.z * twist.z * twist.z;  // Theta(p) = eta(p) twist(p)^2
      return LaurentRational::monomial(std::pow(zTheta, c) * G, 2 * c);
    }
    case RepDescriptor::Kind::Induced3:
      return rep_gamma(*rep.sub, twist, delta_unit) *
             tate_gamma(F, rep.mu3 * twist, delta_unit);
  }
  throw std::logic_error("unreachable");
}

}  // namespace plha
