// The unramified quadratic extension E = F(sqrt(rho)) of F = Q_p, rho the
// least quadratic non-residue mod p: exact arithmetic on a + b*sqrt(rho),
// Galois conjugation, norm and trace, the additive character psi o Tr,
// characters of E^x of conductor <= 1, and Haar averages over E-shells and
// over the norm-one subgroup E^1.
#pragma once

#include "plha/field.hpp"

namespace plha {

// Least quadratic non-residue unit mod p.
inline std::int64_t least_nonresidue(std::int64_t p) {
  for (std::int64_t r = 2; r < p; ++r)
    if (powmod(r, (p - 1) / 2, p) == p - 1) return r;
  throw std::logic_error("least_nonresidue: none found");
}

struct ExtField {
  FieldDesc F;
  std::int64_t rho;  // fixed non-residue; E = F(sqrt(rho))

  explicit ExtField(const FieldDesc& F_) : F(F_), rho(least_nonresidue(F_.p)) {}
  std::int64_t q() const { return F.p * F.p; }  // residue cardinality of E
};

// Element a + b*sqrt(rho) of E. The valuation of E extends that of F
// (E/F unramified, same uniformizer p).
struct EPadic {
  Padic a, b;

  static EPadic zero(const ExtField& E) { return {Padic::zero(E.F), Padic::zero(E.F)}; }
  static EPadic from_base(const Padic& x, const ExtField& E) { return {x, Padic::zero(E.F)}; }
  static EPadic make(const ExtField& E, const Padic& a, const Padic& b) { return {a, b}; }

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  std::int64_t val() const {
    assert(!is_zero());
    return std::min(val_or_inf(a), val_or_inf(b));
  }
  double abs_E() const {  // |x|_E = q_E^{-v(x)}
    if (is_zero()) return 0.0;
    return std::pow(static_cast<double>(a.is_zero() ? b.prime() : a.prime()),
                    -2.0 * static_cast<double>(val()));
  }
};

inline EPadic conj(const EPadic& x) { return {x.a, -x.b}; }
inline Padic trace(const EPadic& x) { return x.a + x.a; }

inline EPadic emul(const ExtField& E, const EPadic& x, const EPadic& y) {
  Padic rho = Padic::from_int(E.F, E.rho);
  return {x.a * y.a + rho * (x.b * y.b), x.a * y.b + x.b * y.a};
}
inline Padic norm(const ExtField& E, const EPadic& x) {
  return x.a * x.a - Padic::from_int(E.F, E.rho) * (x.b * x.b);
}
inline EPadic eadd(const EPadic& x, const EPadic& y) { return {x.a + y.a, x.b + y.b}; }
inline EPadic eneg(const EPadic& x) { return {-x.a, -x.b}; }
inline EPadic einv(const ExtField& E, const EPadic& x) {
  Padic n = norm(E, x);
  EPadic c = conj(x);
  return {c.a / n, c.b / n};
}
inline EPadic escale(const EPadic& x, const Padic& t) { return {x.a * t, x.b * t}; }

// psi_E = psi o Tr_{E/F}, conductor O_E for the base psi.
inline Cx psi_E(const AdditiveCharacter& psi, const EPadic& x) { return psi(trace(x)); }

// Multiplication of residue pairs (a,b) mod p^m representing a + b sqrt(rho).
inline std::pair<std::int64_t, std::int64_t> pair_mul(std::int64_t p, std::int64_t m,
                                                      std::int64_t rho,
                                                      std::pair<std::int64_t, std::int64_t> x,
                                                      std::pair<std::int64_t, std::int64_t> y) {
  std::int64_t a = (mulmod(x.first, y.first, m) + mulmod(rho, mulmod(x.second, y.second, m), m)) % m;
  std::int64_t b = (mulmod(x.first, y.second, m) + mulmod(x.second, y.first, m)) % m;
  (void)p;
  return {a, b};
}

// Discrete-log table for the residue field of E, k_E^x = F_{p^2}^x, realized
// as pairs (a, b) mod p with a fixed generator.
struct ExtResidueTable {
  std::int64_t p, rho;
  std::int64_t order;                         // p^2 - 1
  std::pair<std::int64_t, std::int64_t> gen;  // generator of k_E^x
  std::vector<std::int32_t> dlog;             // index a*p + b

  ExtResidueTable(std::int64_t p_, std::int64_t rho_) : p(p_), rho(rho_) {
    order = p * p - 1;
    dlog.assign(static_cast<size_t>(p * p), -1);
    // Find a generator by brute force over the p^2 - 1 units.
    for (std::int64_t a = 0; a < p && gen == std::pair<std::int64_t, std::int64_t>{0, 0}; ++a)
      for (std::int64_t b = 0; b < p; ++b) {
        if (a == 0 && b == 0) continue;
        if (element_order({a, b}) == order) {
          gen = {a, b};
          break;
        }
      }
    std::pair<std::int64_t, std::int64_t> x{1, 0};
    for (std::int64_t e = 0; e < order; ++e) {
      dlog[static_cast<size_t>(x.first * p + x.second)] = static_cast<std::int32_t>(e);
      x = pair_mul(p, p, rho, x, gen);
    }
  }

  std::int64_t element_order(std::pair<std::int64_t, std::int64_t> x) const {
    std::pair<std::int64_t, std::int64_t> y = x;
    std::int64_t e = 1;
    while (!(y.first == 1 && y.second == 0)) {
      y = pair_mul(p, p, rho, y, x);
      ++e;
      if (e > order) return -1;
    }
    return e;
  }

  static const ExtResidueTable& get(std::int64_t p, std::int64_t rho) {
    static std::map<std::pair<std::int64_t, std::int64_t>, std::unique_ptr<ExtResidueTable>> cache;
    auto key = std::make_pair(p, rho);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<ExtResidueTable>(p, rho)).first;
    return *it->second;
  }
};

// A quasi-character of E^x with conductor exponent <= 1:
// eta(x) = xi(residue of unit part) * z^{v_E(x)}, xi of order dividing p^2-1.
struct ExtCharacter {
  std::int64_t p = 3, rho = 2;
  int c = 0;           // conductor exponent: 0 (unramified) or 1
  std::int64_t k = 0;  // xi(gen) = e(k / (p^2-1))
  Cx z{1.0, 0.0};      // value at the uniformizer p

  ExtCharacter() = default;
  ExtCharacter(const ExtField& E, int c_, std::int64_t k_, Cx z_)
      : p(E.F.p), rho(E.rho), c(c_), k(k_), z(z_) {
    if (c == 1) {
      std::int64_t ord = p * p - 1;
      k %= ord;
      if (k < 0) k += ord;
      // Reduce to true conductor: trivial on the residue units iff k == 0.
      if (k == 0) c = 0;
    } else {
      k = 0;
    }
  }
  static ExtCharacter trivial(const ExtField& E) { return ExtCharacter(E, 0, 0, Cx(1, 0)); }

  Cx eval_residue(std::int64_t a, std::int64_t b) const {
    if (c == 0) return Cx(1, 0);
    const auto& T = ExtResidueTable::get(p, rho);
    a %= p;
    if (a < 0) a += p;
    b %= p;
    if (b < 0) b += p;
    std::int32_t e = T.dlog[static_cast<size_t>(a * p + b)];
    if (e < 0) throw std::domain_error("ExtCharacter: non-unit residue");
    return unit_root(mulmod(k, e, T.order), T.order);
  }

  Cx operator()(const ExtField& E, const EPadic& x) const {
    if (x.is_zero()) throw std::domain_error("ExtCharacter: zero argument");
    std::int64_t v = x.val();
    Padic pv = Padic::make(E.F, -v, 1);
    EPadic u = escale(x, pv);  // unit part
    std::int64_t ra = u.a.is_zero() ? 0 : (u.a.val() >= 1 ? 0 : u.a.unit_mod(1));
    std::int64_t rb = u.b.is_zero() ? 0 : (u.b.val() >= 1 ? 0 : u.b.unit_mod(1));
    // careful: a coordinate with positive valuation has residue 0
    if (!u.a.is_zero() && u.a.val() >= 1) ra = 0;
    if (!u.b.is_zero() && u.b.val() >= 1) rb = 0;
    return eval_residue(ra, rb) * std::pow(z, static_cast<double>(v));
  }

  ExtCharacter inverse(const ExtField& E) const { return ExtCharacter(E, c, -k, 1.0 / z); }
  ExtCharacter galois(const ExtField& E) const {
    // eta o sigma where sigma(a + b sqrt(rho)) = a - b sqrt(rho): on the
    // residue field sigma is Frobenius x -> x^p, so k -> k*p.
    return ExtCharacter(E, c, mulmod(k, p, p * p - 1), z);
  }
  bool is_regular(const ExtField& E) const {
    ExtCharacter g = galois(E);
    return !(g.c == c && g.k == k && std::abs(g.z - z) < 1e-12);
  }
  // Restriction to F^x (t = t + 0*sqrt(rho), v_E(t) = v_F(t)).
  QuasiCharacter restrict_to_base(const ExtField& E) const;

  friend ExtCharacter mul(const ExtField& E, const ExtCharacter& x, const ExtCharacter& y) {
    assert(x.p == y.p);
    return ExtCharacter(E, std::max(x.c, y.c), x.k + y.k, x.z * y.z);
  }
  // eta * (chi o Nr) for a quasi-character chi of F^x with conductor <= 1.
  // Nr on residues is x -> x^{p+1}; Nr(p) = p^2 gives z -> z * chi(p)^2.
  friend ExtCharacter mul_norm_pullback(const ExtField& E, const ExtCharacter& eta,
                                        const QuasiCharacter& chi);
};

inline QuasiCharacter ExtCharacter::restrict_to_base(const ExtField& E) const {
  if (c == 0) return QuasiCharacter(UnitCharacter::trivial(p), z);
  // Value on a base unit u: dlog over the residue pair (u, 0).
  const auto& T = ExtResidueTable::get(p, rho);
  const auto& G = UnitGroupTable::get(p, 1);
  std::int64_t e = T.dlog[static_cast<size_t>((G.gen % p) * p + 0)];
  // xi|F(gen_F) = e(k*e / (p^2-1)); the order divides p-1, so the exponent
  // scales down exactly to the base group order.
  std::int64_t num = mulmod(k, e, p * p - 1);
  assert(num % (p + 1) == 0);
  return QuasiCharacter(UnitCharacter(p, 1, num / (p + 1)), z);
}

inline ExtCharacter mul_norm_pullback(const ExtField& E, const ExtCharacter& eta,
                                      const QuasiCharacter& chi) {
  assert(chi.xi.c <= 1 && "norm pullback implemented for conductor <= 1 twists");
  std::int64_t p = E.F.p;
  std::int64_t kpull = 0;
  if (chi.xi.c == 1) {
    // (chi o Nr)(gen_E) = chi(Nr(gen_E)); Nr(gen_E) generates k_F^x with
    // dlog relation Nr = (p+1)-power in the cyclic group of order p^2-1.
    const auto& T = ExtResidueTable::get(p, E.rho);
    const auto& G = UnitGroupTable::get(p, 1);
    // Nr(gen_E) = gen_E^{p+1}; its dlog base gen_F:
    // find residue of gen_E^{p+1} in F and take base-field dlog.
    std::pair<std::int64_t, std::int64_t> x{1, 0};
    for (int i = 0; i < static_cast<int>(p) + 1; ++i) x = pair_mul(p, p, E.rho, x, T.gen);
    assert(x.second == 0);
    std::int64_t dl = G.dlog[static_cast<size_t>(x.first)];
    // chi(Nr(gen_E)) = e(chi.k * dl / (p-1)) = e(chi.k * dl * (p+1) / (p^2-1))
    kpull = mulmod(mulmod(chi.xi.k, dl, p * p - 1), p + 1, p * p - 1);
  }
  return ExtCharacter(E, std::max(eta.c, chi.xi.c == 0 ? 0 : 1), eta.k + kpull, eta.z * chi.z * chi.z);
}

// Average of f over representatives of p^n O_E^x / (1 + P_E^m)
// (vol(O_E^x, d^x) = 1, every shell has volume 1).
template <typename Fn>
Cx shell_integral_E(const ExtField& E, std::int64_t n, int m, Fn&& f) {
  assert(m >= 1 && m <= E.F.N);
  std::int64_t pm = E.F.pk(m);
  Cx sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < pm; ++a)
    for (std::int64_t b = 0; b < pm; ++b) {
      if (a % E.F.p == 0 && b % E.F.p == 0) continue;
      EPadic x{Padic::make(E.F, n, a), Padic::make(E.F, n, b)};
      sum += f(x);
      ++count;
    }
  return sum / static_cast<double>(count);
}

// Average of f over the norm-one subgroup E^1 at level m: representatives are
// residue pairs delta mod p^m with Nr(delta) = 1 mod p^m, vol(E^1) = 1.
template <typename Fn>
Cx norm_one_integral(const ExtField& E, int m, Fn&& f) {
  assert(m >= 1 && m <= E.F.N);
  std::int64_t pm = E.F.pk(m);
  Cx sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < pm; ++a)
    for (std::int64_t b = 0; b < pm; ++b) {
      std::int64_t nr = (mulmod(a, a, pm) - mulmod(E.rho, mulmod(b, b, pm), pm)) % pm;
      if (nr < 0) nr += pm;
      if (nr != 1 % pm) continue;
      EPadic x{Padic::make(E.F, 0, a), Padic::make(E.F, 0, b)};
      sum += f(x);
      ++count;
    }
  assert(count > 0);
  return sum / static_cast<double>(count);
}

// Exact solution x in O_E^x of Nr(x) = u for a unit u (Hensel lifting from
// the residue field; the norm map on units is surjective for unramified E/F).
inline EPadic solve_norm_unit(const ExtField& E, const Padic& u) {
  assert(!u.is_zero() && u.val() == 0);
  std::int64_t p = E.F.p;
  std::int64_t u0 = u.unit_mod(1);
  // Residue solution with a != 0 mod p: a^2 - rho b^2 = u0 (mod p). A solution
  // with a != 0 always exists for p >= 3 (the norm form is isotropic enough).
  std::int64_t a0 = -1, b0 = -1;
  for (std::int64_t b = 0; b < p && a0 < 0; ++b) {
    std::int64_t rhs = (u0 + mulmod(E.rho, mulmod(b, b, p), p)) % p;
    if (rhs == 0) continue;  // would force a = 0
    if (powmod(rhs, (p - 1) / 2, p) == 1) {
      // square root mod p by brute force (p is small here)
      for (std::int64_t a = 1; a < p; ++a)
        if (mulmod(a, a, p) == rhs) {
          a0 = a;
          b0 = b;
          break;
        }
    }
  }
  if (a0 < 0) throw std::logic_error("solve_norm_unit: no residue solution");
  // Hensel: lift a with b fixed; f(a) = a^2 - rho b0^2 - u, f'(a) = 2a != 0.
  FieldDesc F = E.F;
  Padic a = Padic::from_int(F, a0);
  Padic b = Padic::from_int(F, b0);
  Padic target = u + Padic::from_int(F, E.rho) * b * b;
  for (int it = 0; it < F.N + 2; ++it) {
    Padic fa = a * a - target;
    if (fa.is_zero() || fa.val() >= F.N) break;
    a = a - fa / (a + a);
  }
  EPadic x{a, b};
  Padic check = norm(E, x) - u;
  assert(check.is_zero() || check.val() >= F.N - 1);
  return x;
}

}  // namespace plha
