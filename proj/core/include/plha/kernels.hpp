// Convolution kernels of the rank-two Hankel transforms on F^x: the dihedral
// kernel as a twisted average over the norm-one subgroup of the quadratic
// extension, the induced (principal-series) kernel as a stabilized
// Kloosterman-type shell sum, convolution against compactly supported
// functions, and the GL(2) Bessel function at the long Weyl cell.
#pragma once

#include <functional>
#include <tuple>

#include "plha/voronoi.hpp"

namespace plha {

// Dihedral kernel: for t a norm from the unramified quadratic extension E,
//   zeta_E(1)^{-1} * lambda(E/F,psi) * |t| * Int_{E^1} psi(Tr(x d)) eta^{-1}(x d) dd
// with Nr(x) = t and vol(E^1) = 1 (the measure making E^x/E^1 = Nr(E^x) carry
// the restriction of d^x t); zero off the norm group, i.e. for odd v(t).
// level_bump enlarges the E^1 sampling level beyond local constancy (for
// refinement-stability checks); the value must not depend on it.
inline Cx kernel_dihedral(const ExtField& E, const ExtCharacter& eta,
                          const AdditiveCharacter& psi, const Padic& t, int level_bump = 0) {
  if (t.is_zero()) throw std::domain_error("kernel_dihedral: zero argument");
  std::int64_t v = t.val();
  if (v % 2 != 0) return Cx(0, 0);  // odd valuation is not a norm (E/F unramified)
  const FieldDesc& F = E.F;
  std::int64_t m0 = v / 2;
  Padic u = t * Padic::make(F, -v, 1);
  EPadic x = escale(solve_norm_unit(E, u), Padic::make(F, m0, 1));
  // psi(Tr(x d)) is stable at level >= -v(x); eta (conductor <= 1) at level 1.
  int m = static_cast<int>(std::max<std::int64_t>(1, -m0)) + level_bump;
  ExtCharacter etai = eta.inverse(E);
  Cx avg = norm_one_integral(E, m, [&](const EPadic& d) {
    EPadic xd = emul(E, x, d);
    return psi_E(psi, xd) * etai(E, xd);
  });
  double zE1 = 1.0 - std::pow(static_cast<double>(F.p), -2.0);     // zeta_E(1)^{-1}
  double abst = std::pow(static_cast<double>(F.p), -static_cast<double>(v));
  Cx lambda = psi.twisted ? weil_index(E, psi.delta) : weil_index(E);
  return zE1 * lambda * abst * avg;
}

// Induced kernel for mu1 x mu2:
//   zeta_F(1)^{-2} * mu2(t)^{-1} * |t| * Sum_n Int_{v(y)=n} psi(1/y + y t) mu1 mu2^{-1}(y) d^x y.
// The sum has finite support concentrated where min(1,|t|^{-1}) <= |y| <=
// max(1,|t|^{-1}); the window is grown in both directions until two
// consecutive enlargements contribute nothing.
inline Cx kernel_induced(const QuasiCharacter& mu1, const QuasiCharacter& mu2,
                         const AdditiveCharacter& psi, const Padic& t, int level_bump = 0) {
  if (t.is_zero()) throw std::domain_error("kernel_induced: zero argument");
  const FieldDesc& F = psi.F;
  std::int64_t vt = t.val();
  QuasiCharacter chi = mu1 * mu2.inverse();
  auto shell = [&](std::int64_t n) -> Cx {
    // Local constancy of psi(1/y + y t) chi(y) on v(y) = n.
    int m = static_cast<int>(std::max<std::int64_t>(
                {1, static_cast<std::int64_t>(chi.xi.c), n, -n - vt})) +
            level_bump;
    if (m > F.N) throw std::domain_error("kernel_induced: shell below precision");
    return shell_integral(F, n, m, [&](const Padic& y) {
      return psi(y.inv() + y * t) * chi(y);
    });
  };
  std::int64_t lo = std::min<std::int64_t>(0, -vt), hi = std::max<std::int64_t>(0, -vt);
  Cx total = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) total += shell(n);
  const double tol = 1e-12;
  for (int dir : {+1, -1}) {
    int zeros = 0;
    std::int64_t n = (dir > 0) ? hi : lo;
    for (int steps = 0; zeros < 2; ++steps) {
      assert(steps < 50 && "kernel_induced: shell sum failed to stabilize");
      n += dir;
      Cx inc = shell(n);
      total += inc;
      zeros = (std::abs(inc) <= tol * (1.0 + std::abs(total))) ? zeros + 1 : 0;
    }
  }
  double zF1sq = std::pow(1.0 - 1.0 / static_cast<double>(F.p), 2.0);  // zeta_F(1)^{-2}
  double abst = std::pow(static_cast<double>(F.p), -static_cast<double>(vt));
  return zF1sq / mu2(t) * abst * total;
}

// Average of the induced kernel over the multiplicative coset t(1 + P^M):
// averaging psi(y t) over the coset replaces it by psi(y t) 1[v(y t) >= -M],
// which clips the shell sum exactly; the outer mu2(t)^{-1} factor needs
// M >= cond(mu2). Used by convolve, where only coset averages of the kernel
// ever enter.
inline Cx kernel_induced_avg(const QuasiCharacter& mu1, const QuasiCharacter& mu2,
                             const AdditiveCharacter& psi, const Padic& t, int M) {
  if (t.is_zero()) throw std::domain_error("kernel_induced_avg: zero argument");
  const FieldDesc& F = psi.F;
  assert(M >= 1 && M >= mu2.xi.c);
  std::int64_t vt = t.val();
  QuasiCharacter chi = mu1 * mu2.inverse();
  std::int64_t clip = -vt - M;  // shells n < clip average to zero
  auto shell = [&](std::int64_t n) -> Cx {
    if (n < clip) return Cx(0, 0);
    int m = static_cast<int>(
        std::max<std::int64_t>({1, static_cast<std::int64_t>(chi.xi.c), n, -n - vt}));
    if (m > F.N) throw std::domain_error("kernel_induced_avg: shell below precision");
    return shell_integral(F, n, m, [&](const Padic& y) {
      return psi(y.inv() + y * t) * chi(y);
    });
  };
  std::int64_t lo = std::max(std::min<std::int64_t>(0, -vt), clip);
  std::int64_t hi = std::max<std::int64_t>(0, -vt);
  Cx total = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) total += shell(n);
  const double tol = 1e-12;
  // Upward the support is finite; downward the clip makes tails exactly zero.
  for (int dir : {+1, -1}) {
    int zeros = 0;
    std::int64_t n = (dir > 0) ? hi : lo;
    for (int steps = 0; zeros < 2; ++steps) {
      assert(steps < 50 && "kernel_induced_avg: shell sum failed to stabilize");
      n += dir;
      if (dir < 0 && n < clip) break;
      Cx inc = shell(n);
      total += inc;
      zeros = (std::abs(inc) <= tol * (1.0 + std::abs(total))) ? zeros + 1 : 0;
    }
  }
  double zF1sq = std::pow(1.0 - 1.0 / static_cast<double>(F.p), 2.0);
  double abst = std::pow(static_cast<double>(F.p), -static_cast<double>(vt));
  return zF1sq / mu2(t) * abst * total;
}

// A convolution kernel a: F^x -> C accessed through its averages over
// multiplicative cosets t(1 + P^M), M >= min_level(v(t)); values are memoized
// per (valuation, M, unit class mod P^M). Construction owns the cache.
class KernelFunction {
 public:
  KernelFunction(const FieldDesc& F, std::function<int(std::int64_t)> min_level,
                 std::function<Cx(const Padic&, int)> average)
      : F_(F), min_level_(std::move(min_level)), average_(std::move(average)) {}

  const FieldDesc& field() const { return F_; }
  int min_level(std::int64_t n) const { return std::max(1, min_level_(n)); }

  // Average of the kernel over t(1 + P^M).
  Cx average(const Padic& t, int M) const {
    if (t.is_zero()) throw std::domain_error("KernelFunction: zero argument");
    std::int64_t n = t.val();
    M = std::max(M, min_level(n));
    if (M > F_.N) throw std::domain_error("KernelFunction: level below precision");
    std::int64_t u = t.unit_mod(M);
    auto key = std::make_tuple(n, M, u);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, average_(Padic::make(F_, n, u), M)).first;
    return it->second;
  }

 private:
  FieldDesc F_;
  std::function<int(std::int64_t)> min_level_;
  std::function<Cx(const Padic&, int)> average_;
  mutable std::map<std::tuple<std::int64_t, int, std::int64_t>, Cx> cache_;
};

// The convolution kernel of the rank-two Hankel transform attached to rep.
inline KernelFunction make_kernel(const RepDescriptor& rep, const AdditiveCharacter& psi) {
  switch (rep.kind) {
    case RepDescriptor::Kind::Dihedral: {
      // The kernel is genuinely locally constant at level max(1, -v(t)/2):
      // replacing t by t(1+p^M e) replaces x by x w with v(w - 1) >= M, which
      // moves psi(Tr(x d)) below the conductor and leaves eta (conductor <= 1)
      // unchanged. Coset averages at or above that level are plain values.
      std::shared_ptr<ExtField> E = rep.E;
      ExtCharacter eta = rep.eta;
      return KernelFunction(
          rep.F,
          [](std::int64_t n) { return static_cast<int>(std::max<std::int64_t>(1, -(n / 2))); },
          [E, eta, psi](const Padic& t, int M) {
            (void)M;
            return kernel_dihedral(*E, eta, psi, t);
          });
    }
    case RepDescriptor::Kind::PS2: {
      QuasiCharacter m1 = rep.mu[0], m2 = rep.mu[1];
      return KernelFunction(
          rep.F,
          [c = m2.xi.c](std::int64_t) { return std::max(1, c); },
          [m1, m2, psi](const Padic& t, int M) {
            return kernel_induced_avg(m1, m2, psi, t, M);
          });
    }
    default:
      throw std::domain_error("make_kernel: only rank-two kernels are implemented");
  }
}

// Convolution A(h)(y) = Int_{F^x} a(x y) h(x) d^x x for compactly supported h,
// evaluated as a finite sum of shell averages: on each support shell, h is
// constant on cosets x(1 + P^m), so the kernel enters only through its exact
// coset averages at level m.
inline Cx convolve(const KernelFunction& a, const SisFunction& h, const Padic& y) {
  if (y.is_zero()) throw std::domain_error("convolve: zero argument");
  if (!h.compactly_supported()) throw std::domain_error("convolve: input is not compactly supported");
  const FieldDesc& F = h.field();
  // Support shells of h and the local-constancy level h requires on each.
  std::map<std::int64_t, int> levels;
  for (const auto& term : h.terms()) {
    BallFunction phi = term.phi;
    phi.normalize();
    for (const auto& bt : phi.terms()) {
      std::int64_t n = bt.center[0].val();
      std::int64_t L = std::max<std::int64_t>(
          {1, bt.radius[0] - n, static_cast<std::int64_t>(term.chi.xi.c)});
      if (!bt.phase[0].is_zero()) L = std::max(L, -bt.phase[0].val() - n);
      auto it = levels.find(n);
      if (it == levels.end())
        levels.emplace(n, static_cast<int>(L));
      else
        it->second = std::max(it->second, static_cast<int>(L));
    }
  }
  Cx total = 0.0;
  for (const auto& [n, Lh] : levels) {
    int m = std::max(Lh, a.min_level(n + y.val()));
    total += shell_integral(F, n, m,
                            [&](const Padic& x) { return a.average(x * y, m) * h.eval(x); });
  }
  return total;
}

// GL(2) Bessel function at the cell [[0, -y], [1, 0]]:
//   j(y) = omega(-y) |y|^{-1/2} * kernel(y).
inline Cx bessel_gl2(const RepDescriptor& rep, const AdditiveCharacter& psi, const Padic& y) {
  if (y.is_zero()) throw std::domain_error("bessel_gl2: zero argument");
  Cx k;
  switch (rep.kind) {
    case RepDescriptor::Kind::Dihedral:
      k = kernel_dihedral(*rep.E, rep.eta, psi, y);
      break;
    case RepDescriptor::Kind::PS2:
      k = kernel_induced(rep.mu[0], rep.mu[1], psi, y);
      break;
    default:
      throw std::domain_error("bessel_gl2: rank-two representation required");
  }
  Cx omega = rep.central_character()(-y);
  double half = std::pow(static_cast<double>(rep.F.p), 0.5 * static_cast<double>(y.val()));
  return omega * half * k;
}

}  // namespace plha
