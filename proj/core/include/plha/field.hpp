// Exact model of the non-archimedean local field F = Q_p (p an odd prime):
// truncated p-adic numbers (valuation + unit part mod p^N), the standard
// additive character of conductor Z_p, unit and quasi-characters of F^x,
// and exact Haar integration as finite averages over residue classes.
#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace plha {

using Cx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// exp(2*pi*i * num/den) with the angle reduced exactly in integer arithmetic;
// quarter-turn angles are returned exactly so character sums cancel to 0.
inline Cx unit_root(std::int64_t num, std::int64_t den) {
  num %= den;
  if (num < 0) num += den;
  if (4 * num % den == 0) {
    switch (4 * num / den) {
      case 0: return Cx(1, 0);
      case 1: return Cx(0, 1);
      case 2: return Cx(-1, 0);
      case 3: return Cx(0, -1);
    }
  }
  return std::polar(1.0, kTwoPi * static_cast<double>(num) / static_cast<double>(den));
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    assert(r <= std::numeric_limits<std::int64_t>::max() / b);
    r *= b;
  }
  return r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  a %= m;
  if (a < 0) a += m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1 (extended Euclid).
inline std::int64_t invmod(std::int64_t a, std::int64_t m) {
  std::int64_t t = 0, newt = 1, r = m, newr = a % m;
  if (newr < 0) newr += m;
  while (newr != 0) {
    std::int64_t qq = r / newr;
    std::int64_t tmp = t - qq * newt;
    t = newt;
    newt = tmp;
    tmp = r - qq * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::domain_error("invmod: argument not invertible");
  if (t < 0) t += m;
  return t;
}

// Description of the base field F = Q_p at working precision N:
// every unit part is tracked modulo p^N.
struct FieldDesc {
  std::int64_t p = 3;   // odd prime
  int N = 12;           // precision exponent, >= 8
  std::int64_t pN = 0;  // p^N, cached

  FieldDesc() : FieldDesc(3) {}
  explicit FieldDesc(std::int64_t p_, int N_ = 0) : p(p_) {
    assert(p >= 3 && p % 2 == 1);
    if (N_ > 0) {
      N = N_;
    } else {
      // Largest exponent keeping p^(N+2) comfortably inside int64.
      N = 12;
      while (N > 8 && std::pow(static_cast<double>(p), N + 2) > 9.0e17) --N;
    }
    assert(N >= 8);
    pN = ipow(p, N);
  }
  std::int64_t q() const { return p; }
  std::int64_t pk(int k) const { return ipow(p, k); }
  bool operator==(const FieldDesc& o) const { return p == o.p && N == o.N; }
};

// A truncated p-adic number: zero, or p^val * unit with unit invertible mod p^N.
class Padic {
 public:
  Padic() = default;  // zero of an unspecified field; usable once assigned
  static Padic zero(const FieldDesc& F) {
    Padic x;
    x.p_ = F.p;
    x.N_ = F.N;
    x.pN_ = F.pN;
    return x;
  }
  // p^val * u, any integer u (powers of p are factored out of u).
  static Padic make(const FieldDesc& F, std::int64_t val, std::int64_t u) {
    Padic x = zero(F);
    u %= F.pN;
    if (u < 0) u += F.pN;
    if (u == 0) return x;
    while (u % F.p == 0) {
      u /= F.p;
      ++val;
    }
    x.zero_ = false;
    x.v_ = val;
    x.u_ = u;
    return x;
  }
  static Padic from_int(const FieldDesc& F, std::int64_t n) { return make(F, 0, n); }
  // Exact rational a/b with b prime to p or not (valuations subtract).
  static Padic from_ratio(const FieldDesc& F, std::int64_t a, std::int64_t b) {
    return from_int(F, a) / from_int(F, b);
  }

  bool is_zero() const { return zero_; }
  std::int64_t val() const {
    assert(!zero_);
    return v_;
  }
  // Unit part in [1, p^N), prime to p.
  std::int64_t unit() const {
    assert(!zero_);
    return u_;
  }
  std::int64_t prime() const { return p_; }
  int precision() const { return N_; }
  FieldDesc field() const { return FieldDesc(p_, N_); }

  // Residue of the unit part mod p^c (c <= N).
  std::int64_t unit_mod(int c) const {
    assert(!zero_ && c <= N_);
    return u_ % ipow(p_, c);
  }

  // |x| = q^{-v(x)} as a double; |0| = 0.
  double abs() const { return zero_ ? 0.0 : std::pow(static_cast<double>(p_), static_cast<double>(-v_)); }

  friend Padic operator*(const Padic& a, const Padic& b) {
    a.check(b);
    if (a.zero_ || b.zero_) return a.zero_ ? a : b;
    Padic r = a;
    r.v_ = a.v_ + b.v_;
    r.u_ = mulmod(a.u_, b.u_, a.pN_);
    return r;
  }
  Padic inv() const {
    if (zero_) throw std::domain_error("Padic: inverse of zero");
    Padic r = *this;
    r.v_ = -v_;
    r.u_ = invmod(u_, pN_);
    return r;
  }
  friend Padic operator/(const Padic& a, const Padic& b) { return a * b.inv(); }
  friend Padic operator-(const Padic& a) {
    if (a.zero_) return a;
    Padic r = a;
    r.u_ = a.pN_ - a.u_;
    return r;
  }
  friend Padic operator+(const Padic& a, const Padic& b) {
    a.check(b);
    if (a.zero_) return b;
    if (b.zero_) return a;
    const Padic& lo = (a.v_ <= b.v_) ? a : b;
    const Padic& hi = (a.v_ <= b.v_) ? b : a;
    std::int64_t d = hi.v_ - lo.v_;
    if (d >= lo.N_) return lo;  // the higher term is below working precision
    std::int64_t u = (lo.u_ + mulmod(hi.u_, ipow(lo.p_, static_cast<int>(d)), lo.pN_)) % lo.pN_;
    return make(FieldDesc(lo.p_, lo.N_), lo.v_, u);
  }
  friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }

  // Equality at working precision.
  friend bool operator==(const Padic& a, const Padic& b) {
    a.check(b);
    if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
    return a.v_ == b.v_ && a.u_ == b.u_;
  }

 private:
  void check(const Padic& o) const { assert(p_ == o.p_ && N_ == o.N_); }
  std::int64_t p_ = 0;
  int N_ = 0;
  std::int64_t pN_ = 0;
  bool zero_ = true;
  std::int64_t v_ = 0;
  std::int64_t u_ = 1;
};

// v(x) with v(0) = +infinity represented by a large sentinel.
inline std::int64_t val_or_inf(const Padic& x) {
  return x.is_zero() ? std::numeric_limits<std::int64_t>::max() / 4 : x.val();
}

// The standard additive character psi(x) = e(frac(x)) of conductor Z_p,
// optionally twisted: psi_delta(x) = psi(delta * x).
struct AdditiveCharacter {
  FieldDesc F;
  bool twisted = false;
  Padic delta;  // only read when twisted

  explicit AdditiveCharacter(const FieldDesc& F_) : F(F_) {}
  AdditiveCharacter(const FieldDesc& F_, const Padic& d) : F(F_), twisted(true), delta(d) {}

  AdditiveCharacter conj() const {  // psi^{-1} = psi_{-1} (or -delta)
    AdditiveCharacter c(F, twisted ? -delta : -Padic::from_int(F, 1));
    return c;
  }

  Cx operator()(const Padic& x) const {
    Padic y = twisted ? delta * x : x;
    if (y.is_zero() || y.val() >= 0) return Cx(1.0, 0.0);
    int m = static_cast<int>(-y.val());
    if (m > F.N) throw std::domain_error("AdditiveCharacter: argument below precision");
    std::int64_t pm = F.pk(m);
    return unit_root(y.unit() % pm, pm);
  }
};

// Cached arithmetic of the unit group (Z/p^c)^x: a fixed generator and a
// discrete-log table, shared by all characters of that modulus.
struct UnitGroupTable {
  std::int64_t p;
  int c;
  std::int64_t mod;    // p^c
  std::int64_t order;  // phi(p^c)
  std::int64_t gen;
  std::vector<std::int32_t> dlog;  // index by residue; -1 if not a unit

  UnitGroupTable(std::int64_t p_, int c_) : p(p_), c(c_) {
    mod = ipow(p, c);
    order = mod - mod / p;
    gen = find_generator();
    dlog.assign(static_cast<size_t>(mod), -1);
    std::int64_t x = 1;
    for (std::int64_t e = 0; e < order; ++e) {
      dlog[static_cast<size_t>(x)] = static_cast<std::int32_t>(e);
      x = mulmod(x, gen, mod);
    }
  }

  std::int64_t find_generator() const {
    // (Z/p^c)^x is cyclic for odd p; take the least primitive root.
    for (std::int64_t g = 2; g < mod; ++g) {
      if (g % p == 0) continue;
      bool ok = true;
      // Check order by testing proper divisors order/ell for prime ell | order.
      std::int64_t n = order;
      std::vector<std::int64_t> primes;
      for (std::int64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
          if (primes.empty() || primes.back() != d) primes.push_back(d);
          n /= d;
        }
      if (n > 1) primes.push_back(n);
      for (std::int64_t ell : primes)
        if (powmod(g, order / ell, mod) == 1) {
          ok = false;
          break;
        }
      if (ok) return g;
    }
    throw std::logic_error("UnitGroupTable: no generator found");
  }

  static const UnitGroupTable& get(std::int64_t p, int c) {
    static std::map<std::pair<std::int64_t, int>, std::unique_ptr<UnitGroupTable>> cache;
    auto key = std::make_pair(p, c);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_unique<UnitGroupTable>(p, c)).first;
    return *it->second;
  }
};

// A character of O^x trivial on 1 + P^c, given by its value e(k/phi(p^c)) at
// the fixed generator of (Z/p^c)^x. Stored with c reduced to the true conductor.
struct UnitCharacter {
  std::int64_t p = 3;
  int c = 0;           // conductor exponent (0 = trivial character)
  std::int64_t k = 0;  // value exponent at the generator, modulo the group order

  UnitCharacter() = default;
  UnitCharacter(std::int64_t p_, int c_, std::int64_t k_) : p(p_), c(c_), k(k_) { reduce(); }
  static UnitCharacter trivial(std::int64_t p_) { return UnitCharacter(p_, 0, 0); }
  // The quadratic (Legendre) character mod p.
  static UnitCharacter quadratic(std::int64_t p_) { return UnitCharacter(p_, 1, (p_ - 1) / 2); }

  void reduce() {
    while (c > 0) {
      const auto& G = UnitGroupTable::get(p, c);
      std::int64_t ord = G.order;
      k %= ord;
      if (k < 0) k += ord;
      if (k == 0) {
        c = 0;
        return;
      }
      // Trivial on 1 + P^{c-1} iff k is divisible by p (value table factors
      // through the smaller quotient) -- equivalently the character's order
      // divides phi(p^{c-1}).
      if (c == 1) return;
      std::int64_t ord1 = ord / p;  // phi(p^{c-1}) * gcd adjust: ord/p = phi(p^{c-1}) for c >= 2
      if (k % p != 0) return;
      // chi(g)^{ord1} == 1 iff k * ord1 % ord == 0 iff k % p == 0 (c >= 2).
      // Descend: generator of mod p^{c-1} group is G'.gen; express value there.
      const auto& G1 = UnitGroupTable::get(p, c - 1);
      // chi factors through (Z/p^{c-1})^x; its value at G1.gen is chi(G1.gen).
      std::int64_t e = G.dlog[static_cast<size_t>(G1.gen % G.mod)];
      std::int64_t knew = mulmod(k, e, ord);
      // value = e(knew / ord); as a character of the smaller group the order
      // divides ord1, so knew is divisible by p.
      assert(knew % p == 0);
      k = knew / p;
      c -= 1;
    }
  }

  bool is_trivial() const { return c == 0; }

  std::int64_t order_den() const { return c == 0 ? 1 : UnitGroupTable::get(p, c).order; }

  // Value at a unit residue (only its class mod p^c matters).
  Cx eval_unit(std::int64_t u) const {
    if (c == 0) return Cx(1.0, 0.0);
    const auto& G = UnitGroupTable::get(p, c);
    std::int64_t r = u % G.mod;
    if (r < 0) r += G.mod;
    std::int32_t e = G.dlog[static_cast<size_t>(r)];
    if (e < 0) throw std::domain_error("UnitCharacter: non-unit argument");
    return unit_root(mulmod(k, e, G.order), G.order);
  }

  UnitCharacter inverse() const { return UnitCharacter(p, c, -k); }

  friend UnitCharacter operator*(const UnitCharacter& a, const UnitCharacter& b) {
    assert(a.p == b.p);
    int c = std::max(a.c, b.c);
    if (c == 0) return trivial(a.p);
    const auto& G = UnitGroupTable::get(a.p, c);
    // Lift both to level c: value at G.gen is e(k_i * (ord_c / ord_{c_i}) ... )
    auto lift = [&](const UnitCharacter& x) -> std::int64_t {
      if (x.c == 0) return 0;
      if (x.c == c) return x.k;
      const auto& Gx = UnitGroupTable::get(x.p, x.c);
      // value at G.gen = x.eval(G.gen): exponent = k * dlog_{Gx}(G.gen) / ...
      std::int64_t e = Gx.dlog[static_cast<size_t>(G.gen % Gx.mod)];
      // e(k*e / ord_x) = e(k*e*(ord_c/ord_x) / ord_c)
      return mulmod(mulmod(x.k, e, G.order), G.order / Gx.order, G.order);
    };
    return UnitCharacter(a.p, c, (lift(a) + lift(b)) % G.order);
  }

  bool operator==(const UnitCharacter& o) const { return p == o.p && c == o.c && k == o.k; }
  bool operator<(const UnitCharacter& o) const {
    return std::tie(p, c, k) < std::tie(o.p, o.c, o.k);
  }

  // chi(-1) = +-1.
  Cx at_minus_one() const { return eval_unit(ipow(p, std::max(c, 1)) - 1); }
};

// A quasi-character chi(t) = xi(unit part of t) * z^{v(t)}; z = chi(p) is the
// value at the uniformizer (z = q^{-s} for chi = xi |.|^s).
struct QuasiCharacter {
  UnitCharacter xi;
  Cx z{1.0, 0.0};

  QuasiCharacter() = default;
  QuasiCharacter(UnitCharacter xi_, Cx z_) : xi(xi_), z(z_) {}
  static QuasiCharacter trivial(std::int64_t p) {
    return QuasiCharacter(UnitCharacter::trivial(p), Cx(1.0, 0.0));
  }
  // |.|^s for real/complex s: z = p^{-s}.
  static QuasiCharacter norm_power(std::int64_t p, Cx s) {
    return QuasiCharacter(UnitCharacter::trivial(p),
                          std::exp(-s * std::log(static_cast<double>(p))));
  }
  // The unramified quadratic character attached to the unramified quadratic
  // extension: trivial on units, -1 at the uniformizer.
  static QuasiCharacter unramified_quadratic(std::int64_t p) {
    return QuasiCharacter(UnitCharacter::trivial(p), Cx(-1.0, 0.0));
  }

  Cx operator()(const Padic& t) const {
    if (t.is_zero()) throw std::domain_error("QuasiCharacter: zero argument");
    Cx u = xi.eval_unit(t.unit_mod(std::max(xi.c, 0)));
    return u * std::pow(z, static_cast<double>(t.val()));
  }
  Cx at_val_unit(std::int64_t v, std::int64_t unit_residue) const {
    return xi.eval_unit(unit_residue) * std::pow(z, static_cast<double>(v));
  }

  QuasiCharacter inverse() const { return QuasiCharacter(xi.inverse(), 1.0 / z); }
  friend QuasiCharacter operator*(const QuasiCharacter& a, const QuasiCharacter& b) {
    return QuasiCharacter(a.xi * b.xi, a.z * b.z);
  }
  // chi * |.|^s
  QuasiCharacter shift(Cx s, std::int64_t p) const {
    return *this * norm_power(p, s);
  }
  bool is_unramified() const { return xi.is_trivial(); }
};

// Exact Haar integration on F^x: average of f over representatives of
// p^n O^x / (1 + P^m); the multiplicative measure gives every shell volume 1.
// f must be locally constant at level m on the shell v = n.
template <typename Fn>
Cx shell_integral(const FieldDesc& F, std::int64_t n, int m, Fn&& f) {
  assert(m >= 1 && m <= F.N);
  std::int64_t pm = F.pk(m);
  Cx sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t u = 1; u < pm; ++u) {
    if (u % F.p == 0) continue;
    sum += f(Padic::make(F, n, u));
    ++count;
  }
  return sum / static_cast<double>(count);
}

// Exact additive Haar integral of f over the ball a + P^r, vol(O, dx) = 1,
// with f locally constant at level m >= r on the ball.
template <typename Fn>
Cx ball_integral(const FieldDesc& F, const Padic& a, int r, int m, Fn&& f) {
  assert(m >= r && m - r <= 12);  // cell count p^{m-r}
  std::int64_t cells = F.pk(m - r);
  Cx sum = 0.0;
  for (std::int64_t t = 0; t < cells; ++t) sum += f(a + Padic::make(F, r, t));
  return sum * std::pow(static_cast<double>(F.p), static_cast<double>(-m));
}

}  // namespace plha
