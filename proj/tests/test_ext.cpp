#include <doctest.h>

#include "plha/ext.hpp"

using namespace plha;

namespace {
bool close(Cx a, Cx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("extension arithmetic: norm, trace, inverse") {
  FieldDesc F(7);
  ExtField E(F);
  CHECK(powmod(E.rho, (F.p - 1) / 2, F.p) == F.p - 1);  // rho is a non-residue
  EPadic x{Padic::from_int(F, 3), Padic::from_int(F, 5)};
  EPadic y{Padic::from_ratio(F, 1, 7), Padic::from_int(F, 2)};
  // Nr(xy) = Nr(x) Nr(y), Tr is F-linear, x * x^{-1} = 1.
  CHECK(norm(E, emul(E, x, y)) == norm(E, x) * norm(E, y));
  CHECK(trace(eadd(x, y)) == trace(x) + trace(y));
  EPadic one = emul(E, x, einv(E, x));
  CHECK(one.a == Padic::from_int(F, 1));
  CHECK(one.b.is_zero());
  // |x|_E = |Nr(x)|_F.
  CHECK(x.abs_E() == doctest::Approx(norm(E, x).abs()));
  CHECK(y.abs_E() == doctest::Approx(norm(E, y).abs()));
}

TEST_CASE("psi_E = psi o Tr has conductor O_E") {
  FieldDesc F(5);
  ExtField E(F);
  AdditiveCharacter psi(F);
  // Trivial on O_E.
  CHECK(close(psi_E(psi, {Padic::from_int(F, 2), Padic::from_int(F, 3)}), Cx(1, 0)));
  // Non-trivial on P_E^{-1}: x = 1/p has Tr = 2/p.
  CHECK(close(psi_E(psi, {Padic::from_ratio(F, 1, 5), Padic::zero(F)}), unit_root(2, 5)));
  // sqrt(rho)/p has trace 0.
  CHECK(close(psi_E(psi, {Padic::zero(F), Padic::from_ratio(F, 1, 5)}), Cx(1, 0)));
}

TEST_CASE("characters of E^x: multiplicativity, Galois action, regularity") {
  FieldDesc F(3);
  ExtField E(F);
  ExtCharacter eta(E, 1, 1, Cx(1, 0));
  // Multiplicative on residue pairs.
  const auto& T = ExtResidueTable::get(F.p, E.rho);
  for (std::int64_t a = 0; a < 3; ++a)
    for (std::int64_t b = 0; b < 3; ++b) {
      if (a == 0 && b == 0) continue;
      auto prod = pair_mul(3, 3, E.rho, {a, b}, {2, 1});
      CHECK(close(eta.eval_residue(prod.first, prod.second),
                  eta.eval_residue(a, b) * eta.eval_residue(2, 1)));
    }
  // Galois action is Frobenius on the residue field: eta^sigma(x) = eta(x^p).
  ExtCharacter etag = eta.galois(E);
  auto x3 = pair_mul(3, 3, E.rho, {1, 1}, pair_mul(3, 3, E.rho, {1, 1}, {1, 1}));
  CHECK(close(etag.eval_residue(1, 1), eta.eval_residue(x3.first, x3.second)));
  // eta of full order p^2-1 is regular; the norm-pullback of a base character
  // is not. (chi o Nr)^sigma = chi o Nr since Nr is Galois-invariant.
  CHECK(eta.is_regular(E));
  ExtCharacter normpull = mul_norm_pullback(E, ExtCharacter::trivial(E),
                                            QuasiCharacter(UnitCharacter(3, 1, 1), Cx(1, 0)));
  CHECK(!normpull.is_regular(E));
  (void)T;
}

TEST_CASE("restriction to F^x and norm pullback are consistent") {
  FieldDesc F(5);
  ExtField E(F);
  // For any base unit u, (chi o Nr)(u) = chi(u^2) = chi(u)^2 (Nr(u) = u^2).
  QuasiCharacter chi(UnitCharacter(5, 1, 1), Cx(0.5, 0.25));
  ExtCharacter pulled = mul_norm_pullback(E, ExtCharacter::trivial(E), chi);
  for (std::int64_t u = 1; u < 5; ++u)
    CHECK(close(pulled.eval_residue(u, 0), chi.xi.eval_unit(u) * chi.xi.eval_unit(u)));
  // Restriction back to F of any eta agrees with direct evaluation at (u, 0).
  ExtCharacter eta(E, 1, 7, Cx(2, 0));
  QuasiCharacter res = eta.restrict_to_base(E);
  for (std::int64_t u = 1; u < 5; ++u)
    CHECK(close(res.xi.eval_unit(u), eta.eval_residue(u, 0)));
  CHECK(close(res.z, eta.z));
}

TEST_CASE("norm-one subgroup: size and character averages") {
  FieldDesc F(5);
  ExtField E(F);
  // vol(E^1) = 1: the average of the constant 1 is 1.
  CHECK(close(norm_one_integral(E, 2, [&](const EPadic&) { return Cx(1, 0); }), Cx(1, 0)));
  // E^1 has p+1 residue classes; a character of k_E^x of order p^2-1
  // restricted to the norm-one residues has a nonzero component count:
  // sum over E^1 residues of eta = 0 for eta regular (non-trivial on E^1).
  ExtCharacter eta(E, 1, 1, Cx(1, 0));
  Cx s = norm_one_integral(E, 1, [&](const EPadic& d) {
    return eta.eval_residue(d.a.is_zero() ? 0 : d.a.unit_mod(1), d.b.is_zero() ? 0 : d.b.unit_mod(1));
  });
  CHECK(close(s, Cx(0, 0), 1e-10));
}

TEST_CASE("solve_norm_unit produces exact norm preimages") {
  FieldDesc F(7);
  ExtField E(F);
  for (std::int64_t u0 : {1, 2, 3, 6, 10, 48}) {
    Padic u = Padic::from_int(F, u0);
    EPadic x = solve_norm_unit(E, u);
    CHECK(norm(E, x) == u);
  }
}
