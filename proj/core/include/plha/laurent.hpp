// Elements of C(X) in factored form: c * X^shift * num(X) / prod_i (1 - b_i X)^{m_i}.
// Supports exact algebra, variable substitutions X -> cX and X -> 1/X,
// partial fractions, Laurent expansion on an annulus, and the diagonal
// pairing used for Mellin inversion. No polynomial root-finding is ever done:
// every constructor produces denominators already factored.
#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "plha/field.hpp"

namespace plha {

inline double binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (std::int64_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

class LaurentRational {
 public:
  LaurentRational() = default;  // zero

  static LaurentRational zero() { return LaurentRational(); }
  static LaurentRational constant(Cx c) { return monomial(c, 0); }
  static LaurentRational monomial(Cx c, std::int64_t m) {
    LaurentRational r;
    if (std::abs(c) == 0.0) return r;
    r.shift_ = m;
    r.num_ = {c};
    return r;
  }
  // c * X^m / (1 - beta X)^mult
  static LaurentRational geometric(Cx c, std::int64_t m, Cx beta, int mult = 1) {
    LaurentRational r = monomial(c, m);
    if (!r.is_zero() && std::abs(beta) > 0.0) r.den_.push_back({beta, mult});
    return r;
  }

  bool is_zero() const { return num_.empty(); }
  std::int64_t shift() const { return shift_; }
  const std::vector<Cx>& num() const { return num_; }
  const std::vector<std::pair<Cx, int>>& den() const { return den_; }
  bool is_monomial() const { return num_.size() == 1 && den_.empty(); }

  // Coefficient of X^m when the object is a pure Laurent polynomial.
  Cx poly_coeff(std::int64_t m) const {
    assert(den_.empty());
    std::int64_t j = m - shift_;
    if (j < 0 || j >= static_cast<std::int64_t>(num_.size())) return 0.0;
    return num_[static_cast<size_t>(j)];
  }

  Cx eval(Cx X) const {
    if (is_zero()) return 0.0;
    Cx n = 0.0;
    for (size_t j = num_.size(); j-- > 0;) n = n * X + num_[j];
    n *= std::pow(X, static_cast<double>(shift_));
    for (const auto& [b, m] : den_)
      for (int i = 0; i < m; ++i) n /= (Cx(1, 0) - b * X);
    return n;
  }

  friend LaurentRational operator*(const LaurentRational& A, const LaurentRational& B) {
    if (A.is_zero() || B.is_zero()) return zero();
    LaurentRational r;
    r.shift_ = A.shift_ + B.shift_;
    r.num_.assign(A.num_.size() + B.num_.size() - 1, Cx(0, 0));
    for (size_t i = 0; i < A.num_.size(); ++i)
      for (size_t j = 0; j < B.num_.size(); ++j) r.num_[i + j] += A.num_[i] * B.num_[j];
    r.den_ = A.den_;
    for (const auto& f : B.den_) r.push_den(f.first, f.second);
    r.reduce();
    return r;
  }
  friend LaurentRational operator*(Cx c, const LaurentRational& A) {
    if (std::abs(c) == 0.0) return zero();
    LaurentRational r = A;
    for (auto& x : r.num_) x *= c;
    return r;
  }
  friend LaurentRational operator+(const LaurentRational& A, const LaurentRational& B) {
    if (A.is_zero()) return B;
    if (B.is_zero()) return A;
    // Common denominator: per beta the max multiplicity.
    std::vector<std::pair<Cx, int>> D = A.den_;
    for (const auto& [b, m] : B.den_) {
      bool found = false;
      for (auto& [b2, m2] : D)
        if (same_beta(b, b2)) {
          m2 = std::max(m2, m);
          found = true;
          break;
        }
      if (!found) D.push_back({b, m});
    }
    auto lifted = [&](const LaurentRational& R) {
      std::vector<Cx> n = R.num_;
      for (const auto& [b, m] : D) {
        int have = 0;
        for (const auto& [b2, m2] : R.den_)
          if (same_beta(b, b2)) have = m2;
        for (int i = 0; i < m - have; ++i) n = mul_linear(n, b);
      }
      return n;
    };
    std::vector<Cx> na = lifted(A), nb = lifted(B);
    std::int64_t s = std::min(A.shift_, B.shift_);
    LaurentRational r;
    r.shift_ = s;
    r.num_.assign(std::max(na.size() + static_cast<size_t>(A.shift_ - s),
                           nb.size() + static_cast<size_t>(B.shift_ - s)),
                  Cx(0, 0));
    for (size_t i = 0; i < na.size(); ++i) r.num_[i + static_cast<size_t>(A.shift_ - s)] += na[i];
    for (size_t i = 0; i < nb.size(); ++i) r.num_[i + static_cast<size_t>(B.shift_ - s)] += nb[i];
    r.den_ = D;
    // Clean cancellation dust relative to the operand scale, not the
    // (possibly tiny) result scale.
    double scale = 0.0;
    for (Cx c : na) scale = std::max(scale, std::abs(c));
    for (Cx c : nb) scale = std::max(scale, std::abs(c));
    for (Cx& c : r.num_)
      if (std::abs(c) <= 1e-12 * scale) c = Cx(0, 0);
    r.reduce();
    return r;
  }
  friend LaurentRational operator-(const LaurentRational& A, const LaurentRational& B) {
    return A + Cx(-1, 0) * B;
  }

  // Reciprocal, requiring the numerator to be a monomial times a product of
  // (1 - beta X) factors; general numerators are inverted only when they are
  // recognized as such (used for L-factor quotients, which are built factored).
  LaurentRational reciprocal_of_factored() const {
    assert(!is_zero());
    LaurentRational r;
    // Numerator must be a monomial or a single linear factor c(1 - bX);
    // every construction site keeps its denominators factored, so higher
    // degrees never need inverting.
    std::vector<Cx> n = num_;
    std::vector<std::pair<Cx, int>> peeled;
    if (n.size() == 2) {
      Cx b = -n[1] / n[0];
      peeled.push_back({b, 1});
      n.pop_back();
    } else if (n.size() > 2) {
      throw std::domain_error("reciprocal: numerator degree too high for factored inversion");
    }
    Cx c = n[0];
    r.shift_ = -shift_;
    r.num_ = {Cx(1, 0) / c};
    r.den_ = peeled;
    // Former denominator becomes numerator factors.
    for (const auto& [b, m] : den_)
      for (int i = 0; i < m; ++i) r.num_ = mul_linear(r.num_, b);
    r.reduce();
    return r;
  }

  friend LaurentRational operator/(const LaurentRational& A, const LaurentRational& B) {
    return A * B.reciprocal_of_factored();
  }

  // Substitution X -> c X.
  LaurentRational scale_var(Cx c) const {
    if (is_zero()) return zero();
    LaurentRational r = *this;
    Cx pw = std::pow(c, static_cast<double>(shift_));
    for (size_t j = 0; j < r.num_.size(); ++j) {
      r.num_[j] *= pw;
      pw *= c;
    }
    for (auto& [b, m] : r.den_) b *= c;
    return r;
  }
  // Substitution X -> 1/X.
  LaurentRational reflect_var() const {
    if (is_zero()) return zero();
    LaurentRational r;
    std::int64_t deg = static_cast<std::int64_t>(num_.size()) - 1;
    std::int64_t totden = 0;
    Cx c(1, 0);
    for (const auto& [b, m] : den_) {
      totden += m;
      c *= std::pow(-b, static_cast<double>(m));
    }
    r.shift_ = -shift_ - deg + totden;
    r.num_.assign(num_.rbegin(), num_.rend());
    for (auto& x : r.num_) x /= c;
    for (const auto& [b, m] : den_) r.den_.push_back({Cx(1, 0) / b, m});
    r.reduce();
    return r;
  }
  // Substitution X -> (qX)^{-1}  (i.e. s -> 1 - s on X = q^{-s}).
  LaurentRational reflect_var_q(double q) const { return reflect_var().scale_var(q); }

  // Partial-fraction decomposition: Laurent-polynomial part plus terms
  // (beta, l, a) meaning a / (1 - beta X)^l.
  struct PoleTerm {
    Cx beta;
    int l;
    Cx a;
  };
  void partial_fractions(LaurentRational& poly, std::vector<PoleTerm>& poles) const {
    LaurentRational rem = *this;
    poles.clear();
    int guard = 0;
    while (!rem.den_.empty()) {
      if (++guard > 64) throw std::logic_error("partial_fractions: no convergence");
      auto [b, m] = rem.den_.front();
      // g := rem * (1 - bX)^m evaluated at X = 1/b.
      LaurentRational g = rem;
      g.den_.erase(g.den_.begin());
      Cx a = g.eval(Cx(1, 0) / b);
      poles.push_back({b, m, a});
      rem = rem - geometric(a, 0, b, m);
      // The subtraction must cancel one power of (1 - bX); reduce() does it.
    }
    poly = rem;
  }

  // Laurent coefficients of X^n, n in [n0, n1], in the expansion converging
  // on |X| = radius (one partial-fraction pass).
  std::vector<Cx> coeff_range(std::int64_t n0, std::int64_t n1, double radius) const {
    std::vector<Cx> out(static_cast<size_t>(n1 - n0 + 1), Cx(0, 0));
    if (is_zero()) return out;
    LaurentRational poly;
    std::vector<PoleTerm> poles;
    partial_fractions(poly, poles);
    for (std::int64_t n = n0; n <= n1; ++n) {
      Cx c = poly.is_zero() ? Cx(0, 0) : poly.poly_coeff(n);
      for (const auto& t : poles) {
        double br = std::abs(t.beta) * radius;
        if (std::abs(br - 1.0) < 1e-12)
          throw std::domain_error("laurent coefficients: pole on the contour");
        if (br < 1.0) {
          if (n >= 0)
            c += t.a * binom(n + t.l - 1, t.l - 1) * std::pow(t.beta, static_cast<double>(n));
        } else {
          // 1/(1-bX)^l = (-bX)^{-l} (1 - (bX)^{-1})^{-l}
          std::int64_t j = -n - t.l;
          if (j >= 0)
            c += t.a * std::pow(-1.0, t.l) * binom(j + t.l - 1, t.l - 1) *
                 std::pow(t.beta, static_cast<double>(-t.l - j));
        }
      }
      out[static_cast<size_t>(n - n0)] = c;
    }
    return out;
  }
  Cx laurent_coeff(std::int64_t n, double radius) const { return coeff_range(n, n, radius)[0]; }

  // Sum_n coeff_n(A) * coeff_{-n}(B), both expanded on the annulus
  // |X| = radius (the non-archimedean Mellin-inversion pairing; normalization
  // matches the shell-volume-1 Haar conventions, pinned by the inversion
  // round trip).
  friend Cx diagonal_pair(const LaurentRational& A, const LaurentRational& B, double radius) {
    if (A.is_zero() || B.is_zero()) return 0.0;
    std::vector<Cx> a = A.coeff_range(-kPairRange, kPairRange, radius);
    std::vector<Cx> b = B.coeff_range(-kPairRange, kPairRange, radius);
    Cx s = 0.0;
    for (std::int64_t n = -kPairRange; n <= kPairRange; ++n)
      s += a[static_cast<size_t>(n + kPairRange)] * b[static_cast<size_t>(kPairRange - n)];
    return s;
  }

  // Approximate equality as rational functions: cross-multiplied coefficient
  // comparison, tolerance relative to the largest coefficient.
  friend bool approx_equal(const LaurentRational& A, const LaurentRational& B, double tol = 1e-9) {
    LaurentRational d = A - B;
    if (d.is_zero()) return true;
    double mx = 0.0, scale = 0.0;
    for (Cx c : d.num_) mx = std::max(mx, std::abs(c));
    for (Cx c : A.num_) scale = std::max(scale, std::abs(c));
    for (Cx c : B.num_) scale = std::max(scale, std::abs(c));
    return mx <= tol * std::max(1.0, scale);
  }

  // Remove cancelling numerator/denominator factors and trim zero coefficients.
  void reduce(double tol = 1e-11) {
    if (num_.empty()) {
      den_.clear();
      shift_ = 0;
      return;
    }
    double mx = 0.0;
    for (Cx c : num_) mx = std::max(mx, std::abs(c));
    if (mx <= 1e-300) {
      num_.clear();
      den_.clear();
      shift_ = 0;
      return;
    }
    while (!num_.empty() && std::abs(num_.back()) <= tol * mx) num_.pop_back();
    size_t lead = 0;
    while (lead < num_.size() && std::abs(num_[lead]) <= tol * mx) ++lead;
    if (lead > 0) {
      num_.erase(num_.begin(), num_.begin() + static_cast<std::ptrdiff_t>(lead));
      shift_ += static_cast<std::int64_t>(lead);
    }
    if (num_.empty()) {
      den_.clear();
      shift_ = 0;
      return;
    }
    // Cancel (1 - bX) factors dividing the numerator.
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0 && num_.size() > 1) {
        std::vector<Cx> qpoly = divide_linear(num_, it->first);
        if (qpoly.empty()) break;
        num_ = qpoly;
        --it->second;
      }
      if (it->second == 0)
        it = den_.erase(it);
      else
        ++it;
    }
    std::sort(den_.begin(), den_.end(), [](const auto& a, const auto& b) {
      if (std::abs(a.first.real() - b.first.real()) > 1e-12) return a.first.real() < b.first.real();
      return a.first.imag() < b.first.imag();
    });
  }

 private:
  static constexpr std::int64_t kPairRange = 256;

  static bool same_beta(Cx a, Cx b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

  void push_den(Cx b, int m) {
    for (auto& [b2, m2] : den_)
      if (same_beta(b, b2)) {
        m2 += m;
        return;
      }
    den_.push_back({b, m});
  }

  // Multiply polynomial by (1 - bX).
  static std::vector<Cx> mul_linear(const std::vector<Cx>& n, Cx b) {
    std::vector<Cx> r(n.size() + 1, Cx(0, 0));
    for (size_t i = 0; i < n.size(); ++i) {
      r[i] += n[i];
      r[i + 1] -= b * n[i];
    }
    return r;
  }
  // Exact division by (1 - bX); empty result signals non-divisibility.
  static std::vector<Cx> divide_linear(const std::vector<Cx>& n, Cx b) {
    // n(X) = (1 - bX) q(X): q_0 = n_0; q_i = n_i + b q_{i-1}.
    if (n.size() < 2) return {};
    std::vector<Cx> q(n.size() - 1);
    q[0] = n[0];
    for (size_t i = 1; i < q.size(); ++i) q[i] = n[i] + b * q[i - 1];
    Cx rem = n.back() + b * q.back();
    double mx = 0.0;
    for (Cx c : n) mx = std::max(mx, std::abs(c));
    if (std::abs(rem) > 1e-7 * std::max(1.0, mx)) return {};
    return q;
  }

  std::int64_t shift_ = 0;
  std::vector<Cx> num_;  // empty means the zero function
  std::vector<std::pair<Cx, int>> den_;
};

}  // namespace plha
