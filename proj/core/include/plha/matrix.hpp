// Small (2x2, 3x3) matrices over F with exact p-adic entries: products,
// determinants, inverses, transpose-inverse involution, Weyl elements and the
// standard unipotent/diagonal coordinates.
#pragma once

#include <array>

#include "plha/field.hpp"

namespace plha {

template <int n>
struct Mat {
  FieldDesc F;
  std::array<Padic, static_cast<size_t>(n * n)> e;

  explicit Mat(const FieldDesc& F_) : F(F_) { e.fill(Padic::zero(F_)); }

  Padic& at(int i, int j) { return e[static_cast<size_t>(i * n + j)]; }
  const Padic& at(int i, int j) const { return e[static_cast<size_t>(i * n + j)]; }

  static Mat identity(const FieldDesc& F) {
    Mat m(F);
    for (int i = 0; i < n; ++i) m.at(i, i) = Padic::from_int(F, 1);
    return m;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat r(a.F);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Padic s = Padic::zero(a.F);
        for (int k = 0; k < n; ++k) s = s + a.at(i, k) * b.at(k, j);
        r.at(i, j) = s;
      }
    return r;
  }
  friend Mat operator+(const Mat& a, const Mat& b) {
    Mat r(a.F);
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
  }
  friend Mat operator*(const Padic& c, const Mat& a) {
    Mat r(a.F);
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = c * a.e[i];
    return r;
  }

  Mat transpose() const {
    Mat r(F);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.at(i, j) = at(j, i);
    return r;
  }

  Padic det() const {
    if constexpr (n == 2) {
      return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    } else {
      Padic s = Padic::zero(F);
      s = s + at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1));
      s = s - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0));
      s = s + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
      return s;
    }
  }

  Mat inverse() const {
    Padic d = det();
    Mat r(F);
    if constexpr (n == 2) {
      r.at(0, 0) = at(1, 1) / d;
      r.at(0, 1) = -at(0, 1) / d;
      r.at(1, 0) = -at(1, 0) / d;
      r.at(1, 1) = at(0, 0) / d;
    } else {
      auto cof = [&](int i, int j) {
        int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        return at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
      };
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(j, i) = cof(i, j) / d;
    }
    return r;
  }

  // g^iota = transpose-inverse.
  Mat iota() const { return transpose().inverse(); }

  friend bool operator==(const Mat& a, const Mat& b) {
    for (size_t i = 0; i < a.e.size(); ++i)
      if (!(a.e[i] == b.e[i])) return false;
    return true;
  }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

// diag(y, 1) and the upper unipotent n(x) in GL(2).
inline Mat2 a2(const FieldDesc& F, const Padic& y) {
  Mat2 m = Mat2::identity(F);
  m.at(0, 0) = y;
  return m;
}
inline Mat2 n2(const FieldDesc& F, const Padic& x) {
  Mat2 m = Mat2::identity(F);
  m.at(0, 1) = x;
  return m;
}
inline Mat2 diag2(const FieldDesc& F, const Padic& a, const Padic& b) {
  Mat2 m(F);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}
inline Mat3 diag3(const FieldDesc& F, const Padic& a, const Padic& b, const Padic& c) {
  Mat3 m(F);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  m.at(2, 2) = c;
  return m;
}

// Long Weyl elements: antidiagonal with alternating signs so det = 1.
inline Mat2 weyl_w2(const FieldDesc& F) {
  Mat2 m(F);
  m.at(0, 1) = Padic::from_int(F, 1);
  m.at(1, 0) = Padic::from_int(F, -1);
  return m;
}
inline Mat3 weyl_w3(const FieldDesc& F) {
  Mat3 m(F);
  m.at(0, 2) = Padic::from_int(F, 1);
  m.at(1, 1) = Padic::from_int(F, -1);
  m.at(2, 0) = Padic::from_int(F, 1);
  return m;
}
// w_{3,1} = block-antidiagonal ( (0, 1), (I_2, 0) ) embedding GL(2) x GL(1).
// w_{3,1} = diag(1, w_2): the block Weyl element with 1 in the corner and the
// antidiagonal flip on the lower GL(2) block.
inline Mat3 weyl_w31(const FieldDesc& F) {
  Mat3 m(F);
  m.at(0, 0) = Padic::from_int(F, 1);
  m.at(1, 2) = Padic::from_int(F, 1);
  m.at(2, 1) = Padic::from_int(F, 1);
  return m;
}

// GL(2) embedded in the upper-left block of GL(3).
inline Mat3 embed_gl2(const FieldDesc& F, const Mat2& h) {
  Mat3 m = Mat3::identity(F);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.at(i, j) = h.at(i, j);
  return m;
}

}  // namespace plha
