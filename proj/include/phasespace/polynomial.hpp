#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>

namespace phasespace {

using cplx = std::complex<double>;

/// Sparse polynomial sum c_ab q^a p^b with complex coefficients (commutative
/// product; the noncommutative one is the star product).
class PolySymbol {
 public:
  using Monomial = std::pair<int, int>;  // (power of q, power of p)

  PolySymbol() = default;
  static PolySymbol constant(cplx c);
  static PolySymbol monomial(int q_power, int p_power, cplx c = 1.0);
  static PolySymbol q() { return monomial(1, 0); }
  static PolySymbol p() { return monomial(0, 1); }

  const std::map<Monomial, cplx>& terms() const { return terms_; }
  cplx coefficient(int q_power, int p_power) const;
  void add_term(int q_power, int p_power, cplx c);

  /// Highest total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  cplx operator()(double q, double p) const;
  PolySymbol d_q(int order = 1) const;
  PolySymbol d_p(int order = 1) const;

  /// Euclidean norm of the coefficient vector.
  double coefficient_norm() const;

  /// Drops coefficients with magnitude at or below tol.
  PolySymbol pruned(double tol) const;
  PolySymbol conj() const;

  PolySymbol& operator+=(const PolySymbol& o);
  PolySymbol& operator-=(const PolySymbol& o);
  PolySymbol& operator*=(cplx s);

  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator*(PolySymbol a, cplx s) { return a *= s; }
  friend PolySymbol operator*(cplx s, PolySymbol a) { return a *= s; }
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);

  std::string to_string() const;

 private:
  std::map<Monomial, cplx> terms_;
};

/// Coefficient-norm distance.
double distance(const PolySymbol& a, const PolySymbol& b);

}  // namespace phasespace
