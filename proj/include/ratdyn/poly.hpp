#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ratdyn {

using Complex = std::complex<double>;

/// Polynomial with coefficients in ascending order: coeffs[i] multiplies z^i.
struct Polynomial {
  std::vector<Complex> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// Sum of |coeff|·|z|^i; the natural scale for a residual at z.
  double magnitude(Complex z) const;

  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator*(Complex s) const;
};

/// All roots of `poly` (leading coefficient nonzero) with multiplicity.
///
/// Eigenvalues of the companion matrix give the starting points; each root is
/// then Newton-polished on the original coefficients for at most
/// `polish_steps` steps, keeping the iterate with the smallest residual.
/// Companion eigenvalues stay accurate near clustered roots where Cardano-type
/// closed forms cancel catastrophically.
std::vector<Complex> roots(const Polynomial& poly, int polish_steps = 20);

/// Relative residual |p(z)| / magnitude(z).
double relative_residual(const Polynomial& poly, Complex z);

}  // namespace ratdyn
