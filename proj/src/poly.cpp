#include "ratdyn/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ratdyn/error.hpp"

namespace ratdyn {

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Polynomial::derivative(Complex z) const {
  Complex acc = 0.0;
  for (int i = degree(); i >= 1; --i) acc = acc * z + static_cast<double>(i) * coeffs[i];
  return acc;
}

double Polynomial::magnitude(Complex z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (coeffs.empty() || rhs.coeffs.empty()) return {};
  Polynomial out{std::vector<Complex>(coeffs.size() + rhs.coeffs.size() - 1, 0.0)};
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j) out.coeffs[i + j] += coeffs[i] * rhs.coeffs[j];
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  Polynomial out{std::vector<Complex>(std::max(coeffs.size(), rhs.coeffs.size()), 0.0)};
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] += coeffs[i];
  for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) out.coeffs[i] += rhs.coeffs[i];
  return out;
}

Polynomial Polynomial::operator*(Complex s) const {
  Polynomial out = *this;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

double relative_residual(const Polynomial& poly, Complex z) {
  const double scale = poly.magnitude(z);
  return scale > 0.0 ? std::abs(poly(z)) / scale : std::abs(poly(z));
}

std::vector<Complex> roots(const Polynomial& poly, int polish_steps) {
  const int n = poly.degree();
  if (n < 1 || poly.coeffs.back() == 0.0)
    throw Error(ErrorKind::SolverFailure, "polynomial has no leading coefficient");
  if (n == 1) return {-poly.coeffs[0] / poly.coeffs[1]};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = poly.coeffs.back();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -poly.coeffs[i] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "companion eigen-decomposition failed");

  std::vector<Complex> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Complex z = solver.eigenvalues()[i];
    Complex best = z;
    double best_res = std::abs(poly(z));
    for (int step = 0; step < polish_steps; ++step) {
      const Complex d = poly.derivative(z);
      if (d == 0.0) break;
      const Complex next = z - poly(z) / d;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      z = next;
      const double res = std::abs(poly(z));
      if (res < best_res) {
        best_res = res;
        best = z;
      }
      if (res == 0.0) break;
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace ratdyn
