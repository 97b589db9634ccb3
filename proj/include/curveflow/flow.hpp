#pragma once

namespace curveflow {

// Normal-velocity law beta = -d2k/ds2 + b(k).  Every model represents the
// lower-order term as an odd polynomial b(k) = c1 k + c3 k^3 + c5 k^5, which
// keeps b(0) = 0 and b of class C^2 by construction and makes the quotient
// b(k)/k a plain polynomial.  The position system needs
//   phi(k) = k^2 - b(k)/k,
// which is therefore evaluated in closed form, defined at k = 0 as well.
struct FlowModel {
  enum class Kind { SurfaceDiffusion, Willmore, OddPolynomial };

  Kind kind = Kind::SurfaceDiffusion;
  double c1 = 0.0;
  double c3 = 0.0;
  double c5 = 0.0;

  friend bool operator==(const FlowModel&, const FlowModel&) = default;

  static FlowModel surface_diffusion() { return {Kind::SurfaceDiffusion, 0.0, 0.0, 0.0}; }
  static FlowModel willmore() { return {Kind::Willmore, 0.0, -0.5, 0.0}; }
  static FlowModel odd_polynomial(double c1, double c3, double c5) {
    return {Kind::OddPolynomial, c1, c3, c5};
  }

  // b(k)
  double lower_order_term(double k) const {
    const double k2 = k * k;
    return k * (c1 + k2 * (c3 + k2 * c5));
  }

  // k^2 - b(k)/k, the coefficient of the second intrinsic derivative in the
  // position equation.  Total on all of R; never divides by k.
  double second_order_coefficient(double k) const {
    const double k2 = k * k;
    return k2 - (c1 + k2 * (c3 + k2 * c5));
  }
};

}  // namespace curveflow
