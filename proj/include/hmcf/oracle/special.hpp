#pragma once

namespace hmcf::oracle {

/// Error function (libm, correctly rounded to within an ulp or two).
double erf(double x);

/// Inverse error function: Halley iteration on erf from a rational initial
/// guess, converged to machine precision. Throws DomainError for |y| ≥ 1.
double erf_inv(double y);

}  // namespace hmcf::oracle
