#pragma once

#include <complex>
#include <vector>

namespace pfaff {

/// Roots of a complex-coefficient polynomial given by ascending
/// coefficients (companion-matrix eigenvalues). Leading zeros are trimmed.
std::vector<std::complex<double>> poly_roots(std::vector<std::complex<double>> coeffs);

}  // namespace pfaff
