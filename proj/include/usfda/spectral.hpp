#pragma once

#include <vector>

#include "usfda/image.hpp"

namespace usfda::spectral {

// Magnitude/phase decomposition of a spectrum. Phase lies in (-pi, pi] and
// is defined as 0 where the magnitude is 0.
struct MagPhase {
  Shape shape;
  std::vector<double> magnitude;
  std::vector<double> phase;
  DcPosition dc_position = DcPosition::corner;
};

// Unnormalized 2D DFT with DC in the corner:
//   F(m,n) = sum_x sum_y I(x,y) e^{-j2pi(x m / W + y n / H)}.
// Throws InvalidInputError naming the first non-finite pixel.
Spectrum2D forward_dft(const Image2D& img);

// Inverse of forward_dft including the 1/(W*H) factor. The result must be
// real: if max|imag| >= 1e-6 * (max|real| + 1) a SpectralInconsistencyError
// is thrown. Requires a corner-DC spectrum.
Image2D inverse_dft(const Spectrum2D& spec);

// Relative threshold on the imaginary residue used by inverse_dft.
inline constexpr double kImagResidueTolerance = 1e-6;

// Largest |imag| relative to (max|real| + 1) after an unnormalized inverse;
// exposed so callers can probe before committing to inverse_dft.
double imaginary_residue(const Spectrum2D& spec);

MagPhase split_mag_phase(const Spectrum2D& spec);

// magnitude * e^{j phase}; keeps the decomposition's DC position. Throws
// InvalidInputError on a negative or non-finite magnitude.
Spectrum2D recombine(const MagPhase& mp);

// Cyclic rotation by (floor(W/2), floor(H/2)) moving DC from the corner to
// the center, and its exact inverse.
Spectrum2D shift_dc(const Spectrum2D& spec);
Spectrum2D unshift_dc(const Spectrum2D& spec);

// log(1 + |F|) of the center-shifted spectrum, min-max normalized to [0,1].
Image2D log_magnitude_image(const Spectrum2D& spec);

}  // namespace usfda::spectral
