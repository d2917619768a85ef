#pragma once
// Named test distributions shared by the detectors, the classifier corpus and the CLI.

#include <cstdint>
#include <string>

#include "microsing/spectral.hpp"
#include "microsing/trigpoly.hpp"

namespace microsing::corpus {

// delta_{x0}: coefficients (2pi)^{-d/2} e^{-i k.x0}
SpectralDistribution delta(const FrequencyLattice& lat, Point x0 = {0.0, 0.0});
// derivative of delta_{x0}
SpectralDistribution delta_prime(const FrequencyLattice& lat, double x0 = 0.0);
// a_k = (1+k)^{-1} for k >= 0, else 0 (d = 1)
SpectralDistribution hardy(const FrequencyLattice& lat);
// a_k = 1/(ik), a_0 = 0 (d = 1); jump at x = 0
SpectralDistribution sawtooth(const FrequencyLattice& lat);
// |a_k| = (1+|k|)^{-alpha} with a fixed phase pattern
SpectralDistribution power_law(const FrequencyLattice& lat, double alpha);
SpectralDistribution exp_decay(const FrequencyLattice& lat, double rate);
// a_k = exp(-|k|^2 / (2 width^2))
SpectralDistribution gaussian_decay(const FrequencyLattice& lat, double width);
// random complex coefficients with exp(-|k|/2) envelope
SpectralDistribution random_smooth(const FrequencyLattice& lat, std::uint64_t seed);
// unit-modulus random phases: a generic singular distribution
SpectralDistribution random_phase(const FrequencyLattice& lat, std::uint64_t seed);
// random coefficients supported on |k|_inf <= K
SpectralDistribution band_limited_random(const FrequencyLattice& lat, std::uint64_t seed, int K);
// d = 2: delta(x) (x) 1(y), the line delta on {x = 0}
SpectralDistribution line_delta(const FrequencyLattice& lat2);
// exact product f*u of a trigonometric polynomial with u, truncated to the lattice
SpectralDistribution multiply(const TrigPoly& f, const SpectralDistribution& u);

// CLI constructors: delta:x0, hardy, sawtooth, power:alpha, exp:rate, gaussian:width,
// random:seed, random-smooth:seed, modes:FILE (JSON container).
SpectralDistribution parse_spec(const std::string& spec, const FrequencyLattice& lat);

}  // namespace microsing::corpus
