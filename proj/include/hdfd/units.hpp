#pragma once

#include <cmath>

namespace hdfd {

// Power-like quantities are given in dB relative to the unit noise variance;
// with sigma2 = 1 only the power-to-noise ratio matters.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace hdfd
