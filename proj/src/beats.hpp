#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynamics.hpp"

namespace gabic {

// One-sided magnitude spectrum of a mean-subtracted real series.
struct FrequencySpectrum {
  Eigen::VectorXd omega;      // [0, pi/dt], angular frequency
  Eigen::VectorXd magnitude;  // |X_m|, DC removed
  double resolution = 0.0;    // 2 pi / T
};

FrequencySpectrum fft_spectrum(std::span<const double> series, double dt);

struct Peak {
  double omega = 0.0;
  double magnitude = 0.0;
};

struct PeakMatch {
  Peak peak;
  std::string label;       // delta_L, delta_U or delta_L+delta_U
  double deviation = 0.0;  // |peak - detuning|
};

struct PeakReport {
  std::vector<Peak> peaks;         // sorted by magnitude, descending
  std::vector<PeakMatch> matches;  // filled by match_beats
};

// Local maxima with magnitude >= rel_threshold * max; plateau ties resolve to
// the lowest frequency.
PeakReport detect_peaks(const FrequencySpectrum& spectrum, double rel_threshold = 0.05);

// Matches each detected peak to the nearest of {delta_L, delta_U,
// delta_L + delta_U} when within two frequency bins.
void match_beats(PeakReport& report, const BoundStateModel& model, double resolution);

}  // namespace gabic
