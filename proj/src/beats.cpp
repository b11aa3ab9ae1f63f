#include "beats.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace gabic {

FrequencySpectrum fft_spectrum(std::span<const double> series, double dt) {
  const std::size_t n = series.size();
  if (n < 256) throw InputError("fft_spectrum needs at least 256 uniform samples");
  if (!(dt > 0.0)) throw InputError("sample spacing must be positive");

  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= double(n);

  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = series[i] - mean;
  const std::size_t nf = n / 2 + 1;
  std::vector<std::complex<double>> out(nf);
  fftw_plan plan = fftw_plan_dft_r2c_1d(int(n), in.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  FrequencySpectrum sp;
  sp.resolution = 2.0 * M_PI / (double(n) * dt);
  sp.omega.resize(Eigen::Index(nf));
  sp.magnitude.resize(Eigen::Index(nf));
  for (std::size_t m = 0; m < nf; ++m) {
    sp.omega(Eigen::Index(m)) = sp.resolution * double(m);
    sp.magnitude(Eigen::Index(m)) = std::abs(out[m]);
  }
  sp.magnitude(0) = 0.0;
  return sp;
}

PeakReport detect_peaks(const FrequencySpectrum& spectrum, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
    throw InputError("rel_threshold must lie in (0, 1)");

  PeakReport report;
  const auto& mag = spectrum.magnitude;
  const Eigen::Index n = mag.size();
  if (n < 3) return report;
  // magnitudes at the rounding level (a constant series after mean removal)
  // carry no signal; report an empty spectrum rather than noise extrema
  const double max_mag = mag.maxCoeff();
  if (!(max_mag > 1e-9)) return report;
  const double peak_floor = rel_threshold * max_mag;

  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (!(mag(i) > mag(i - 1))) continue;
    // run to the end of a possible plateau; report its lowest frequency
    Eigen::Index j = i;
    while (j + 1 < n && mag(j + 1) == mag(i)) ++j;
    if (j + 1 < n && mag(j + 1) < mag(i) && mag(i) >= peak_floor)
      report.peaks.push_back({spectrum.omega(i), mag(i)});
    i = j;
  }

  std::stable_sort(report.peaks.begin(), report.peaks.end(),
                   [](const Peak& a, const Peak& b) {
                     if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
                     return a.omega < b.omega;
                   });
  return report;
}

void match_beats(PeakReport& report, const BoundStateModel& model, double resolution) {
  const std::array<std::pair<double, const char*>, 3> targets = {{
      {model.delta_lower, "delta_L"},
      {model.delta_upper, "delta_U"},
      {model.delta_lower + model.delta_upper, "delta_L+delta_U"},
  }};
  report.matches.clear();
  for (const Peak& p : report.peaks) {
    double best = std::numeric_limits<double>::infinity();
    const char* label = nullptr;
    for (const auto& [freq, name] : targets) {
      const double dev = std::abs(p.omega - freq);
      if (dev < best) {
        best = dev;
        label = name;
      }
    }
    if (best <= 2.0 * resolution) report.matches.push_back({p, label, best});
  }
}

}  // namespace gabic
