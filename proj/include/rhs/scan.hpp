// Copyright 2026 the rhs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "rhs/atomsys.hpp"
#include "rhs/constants.hpp"
#include "rhs/doppler.hpp"

namespace rhs::scan {

enum class Engine { Full, EffectiveTL };

struct ScanOptions {
  Engine engine = Engine::Full;
  int points = 401;
  double span = mhz_to_rad(400.0);             // rad/s, full width
  double center = atomsys::kUnsetDouble;       // rad/s; default: configured coupling detuning
  doppler::QuadratureOptions quad;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct SpectrumPoint {
  double delta_c = 0.0;  // rad/s
  double chi_re = 0.0;
  double chi_im = 0.0;
  double phase = 0.0;    // rad, uniform-cell heterodyne phase
};

struct SpectrumMeta {
  Engine engine = Engine::Full;
  atomsys::SystemConfig system;
  double rel_tol = 0.0;
  // Set when the closed-form engine skipped velocity classes too close to
  // the intermediate resonance for the dispersion formula to hold.
  bool clipped = false;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;  // strictly increasing delta_c, >= 8 points
  SpectrumMeta meta;
};

// One overlaid transition: the single-line model shifted by offset and
// scaled by weight (> 0).
struct LineSpec {
  double offset = 0.0;  // rad/s
  double weight = 1.0;
};

Spectrum scan_spectrum(const atomsys::ValidatedSystem& sys,
                       const ScanOptions& opt);
Spectrum overlay_lines(const atomsys::ValidatedSystem& sys,
                       const ScanOptions& opt, std::span<const LineSpec> lines);

struct FitResult {
  double amplitude = 0.0;     // same units as y
  double center = 0.0;        // same units as x
  double width = 0.0;         // Gaussian sigma, > 0 when converged
  double rms_residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Levenberg-Marquardt fit of A exp(-(x-c)^2 / (2 w^2)), seeded from the
// extremum and the half-maximum width. Rejects data without a dominant
// single peak (|extremum| must exceed three times the median magnitude).
FitResult gaussian_fit(std::span<const double> x, std::span<const double> y);
FitResult fit_spectrum_phase(const Spectrum& s);

struct SymmetryFractions {
  double symmetric = 0.0;
  double antisymmetric = 0.0;  // the two sum to one
};

// Energy split of the phase channel into even and odd parts about center,
// on a symmetric resampled grid.
SymmetryFractions symmetry_decompose(const Spectrum& s, double center);

// Detuning of the extremum of |phase| after 5-point moving-average
// smoothing; ties resolve toward lower |delta_c|.
double find_peak(const Spectrum& s);

struct PeakHeightCurves {
  std::vector<double> probe_rabis;  // rad/s, first entry = weak-probe reference
  std::vector<double> densities;    // m^-3
  std::vector<std::vector<double>> peak_re;     // [density][rabi], max |Re chi|
  std::vector<std::vector<double>> normalized;  // peak_re over its first column
};

PeakHeightCurves peak_height_curve(const atomsys::ValidatedSystem& sys,
                                   std::span<const double> probe_rabis,
                                   std::span<const double> densities,
                                   const ScanOptions& opt);

// External measured spectra: CSV with a detuning_MHz,phase_urad header.
struct MeasuredSpectrum {
  std::vector<double> detuning;  // rad/s
  std::vector<double> phase;     // rad
};
MeasuredSpectrum load_measured_csv(const std::string& path);

// Single least-squares scale factor mapping a model curve onto data.
double fit_gain(std::span<const double> model, std::span<const double> data);

}  // namespace rhs::scan
