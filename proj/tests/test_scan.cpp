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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rhs/atomsys.hpp"
#include "rhs/constants.hpp"
#include "rhs/efftl.hpp"
#include "rhs/parallel.hpp"
#include "rhs/scan.hpp"

using namespace rhs;
using rhs::testing::reference_config;

namespace {

atomsys::ValidatedSystem scan_system(double probe_rabi_mhz,
                                     double probe_detuning_mhz = 1300.0,
                                     double temperature = 403.15) {
  auto cfg = reference_config();
  cfg.probe.rabi = mhz_to_rad(probe_rabi_mhz);
  cfg.probe.detuning = mhz_to_rad(probe_detuning_mhz);
  cfg.coupling.detuning = -mhz_to_rad(probe_detuning_mhz);
  cfg.temperature = temperature;
  cfg.thermal_speed = atomsys::kUnsetDouble;
  return atomsys::validate(cfg);
}

scan::ScanOptions cheap_options() {
  scan::ScanOptions opt;
  opt.points = 8;
  opt.span = mhz_to_rad(120.0);
  opt.quad.rel_tol = 1e-4;
  return opt;
}

scan::Spectrum synthetic_spectrum(const std::vector<double>& x,
                                  const std::vector<double>& phase) {
  scan::Spectrum s;
  s.points.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    s.points[i].delta_c = x[i];
    s.points[i].phase = phase[i];
  }
  return s;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("scan grid is uniform and spans the requested window") {
  const auto sys = scan_system(20.0);
  auto opt = cheap_options();
  opt.center = -mhz_to_rad(1300.0);
  const auto s = scan::scan_spectrum(sys, opt);
  REQUIRE(s.points.size() == 8);
  CHECK(s.points.front().delta_c ==
        doctest::Approx(opt.center - 0.5 * opt.span).epsilon(1e-14));
  CHECK(s.points.back().delta_c ==
        doctest::Approx(opt.center + 0.5 * opt.span).epsilon(1e-14));
  const double h = s.points[1].delta_c - s.points[0].delta_c;
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    CHECK(s.points[i].delta_c - s.points[i - 1].delta_c ==
          doctest::Approx(h).epsilon(1e-12));
  }
  CHECK(s.meta.engine == scan::Engine::Full);
  CHECK(s.meta.rel_tol == opt.quad.rel_tol);
}

TEST_CASE("per point phase is the uniform cell conversion of the dispersion") {
  const auto sys = scan_system(20.0);
  const auto s = scan::scan_spectrum(sys, cheap_options());
  for (const auto& p : s.points) {
    CHECK(p.phase == 0.5 * sys.probe().wavevector * sys.cell_length() *
                         p.chi_re);
  }
}

TEST_CASE("scan rejects degenerate grids") {
  const auto sys = scan_system(20.0);
  auto few = cheap_options();
  few.points = 7;
  CHECK_THROWS_AS(scan::scan_spectrum(sys, few), std::domain_error);
  auto flat = cheap_options();
  flat.span = 0.0;
  CHECK_THROWS_AS(scan::scan_spectrum(sys, flat), std::domain_error);
}

TEST_CASE("scanning with the coupling beam off gives a null spectrum") {
  auto cfg = reference_config();
  cfg.coupling.rabi = 0.0;
  const auto sys = atomsys::validate(cfg);
  const auto s = scan::scan_spectrum(sys, cheap_options());
  for (const auto& p : s.points) {
    CHECK(p.chi_re == 0.0);
    CHECK(p.chi_im == 0.0);
    CHECK(p.phase == 0.0);
  }
}

TEST_CASE("repeated scans are bit for bit identical") {
  const auto sys = scan_system(20.0);
  const auto a = scan::scan_spectrum(sys, cheap_options());
  const auto b = scan::scan_spectrum(sys, cheap_options());
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].chi_re == b.points[i].chi_re);
    CHECK(a.points[i].chi_im == b.points[i].chi_im);
  }
}

TEST_CASE("serial and parallel scans are bit for bit identical") {
  const auto sys = scan_system(20.0);
  auto serial = cheap_options();
  serial.policy = ExecPolicy::Serial;
  auto parallel = cheap_options();
  parallel.policy = ExecPolicy::Parallel;
  const auto a = scan::scan_spectrum(sys, serial);
  const auto b = scan::scan_spectrum(sys, parallel);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].chi_re == b.points[i].chi_re);
    CHECK(a.points[i].chi_im == b.points[i].chi_im);
  }
}

TEST_CASE("reduced engine clips detunings outside its validity window") {
  const auto strong = scan_system(400.0);
  auto opt = cheap_options();
  opt.engine = scan::Engine::EffectiveTL;
  opt.points = 21;
  opt.span = mhz_to_rad(400.0);
  const auto clipped = scan::scan_spectrum(strong, opt);
  CHECK(clipped.meta.clipped);
  for (const auto& p : clipped.points) CHECK(p.chi_re == 0.0);

  const auto cold = scan_system(10.0, 5000.0, 10.0);
  auto cold_opt = opt;
  cold_opt.center = efftl::light_shifted_resonance(cold.probe().rabi,
                                                   cold.probe().detuning) +
                    mhz_to_rad(60.0);
  cold_opt.span = mhz_to_rad(100.0);
  const auto open = scan::scan_spectrum(cold, cold_opt);
  CHECK_FALSE(open.meta.clipped);
  double max_re = 0.0;
  for (const auto& p : open.points)
    max_re = std::max(max_re, std::abs(p.chi_re));
  CHECK(max_re > 0.0);
  CHECK(open.meta.engine == scan::Engine::EffectiveTL);
}

TEST_CASE("overlaid lines appear at their offsets with their weights") {
  const auto sys = scan_system(60.0, 7800.0);
  scan::ScanOptions opt;
  opt.points = 121;
  opt.span = mhz_to_rad(9000.0);
  opt.quad.rel_tol = 1e-4;
  const scan::LineSpec lines[] = {{-mhz_to_rad(2000.0), 1.0},
                                  {0.0, 0.7},
                                  {mhz_to_rad(2000.0), 0.5}};
  const auto s = scan::overlay_lines(sys, opt, lines);

  double max_im = 0.0;
  for (const auto& p : s.points) max_im = std::max(max_im, std::abs(p.chi_im));
  std::vector<double> peak_heights;
  std::vector<double> peak_positions;
  for (std::size_t i = 1; i + 1 < s.points.size(); ++i) {
    const double y0 = std::abs(s.points[i - 1].chi_im);
    const double y1 = std::abs(s.points[i].chi_im);
    const double y2 = std::abs(s.points[i + 1].chi_im);
    if (y1 > y0 && y1 > y2 && y1 > 0.2 * max_im) {
      peak_heights.push_back(y1);
      peak_positions.push_back(s.points[i].delta_c);
    }
  }
  REQUIRE(peak_heights.size() == 3);
  CHECK(peak_positions[2] - peak_positions[0] ==
        doctest::Approx(mhz_to_rad(4000.0)).epsilon(0.05));
  CHECK(peak_heights[1] / peak_heights[0] == doctest::Approx(0.7).epsilon(0.05));
  CHECK(peak_heights[2] / peak_heights[0] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("overlay input must be non empty with positive weights") {
  const auto sys = scan_system(20.0);
  const std::vector<scan::LineSpec> none;
  CHECK_THROWS_AS(scan::overlay_lines(sys, cheap_options(), none),
                  std::invalid_argument);
  const scan::LineSpec bad[] = {{0.0, 0.0}};
  CHECK_THROWS_AS(scan::overlay_lines(sys, cheap_options(), bad),
                  std::domain_error);
}

TEST_CASE("gaussian fit recovers exact parameters") {
  const double a = 50e-6;
  const double c = mhz_to_rad(-12.0);
  const double w = mhz_to_rad(30.0);
  std::vector<double> x(101);
  std::vector<double> y(101);
  for (int i = 0; i <= 100; ++i) {
    x[i] = mhz_to_rad(-150.0 + 3.0 * i);
    const double z = (x[i] - c) / w;
    y[i] = a * std::exp(-0.5 * z * z);
  }
  const auto fit = scan::gaussian_fit(x, y);
  CHECK(fit.converged);
  CHECK(std::abs(fit.amplitude / a - 1.0) < 1e-9);
  CHECK(std::abs(fit.center - c) < 1e-9 * w);
  CHECK(std::abs(fit.width / w - 1.0) < 1e-9);
  CHECK(fit.rms_residual < 1e-12 * a);
}

TEST_CASE("gaussian fit recovers a negative dip") {
  const double a = -20e-6;
  const double w = mhz_to_rad(25.0);
  std::vector<double> x(81);
  std::vector<double> y(81);
  for (int i = 0; i <= 80; ++i) {
    x[i] = mhz_to_rad(-120.0 + 3.0 * i);
    const double z = x[i] / w;
    y[i] = a * std::exp(-0.5 * z * z);
  }
  const auto fit = scan::gaussian_fit(x, y);
  CHECK(fit.converged);
  CHECK(std::abs(fit.amplitude / a - 1.0) < 1e-9);
  CHECK(std::abs(fit.center) < 1e-9 * w);
}

TEST_CASE("gaussian fit tolerates noise at the few percent level") {
  const double a = 50e-6;
  const double w = mhz_to_rad(30.0);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 2e-6);
  std::vector<double> x(101);
  std::vector<double> y(101);
  for (int i = 0; i <= 100; ++i) {
    x[i] = mhz_to_rad(-150.0 + 3.0 * i);
    const double z = x[i] / w;
    y[i] = a * std::exp(-0.5 * z * z) + noise(rng);
  }
  const auto fit = scan::gaussian_fit(x, y);
  CHECK(fit.converged);
  CHECK(std::abs(fit.amplitude / a - 1.0) < 0.1);
  CHECK(std::abs(fit.center) < 0.2 * w);
  CHECK(std::abs(fit.width / w - 1.0) < 0.1);
}

TEST_CASE("gaussian fit rejects unusable inputs") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> y{0.0, 0.0, 1.0, 0.0};
  CHECK_THROWS_AS(scan::gaussian_fit(x, y), std::invalid_argument);

  std::vector<double> x4{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y4{0.0, 0.0, 1.0, 0.0};
  CHECK_THROWS_AS(scan::gaussian_fit(x4, y4), std::invalid_argument);

  std::vector<double> same(6, 2.0);
  std::vector<double> y6{0.0, 0.1, 1.0, 0.1, 0.0, 0.0};
  CHECK_THROWS_AS(scan::gaussian_fit(same, y6), std::invalid_argument);

  std::vector<double> x6{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<double> flat(6, 0.3);
  CHECK_THROWS_AS(scan::gaussian_fit(x6, flat), std::invalid_argument);
}

TEST_CASE("symmetry decomposition separates even and odd profiles") {
  std::vector<double> x(201);
  std::vector<double> even(201);
  std::vector<double> odd(201);
  for (int i = 0; i <= 200; ++i) {
    x[i] = -2.0 + 0.02 * i;
    even[i] = std::exp(-x[i] * x[i]);
    odd[i] = x[i] * std::exp(-x[i] * x[i]);
  }
  const auto se = scan::symmetry_decompose(synthetic_spectrum(x, even), 0.0);
  CHECK(se.symmetric > 0.999);
  CHECK(se.symmetric + se.antisymmetric == doctest::Approx(1.0).epsilon(1e-12));
  const auto so = scan::symmetry_decompose(synthetic_spectrum(x, odd), 0.0);
  CHECK(so.antisymmetric > 0.999);

  std::vector<double> scaled(201);
  for (int i = 0; i <= 200; ++i) scaled[i] = 1000.0 * even[i];
  const auto ss = scan::symmetry_decompose(synthetic_spectrum(x, scaled), 0.0);
  CHECK(std::abs(ss.symmetric - se.symmetric) < 1e-12);
}

TEST_CASE("symmetry decomposition rejects degenerate spectra") {
  std::vector<double> x{0.0, 1.0};
  std::vector<double> y{1.0, 1.0};
  CHECK_THROWS_AS(scan::symmetry_decompose(synthetic_spectrum(x, y), 0.5),
                  std::domain_error);

  std::vector<double> x3{0.0, 0.0, 0.0};
  std::vector<double> y3{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(scan::symmetry_decompose(synthetic_spectrum(x3, y3), 0.0),
                  std::domain_error);

  std::vector<double> x5{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y5{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(scan::symmetry_decompose(synthetic_spectrum(x5, y5), 0.05),
                  std::domain_error);

  std::vector<double> zero(5, 0.0);
  CHECK_THROWS_AS(scan::symmetry_decompose(synthetic_spectrum(x5, zero), 2.0),
                  std::domain_error);
}

TEST_CASE("peak finding smooths and breaks ties toward zero detuning") {
  std::vector<double> x(11);
  std::vector<double> y(11);
  for (int i = 0; i <= 10; ++i) {
    x[i] = -0.5 + 0.1 * i;
    const double z = (x[i] - 0.2) / 0.15;
    y[i] = std::exp(-z * z);
  }
  const auto s = synthetic_spectrum(x, y);
  CHECK(scan::find_peak(s) == doctest::Approx(0.2).epsilon(1e-9));

  std::vector<double> flat(11, 0.7);
  const auto tie = synthetic_spectrum(x, flat);
  CHECK(std::abs(scan::find_peak(tie)) <= 0.05 + 1e-12);

  scan::Spectrum empty;
  CHECK_THROWS_AS(scan::find_peak(empty), std::domain_error);
}

TEST_CASE("normalized peak height curves are density independent") {
  const auto sys = scan_system(20.0);
  const std::vector<double> rabis{mhz_to_rad(20.0), mhz_to_rad(40.0)};
  const std::vector<double> densities{1.0e19, 3.0e19};
  auto opt = cheap_options();
  const auto curves = scan::peak_height_curve(sys, rabis, densities, opt);
  REQUIRE(curves.normalized.size() == 2);
  REQUIRE(curves.normalized[0].size() == 2);
  CHECK(curves.normalized[0][0] == 1.0);
  CHECK(curves.normalized[1][0] == 1.0);
  for (std::size_t j = 0; j < rabis.size(); ++j) {
    CHECK(std::abs(curves.normalized[1][j] - curves.normalized[0][j]) <=
          1e-12 * std::abs(curves.normalized[0][j]));
  }
  CHECK(curves.peak_re[1][0] ==
        doctest::Approx(3.0 * curves.peak_re[0][0]).epsilon(1e-12));

  const std::vector<double> bad_rabi{0.0};
  CHECK_THROWS_AS(scan::peak_height_curve(sys, bad_rabi, densities, opt),
                  std::domain_error);
  const std::vector<double> none;
  CHECK_THROWS_AS(scan::peak_height_curve(sys, none, densities, opt),
                  std::invalid_argument);
}

TEST_CASE("measured spectra survive a save and load round trip") {
  const auto path = temp_file("rhs_measured_roundtrip.csv");
  {
    std::ofstream out(path);
    out << "detuning_MHz,phase_urad\n";
    out << "-150,50\n";
    out << "-147.5,49.25\r\n";
    out << "\n";
    out << "  -145 , 48.5 \n";
  }
  const auto m = scan::load_measured_csv(path.string());
  REQUIRE(m.detuning.size() == 3);
  CHECK(m.detuning[0] == mhz_to_rad(-150.0));
  CHECK(m.detuning[1] == mhz_to_rad(-147.5));
  CHECK(m.detuning[2] == mhz_to_rad(-145.0));
  CHECK(m.phase[0] == doctest::Approx(50e-6).epsilon(1e-12));
  CHECK(m.phase[2] == doctest::Approx(48.5e-6).epsilon(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("measured spectrum loader reports malformed files") {
  CHECK_THROWS_AS(scan::load_measured_csv("/nonexistent/rhs.csv"),
                  std::runtime_error);

  const auto bad_header = temp_file("rhs_bad_header.csv");
  {
    std::ofstream out(bad_header);
    out << "freq,phi\n1,2\n";
  }
  CHECK_THROWS_AS(scan::load_measured_csv(bad_header.string()),
                  std::runtime_error);

  const auto no_comma = temp_file("rhs_no_comma.csv");
  {
    std::ofstream out(no_comma);
    out << "detuning_MHz,phase_urad\n";
    out << "12 34\n";
  }
  CHECK_THROWS_AS(scan::load_measured_csv(no_comma.string()),
                  std::runtime_error);

  const auto bad_number = temp_file("rhs_bad_number.csv");
  {
    std::ofstream out(bad_number);
    out << "detuning_MHz,phase_urad\n";
    out << "12,abc\n";
  }
  CHECK_THROWS_AS(scan::load_measured_csv(bad_number.string()),
                  std::runtime_error);

  const auto empty = temp_file("rhs_empty.csv");
  {
    std::ofstream out(empty);
    out << "detuning_MHz,phase_urad\n";
  }
  CHECK_THROWS_AS(scan::load_measured_csv(empty.string()), std::runtime_error);

  std::filesystem::remove(bad_header);
  std::filesystem::remove(no_comma);
  std::filesystem::remove(bad_number);
  std::filesystem::remove(empty);
}

TEST_CASE("gain fit recovers a pure scale factor") {
  const std::vector<double> model{1.0, 2.0, 3.0, -1.5};
  std::vector<double> data(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) data[i] = 2.5 * model[i];
  CHECK(scan::fit_gain(model, data) == doctest::Approx(2.5).epsilon(1e-15));

  const std::vector<double> short_data{1.0};
  CHECK_THROWS_AS(scan::fit_gain(model, short_data), std::invalid_argument);
  const std::vector<double> zeros(4, 0.0);
  CHECK_THROWS_AS(scan::fit_gain(zeros, data), std::domain_error);
}

TEST_CASE("phase spectrum fit extracts the line parameters") {
  const double a = 40e-6;
  const double c = mhz_to_rad(5.0);
  const double w = mhz_to_rad(18.0);
  scan::Spectrum s;
  s.points.resize(61);
  for (int i = 0; i <= 60; ++i) {
    const double x = mhz_to_rad(-60.0 + 2.0 * i);
    const double z = (x - c) / w;
    s.points[i].delta_c = x;
    s.points[i].phase = a * std::exp(-0.5 * z * z);
  }
  const auto fit = scan::fit_spectrum_phase(s);
  CHECK(fit.converged);
  CHECK(std::abs(fit.amplitude / a - 1.0) < 1e-6);
  CHECK(std::abs(fit.center - c) < 1e-6 * w);
}
