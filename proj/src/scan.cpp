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

#include "rhs/scan.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "rhs/efftl.hpp"
#include "rhs/sigchain.hpp"

namespace rhs::scan {

namespace {

using doppler::Complex;

std::vector<double> detuning_grid(double center, double span, int points) {
  std::vector<double> grid(points);
  const double start = center - 0.5 * span;
  for (int i = 0; i < points; ++i)
    grid[i] = start + span * i / (points - 1);
  return grid;
}

double resolve_center(const atomsys::ValidatedSystem& sys,
                      const ScanOptions& opt) {
  return std::isnan(opt.center) ? sys.coupling().detuning : opt.center;
}

void check_options(const ScanOptions& opt) {
  if (opt.points < 8)
    throw std::domain_error("scan: need at least 8 points");
  if (!(opt.span > 0.0))
    throw std::domain_error("scan: span must be > 0");
}

// Inner quadrature stays serial whenever the points run in parallel; the
// quadrature itself is thread-count invariant either way.
doppler::QuadratureOptions inner_quadrature(const ScanOptions& opt) {
  doppler::QuadratureOptions quad = opt.quad;
  if (opt.policy == ExecPolicy::Parallel) quad.policy = ExecPolicy::Serial;
  return quad;
}

// Doppler-averaged dispersion-formula susceptibility at one coupling
// detuning. Velocity classes where the formula is outside its validity
// window contribute zero and raise the clipped flag.
Complex chi_eff2l_point(const atomsys::ValidatedSystem& sys, double delta_c,
                        const doppler::QuadratureOptions& quad,
                        std::atomic<bool>* clipped) {
  const double omega_p = sys.probe().rabi;
  const double omega_c = sys.coupling().rabi;
  const double delta_p = sys.probe().detuning;
  const double k_p = sys.probe().wavevector;
  const double delta_k = sys.delta_k();
  const double gamma_eg = sys.rates().gamma_eg;
  const double gamma_rg = sys.rates().gamma_rg;

  std::vector<double> seeds;
  if (k_p != 0.0) {
    const double v_e = delta_p / k_p;
    const double guard = 10.0 * std::max(omega_p, gamma_eg) / std::abs(k_p);
    seeds.insert(seeds.end(), {v_e - guard, v_e, v_e + guard});
  }
  if (delta_k != 0.0 && delta_p != delta_c) {
    const efftl::EffectiveTL at_rest =
        efftl::effective_params(omega_p, omega_c, delta_p, delta_c, delta_k,
                                0.0, gamma_rg);
    const double v_star = -at_rest.delta_eff / (2.0 * delta_k);
    const double width =
        std::max(std::sqrt(2.0) * std::abs(at_rest.omega_eff), gamma_rg) /
        (2.0 * std::abs(delta_k));
    seeds.push_back(v_star);
    if (width > 0.0) {
      seeds.push_back(v_star - width);
      seeds.push_back(v_star + width);
    }
  }

  const auto integrand = [&](double v) -> Complex {
    const efftl::EffectiveTL eff = efftl::effective_params(
        omega_p, omega_c, delta_p, delta_c, delta_k, v, gamma_rg);
    const efftl::Eq2Result eq2 =
        efftl::dispersion_eq2(omega_p, omega_c, delta_p, k_p, v, eff, gamma_eg);
    if (!eq2.valid) {
      clipped->store(true, std::memory_order_relaxed);
      return Complex{0.0, 0.0};
    }
    return Complex{eq2.value, 0.0};
  };

  const doppler::AverageResult avg =
      doppler::thermal_average(integrand, sys.thermal_speed(), quad, seeds);
  const double re = doppler::chi_prefactor(sys) * avg.value.real();
  const double ratio = efftl::im_re_ratio(gamma_rg, delta_p, omega_p);
  return Complex{re, ratio * re};
}

Spectrum scan_on_grid(const atomsys::ValidatedSystem& sys,
                      const ScanOptions& opt,
                      const std::vector<double>& grid) {
  Spectrum s;
  s.points.resize(grid.size());
  s.meta.engine = opt.engine;
  s.meta.system = sys.config();
  s.meta.rel_tol = opt.quad.rel_tol;

  const doppler::QuadratureOptions quad = inner_quadrature(opt);
  const double k_p = sys.probe().wavevector;
  const double length = sys.cell_length();
  std::atomic<bool> clipped{false};

  std::mutex mu;
  std::exception_ptr error;
  parallel_for_index(grid.size(), opt.policy, [&](std::size_t i) {
    try {
      Complex chi;
      if (opt.engine == Engine::Full) {
        chi = doppler::chi_3l(sys, grid[i], quad).value;
      } else {
        chi = chi_eff2l_point(sys, grid[i], quad, &clipped);
      }
      SpectrumPoint& p = s.points[i];
      p.delta_c = grid[i];
      p.chi_re = chi.real();
      p.chi_im = chi.imag();
      p.phase = sigchain::phase_uniform(chi.real(), k_p, length);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);

  s.meta.clipped = clipped.load();
  return s;
}

double median_abs(std::span<const double> y) {
  std::vector<double> mag(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) mag[i] = std::abs(y[i]);
  const std::size_t mid = mag.size() / 2;
  std::nth_element(mag.begin(), mag.begin() + mid, mag.end());
  return mag[mid];
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y,
                   double t) {
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double frac = (t - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + frac * (y[hi] - y[lo]);
}

}  // namespace

Spectrum scan_spectrum(const atomsys::ValidatedSystem& sys,
                       const ScanOptions& opt) {
  check_options(opt);
  const double center = resolve_center(sys, opt);
  return scan_on_grid(sys, opt, detuning_grid(center, opt.span, opt.points));
}

Spectrum overlay_lines(const atomsys::ValidatedSystem& sys,
                       const ScanOptions& opt,
                       std::span<const LineSpec> lines) {
  check_options(opt);
  if (lines.empty())
    throw std::invalid_argument("overlay_lines: need at least one line");
  for (const LineSpec& line : lines)
    if (!(line.weight > 0.0))
      throw std::domain_error("overlay_lines: weights must be > 0");

  const double center = resolve_center(sys, opt);
  const std::vector<double> grid = detuning_grid(center, opt.span, opt.points);

  Spectrum total;
  total.points.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    total.points[i].delta_c = grid[i];

  bool clipped = false;
  for (const LineSpec& line : lines) {
    std::vector<double> shifted(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      shifted[i] = grid[i] - line.offset;
    const Spectrum one = scan_on_grid(sys, opt, shifted);
    clipped = clipped || one.meta.clipped;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      total.points[i].chi_re += line.weight * one.points[i].chi_re;
      total.points[i].chi_im += line.weight * one.points[i].chi_im;
    }
  }
  for (SpectrumPoint& p : total.points)
    p.phase = sigchain::phase_uniform(p.chi_re, sys.probe().wavevector,
                                      sys.cell_length());

  total.meta.engine = opt.engine;
  total.meta.system = sys.config();
  total.meta.rel_tol = opt.quad.rel_tol;
  total.meta.clipped = clipped;
  return total;
}

FitResult gaussian_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("gaussian_fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 5) throw std::invalid_argument("gaussian_fit: need at least 5 points");

  // Work on an x-sorted copy so the width seed can walk the profile.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  if (xs.back() <= xs.front())
    throw std::invalid_argument("gaussian_fit: degenerate abscissa");

  std::size_t peak = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(ys[i]) > std::abs(ys[peak])) peak = i;
  const double a0 = ys[peak];
  if (std::abs(a0) <= 3.0 * median_abs(ys))
    throw std::invalid_argument("gaussian_fit: no dominant peak");

  const double half = 0.5 * std::abs(a0);
  double left = xs.front();
  bool left_hit = false;
  for (std::size_t i = peak; i-- > 0;)
    if (std::abs(ys[i]) <= half) {
      left = xs[i];
      left_hit = true;
      break;
    }
  double right = xs.back();
  bool right_hit = false;
  for (std::size_t i = peak + 1; i < n; ++i)
    if (std::abs(ys[i]) <= half) {
      right = xs[i];
      right_hit = true;
      break;
    }
  const double span = xs.back() - xs.front();
  double fwhm;
  if (left_hit && right_hit)
    fwhm = right - left;
  else if (left_hit)
    fwhm = 2.0 * (xs[peak] - left);
  else if (right_hit)
    fwhm = 2.0 * (right - xs[peak]);
  else
    fwhm = span / 3.0;
  if (!(fwhm > 0.0)) fwhm = span / 3.0;

  // Fit in centered, scaled coordinates for conditioning.
  const double scale = span;
  const double x0 = xs[peak];
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (xs[i] - x0) / scale;

  Eigen::Vector3d theta(a0, 0.0, std::max(fwhm / 2.355 / scale, 1e-9));
  const auto cost_of = [&](const Eigen::Vector3d& t) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (u[i] - t[1]) / t[2];
      const double r = t[0] * std::exp(-0.5 * z * z) - ys[i];
      c += r * r;
    }
    return c;
  };

  double cost = cost_of(theta);
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  for (; iter < 200; ++iter) {
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (u[i] - theta[1]) / theta[2];
      const double e = std::exp(-0.5 * z * z);
      const double m = theta[0] * e;
      const double r = m - ys[i];
      Eigen::Vector3d j(e, m * z / theta[2], m * z * z / theta[2]);
      hess.noalias() += j * j.transpose();
      grad.noalias() += j * r;
    }

    bool accepted = false;
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    for (int trial = 0; trial < 40; ++trial) {
      Eigen::Matrix3d damped = hess;
      for (int k = 0; k < 3; ++k)
        damped(k, k) += lambda * std::max(hess(k, k), 1e-30);
      step = damped.ldlt().solve(-grad);
      Eigen::Vector3d candidate = theta + step;
      if (std::abs(candidate[2]) < 1e-12)
        candidate[2] = candidate[2] < 0.0 ? -1e-12 : 1e-12;
      const double candidate_cost = cost_of(candidate);
      if (std::isfinite(candidate_cost) && candidate_cost <= cost) {
        theta = candidate;
        cost = candidate_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;

    double rel = 0.0;
    for (int k = 0; k < 3; ++k)
      rel = std::max(rel, std::abs(step[k]) / (std::abs(theta[k]) + 1e-30));
    if (rel < 1e-8) {
      converged = true;
      break;
    }
  }

  FitResult out;
  out.amplitude = theta[0];
  out.center = x0 + theta[1] * scale;
  out.width = std::abs(theta[2]) * scale;
  out.rms_residual = std::sqrt(cost / n);
  out.converged = converged;
  out.iterations = iter;
  return out;
}

FitResult fit_spectrum_phase(const Spectrum& s) {
  std::vector<double> x(s.points.size());
  std::vector<double> y(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    x[i] = s.points[i].delta_c;
    y[i] = s.points[i].phase;
  }
  return gaussian_fit(x, y);
}

SymmetryFractions symmetry_decompose(const Spectrum& s, double center) {
  const std::vector<SpectrumPoint>& pts = s.points;
  if (pts.size() < 3)
    throw std::domain_error("symmetry_decompose: need at least 3 points");

  std::vector<double> x(pts.size());
  std::vector<double> y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x[i] = pts[i].delta_c;
    y[i] = pts[i].phase;
  }

  std::vector<double> dx(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) dx[i] = x[i + 1] - x[i];
  const std::size_t mid = dx.size() / 2;
  std::nth_element(dx.begin(), dx.begin() + mid, dx.end());
  const double h = dx[mid];
  if (!(h > 0.0))
    throw std::domain_error("symmetry_decompose: grid is not increasing");

  const double reach = std::min(center - x.front(), x.back() - center);
  const int m = static_cast<int>(std::floor(reach / h));
  if (m < 1)
    throw std::domain_error(
        "symmetry_decompose: center too close to the window edge");

  double even_energy = 0.0;
  double odd_energy = 0.0;
  for (int k = -m; k <= m; ++k) {
    const double plus = interpolate(x, y, center + k * h);
    const double minus = interpolate(x, y, center - k * h);
    const double even = 0.5 * (plus + minus);
    const double odd = 0.5 * (plus - minus);
    even_energy += even * even;
    odd_energy += odd * odd;
  }
  const double total = even_energy + odd_energy;
  if (total == 0.0)
    throw std::domain_error("symmetry_decompose: zero signal energy");
  return SymmetryFractions{even_energy / total, odd_energy / total};
}

double find_peak(const Spectrum& s) {
  const std::vector<SpectrumPoint>& pts = s.points;
  if (pts.empty()) throw std::domain_error("find_peak: empty spectrum");
  const int n = static_cast<int>(pts.size());

  double best = -1.0;
  double best_dc = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    int count = 0;
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      sum += std::abs(pts[j].phase);
      ++count;
    }
    const double smooth = sum / count;
    if (smooth > best ||
        (smooth == best && std::abs(pts[i].delta_c) < std::abs(best_dc))) {
      best = smooth;
      best_dc = pts[i].delta_c;
    }
  }
  return best_dc;
}

PeakHeightCurves peak_height_curve(const atomsys::ValidatedSystem& sys,
                                   std::span<const double> probe_rabis,
                                   std::span<const double> densities,
                                   const ScanOptions& opt) {
  if (probe_rabis.empty() || densities.empty())
    throw std::invalid_argument("peak_height_curve: empty sweep axis");
  for (double r : probe_rabis)
    if (!(r > 0.0))
      throw std::domain_error("peak_height_curve: probe Rabi must be > 0");
  for (double d : densities)
    if (!(d > 0.0))
      throw std::domain_error("peak_height_curve: density must be > 0");

  PeakHeightCurves curves;
  curves.probe_rabis.assign(probe_rabis.begin(), probe_rabis.end());
  curves.densities.assign(densities.begin(), densities.end());

  for (double density : densities) {
    std::vector<double> row;
    for (double rabi : probe_rabis) {
      atomsys::SystemConfig cfg = sys.config();
      cfg.density = density;
      cfg.probe.rabi = rabi;
      const atomsys::ValidatedSystem varied = atomsys::validate(cfg);

      ScanOptions point_opt = opt;
      if (std::isnan(opt.center))
        point_opt.center =
            efftl::light_shifted_resonance(rabi, cfg.probe.detuning);
      const Spectrum s = scan_spectrum(varied, point_opt);

      double peak = 0.0;
      for (const SpectrumPoint& p : s.points)
        peak = std::max(peak, std::abs(p.chi_re));
      row.push_back(peak);
    }
    curves.peak_re.push_back(row);
  }

  for (const std::vector<double>& row : curves.peak_re) {
    if (row.front() == 0.0)
      throw std::domain_error("peak_height_curve: zero reference peak");
    std::vector<double> norm(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) norm[i] = row[i] / row.front();
    curves.normalized.push_back(norm);
  }
  return curves;
}

MeasuredSpectrum load_measured_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  const auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
      s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
  };

  std::string line;
  if (!std::getline(in, line) ||
      strip(line) != "detuning_MHz,phase_urad")
    throw std::runtime_error(path + ": expected detuning_MHz,phase_urad header");

  MeasuredSpectrum out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = strip(line);
    if (row.empty()) continue;
    const std::size_t comma = row.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": missing comma on line " +
                               std::to_string(lineno));
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    double mhz = 0.0;
    double urad = 0.0;
    try {
      mhz = std::stod(row.substr(0, comma), &used1);
      urad = std::stod(row.substr(comma + 1), &used2);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": bad number on line " +
                               std::to_string(lineno));
    }
    out.detuning.push_back(mhz_to_rad(mhz));
    out.phase.push_back(urad * 1e-6);
  }
  if (out.detuning.empty())
    throw std::runtime_error(path + ": no data rows");
  return out;
}

double fit_gain(std::span<const double> model, std::span<const double> data) {
  if (model.size() != data.size() || model.empty())
    throw std::invalid_argument("fit_gain: size mismatch");
  double mm = 0.0;
  double md = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    mm += model[i] * model[i];
    md += model[i] * data[i];
  }
  if (mm == 0.0) throw std::domain_error("fit_gain: zero model");
  return md / mm;
}

}  // namespace rhs::scan
