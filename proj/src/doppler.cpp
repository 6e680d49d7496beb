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

#include "rhs/doppler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "rhs/constants.hpp"
#include "rhs/obe.hpp"

namespace rhs::doppler {

namespace {

// 7-15 Gauss-Kronrod pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Complex integral{0.0, 0.0};
  double err = 0.0;
  bool evaluated = false;
};

struct Weighted {
  const std::function<Complex(double)>* f;
  double inv_two_sigma_sq;
  double norm;

  Complex operator()(double v) const {
    return (*f)(v)*std::exp(-v * v * inv_two_sigma_sq) * norm;
  }
};

void evaluate_panel(Panel& p, const Weighted& g) {
  const double mid = 0.5 * (p.a + p.b);
  const double half = 0.5 * (p.b - p.a);
  const Complex fc = g(mid);
  Complex resk = kWgk[7] * fc;
  Complex resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const Complex f1 = g(mid - half * kXgk[j]);
    const Complex f2 = g(mid + half * kXgk[j]);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  p.integral = half * resk;
  p.err = std::abs(half * (resk - resg));
  p.evaluated = true;
}

}  // namespace

AverageResult thermal_average(const std::function<Complex(double)>& f,
                              double v_p, const QuadratureOptions& opt,
                              std::span<const double> breakpoints) {
  if (!(v_p > 0.0))
    throw std::domain_error("thermal_average: thermal speed must be > 0");
  if (!(opt.rel_tol > 0.0))
    throw std::domain_error("thermal_average: rel_tol must be > 0");
  if (opt.max_panels < 4)
    throw std::domain_error("thermal_average: max_panels too small");

  const double lo = -6.0 * v_p;
  const double hi = 6.0 * v_p;

  std::vector<double> edges{lo, hi};
  for (double b : breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  // Drop edges that would create degenerate panels.
  const double min_gap = (hi - lo) * 1e-12;
  std::vector<double> clean{edges.front()};
  for (double e : edges)
    if (e - clean.back() > min_gap) clean.push_back(e);
  if (clean.back() < hi) clean.back() = hi;

  // Split every segment until none exceeds the width cap.
  const double cap = std::max(opt.max_panel_width, 1e-3) * v_p;
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < clean.size(); ++i) {
    const double a = clean[i];
    const double b = clean[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / cap)));
    for (int k = 0; k < pieces; ++k) {
      Panel p;
      p.a = a + (b - a) * k / pieces;
      p.b = (k + 1 == pieces) ? b : a + (b - a) * (k + 1) / pieces;
      panels.push_back(p);
    }
  }

  const Weighted g{&f, 1.0 / (2.0 * v_p * v_p),
                   1.0 / (std::sqrt(kTwoPi) * v_p)};

  QuadratureDiagnostics diag;
  auto evaluate_pending = [&](std::vector<std::size_t>& pending) {
    std::mutex mu;
    std::exception_ptr error;
    parallel_for_index(pending.size(), opt.policy, [&](std::size_t i) {
      try {
        evaluate_panel(panels[pending[i]], g);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
    if (error) std::rethrow_exception(error);
    diag.evaluations += static_cast<long>(15 * pending.size());
    pending.clear();
  };

  std::vector<std::size_t> pending(panels.size());
  std::iota(pending.begin(), pending.end(), std::size_t{0});
  evaluate_pending(pending);

  for (;;) {
    Complex total{0.0, 0.0};
    double l1 = 0.0;
    double err = 0.0;
    for (const Panel& p : panels) {
      total += p.integral;
      l1 += std::abs(p.integral);
      err += p.err;
    }

    const double scale = std::max(l1, std::numeric_limits<double>::min());
    if (err <= opt.rel_tol * scale) {
      diag.panels = static_cast<int>(panels.size());
      diag.rel_error = err / scale;
      return AverageResult{total, diag};
    }

    if (static_cast<int>(panels.size()) >= opt.max_panels) {
      diag.panels = static_cast<int>(panels.size());
      diag.rel_error = err / scale;
      throw QuadratureError(
          "thermal_average: panel budget exhausted before reaching rel_tol",
          diag);
    }

    // Split the panels carrying the bulk of the error estimate.
    std::vector<std::size_t> order(panels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                       if (panels[x].err != panels[y].err)
                         return panels[x].err > panels[y].err;
                       return panels[x].a < panels[y].a;
                     });
    const int room = opt.max_panels - static_cast<int>(panels.size());
    const int max_splits = std::min({64, room, static_cast<int>(panels.size())});
    std::vector<bool> split(panels.size(), false);
    double covered = 0.0;
    int count = 0;
    for (std::size_t idx : order) {
      if (count >= max_splits) break;
      if (panels[idx].err <= 0.0 && count > 0) break;
      split[idx] = true;
      covered += panels[idx].err;
      ++count;
      if (covered >= 0.9 * err) break;
    }

    std::vector<Panel> next;
    next.reserve(panels.size() + count);
    pending.clear();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (!split[i]) {
        next.push_back(panels[i]);
        continue;
      }
      const double mid = 0.5 * (panels[i].a + panels[i].b);
      Panel left;
      left.a = panels[i].a;
      left.b = mid;
      Panel right;
      right.a = mid;
      right.b = panels[i].b;
      pending.push_back(next.size());
      next.push_back(left);
      pending.push_back(next.size());
      next.push_back(right);
    }
    panels.swap(next);
    evaluate_pending(pending);
  }
}

Complex rho_eg_3l(const atomsys::ValidatedSystem& sys, double velocity,
                  double delta_c, TwoLevelBranch branch) {
  const atomsys::LaserField& probe = sys.probe();
  const atomsys::LaserField& coupling = sys.coupling();
  // With the coupling off the three-level and two-level problems coincide.
  if (coupling.rabi == 0.0) return Complex{0.0, 0.0};

  const obe::Matrix3c h =
      obe::build_hamiltonian(sys, velocity, probe.detuning, delta_c);
  const obe::DensityMatrix rho =
      obe::steady_state(obe::build_liouvillian(h, sys.rates(), velocity));
  const Complex full = rho.coherence(obe::kE, obe::kG);

  const double shifted = probe.detuning - probe.wavevector * velocity;
  Complex two_level;
  if (branch == TwoLevelBranch::ClosedForm) {
    two_level =
        obe::two_level_coherence(probe.rabi, shifted, sys.rates().gamma_eg);
  } else {
    const obe::Matrix3c h2 = obe::build_hamiltonian(
        Complex{probe.rabi, 0.0}, Complex{0.0, 0.0}, shifted,
        (probe.detuning + delta_c) + sys.delta_k() * velocity);
    const obe::DensityMatrix rho2 =
        obe::steady_state(obe::build_liouvillian(h2, sys.rates(), velocity));
    two_level = rho2.coherence(obe::kE, obe::kG);
  }
  return full - two_level;
}

double chi_prefactor(const atomsys::ValidatedSystem& sys) {
  const double omega_p = sys.probe().rabi;
  if (!(omega_p > 0.0))
    throw std::domain_error("chi_prefactor: probe Rabi frequency must be > 0");
  const double mu = sys.species().dipole_probe;
  return 2.0 * sys.density() * mu * mu / (kEpsilon0 * kHbar * omega_p);
}

std::vector<double> resonance_breakpoints(const atomsys::ValidatedSystem& sys,
                                          double delta_c) {
  std::vector<double> out;
  const double dk = sys.delta_k();
  const double kp = sys.probe().wavevector;

  if (dk != 0.0) {
    const double v_star = -(sys.probe().detuning + delta_c) / dk;
    double omega_eff = 0.0;
    if (sys.probe().detuning != delta_c)
      omega_eff = std::abs(sys.probe().rabi * sys.coupling().rabi /
                           (sys.probe().detuning - delta_c));
    const double window =
        std::max(omega_eff, sys.rates().gamma_rg) / std::abs(dk);
    out.push_back(v_star);
    if (window > 0.0) {
      out.push_back(v_star - window);
      out.push_back(v_star + window);
    }
  }

  if (kp != 0.0) {
    const double v_e = sys.probe().detuning / kp;
    const double window =
        std::max(sys.probe().rabi, sys.rates().gamma_eg) / std::abs(kp);
    out.push_back(v_e);
    if (window > 0.0) {
      out.push_back(v_e - window);
      out.push_back(v_e + window);
    }
  }
  return out;
}

Susceptibility chi_3l(const atomsys::ValidatedSystem& sys, double delta_c,
                      const QuadratureOptions& opt, TwoLevelBranch branch) {
  const double prefactor = chi_prefactor(sys);
  const std::vector<double> seeds = resonance_breakpoints(sys, delta_c);
  const auto integrand = [&sys, delta_c, branch](double v) {
    return rho_eg_3l(sys, v, delta_c, branch);
  };
  const AverageResult avg =
      thermal_average(integrand, sys.thermal_speed(), opt, seeds);

  Susceptibility chi;
  chi.value = prefactor * avg.value;
  chi.delta_p = sys.probe().detuning;
  chi.delta_c = delta_c;
  chi.omega_p = sys.probe().rabi;
  chi.omega_c = sys.coupling().rabi;
  chi.density = sys.density();
  chi.temperature = sys.temperature();
  chi.diag = avg.diag;
  return chi;
}

}  // namespace rhs::doppler
