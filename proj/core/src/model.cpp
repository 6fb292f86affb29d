#include "stochwave/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "stochwave/errors.hpp"

namespace stochwave::model {

namespace {

using std::numbers::pi;

double standard_u0(double x) { return std::sin(2.0 * pi * x); }
double standard_v0(double x) { return std::sin(3.0 * pi * x); }
double standard_lap_u0(double x) {
  return -4.0 * pi * pi * std::sin(2.0 * pi * x);
}

// F(u,v) = sqrt(u) + sqrt(v+2), clamped to keep evaluation real on fields
// that go negative.
double sqrt_drift(double u, double v) {
  return std::sqrt(std::max(u, 0.0)) + std::sqrt(std::max(v + 2.0, 0.0));
}

double uv_sigma(double u, double v) { return u / (1.0 + u * u) + v; }
double uv_sigma_du(double u, double) {
  double d = 1.0 + u * u;
  return (1.0 - u * u) / (d * d);
}

struct PresetDef {
  const char* name;
  const char* description;
  Pointwise2 sigma;
  Pointwise2 d_sigma_du;
  Pointwise2 drift;
  bool sigma_differentiable;
};

const std::vector<PresetDef>& preset_defs() {
  static const std::vector<PresetDef> defs = {
      {"zero-noise", "sigma = 0, F = 0",
       [](double, double) { return 0.0; },
       [](double, double) { return 0.0; },
       [](double, double) { return 0.0; }, true},
      {"sigma-u-half", "sigma = u/2, F = 0",
       [](double u, double) { return 0.5 * u; },
       [](double, double) { return 0.5; },
       [](double, double) { return 0.0; }, true},
      {"sigma-v-half", "sigma = v/2, F = 0",
       [](double, double v) { return 0.5 * v; },
       [](double, double) { return 0.0; },
       [](double, double) { return 0.0; }, true},
      {"sin-sigma", "sigma = 2 sin(u), F = 0",
       [](double u, double) { return 2.0 * std::sin(u); },
       [](double u, double) { return 2.0 * std::cos(u); },
       [](double, double) { return 0.0; }, true},
      {"sigma-v", "sigma = 3/2 v, F = 0",
       [](double, double v) { return 1.5 * v; },
       [](double, double) { return 0.0; },
       [](double, double) { return 0.0; }, true},
      {"cos-drift", "sigma = u, F = cos(u) + 2v",
       [](double u, double) { return u; },
       [](double, double) { return 1.0; },
       [](double u, double v) { return std::cos(u) + 2.0 * v; }, true},
      {"sqrt-drift", "sigma = u, F = sqrt(u^+) + sqrt((v+2)^+)",
       [](double u, double) { return u; },
       [](double, double) { return 1.0; },
       sqrt_drift, true},
      {"uv-sigma-cos-drift", "sigma = u/(1+u^2) + v, F = cos(u) + 2v",
       uv_sigma, uv_sigma_du,
       [](double u, double v) { return std::cos(u) + 2.0 * v; }, true},
      {"uv-sigma-sqrt-drift", "sigma = u/(1+u^2) + v, F = sqrt(u^+) + sqrt((v+2)^+)",
       uv_sigma, uv_sigma_du, sqrt_drift, true},
      {"inv-sigma", "sigma = 1/(1+u^2), F = 0",
       [](double u, double) { return 1.0 / (1.0 + u * u); },
       [](double u, double) {
         double d = 1.0 + u * u;
         return -2.0 * u / (d * d);
       },
       [](double, double) { return 0.0; }, true},
      {"sqrt-sigma", "sigma = sqrt|u|, F = 0 (non-Lipschitz)",
       [](double u, double) { return std::sqrt(std::abs(u)); },
       [](double u, double) {
         if (u == 0.0) return 0.0;
         return (u > 0.0 ? 1.0 : -1.0) / (2.0 * std::sqrt(std::abs(u)));
       },
       [](double, double) { return 0.0; }, false},
      {"sigma-5v", "sigma = 5v, F = 0",
       [](double, double v) { return 5.0 * v; },
       [](double, double) { return 0.0; },
       [](double, double) { return 0.0; }, true},
  };
  return defs;
}

}  // namespace

Problem preset(const std::string& name) {
  for (const auto& def : preset_defs()) {
    if (name == def.name) {
      Problem p;
      p.label = def.name;
      p.drift = def.drift;
      p.sigma = def.sigma;
      p.d_sigma_du = def.d_sigma_du;
      p.u0 = standard_u0;
      p.v0 = standard_v0;
      p.laplace_u0 = standard_lap_u0;
      p.sigma_differentiable = def.sigma_differentiable;
      return p;
    }
  }
  std::ostringstream os;
  os << "unknown preset '" << name << "'; valid presets:";
  for (const auto& def : preset_defs()) os << " " << def.name;
  throw ConfigError(os.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& def : preset_defs()) names.emplace_back(def.name);
  return names;
}

std::string preset_table() {
  std::ostringstream os;
  os << "Presets (all with u0 = sin(2 pi x), v0 = sin(3 pi x)):\n";
  for (const auto& def : preset_defs()) {
    os << "  " << def.name;
    for (std::size_t i = std::string(def.name).size(); i < 22; ++i) os << ' ';
    os << def.description << "\n";
  }
  return os.str();
}

DerivativeReport check_derivative(const Problem& p, int samples,
                                  std::uint64_t seed) {
  DerivativeReport report;
  report.samples = samples;
  report.exempt = !p.sigma_differentiable;
  if (report.exempt) return report;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  const double h = 1e-5;
  for (int s = 0; s < samples; ++s) {
    double u = box(rng);
    double v = box(rng);
    double numeric = (p.sigma(u + h, v) - p.sigma(u - h, v)) / (2.0 * h);
    double analytic = p.d_sigma_du(u, v);
    double dev = std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic));
    report.max_rel_deviation = std::max(report.max_rel_deviation, dev);
  }
  return report;
}

}  // namespace stochwave::model
