// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/anneal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nqdt/errors.hpp"

namespace nqdt {

namespace {

void check_range(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw input_error("annealing parameter s = " + std::to_string(s) +
                      " outside [0, 1]");
  }
}

}  // namespace

AnnealCoefficients AnnealCoefficients::parametric(double gamma, double mu) {
  if (!std::isfinite(gamma) || !std::isfinite(mu)) {
    throw input_error("non-finite annealing shape parameter");
  }
  if (mu < 1.0) {
    throw input_error("mu = " + std::to_string(mu) +
                      " < 1 makes dB/ds singular at s = 0");
  }
  AnnealCoefficients ac;
  ac.gamma_ = gamma;
  ac.mu_ = mu;
  return ac;
}

AnnealCoefficients AnnealCoefficients::tabulated(std::vector<CoeffSample> samples) {
  if (samples.size() < 2) {
    throw input_error("tabulated schedule needs at least two samples");
  }
  if (samples.front().s != 0.0 || samples.back().s != 1.0) {
    throw input_error("tabulated schedule must cover s = 0 and s = 1");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CoeffSample& r = samples[i];
    if (!std::isfinite(r.s) || !std::isfinite(r.a) || !std::isfinite(r.b)) {
      throw input_error("non-finite tabulated sample");
    }
    if (i > 0 && !(samples[i - 1].s < r.s)) {
      throw input_error("tabulated s values must be strictly increasing");
    }
  }
  AnnealCoefficients ac;
  ac.samples_ = std::move(samples);
  return ac;
}

AnnealCoefficients AnnealCoefficients::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open schedule file: " + path);

  std::string line;
  if (!std::getline(in, line) || line.rfind("s,A,B", 0) != 0) {
    throw input_error("schedule CSV must start with header s,A,B: " + path);
  }
  std::vector<CoeffSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    CoeffSample r;
    char trailing = '\0';
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &r.s, &r.a, &r.b,
                    &trailing) < 3) {
      throw input_error(path + ":" + std::to_string(line_no) +
                        ": expected three comma-separated numbers");
    }
    samples.push_back(r);
  }
  return tabulated(std::move(samples));
}

CoeffValues AnnealCoefficients::at(double s) const {
  check_range(s);
  CoeffValues v;
  if (is_parametric()) {
    v.a = 2.0 * std::exp(-gamma_ * s) - 0.06;
    v.b = 2.0 * std::pow(s, mu_);
    v.da = -2.0 * gamma_ * std::exp(-gamma_ * s);
    // mu = 1 has constant slope 2; mu > 1 vanishes at s = 0.
    v.db = (s == 0.0 && mu_ > 1.0) ? 0.0 : 2.0 * mu_ * std::pow(s, mu_ - 1.0);
    return v;
  }

  // Piecewise linear values, piecewise constant slopes. Breakpoints take the
  // right-hand slope; s = 1 takes the last segment's.
  std::size_t k = 1;
  while (k + 1 < samples_.size() && samples_[k].s <= s) ++k;
  const CoeffSample& lo = samples_[k - 1];
  const CoeffSample& hi = samples_[k];
  const double ds = hi.s - lo.s;
  const double w = (s - lo.s) / ds;
  v.a = lo.a + w * (hi.a - lo.a);
  v.b = lo.b + w * (hi.b - lo.b);
  v.da = (hi.a - lo.a) / ds;
  v.db = (hi.b - lo.b) / ds;
  return v;
}

void write_coeff_csv(const AnnealCoefficients& ac, const std::string& path,
                     int grid_points) {
  if (grid_points < 2) throw input_error("coefficient grid needs >= 2 points");
  std::ofstream out(path);
  if (!out) throw input_error("cannot write schedule file: " + path);
  out << "s,A,B\n";
  char buf[128];
  for (int i = 0; i < grid_points; ++i) {
    const double s = static_cast<double>(i) / (grid_points - 1);
    const CoeffValues v = ac.at(s);
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", s, v.a, v.b);
    out << buf;
  }
}

}  // namespace nqdt
