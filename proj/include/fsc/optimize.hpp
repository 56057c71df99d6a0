// Copyright 2026 The fscvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Quasi-Newton minimization with central-difference gradients.

#pragma once

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsc {

using Objective = std::function<double(std::span<const double>)>;

struct OptimizerConfig {
  double gradient_step = 1e-6;
  double gradient_tolerance = 1e-8;
  double objective_tolerance = 1e-10;
  int max_iterations = 2000;
  int restarts = 8;
  std::uint64_t seed = 7;
  int threads = 1;

  void validate() const {
    if (!(gradient_step > 0) || !(gradient_tolerance > 0) || !(objective_tolerance > 0) || max_iterations <= 0 ||
        restarts <= 0 || threads <= 0)
      throw std::invalid_argument("optimizer settings must all be positive");
  }
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
};

struct LocalResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  double gradient_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  int start_index = 0;
  std::vector<TraceEntry> trace;
};

inline std::vector<double> central_gradient(const Objective& f, std::span<const double> x, double step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + step;
    const double fp = f(probe);
    probe[i] = xi - step;
    const double fm = f(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// BFGS with inverse-Hessian updates and Armijo backtracking. `converged`
/// means the gradient-norm criterion was met.
inline LocalResult bfgs(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
  using Vec = Eigen::VectorXd;
  const auto n = static_cast<Eigen::Index>(x0.size());
  auto as_span = [](const Vec& v) { return std::span<const double>(v.data(), static_cast<std::size_t>(v.size())); };
  auto grad = [&](const Vec& v) {
    auto g = central_gradient(f, as_span(v), cfg.gradient_step);
    return Vec(Eigen::Map<Vec>(g.data(), n));
  };

  LocalResult out;
  Vec x = Eigen::Map<Vec>(x0.data(), n);
  double fx = f(as_span(x));
  Vec g = grad(x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  int flat_steps = 0;

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const double gn = g.norm();
    out.trace.push_back({it, fx, gn});
    if (n == 0 || gn < cfg.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Vec d = -h * g;
    if (g.dot(d) >= 0.0) {
      h.setIdentity();
      fresh = true;
      d = -g;
    }
    const double slope = g.dot(d);
    // Near the optimum the Armijo decrease drops below rounding in f.
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fx));
    double alpha = 1.0;
    double f_new = fx;
    Vec x_new = x;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      x_new = x + alpha * d;
      f_new = f(as_span(x_new));
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * alpha * slope + noise) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;  // no progress even along steepest descent
      h.setIdentity();
      fresh = true;
      continue;
    }
    const Vec g_new = grad(x_new);
    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Vec hy = h * y;
      h += (rho * rho * y.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
      fresh = false;
    }
    const double drop = fx - f_new;
    x = x_new;
    fx = f_new;
    g = g_new;
    flat_steps = drop < cfg.objective_tolerance ? flat_steps + 1 : 0;
    if (flat_steps >= 5) {
      ++it;
      out.trace.push_back({it, fx, g.norm()});
      out.converged = g.norm() < cfg.gradient_tolerance;
      break;
    }
  }
  out.x.assign(x.data(), x.data() + n);
  out.value = fx;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

struct MultiStartOptions {
  /// Starting points: the zero vector, then `restarts` uniform draws. The
  /// first half of the draws use `init_scale`, the rest `wide_scale` (if set).
  double init_scale = 0.1;
  std::optional<double> wide_scale;
  /// Stop launching new starts once a result at or below this value exists.
  std::optional<double> good_enough;
};

inline std::vector<std::vector<double>> multistart_points(std::size_t dim, const OptimizerConfig& cfg,
                                                          const MultiStartOptions& opt) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<double>> pts;
  pts.emplace_back(dim, 0.0);
  for (int r = 0; r < cfg.restarts; ++r) {
    const double scale = (opt.wide_scale && r >= cfg.restarts / 2) ? *opt.wide_scale : opt.init_scale;
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> p(dim);
    for (auto& v : p) v = u(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Runs bfgs from every start (in batches of cfg.threads) and keeps the lowest
/// value; ties go to the earlier start.
inline LocalResult multistart(const Objective& f, std::size_t dim, const OptimizerConfig& cfg,
                              const MultiStartOptions& opt = {}) {
  cfg.validate();
  const auto pts = multistart_points(dim, cfg, opt);
  LocalResult best;
  bool have = false;
  for (std::size_t i = 0; i < pts.size();) {
    const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), pts.size() - i);
    std::vector<LocalResult> results(batch);
    if (batch == 1) {
      results[0] = bfgs(f, pts[i], cfg);
    } else {
      std::vector<std::future<LocalResult>> futs;
      for (std::size_t b = 0; b < batch; ++b)
        futs.push_back(std::async(std::launch::async, [&, idx = i + b] { return bfgs(f, pts[idx], cfg); }));
      for (std::size_t b = 0; b < batch; ++b) results[b] = futs[b].get();
    }
    for (std::size_t b = 0; b < batch; ++b) {
      results[b].start_index = static_cast<int>(i + b);
      if (!have || results[b].value < best.value) {
        best = std::move(results[b]);
        have = true;
      }
    }
    i += batch;
    if (opt.good_enough && best.value <= *opt.good_enough) break;
  }
  return best;
}

inline void write_trace_csv(const std::filesystem::path& path, std::span<const TraceEntry> trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  out << "iteration,objective,gradient_norm\n";
  for (const auto& t : trace) out << fmt::format("{},{:.17g},{:.17g}\n", t.iteration, t.objective, t.gradient_norm);
}

}  // namespace fsc
