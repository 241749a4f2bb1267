#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace dicke {

struct NelderMeadOptions {
  double f_tol = 1e-10;     // relative spread of simplex values, scaled by 1 + |f_best|
  int max_evals = 20000;
  double initial_step = 0.1;
  int restarts = 2;         // fresh simplices built around the incumbent after convergence
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free simplex minimization with the standard reflection (1),
// expansion (2), contraction (1/2) and shrink (1/2) coefficients. The best
// vertex never gets worse, so the result is bounded above by f(x0).
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;
  if (n == 0) {
    res.converged = true;
    return res;
  }

  std::vector<std::vector<double>> xs(n + 1);
  std::vector<double> fs(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  auto point_along = [&](const std::vector<double>& from, double t, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (from[i] - centroid[i]);
  };

  for (int round = 0; round <= opt.restarts; ++round) {
    xs[0] = res.x;
    fs[0] = res.value;
    for (std::size_t i = 0; i < n; ++i) {
      xs[i + 1] = res.x;
      const double h = opt.initial_step * std::max(1.0, std::abs(res.x[i]));
      xs[i + 1][i] += h;
      fs[i + 1] = f(xs[i + 1]);
      ++res.evaluations;
    }

    bool round_converged = false;
    while (res.evaluations < opt.max_evals) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t best = order[0], worst = order[n], second = order[n - 1];

      if (fs[worst] - fs[best] <= opt.f_tol * (1.0 + std::abs(fs[best]))) {
        round_converged = true;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[v][i];
      }
      for (double& c : centroid) c /= static_cast<double>(n);

      point_along(xs[worst], -1.0, trial);
      const double fr = f(trial);
      ++res.evaluations;
      if (fr < fs[best]) {
        point_along(xs[worst], -2.0, trial2);
        const double fe = f(trial2);
        ++res.evaluations;
        if (fe < fr) {
          xs[worst] = trial2;
          fs[worst] = fe;
        } else {
          xs[worst] = trial;
          fs[worst] = fr;
        }
        continue;
      }
      if (fr < fs[second]) {
        xs[worst] = trial;
        fs[worst] = fr;
        continue;
      }
      // Outside contraction when the reflection beats the worst vertex, inside otherwise.
      const bool outside = fr < fs[worst];
      point_along(xs[worst], outside ? -0.5 : 0.5, trial2);
      const double fc = f(trial2);
      ++res.evaluations;
      if (fc < (outside ? fr : fs[worst])) {
        xs[worst] = trial2;
        fs[worst] = fc;
        continue;
      }
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == best) continue;
        for (std::size_t i = 0; i < n; ++i) xs[v][i] = xs[best][i] + 0.5 * (xs[v][i] - xs[best][i]);
        fs[v] = f(xs[v]);
        ++res.evaluations;
      }
    }

    const std::size_t best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const double improvement = res.value - fs[best];
    if (fs[best] <= res.value) {
      res.x = xs[best];
      res.value = fs[best];
    }
    res.converged = round_converged;
    if (!round_converged) break;
    if (round > 0 && improvement <= opt.f_tol * (1.0 + std::abs(res.value))) break;
  }
  return res;
}

}  // namespace dicke
