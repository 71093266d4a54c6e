#include "s3sr/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace s3sr {

namespace {

constexpr double kPi = std::numbers::pi;

using Params3 = std::array<double, 3>;  // θ0, λ, T
using Residual = std::array<double, 4>;

struct StartOutcome {
  Params3 x{};
  double residual{std::numeric_limits<double>::infinity()};
};

Residual endpoint_residual(const S3Point& p, const S3Point& q, const Params3& x) {
  const Quat end = geodesic_point(p, GeodesicParams{1.0, x[0], x[1]}, x[2]).quat();
  const Quat d = end - q.quat();
  return {d.w, d.x, d.y, d.z};
}

double norm(const Residual& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]); }

// Solves the 3×3 system a x = b by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> a, Params3 b, Params3& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int k = r + 1; k < 3; ++k) acc -= a[r][k] * x[k];
    x[r] = acc / a[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

StartOutcome levenberg_marquardt(const S3Point& p, const S3Point& q, Params3 x, const ShootConfig& cfg) {
  Residual f = endpoint_residual(p, q, x);
  double cost = norm(f);
  double mu = 1e-3;
  for (int it = 0; it < cfg.max_iterations && cost > 1e-14; ++it) {
    // Central-difference Jacobian, 4×3.
    std::array<Residual, 3> cols{};
    for (int j = 0; j < 3; ++j) {
      Params3 xp = x, xm = x;
      xp[j] += cfg.fd_step;
      xm[j] -= cfg.fd_step;
      const Residual fp = endpoint_residual(p, q, xp);
      const Residual fm = endpoint_residual(p, q, xm);
      for (int i = 0; i < 4; ++i) cols[j][i] = (fp[i] - fm[i]) / (2.0 * cfg.fd_step);
    }
    std::array<std::array<double, 3>, 3> jtj{};
    Params3 jtf{};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b)
        for (int i = 0; i < 4; ++i) jtj[a][b] += cols[a][i] * cols[b][i];
      for (int i = 0; i < 4; ++i) jtf[a] -= cols[a][i] * f[i];
    }

    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      auto damped = jtj;
      for (int d = 0; d < 3; ++d) damped[d][d] += mu * (jtj[d][d] + 1e-12);
      Params3 step{};
      if (!solve3(damped, jtf, step)) {
        mu *= 4.0;
        continue;
      }
      const Params3 trial{x[0] + step[0], x[1] + step[1], x[2] + step[2]};
      const Residual ft = endpoint_residual(p, q, trial);
      const double ct = norm(ft);
      if (ct < cost) {
        x = trial;
        f = ft;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!improved) break;
  }
  return {x, cost};
}

// (θ0, λ, T) with T < 0 describes the same curve as (θ0 + π, −λ, −T).
Params3 canonical(Params3 x) {
  if (x[2] < 0.0) x = {x[0] + kPi, -x[1], -x[2]};
  double t = std::remainder(x[0], 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  x[0] = t;
  return x;
}

std::vector<StartOutcome> run_starts(const S3Point& p, const S3Point& q, const std::vector<Params3>& starts,
                                     const ShootConfig& cfg) {
  std::vector<StartOutcome> out(starts.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = levenberg_marquardt(p, q, starts[i], cfg);
      out[i].x = canonical(out[i].x);
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(cfg.workers, 1));
  if (workers == 1 || starts.size() < 2) {
    work(0, starts.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (starts.size() + workers - 1) / workers;
  for (std::size_t b = 0; b < starts.size(); b += chunk) {
    pool.emplace_back(work, b, std::min(b + chunk, starts.size()));
  }
  pool.clear();  // joins
  return out;
}

// Index of the best outcome: shortest converged, else smallest residual.
std::size_t select_best(const std::vector<StartOutcome>& outs, double tol) {
  std::size_t best = 0;
  bool best_conv = outs[0].residual <= tol;
  for (std::size_t i = 1; i < outs.size(); ++i) {
    const bool conv = outs[i].residual <= tol;
    if (conv && !best_conv) {
      best = i;
      best_conv = true;
    } else if (conv && best_conv) {
      if (outs[i].x[2] < outs[best].x[2]) best = i;
    } else if (!conv && !best_conv && outs[i].residual < outs[best].residual) {
      best = i;
    }
  }
  return best;
}

}  // namespace

ShootingResult shoot(const S3Point& p, const S3Point& q, const ShootConfig& cfg) {
  const S3Point checked_p(p.quat());
  const S3Point checked_q(q.quat());
  if (!(cfg.tol > 0.0) || !(cfg.step > 0.0) || cfg.theta_starts < 1 || cfg.lambda_starts < 1 ||
      cfg.time_starts < 1) {
    throw std::domain_error("shoot: invalid configuration");
  }

  ShootingResult res;
  res.params = GeodesicParams{1.0, 0.0, 0.0};
  if (distance(p, q) == 0.0) {
    res.curve = integrate_geodesic(p, res.params, 0.0, cfg.step);
    res.curve.tag = "shoot";
    res.converged = true;
    return res;
  }

  std::vector<Params3> starts;
  for (int i = 0; i < cfg.theta_starts; ++i) {
    const double th = 2.0 * kPi * i / cfg.theta_starts;
    for (int j = 0; j < cfg.lambda_starts; ++j) {
      const double lam = cfg.lambda_starts == 1
                             ? 0.0
                             : -cfg.lambda_max + 2.0 * cfg.lambda_max * j / (cfg.lambda_starts - 1);
      for (int k = 1; k <= cfg.time_starts; ++k) {
        starts.push_back({th, lam, cfg.time_max * k / cfg.time_starts});
      }
    }
  }
  auto outcomes = run_starts(p, q, starts, cfg);
  res.starts_tried = static_cast<int>(starts.size());
  std::size_t best = select_best(outcomes, cfg.tol);

  if (outcomes[best].residual > cfg.tol && cfg.random_starts > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Params3> extra;
    for (int i = 0; i < cfg.random_starts; ++i) {
      const double th = 2.0 * kPi * u01(rng);
      const double lam = cfg.lambda_max * (2.0 * u01(rng) - 1.0);
      const double t = cfg.time_max * (1.0 - u01(rng));
      extra.push_back({th, lam, t});
    }
    auto more = run_starts(p, q, extra, cfg);
    res.starts_tried += static_cast<int>(extra.size());
    outcomes.insert(outcomes.end(), more.begin(), more.end());
    best = select_best(outcomes, cfg.tol);
  }

  const Params3& x = outcomes[best].x;
  res.params = GeodesicParams{1.0, x[0], x[1]};
  res.T = x[2];
  res.curve = integrate_geodesic(p, res.params, res.T, cfg.step);
  res.curve.tag = "shoot";
  res.endpoint_error = distance(res.curve.points.back(), q);
  res.converged = res.endpoint_error <= cfg.tol;
  return res;
}

}  // namespace s3sr
