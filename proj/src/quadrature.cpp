#include "toricdist/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "toricdist/error.hpp"

namespace toricdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dim(int k) {
  if (k < 1 || k > 4) throw DomainError("quadrature dimension must be between 1 and 4, got " + std::to_string(k));
}

struct Axis {
  std::vector<double> x;
  std::vector<double> log_w;
};

Axis make_axis(double lo, double hi, Rule rule, int base, int level) {
  Axis a;
  if (rule == Rule::gauss_legendre) {
    const auto g = gauss_legendre(base);
    // Subintervals 1, 2, 3, 4, 6, 8, 12, ...: alternating growth by 2 and 3/2.
    const int sub = level == 0 ? 1 : (level % 2 ? 1 << ((level + 1) / 2) : 3 << ((level - 2) / 2));
    const double h = (hi - lo) / sub;
    for (int s = 0; s < sub; ++s) {
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        a.x.push_back(lo + (s + (g.nodes[j] + 1) / 2) * h);
        a.log_w.push_back(std::log(g.weights[j] * h / 2));
      }
    }
  } else {
    const int n = base << level;
    const double h = (hi - lo) / n;
    for (int j = 0; j <= n; ++j) {
      a.x.push_back(j == n ? hi : lo + j * h);
      a.log_w.push_back(std::log((j == 0 || j == n) ? h / 2 : h));
    }
  }
  return a;
}

struct LevelSum {
  double log_value;
  long long n;
};

LevelSum evaluate_level(const RealFunction& f, const std::vector<Axis>& axes, int workers) {
  const auto k = axes.size();
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.x.size();
  std::vector<double> vals(total);
  parallel_fill(
      vals,
      [&](std::size_t idx) {
        Vec x(static_cast<Eigen::Index>(k));
        double lw = 0;
        for (std::size_t d = k; d-- > 0;) {
          const auto n = axes[d].x.size();
          const auto j = idx % n;
          idx /= n;
          x[static_cast<Eigen::Index>(d)] = axes[d].x[j];
          lw += axes[d].log_w[j];
        }
        const double v = f(x);
        if (std::isnan(v)) throw DomainError("integrand returned NaN");
        return v + lw;
      },
      workers);
  const double mx = *std::max_element(vals.begin(), vals.end());
  if (!std::isfinite(mx)) return {mx, static_cast<long long>(total)};
  KahanSum s;
  for (double v : vals) s.add(std::exp(v - mx));
  return {mx + std::log(s.value()), static_cast<long long>(total)};
}

}  // namespace

void parallel_fill(std::vector<double>& out, const std::function<double(std::size_t)>& f, int workers) {
  const std::size_t n = out.size();
  const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n < 2048) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        for (std::size_t i = b; i < e; ++i) out[i] = f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  GaussRule g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const double w = 2 / ((1 - x * x) * dp * dp);
    g.nodes[static_cast<std::size_t>(i)] = -x;
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    g.weights[static_cast<std::size_t>(i)] = w;
    g.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) g.nodes[static_cast<std::size_t>(n / 2)] = 0;
  return g;
}

IntegralResult laplace_integral(const RealFunction& log_integrand, const QuadratureSpec& spec) {
  const int k = spec.box.dim();
  check_dim(k);
  if (!(spec.rel_tol > 0)) throw DomainError("rel_tol must be positive");
  IntegralResult res;
  res.tail_bound = spec.tail_bound;
  double prev = kNegInf;
  double last_delta = std::numeric_limits<double>::infinity();
  for (int level = 0; level <= spec.refinement_limit; ++level) {
    std::vector<Axis> axes;
    for (int d = 0; d < k; ++d) axes.push_back(make_axis(spec.box.lo[d], spec.box.hi[d], spec.rule, spec.base_points_per_dim, level));
    const auto ls = evaluate_level(log_integrand, axes, spec.workers);
    res.n_evals += ls.n;
    res.levels = level + 1;
    res.log_value = ls.log_value;
    res.value = std::exp(ls.log_value);
    if (level > 0) {
      if (!std::isfinite(ls.log_value) && !std::isfinite(prev)) {
        res.est_error = 0;
        res.converged = true;
        return res;
      }
      const double delta = std::abs(std::expm1(prev - ls.log_value));
      res.est_error = delta;
      // The preceding change must be small as well: two under-resolved levels
      // can agree by chance.
      const bool settled = level > 1 && last_delta <= std::sqrt(spec.rel_tol);
      last_delta = delta;
      if (delta <= spec.rel_tol && settled) {
        res.converged = true;
        return res;
      }
    }
    prev = ls.log_value;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg, "quadrature did not converge after %d levels (last relative change %.3g, tolerance %.3g)",
                res.levels, last_delta, spec.rel_tol);
  throw NoConvergence(msg);
}

IntegralResult laplace_integral(const RealFunction& phase, const RealFunction& log_weight, double n,
                                const QuadratureSpec& spec) {
  return laplace_integral([&](const Vec& x) { return -n * phase(x) + log_weight(x); }, spec);
}

namespace {

struct RegionPass {
  double value = 0;
  double boundary_mass = 0;
  long long evals = 0;
};

class RegionIntegrator {
 public:
  RegionIntegrator(const Predicate& cond, const RealFunction& weight, const QuadratureSpec& spec, int max_depth)
      : cond_(cond), weight_(weight), spec_(spec), k_(spec.box.dim()), max_depth_(max_depth), g3_(gauss_legendre(3)) {
    base_ = spec.base_points_per_dim;
    res_ = static_cast<long long>(base_) << max_depth_;
  }

  RegionPass run() {
    std::vector<long long> idx(static_cast<std::size_t>(k_), 0);
    const long long step = res_ / base_;
    // Iterate base cells.
    long long total = 1;
    for (int d = 0; d < k_; ++d) total *= base_;
    for (long long c = 0; c < total; ++c) {
      long long rem = c;
      for (int d = k_ - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = (rem % base_) * step;
        rem /= base_;
      }
      cell(idx, step, 0);
    }
    pass_.value = value_.value();
    pass_.boundary_mass = boundary_.value();
    return pass_;
  }

 private:
  Vec point(const std::vector<long long>& ipos, const std::vector<double>& frac) const {
    Vec x(k_);
    for (int d = 0; d < k_; ++d) {
      const double u = (static_cast<double>(ipos[static_cast<std::size_t>(d)]) + frac[static_cast<std::size_t>(d)]) /
                       static_cast<double>(res_);
      x[d] = u >= 1.0 ? spec_.box.hi[d] : spec_.box.lo[d] + u * (spec_.box.hi[d] - spec_.box.lo[d]);
    }
    return x;
  }

  bool is_edge(int d, bool upper) const {
    const auto& v = upper ? spec_.upper_is_edge : spec_.lower_is_edge;
    return !v.empty() && v[static_cast<std::size_t>(d)];
  }

  double mass(const std::vector<long long>& ipos, long long size) {
    // 3-point Gauss rule per dimension on the cell.
    double cell_vol = 1;
    for (int d = 0; d < k_; ++d) cell_vol *= (spec_.box.hi[d] - spec_.box.lo[d]) * static_cast<double>(size) / static_cast<double>(res_);
    double s = 0;
    const int n = 3;
    int total = 1;
    for (int d = 0; d < k_; ++d) total *= n;
    std::vector<double> frac(static_cast<std::size_t>(k_));
    for (int c = 0; c < total; ++c) {
      int rem = c;
      double w = 1;
      for (int d = k_ - 1; d >= 0; --d) {
        const int j = rem % n;
        rem /= n;
        frac[static_cast<std::size_t>(d)] = static_cast<double>(size) * (g3_.nodes[static_cast<std::size_t>(j)] + 1) / 2;
        w *= g3_.weights[static_cast<std::size_t>(j)] / 2;
      }
      s += w * weight_(point(ipos, frac));
      ++pass_.evals;
    }
    return s * cell_vol;
  }

  void cell(const std::vector<long long>& ipos, long long size, int depth) {
    const int corners = 1 << k_;
    int count_true = 0;
    std::vector<double> frac(static_cast<std::size_t>(k_));
    for (int c = 0; c < corners; ++c) {
      bool on_face = false;
      for (int d = 0; d < k_; ++d) {
        const bool up = (c >> d) & 1;
        frac[static_cast<std::size_t>(d)] = up ? static_cast<double>(size) : 0.0;
        const long long coord = ipos[static_cast<std::size_t>(d)] + (up ? size : 0);
        if ((coord == 0 && !is_edge(d, false)) || (coord == res_ && !is_edge(d, true))) on_face = true;
      }
      const bool v = cond_(point(ipos, frac));
      ++pass_.evals;
      if (v && on_face) throw RegionTouchesBoundary("region touches the integration box boundary: enlarge the box");
      count_true += v;
    }
    for (int d = 0; d < k_; ++d) frac[static_cast<std::size_t>(d)] = static_cast<double>(size) / 2;
    count_true += cond_(point(ipos, frac));
    ++pass_.evals;
    if (count_true == 0) return;
    if (count_true == corners + 1) {
      value_.add(mass(ipos, size));
      return;
    }
    if (depth < max_depth_ && size > 1) {
      const long long half = size / 2;
      std::vector<long long> child(ipos);
      for (int c = 0; c < corners; ++c) {
        for (int d = 0; d < k_; ++d) child[static_cast<std::size_t>(d)] = ipos[static_cast<std::size_t>(d)] + (((c >> d) & 1) ? half : 0);
        cell(child, half, depth + 1);
      }
      return;
    }
    const double mm = mass(ipos, size);
    value_.add(mm / 2);
    boundary_.add(mm / 2);
  }

  const Predicate& cond_;
  const RealFunction& weight_;
  const QuadratureSpec& spec_;
  int k_;
  int max_depth_;
  int base_ = 0;
  long long res_ = 0;
  GaussRule g3_;
  KahanSum value_;
  KahanSum boundary_;
  RegionPass pass_;
};

}  // namespace

IntegralResult region_volume(const Predicate& condition, const RealFunction& weight, const QuadratureSpec& spec) {
  const int k = spec.box.dim();
  check_dim(k);
  IntegralResult res;
  res.tail_bound = spec.tail_bound;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int level = 0; level <= spec.refinement_limit; ++level) {
    const int depth = std::min(2 * level, 40 - 7);
    RegionIntegrator integ(condition, weight, spec, depth);
    const auto pass = integ.run();
    res.n_evals += pass.evals;
    res.levels = level + 1;
    res.value = pass.value;
    res.log_value = std::log(pass.value);
    const double scale = std::abs(pass.value);
    res.est_error = scale > 0 ? pass.boundary_mass / scale : (pass.boundary_mass > 0 ? 1.0 : 0.0);
    const bool stable = level > 0 && std::abs(pass.value - prev) <= spec.rel_tol * std::max(scale, 1e-300);
    if (res.est_error <= spec.rel_tol && (stable || pass.boundary_mass == 0)) {
      res.converged = true;
      return res;
    }
    prev = pass.value;
  }
  return res;
}

TruncatedBox find_box(const RealFunction& log_f, const Vec& anchor, const Box& limits, double drop,
                      const Vec& initial_steps) {
  const int k = static_cast<int>(anchor.size());
  check_dim(k);
  TruncatedBox tb;
  double peak = log_f(anchor);
  if (!std::isfinite(peak)) throw DomainError("find_box: integrand is not finite at the anchor");
  tb.box.lo = anchor;
  tb.box.hi = anchor;
  for (int d = 0; d < k; ++d) {
    for (int dir = -1; dir <= 1; dir += 2) {
      const double lim = dir < 0 ? limits.lo[d] : limits.hi[d];
      double s = initial_steps[d];
      double bound = lim;
      for (int it = 0; it < 200; ++it) {
        Vec y = anchor;
        y[d] = anchor[d] + dir * s;
        const bool at_limit = dir < 0 ? y[d] <= lim : y[d] >= lim;
        if (at_limit) {
          bound = lim;
          break;
        }
        const double v = log_f(y);
        peak = std::max(peak, v);
        if (v < peak - drop) {
          bound = y[d];
          break;
        }
        s *= 1.6;
      }
      (dir < 0 ? tb.box.lo : tb.box.hi)[d] = bound;
    }
  }
  const int grid = k == 1 ? 1 : (k == 2 ? 17 : (k == 3 ? 9 : 5));
  double boundary_max = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 40; ++iter) {
    bool changed = false;
    boundary_max = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < k; ++d) {
      for (int side = 0; side < 2; ++side) {
        const double face = side ? tb.box.hi[d] : tb.box.lo[d];
        const double lim = side ? limits.hi[d] : limits.lo[d];
        if (face == lim) continue;
        int samples = 1;
        for (int j = 0; j < k - 1; ++j) samples *= grid;
        double face_max = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples; ++s) {
          Vec y(k);
          int rem = s;
          for (int e = 0; e < k; ++e) {
            if (e == d) {
              y[e] = face;
              continue;
            }
            const int j = rem % grid;
            rem /= grid;
            y[e] = grid == 1 ? anchor[e] : tb.box.lo[e] + (tb.box.hi[e] - tb.box.lo[e]) * j / (grid - 1);
          }
          const double v = log_f(y);
          face_max = std::max(face_max, v);
        }
        peak = std::max(peak, face_max);
        boundary_max = std::max(boundary_max, face_max);
        if (face_max > peak - drop) {
          const double width = std::max(tb.box.hi[d] - tb.box.lo[d], initial_steps[d]);
          if (side) {
            tb.box.hi[d] = std::min(lim, tb.box.hi[d] + 0.5 * width);
          } else {
            tb.box.lo[d] = std::max(lim, tb.box.lo[d] - 0.5 * width);
          }
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  // The growth steps overshoot; pull each non-edge face back by bisection to
  // where the drop still holds on the whole face.
  auto face_max_at = [&](int d, double pos) {
    int samples = 1;
    for (int j = 0; j < k - 1; ++j) samples *= grid;
    double mx = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      Vec y(k);
      int rem = s;
      for (int e = 0; e < k; ++e) {
        if (e == d) {
          y[e] = pos;
          continue;
        }
        const int j = rem % grid;
        rem /= grid;
        y[e] = grid == 1 ? anchor[e] : tb.box.lo[e] + (tb.box.hi[e] - tb.box.lo[e]) * j / (grid - 1);
      }
      mx = std::max(mx, log_f(y));
    }
    return mx;
  };
  for (int d = 0; d < k; ++d) {
    for (int side = 0; side < 2; ++side) {
      const double lim = side ? limits.hi[d] : limits.lo[d];
      double outer = side ? tb.box.hi[d] : tb.box.lo[d];
      if (outer == lim) continue;
      double inner = anchor[d];
      for (int it = 0; it < 12; ++it) {
        const double mid = (inner + outer) / 2;
        if (face_max_at(d, mid) < peak - drop) {
          outer = mid;
        } else {
          inner = mid;
        }
      }
      (side ? tb.box.hi : tb.box.lo)[d] = outer;
    }
  }
  boundary_max = -std::numeric_limits<double>::infinity();
  for (int d = 0; d < k; ++d) {
    if (tb.box.lo[d] != limits.lo[d]) boundary_max = std::max(boundary_max, face_max_at(d, tb.box.lo[d]));
    if (tb.box.hi[d] != limits.hi[d]) boundary_max = std::max(boundary_max, face_max_at(d, tb.box.hi[d]));
  }
  tb.peak_log = peak;
  tb.boundary_log_max = boundary_max;
  for (int d = 0; d < k; ++d) {
    tb.lower_is_edge.push_back(tb.box.lo[d] == limits.lo[d]);
    tb.upper_is_edge.push_back(tb.box.hi[d] == limits.hi[d]);
  }
  return tb;
}

}  // namespace toricdist
