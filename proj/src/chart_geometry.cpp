#include "toricdist/chart_geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "toricdist/error.hpp"

namespace toricdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ChartModel::ChartModel(const VertexChart& chart, const WeightSet& w) : chart_(chart) {
  if (w.size() != chart_.Q_points.size()) throw DomainError("weight set does not match the chart");
  const int m = chart_.dim();
  const int r = chart_.split_r;
  const auto n = chart_.Q_points.size();
  a_ = w.values();
  log_a_.resize(n);
  mu_.assign(n, std::vector<int>(static_cast<std::size_t>(r)));
  nu_.resize(m - r, static_cast<Eigen::Index>(n));
  f_terms_.assign(static_cast<std::size_t>(r), {});
  std::vector<Eigen::Index> face_idx;
  for (std::size_t i = 0; i < n; ++i) {
    log_a_[i] = std::log(a_[i]);
    const auto& g = chart_.Q_points[i];
    int mu_sum = 0;
    for (int k = 0; k < r; ++k) {
      mu_[i][static_cast<std::size_t>(k)] = static_cast<int>(g[static_cast<std::size_t>(k)]);
      mu_sum += static_cast<int>(g[static_cast<std::size_t>(k)]);
    }
    for (int k = r; k < m; ++k) nu_(k - r, static_cast<Eigen::Index>(i)) = static_cast<double>(g[static_cast<std::size_t>(k)]);
    if (mu_sum == 0) face_idx.push_back(static_cast<Eigen::Index>(i));
    if (mu_sum == 1) {
      for (int k = 0; k < r; ++k)
        if (mu_[i][static_cast<std::size_t>(k)] == 1) f_terms_[static_cast<std::size_t>(k)].push_back(i);
    }
  }
  if (r < m) {
    Mat pts(m - r, static_cast<Eigen::Index>(face_idx.size()));
    Vec lw(static_cast<Eigen::Index>(face_idx.size()));
    for (std::size_t j = 0; j < face_idx.size(); ++j) {
      pts.col(static_cast<Eigen::Index>(j)) = nu_.col(face_idx[j]);
      lw[static_cast<Eigen::Index>(j)] = log_a_[static_cast<std::size_t>(face_idx[j])];
    }
    face_.emplace(std::move(pts), std::move(lw));
  }
}

namespace {

// log(a_gamma t^{2 mu - adj} e^{<rho, nu>}); adj is subtracted from the t exponents.
// log of a_i t^{2 mu - adj} e^{<rho, nu_i>}; adj may be null (no adjustment).
double term_log(double log_a, const std::vector<int>& mu, const std::vector<int>* adj, const Vec& t, const Mat& nu,
                Eigen::Index i, const Vec& rho) {
  double s = log_a;
  for (Eigen::Index j = 0; j < rho.size(); ++j) s += nu(j, i) * rho[j];
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const int e = 2 * mu[k] - (adj ? (*adj)[k] : 0);
    if (e == 0) continue;
    const double tk = t[static_cast<Eigen::Index>(k)];
    if (tk == 0) return kNegInf;
    s += e * std::log(tk);
  }
  return s;
}

}  // namespace

double ChartModel::log_K(const ChartPoint& pt) const {
  const auto n = a_.size();
  Vec terms(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    terms[static_cast<Eigen::Index>(i)] =
        term_log(log_a_[i], mu_[i], nullptr, pt.t, nu_, static_cast<Eigen::Index>(i), pt.rho);
  }
  return log_sum_exp(terms);
}

double ChartModel::s_value(const ChartPoint& pt, const Vec& target) const {
  return log_K(pt) - (pt.rho.size() ? pt.rho.dot(target) : 0.0);
}

double ChartModel::L_density(const ChartPoint& pt) const {
  const int m = dim();
  const int r = split_r();
  const auto n = a_.size();
  const double logK = log_K(pt);
  bool all_positive = true;
  for (int k = 0; k < r; ++k) all_positive = all_positive && pt.t[k] > 0;

  auto coord = [&](std::size_t i, int k) -> double {
    return k < r ? static_cast<double>(mu_[i][static_cast<std::size_t>(k)]) : nu_(k - r, static_cast<Eigen::Index>(i));
  };

  Mat M(m, m);
  if (all_positive) {
    // Centered covariance in log|eta|^2 coordinates, then scale radial rows/cols by 1/t.
    Vec p(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      p[static_cast<Eigen::Index>(i)] =
          std::exp(term_log(log_a_[i], mu_[i], nullptr, pt.t, nu_, static_cast<Eigen::Index>(i), pt.rho) - logK);
    }
    Vec mean = Vec::Zero(m);
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k) mean[k] += p[static_cast<Eigen::Index>(i)] * coord(i, k);
    M.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = p[static_cast<Eigen::Index>(i)];
      for (int a = 0; a < m; ++a) {
        const double wa = w * (coord(i, a) - mean[a]);
        for (int b = 0; b <= a; ++b) M(a, b) += wa * (coord(i, b) - mean[b]);
      }
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < a; ++b) M(b, a) = M(a, b);
    for (int k = 0; k < r; ++k) {
      M.row(k) /= pt.t[k];
      M.col(k) /= pt.t[k];
    }
    return small_determinant(M);
  }
  // Raw moments with the 1/t factors folded into the exponents (finite at t = 0).
  auto weighted = [&](const std::vector<int>& adj, int k1, int k2) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 1;
      if (k1 >= 0) c *= coord(i, k1);
      if (k2 >= 0) c *= coord(i, k2);
      if (c == 0) continue;
      s += c * std::exp(term_log(log_a_[i], mu_[i], &adj, pt.t, nu_, static_cast<Eigen::Index>(i), pt.rho) - logK);
    }
    return s;
  };
  Vec mean(m);
  for (int k = 0; k < m; ++k) {
    std::vector<int> adj(static_cast<std::size_t>(r), 0);
    if (k < r) adj[static_cast<std::size_t>(k)] = 1;
    mean[k] = weighted(adj, k, -1);
  }
  for (int k1 = 0; k1 < m; ++k1) {
    for (int k2 = k1; k2 < m; ++k2) {
      std::vector<int> adj(static_cast<std::size_t>(r), 0);
      if (k1 < r) adj[static_cast<std::size_t>(k1)] += 1;
      if (k2 < r) adj[static_cast<std::size_t>(k2)] += 1;
      const double v = weighted(adj, k1, k2) - mean[k1] * mean[k2];
      M(k1, k2) = M(k2, k1) = v;
    }
  }
  return small_determinant(M);
}

Vec ChartModel::moment_in_P(const ChartPoint& pt) const {
  const auto n = a_.size();
  const double logK = log_K(pt);
  const int m = dim();
  Vec out = Vec::Zero(m);
  const Mat gamma_inv = chart_.edge_matrix();
  const Vec v0 = to_real(chart_.v0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::exp(term_log(log_a_[i], mu_[i], nullptr, pt.t, nu_, static_cast<Eigen::Index>(i), pt.rho) - logK);
    out += p * (gamma_inv * to_real(chart_.Q_points[i]) + v0);
  }
  return out;
}

const ExponentialSum& ChartModel::face_character() const {
  if (!face_) throw DomainError("the chart face is a vertex: no face character");
  return *face_;
}

Vec ChartModel::log_f(const Vec& rho) const {
  const int r = split_r();
  Vec out(r);
  for (int k = 0; k < r; ++k) {
    const auto& idx = f_terms_[static_cast<std::size_t>(k)];
    Vec terms(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      terms[static_cast<Eigen::Index>(j)] = log_a_[idx[j]] + (rho.size() ? nu_.col(static_cast<Eigen::Index>(idx[j])).dot(rho) : 0.0);
    }
    out[k] = idx.empty() ? kNegInf : log_sum_exp(terms);
  }
  return out;
}

Vec ChartModel::to_orbit(const ChartPoint& pt) const {
  const int m = dim();
  const int r = split_r();
  Vec rp(m);
  for (int k = 0; k < r; ++k) rp[k] = 2 * std::log(pt.t[k]);
  for (int k = r; k < m; ++k) rp[k] = pt.rho[k - r];
  return chart_.gamma_matrix().transpose() * rp;
}

ChartPoint ChartModel::from_orbit(const Vec& rho_full) const {
  const int m = dim();
  const int r = split_r();
  const Vec rp = chart_.edge_matrix().transpose() * rho_full;
  ChartPoint pt{Vec(r), Vec(m - r)};
  for (int k = 0; k < r; ++k) pt.t[k] = std::exp(rp[k] / 2);
  for (int k = r; k < m; ++k) pt.rho[k - r] = rp[k];
  return pt;
}

std::vector<std::pair<IntVec, double>> chart_weights(const VertexChart& chart, const WeightSet& w) {
  std::vector<std::pair<IntVec, double>> out;
  for (std::size_t i = 0; i < chart.Q_points.size(); ++i) out.emplace_back(chart.Q_points[i], w[i]);
  return out;
}

double K_value(const ChartModel& c, const ChartPoint& pt) { return c.log_K(pt); }

FaceCharacterValues face_character_and_moment(const ChartModel& c, const Vec& rho) {
  const auto d = c.face_character().derivatives(rho);
  return {d.log_value, d.mean, d.cov};
}

Vec invert_face_moment(const ChartModel& c, const Vec& alpha_tilde, const NewtonOptions& opts) {
  return c.face_character().solve_mean(alpha_tilde, opts);
}

SAndPsi s_and_Psi(const ChartModel& c, const ChartPeakData& peak, const ChartPoint& pt) {
  const double s = c.s_value(pt, peak.alpha_tilde);
  return {s, s - peak.s_at_peak};
}

Mat block_hessian(const Vec& f_k, double kF, const Mat& A_F) {
  const auto r = f_k.size();
  const auto q = A_F.rows();
  Mat H = Mat::Zero(2 * r + q, 2 * r + q);
  for (Eigen::Index k = 0; k < r; ++k) {
    H(k, k) = 2 * f_k[k] / kF;
    H(r + k, r + k) = 2 * f_k[k] / kF;
  }
  H.bottomRightCorner(q, q) = A_F;
  return H;
}

ChartPeakData chart_peak(const ChartModel& c, const Vec& alpha_tilde, const NewtonOptions& opts) {
  const int r = c.split_r();
  if (r < 1 || r >= c.dim()) throw DomainError("chart_peak needs a face of codimension 1..m-1; use vertex_peak at vertices");
  ChartPeakData pk;
  pk.alpha_tilde = alpha_tilde;
  pk.rho_F = invert_face_moment(c, alpha_tilde, opts);
  const auto fv = face_character_and_moment(c, pk.rho_F);
  pk.A_F = fv.A_F;
  pk.kF_at_peak = std::exp(fv.log_kF);
  pk.f_k = c.log_f(pk.rho_F).array().exp().matrix();
  pk.Hs = block_hessian(pk.f_k, pk.kF_at_peak, pk.A_F);
  pk.det_Hs = pk.Hs.determinant();
  const double detAF = pk.A_F.determinant();
  double prod2f = 1, prodf = 1;
  for (int k = 0; k < r; ++k) {
    prod2f *= 2 * pk.f_k[k];
    prodf *= pk.f_k[k];
  }
  const double det_closed = detAF / std::pow(pk.kF_at_peak, 2 * r) * prod2f * prod2f;
  pk.det_Hs_residual = std::abs(pk.det_Hs - det_closed) / std::abs(det_closed);
  pk.L0 = c.L_density({Vec::Zero(r), pk.rho_F});
  const double L_closed = detAF / std::pow(pk.kF_at_peak, r) * prodf;
  pk.L0_residual = std::abs(pk.L0 - L_closed) / std::abs(L_closed);
  pk.cPalpha = std::pow(2 * std::numbers::pi, r) / std::sqrt(detAF);
  pk.s_at_peak = fv.log_kF - pk.rho_F.dot(alpha_tilde);
  return pk;
}

ChartPeakData chart_peak(const ChartModel& c, const IntVec& alpha) {
  const auto g = c.chart().transform(alpha);
  const int r = c.split_r();
  for (int k = 0; k < r; ++k) {
    if (g[static_cast<std::size_t>(k)] != 0) throw DomainError("point " + to_string(alpha) + " is not on the chart face");
  }
  Vec at(c.dim() - r);
  for (int k = r; k < c.dim(); ++k) at[k - r] = static_cast<double>(g[static_cast<std::size_t>(k)]);
  return chart_peak(c, at);
}

VertexPeak vertex_peak(const ChartModel& c, const IntVec& alpha) {
  if (alpha != c.chart().v0 || c.split_r() != c.dim()) throw NotAVertex(to_string(alpha) + " is not the chart vertex");
  VertexPeak vp;
  vp.m = c.dim();
  for (std::size_t i = 0; i < c.chart().Q_points.size(); ++i) {
    bool zero = true;
    for (auto x : c.chart().Q_points[i]) zero = zero && x == 0;
    if (zero) vp.K0 = c.weights()[i];
  }
  vp.cPalpha = std::pow(2 * std::numbers::pi, vp.m);
  return vp;
}

double L_density(const ChartModel& c, const ChartPoint& pt) { return c.L_density(pt); }

}  // namespace toricdist
