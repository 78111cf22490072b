#include "jsr/leafbound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

namespace jsr {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Complex root_of_unity(Index k, Index m) {
  const double t = kTwoPi * static_cast<double>(k % m) / static_cast<double>(m);
  return {std::cos(t), std::sin(t)};
}

// Smallest m <= m_max with |lambda^m - 1| <= tol, or 0.
Index unity_order(Complex lambda, double tol, int m_max) {
  Complex p = 1.0;
  for (Index m = 1; m <= m_max; ++m) {
    p *= lambda;
    if (std::abs(p - 1.0) <= tol) return m;
  }
  return 0;
}

// lambda_k^l, exact for roots of unity.
Complex leading_power(Complex lambda, Index order, Index l) {
  if (order == 0) return std::pow(lambda, static_cast<double>(l));
  const double turns = std::arg(lambda) / kTwoPi * static_cast<double>(order);
  const Index k = ((static_cast<Index>(std::lround(turns)) % order) + order) % order;
  return root_of_unity(k * (l % order), order);
}

// Re(V diag(lambda^l, 0) V^{-1}).
Matrix representative(const SpectralSplit& split, const std::vector<Index>& orders, Index l) {
  const Index s = split.dim();
  CMatrix d = CMatrix::Zero(s, s);
  for (Index k = 0; k < split.K; ++k)
    d(k, k) = leading_power(split.lambda(k), orders[static_cast<std::size_t>(k)], l);
  return (split.V * d * split.Vinv).real();
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

LimitSet accumulation_points(const SpectralSplit& split, double tol, int m_max, Index samples) {
  LimitSet out;
  const Index s = split.dim();
  const Index K = split.K;
  out.orders.resize(static_cast<std::size_t>(K));
  out.finite = true;
  for (Index k = 0; k < K; ++k) {
    const Index o = unity_order(split.lambda(k), tol, m_max);
    out.orders[static_cast<std::size_t>(k)] = o;
    if (o == 0) out.finite = false;
    else out.period = std::lcm(out.period, o);
  }
  CMatrix proj = CMatrix::Zero(s, s);
  for (Index k = 0; k < K; ++k) proj(k, k) = 1.0;
  out.limit = (split.V * proj * split.Vinv).real();
  out.L = out.finite ? out.period : std::max<Index>(samples, 1);
  for (Index l = 0; l < out.L; ++l) out.representatives.push_back(representative(split, out.orders, l));
  return out;
}

double orbit_max_gap(double beta, Index count) {
  if (count <= 1) return 1.0;
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (Index j = 0; j < count; ++j) pts[static_cast<std::size_t>(j)] = frac(static_cast<double>(j) * beta);
  std::sort(pts.begin(), pts.end());
  double gap = 1.0 - pts.back() + pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
  return gap;
}

LeadingError leading_error(const CVector& lambda, const LimitSet& limit, Index L) {
  LeadingError out;
  if (limit.finite) {
    out.method = "finite";
    out.L = limit.period;
    return out;
  }
  const Index p = limit.period;
  const Index reps = std::max<Index>(L / p, 1);
  out.L = reps * p;
  // Angles of the non-root-of-unity eigenvalues after raising to the period.
  std::vector<double> betas;
  for (Index k = 0; k < lambda.size(); ++k)
    if (limit.orders[static_cast<std::size_t>(k)] == 0)
      betas.push_back(frac(static_cast<double>(p) * std::arg(lambda(k)) / kTwoPi));
  const double beta = betas.front();
  bool single = true;
  for (double b : betas) {
    const double d1 = std::abs(b - beta), d2 = std::abs(frac(b + beta) - 0.0);
    if (!(d1 <= 1e-12 || d1 >= 1 - 1e-12 || d2 <= 1e-12 || d2 >= 1 - 1e-12)) single = false;
  }
  if (single) {
    const double gap = orbit_max_gap(beta, reps);
    out.e_delta = 2 * std::sin(std::numbers::pi * gap / 2);
    out.method = "three-gap";
    return out;
  }
  // Several independent angles: sample the orbit.
  out.method = "sampled";
  out.rigorous = false;
  const Index n_sample = 10000;
  double worst = 0.0;
  for (Index q = 0; q < n_sample; ++q) {
    double best = kInfinity;
    for (Index j = 0; j < reps; ++j) {
      double m = 0.0;
      for (Index k = 0; k < lambda.size(); ++k) {
        if (limit.orders[static_cast<std::size_t>(k)] != 0) continue;
        const Complex mu = std::pow(lambda(k), static_cast<double>(p));
        m = std::max(m, std::abs(std::pow(mu, static_cast<double>(j)) - std::pow(mu, static_cast<double>(q))));
      }
      best = std::min(best, m);
    }
    worst = std::max(worst, best);
  }
  out.e_delta = worst;
  return out;
}

double two_norm(const CMatrix& m) { return norm2(m); }

double tail_sup_from(const CMatrix& T, Index n0, Index N) {
  const Index n = T.rows();
  if (n == 0) return 0.0;
  CMatrix P = CMatrix::Identity(n, n);
  CMatrix base = T;
  for (Index e = n0; e > 0; e >>= 1) {
    if (e & 1) P = P * base;
    base = base * base;
  }
  double best = 0.0;
  for (Index r = 0; r < std::max<Index>(N, 1); ++r) {
    best = std::max(best, norm2(P));
    P = T * P;
  }
  return best;
}

TailBound tail_contraction_bound(const CMatrix& T, const MatrixNorm& norm, double c, Index n_max,
                                 double pseudo_eps) {
  if (!(c > 0.0 && c < 1.0)) throw Error("tail_contraction_bound: contraction factor must lie in (0, 1)");
  TailBound out;
  out.c = c;
  const Index n = T.rows();
  if (n == 0) return out;
  CMatrix P = T;
  bool found = false;
  for (Index k = 1; k <= n_max; ++k) {
    const double nk = norm(P);
    out.max_contract = std::max(out.max_contract, nk);
    if (nk <= c) {
      out.N = k;
      found = true;
      break;
    }
    P = (T * P).eval();
  }
  if (!found)
    throw Error("tail_contraction_bound: ||T^n|| did not drop below " + std::to_string(c) + " within " +
                std::to_string(n_max) + " powers");
  if (pseudo_eps > 0.0) {
    const PseudoSpectralRadius ps = pseudo_spectral_radius_detail(T, pseudo_eps);
    if (!ps.at_least_one) {
      out.gamma_M = ps.upper;
      out.M = ps.upper / pseudo_eps;
      out.pseudo_bound = ps.upper * ps.upper / pseudo_eps;
      if (*out.pseudo_bound < out.max_contract) out.route = "pseudospectral";
    }
  }
  return out;
}

PseudoSpectralRadius pseudo_spectral_radius_detail(const CMatrix& D, double eps, double tol) {
  if (!(eps > 0.0)) throw Error("pseudo_spectral_radius: epsilon must be positive");
  PseudoSpectralRadius out;
  const Index n = D.rows();
  if (n == 0) return out;
  const CMatrix I = CMatrix::Identity(n, n);
  auto f = [&](Complex z) {
    Eigen::JacobiSVD<CMatrix> svd(z * I - D);
    return svd.singularValues()(n - 1);
  };
  const double R0 = norm2(D) + eps;
  const double step_tol = tol / 8;
  constexpr int kMaxSteps = 400;

  struct Wedge {
    double theta;
    double width;
    double upper;  // f > eps at every point of the wedge beyond this radius
  };
  // Marches inward from `start` with Lipschitz steps of f - eps_prime. Points
  // of the wedge within radius `start` lie within start * width / 2 of the
  // ray, so f > eps_prime on the ray means f > eps on the wedge.
  auto march = [&](double theta, double start, double eps_prime) {
    const Complex dir = std::polar(1.0, theta);
    double r = start;
    for (int step = 0; step < kMaxSteps; ++step) {
      const double v = f(r * dir);
      if (v - eps_prime <= step_tol) return r;
      r -= v - eps_prime;
      if (r <= 0.0) return 0.0;
    }
    return r;
  };
  // Radius of a point on the ray that lies in the pseudospectrum, or 0. Only
  // feeds the lower bound, so secant steps are allowed to overshoot.
  auto inner_point = [&](double theta, double start) {
    const Complex dir = std::polar(1.0, theta);
    double r0 = start, v0 = f(r0 * dir);
    if (v0 < eps) return r0;
    double r1 = r0 - std::max(v0 - eps, step_tol);
    for (int step = 0; step < 60 && r1 > 0.0; ++step) {
      const double v1 = f(r1 * dir);
      if (v1 < eps) return r1;
      const double slope = (v0 - v1) / (r0 - r1);
      double next = r1 - std::max(v1 - eps, step_tol);
      if (slope > 0.0) next = std::min(next, r1 - (v1 - eps + step_tol) / slope);
      r0 = r1;
      v0 = v1;
      r1 = next;
    }
    return 0.0;
  };
  auto evaluate = [&](double theta, double width, double start) {
    const Wedge w{theta, width, march(theta, start, eps + start * width / 2)};
    if (w.upper > out.lower + tol) out.lower = std::max(out.lower, inner_point(theta, w.upper));
    return w;
  };

  // Best first: split the wedge with the largest upper radius.
  auto cmp = [](const Wedge& a, const Wedge& b) { return a.upper < b.upper; };
  std::priority_queue<Wedge, std::vector<Wedge>, decltype(cmp)> wedges(cmp);
  const int initial = 32;
  for (int k = 0; k < initial; ++k) wedges.push(evaluate(kTwoPi * k / initial, kTwoPi / initial, R0));
  const Index budget = 6000;
  for (Index evaluations = initial; evaluations < budget; evaluations += 2) {
    const Wedge w = wedges.top();
    if (w.upper - out.lower <= tol) break;
    wedges.pop();
    const double hw = w.width / 2;
    wedges.push(evaluate(w.theta - hw / 2, hw, w.upper));
    wedges.push(evaluate(w.theta + hw / 2, hw, w.upper));
  }
  out.upper = wedges.top().upper;
  out.at_least_one = out.upper >= 1.0;
  return out;
}

double pseudo_spectral_radius(const CMatrix& D, double eps) { return pseudo_spectral_radius_detail(D, eps).upper; }

LeafVerdict certify_leaf(const Matrix& X, const Matrix& Pi, const SpectralSplit& split, const Matrix& Y,
                         const std::function<double(const Matrix&)>& norm, double C, const LeafConfig& cfg) {
  LeafVerdict out;
  out.C = C;
  const Index s = Pi.rows();
  const Index K = split.K;

  Matrix Z = Y;
  for (Index n = 0; n <= cfg.n_explicit; ++n) {
    out.explicit_max = std::max(out.explicit_max, norm(X * Z));
    Z = (Pi * Z).eval();
  }

  const CMatrix XV = X.cast<Complex>() * split.V;
  const CMatrix w = split.Vinv * Y.cast<Complex>();
  out.xv_norm = norm2(XV);
  out.wK_norm = K > 0 ? norm2(w.topRows(K)) : 0.0;
  out.wR_norm = K < s ? norm2(w.bottomRows(s - K)) : 0.0;

  std::string tail_route = "direct";
  double tail_all = 0.0;
  if (K < s && out.wR_norm > 0.0 && out.xv_norm > 0.0) {
    const double eps = cfg.pseudospectral ? std::max(1e-6, (1 - spectral_radius(Matrix(split.T.real()))) / 4) : 0.0;
    const TailBound tb = tail_contraction_bound(split.T, two_norm, cfg.contraction, cfg.n_max,
                                                cfg.pseudospectral ? eps : 0.0);
    out.N = tb.N;
    out.tail_sup = tail_sup_from(split.T, cfg.n_explicit + 1, tb.N);
    tail_all = std::max(1.0, tb.bound());
    tail_route = tb.route;
  }

  LimitSet limit = accumulation_points(split, cfg.root_tol, cfg.m_max, 1);
  out.finite = limit.finite;
  LeadingError le;
  std::vector<Matrix> reps;
  auto rep_norm = [&](Index l) { return norm(X * representative(split, limit.orders, l) * Y); };
  Index L = limit.finite ? limit.period : limit.period * ((64 + limit.period - 1) / limit.period);
  for (Index l = 0; l < L; ++l) {
    const double q = rep_norm(l);
    if (q > out.limit_max) {
      out.limit_max = q;
      if (q > 1.0) out.witness = l;
    }
  }
  while (true) {
    le = leading_error(split.lambda, limit, L);
    out.e_delta = le.e_delta;
    out.L = le.L;
    out.tail_estimate = C * out.xv_norm * (out.e_delta * out.wK_norm + out.tail_sup * out.wR_norm) + out.limit_max;
    if (limit.finite || out.limit_max > 1.0 || out.tail_estimate <= cfg.threshold || 2 * L > cfg.max_L) break;
    for (Index l = L; l < 2 * L; ++l) {
      const double q = rep_norm(l);
      if (q > out.limit_max) {
        out.limit_max = q;
        if (q > 1.0) out.witness = l;
      }
    }
    L *= 2;
  }
  out.estimate_all = C * out.xv_norm * (out.e_delta * out.wK_norm + tail_all * out.wR_norm) + out.limit_max;
  out.bound = std::min(std::max(out.explicit_max, out.tail_estimate), out.estimate_all);
  out.refuted = out.limit_max > 1.0;
  out.method = le.method + "+" + tail_route;
  if (!le.rigorous) out.method += "+heuristic";
  return out;
}

LeafVerdict certify_leaf_in_polytope(const Matrix& X, const Matrix& Pi, const SpectralSplit& split,
                                     const Vector& v, const SymPolytope& P, const SandwichConstants& sc,
                                     const LeafConfig& cfg) {
  auto norm = [&P](const Matrix& q) { return minkowski_norm(P, q.col(0)); };
  return certify_leaf(X, Pi, split, Matrix(v), norm, sc.C_P(), cfg);
}

double NormChoice::matrix_norm(const Matrix& A) const {
  if (is_two_norm()) return norm2(A);
  return polytope_norm_of_matrix(*polytope, A);
}

double leaf_norm_bound(const NodeFamily& leaf, const MatrixFamily& family, const NormChoice& norm,
                       const LeafConfig& cfg) {
  if (!leaf.has_core()) return norm.matrix_norm(word_product(family, leaf.instance()));
  const Matrix Pi = word_product(family, *leaf.g);
  const Matrix X = word_product(family, leaf.X);
  const Matrix Y = word_product(family, leaf.g->power(static_cast<std::size_t>(leaf.m))) *
                   word_product(family, leaf.W);
  const SpectralSplit split = spectral_split(Pi);
  if (norm.is_two_norm()) {
    auto n2 = [](const Matrix& m) { return norm2(m); };
    return certify_leaf(X, Pi, split, Y, n2, 1.0, cfg).bound;
  }
  double best = 0.0;
  for (Index i = 0; i < norm.polytope->size(); ++i) {
    const Vector v = Y * norm.polytope->vertices().col(i);
    best = std::max(best, certify_leaf_in_polytope(X, Pi, split, v, *norm.polytope, *norm.sandwich, cfg).bound);
  }
  return best;
}

}  // namespace jsr
