#include "netform/tetrad_logit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netform {

namespace {

// log(1 + e^-t), stable
double l1pe(double t) {
  if (t > 36.0) return std::exp(-t);
  if (t < -36.0) return -t;
  return std::log1p(std::exp(-t));
}

struct PairingRoles {
  int i, j, h, k;   // E+ = {ij, hk}, E- = {ik, jh}, diagonals {ih, jk}
};

// the three pairings of a sorted quadruplet, one per diagonal partition
std::array<PairingRoles, 3> pairings(int a, int b, int c, int d) {
  return {PairingRoles{a, b, c, d},    // E+ = ab,cd  E- = ad,bc  diag ac,bd
          PairingRoles{a, b, d, c},    // E+ = ab,cd  E- = ac,bd  diag ad,bc
          PairingRoles{a, c, b, d}};   // E+ = ac,bd  E- = ad,bc  diag ab,cd
}

void contrast(const DyadCovariates& dy, int i, int j, int h, int k,
              std::vector<double>& dz, std::vector<double>& dx, bool has_x) {
  dz.assign(dy.z_dim, 0.0);
  for (int m = 0; m < dy.z_dim; ++m)
    dz[m] = ((dy.z_at(i, j)[m] + dy.z_at(h, k)[m]) - dy.z_at(i, k)[m]) -
            dy.z_at(j, h)[m];
  if (has_x) {
    dx.assign(dy.x_dim, 0.0);
    for (int m = 0; m < dy.x_dim; ++m)
      dx[m] = ((dy.x_at(i, j)[m] + dy.x_at(h, k)[m]) - dy.x_at(i, k)[m]) -
              dy.x_at(j, h)[m];
  } else {
    dx.clear();
  }
}

}  // namespace

std::vector<AdmissibleTetrad> select_admissible(
    const SimDraw& draw, const StrategicNeighborhoods* nbhds,
    const SelectOptions& opt) {
  const int n = draw.agents.n;
  std::vector<AdmissibleTetrad> out;

  auto consider = [&](int a, int b, int c, int d) {
    for (const PairingRoles& r : pairings(a, b, c, d)) {
      if (draw.network.link(r.i, r.h) || draw.network.link(r.j, r.k))
        continue;  // diagonal present
      AdmissibleTetrad t;
      t.agents = {r.i, r.j, r.h, r.k};
      t.isolated =
          nbhds ? check_tetrad_isolation(*nbhds, r.i, r.j, r.h, r.k) : false;
      if (opt.require_isolation && !t.isolated) continue;
      const bool yij = draw.network.link(r.i, r.j);
      const bool yhk = draw.network.link(r.h, r.k);
      const bool yik = draw.network.link(r.i, r.k);
      const bool yjh = draw.network.link(r.j, r.h);
      if (yij && yhk && !yik && !yjh)
        t.outcome = TetradOutcome::TetradPattern;
      else if (!yij && !yhk && yik && yjh)
        t.outcome = TetradOutcome::Flipped;
      else
        t.outcome = TetradOutcome::Neither;
      contrast(draw.dyads, r.i, r.j, r.h, r.k, t.dz, t.dx, draw.has_x);
      out.push_back(std::move(t));
    }
  };

  if (n <= opt.full_enumeration_max_n) {
    for (int a = 0; a < n - 3; ++a)
      for (int b = a + 1; b < n - 2; ++b)
        for (int c = b + 1; c < n - 1; ++c)
          for (int d = c + 1; d < n; ++d) consider(a, b, c, d);
  } else {
    Rng rng(derive_seed(opt.subsample_seed, 0x7e7ull));
    for (std::size_t s = 0; s < opt.subsample; ++s) {
      int ids[4];
      bool distinct = true;
      for (int p = 0; p < 4 && distinct; ++p) {
        ids[p] = rng.uniform_int(n);
        for (int q = 0; q < p; ++q)
          if (ids[q] == ids[p]) distinct = false;
      }
      if (!distinct) continue;
      std::sort(ids, ids + 4);
      consider(ids[0], ids[1], ids[2], ids[3]);
    }
  }
  return out;
}

LogitFit fit_conditional_logit(const std::vector<AdmissibleTetrad>& tetrads) {
  // gather classified observations
  std::vector<const AdmissibleTetrad*> obs;
  for (const auto& t : tetrads)
    if (t.outcome != TetradOutcome::Neither) obs.push_back(&t);
  if (obs.empty())
    throw std::invalid_argument("fit_conditional_logit: no classified tetrads");

  const int dz_dim = static_cast<int>(obs.front()->dz.size());
  const int dx_dim = static_cast<int>(obs.front()->dx.size());
  const int p_all = dz_dim + dx_dim;

  auto reg = [&](const AdmissibleTetrad& t, int col) {
    return col < dz_dim ? t.dz[col] : t.dx[col - dz_dim];
  };

  // drop identically-zero columns (no variation to estimate on)
  std::vector<int> cols;
  for (int c = 0; c < p_all; ++c) {
    bool nonzero = false;
    for (auto* t : obs)
      if (reg(*t, c) != 0.0) { nonzero = true; break; }
    if (nonzero) cols.push_back(c);
  }
  if (cols.empty())
    throw std::invalid_argument("fit_conditional_logit: all regressors zero");
  const int p = static_cast<int>(cols.size());

  // rank check on the Gram matrix
  {
    std::vector<double> gram(p * p, 0.0);
    for (auto* t : obs)
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
          gram[r * p + c] += reg(*t, cols[r]) * reg(*t, cols[c]);
    std::vector<double> g = gram;
    std::vector<int> piv(p);
    for (int c = 0; c < p; ++c) piv[c] = c;
    for (int c = 0; c < p; ++c) {
      int best = c;
      for (int r = c; r < p; ++r)
        if (std::abs(g[r * p + c]) > std::abs(g[best * p + c])) best = r;
      for (int m = 0; m < p; ++m) std::swap(g[c * p + m], g[best * p + m]);
      const double scale = std::abs(gram[c * p + c]) + 1e-300;
      if (std::abs(g[c * p + c]) < 1e-10 * scale) {
        std::ostringstream os;
        os << "fit_conditional_logit: rank-deficient design (column "
           << cols[c] << (cols[c] < dz_dim ? " of dZ)" : " of dX)");
        throw std::invalid_argument(os.str());
      }
      for (int r = c + 1; r < p; ++r) {
        const double f = g[r * p + c] / g[c * p + c];
        for (int m = c; m < p; ++m) g[r * p + m] -= f * g[c * p + m];
      }
    }
  }

  // y*eta - log(1 + e^eta), with gradient and Hessian on request
  auto loglik_clean = [&](const std::vector<double>& th,
                          std::vector<double>* grad,
                          std::vector<double>* hess) {
    double ll = 0.0;
    if (grad) grad->assign(p, 0.0);
    if (hess) hess->assign(p * p, 0.0);
    for (auto* t : obs) {
      double eta = 0.0;
      for (int c = 0; c < p; ++c) eta += th[c] * reg(*t, cols[c]);
      const double y = t->outcome == TetradOutcome::TetradPattern ? 1.0 : 0.0;
      const double lse = eta > 0 ? eta + l1pe(eta) : l1pe(-eta);
      ll += y * eta - lse;
      const double pr = 1.0 / (1.0 + std::exp(-std::clamp(eta, -700.0, 700.0)));
      if (grad)
        for (int c = 0; c < p; ++c) (*grad)[c] += (y - pr) * reg(*t, cols[c]);
      if (hess) {
        const double wgt = pr * (1.0 - pr);
        for (int r = 0; r < p; ++r)
          for (int c = 0; c < p; ++c)
            (*hess)[r * p + c] += wgt * reg(*t, cols[r]) * reg(*t, cols[c]);
      }
    }
    return ll;
  };

  std::vector<double> th(p, 0.0), grad, hess;
  double ll = loglik_clean(th, &grad, &hess);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    double gmax = 0.0;
    for (double gv : grad) gmax = std::max(gmax, std::abs(gv));
    if (gmax < 1e-8) { converged = true; break; }

    // solve hess * step = grad
    std::vector<double> A = hess, rhs = grad, step(p, 0.0);
    for (int c = 0; c < p; ++c) {
      int best = c;
      for (int r = c; r < p; ++r)
        if (std::abs(A[r * p + c]) > std::abs(A[best * p + c])) best = r;
      for (int m = 0; m < p; ++m) std::swap(A[c * p + m], A[best * p + m]);
      std::swap(rhs[c], rhs[best]);
      if (std::abs(A[c * p + c]) < 1e-120)
        throw std::runtime_error(
            "fit_conditional_logit: singular Hessian (perfect separation?)");
      for (int r = c + 1; r < p; ++r) {
        const double f = A[r * p + c] / A[c * p + c];
        for (int m = c; m < p; ++m) A[r * p + m] -= f * A[c * p + m];
        rhs[r] -= f * rhs[c];
      }
    }
    for (int c = p - 1; c >= 0; --c) {
      double s = rhs[c];
      for (int m = c + 1; m < p; ++m) s -= A[c * p + m] * step[m];
      step[c] = s / A[c * p + c];
    }

    double lam = 1.0;
    std::vector<double> cand(p);
    for (int half = 0; half < 40; ++half) {
      for (int c = 0; c < p; ++c) cand[c] = th[c] + lam * step[c];
      const double ll_new = loglik_clean(cand, nullptr, nullptr);
      if (ll_new > ll - 1e-14) {
        th = cand;
        break;
      }
      lam *= 0.5;
    }
    ll = loglik_clean(th, &grad, &hess);

    double norm = 0.0;
    for (double v : th) norm = std::max(norm, std::abs(v));
    if (norm > 40.0)
      throw std::runtime_error(
          "fit_conditional_logit: estimates diverging, perfect separation");
  }

  LogitFit fit;
  fit.dz_dim = dz_dim;
  fit.dx_dim = dx_dim;
  fit.n_obs = obs.size();
  fit.loglik = ll;
  fit.converged = converged;
  fit.theta.assign(p_all, 0.0);
  for (int c = 0; c < p; ++c) fit.theta[cols[c]] = th[c];

  // standard errors: sqrt(diag(H^-1)) on the active columns
  fit.std_err.assign(p_all, 0.0);
  {
    std::vector<double> A = hess, inv(p * p, 0.0);
    for (int c = 0; c < p; ++c) inv[c * p + c] = 1.0;
    for (int c = 0; c < p; ++c) {
      int best = c;
      for (int r = c; r < p; ++r)
        if (std::abs(A[r * p + c]) > std::abs(A[best * p + c])) best = r;
      for (int m = 0; m < p; ++m) {
        std::swap(A[c * p + m], A[best * p + m]);
        std::swap(inv[c * p + m], inv[best * p + m]);
      }
      const double d = A[c * p + c];
      for (int m = 0; m < p; ++m) {
        A[c * p + m] /= d;
        inv[c * p + m] /= d;
      }
      for (int r = 0; r < p; ++r) {
        if (r == c) continue;
        const double f = A[r * p + c];
        for (int m = 0; m < p; ++m) {
          A[r * p + m] -= f * A[c * p + m];
          inv[r * p + m] -= f * inv[c * p + m];
        }
      }
    }
    for (int c = 0; c < p; ++c)
      fit.std_err[cols[c]] = std::sqrt(std::max(0.0, inv[c * p + c]));
  }
  return fit;
}

LogOdds logodds_oracle(double t_ij, double t_hk, double t_ik, double t_jh) {
  auto lam = [](double t) {
    return 1.0 / (1.0 + std::exp(-std::clamp(t, -700.0, 700.0)));
  };
  LogOdds o;
  o.p_plus = lam(t_ij) * lam(t_hk) * (1.0 - lam(t_ik)) * (1.0 - lam(t_jh));
  o.p_minus = (1.0 - lam(t_ij)) * (1.0 - lam(t_hk)) * lam(t_ik) * lam(t_jh);
  // log(p+/p-) assembled from stable per-factor logs
  const double lp = -l1pe(t_ij) - l1pe(t_hk) + (-t_ik - l1pe(t_ik)) +
                    (-t_jh - l1pe(t_jh));
  const double lm = (-t_ij - l1pe(t_ij)) + (-t_hk - l1pe(t_hk)) - l1pe(t_ik) -
                    l1pe(t_jh);
  o.log_odds = lp - lm;
  return o;
}

LogOddsReport verify_logodds_identity(const SimDraw& draw, const Theta& theta) {
  if (draw.has_x == false)
    throw std::invalid_argument("verify_logodds_identity: needs covariates");
  const int n = draw.agents.n;

  // external common friends: neighbors outside the quadruplet
  auto external_cf = [&](int u, int v, const std::array<int, 4>& quad) {
    int cf = 0;
    for (int l = 0; l < n; ++l) {
      if (l == u || l == v) continue;
      if (l == quad[0] || l == quad[1] || l == quad[2] || l == quad[3])
        continue;
      cf += draw.network.link(u, l) && draw.network.link(v, l);
    }
    return static_cast<double>(cf);
  };

  LogOddsReport rep;
  SelectOptions opt;
  for (const auto& t : select_admissible(draw, nullptr, opt)) {
    const auto [i, j, h, k] = t.agents;
    const std::array<int, 4> quad{i, j, h, k};
    auto threshold = [&](int u, int v) {
      const double xe = external_cf(u, v, quad);
      return draw.dyads.z_index(u, v, theta.beta) + theta.gamma[0] * xe +
             draw.agents.a[u] + draw.agents.a[v];
    };
    const LogOdds o = logodds_oracle(threshold(i, j), threshold(h, k),
                                     threshold(i, k), threshold(j, h));
    double want = 0.0;
    for (int m = 0; m < draw.dyads.z_dim; ++m)
      want += theta.beta[m] *
              (((draw.dyads.z_at(i, j)[m] + draw.dyads.z_at(h, k)[m]) -
                draw.dyads.z_at(i, k)[m]) - draw.dyads.z_at(j, h)[m]);
    want += theta.gamma[0] *
            (((external_cf(i, j, quad) + external_cf(h, k, quad)) -
              external_cf(i, k, quad)) - external_cf(j, h, quad));
    rep.worst_gap = std::max(rep.worst_gap, std::abs(o.log_odds - want));
    ++rep.checked;
  }
  return rep;
}

}  // namespace netform
