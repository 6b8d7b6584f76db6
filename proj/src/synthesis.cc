/******************************************************************************
 * Copyright 2026 The DADS Toolkit Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "dads/synthesis.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace dads {
namespace {

constexpr double kMajorantTolerance = 1e-9;
constexpr double kKinkBand = 1e-9;

double Pow2(int e) { return std::ldexp(1.0, e); }

Jet SumSquares(const JetVec& v, std::size_t begin, std::size_t end,
               const Jet& like) {
  Jet s = ConstantLike(like, 0.0);
  for (std::size_t i = begin; i < end; ++i) s += v[i] * v[i];
  return s;
}

double VecNorm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> Values(const JetVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

void RequireMajorant(const std::optional<SmoothMap>& f, int arity,
                     const std::string& what) {
  if (!f) throw std::invalid_argument("missing majorant " + what);
  if (f->arity() != arity || f->codim() != 1) {
    throw std::invalid_argument("majorant " + what + " must map R^" +
                                std::to_string(arity) + " -> R, got R^" +
                                std::to_string(f->arity()) + " -> R^" +
                                std::to_string(f->codim()));
  }
}

// Scale of the i-th sample: cycles through tiny, small, unit and box radii
// so that ratio bounds near the origin are exercised.
double SampleScale(int i, double box) {
  const double scales[] = {1e-3, 0.1, 1.0, box};
  return scales[i % 4];
}

std::vector<double> SampleBox(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

class MarginTracker {
 public:
  MarginTracker(std::string name, int level) {
    check_.name = std::move(name);
    check_.level = level;
    check_.worst_margin = std::numeric_limits<double>::infinity();
  }

  void Add(double lhs, double rhs, std::vector<double> point) {
    double m = (rhs - lhs) / (1.0 + std::abs(lhs));
    if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
    if (m < check_.worst_margin) {
      check_.worst_margin = m;
      check_.witness = std::move(point);
    }
    ++check_.n_samples;
  }

  MajorantCheck Finish() const {
    if (check_.worst_margin < -kMajorantTolerance) {
      throw MajorantViolation(check_);
    }
    return check_;
  }

 private:
  MajorantCheck check_;
};

// Row i of the parameter and disturbance matrices of the first `dims` state
// coordinates, at a numeric point.  Integrator rows are zero.
std::vector<std::vector<double>> RegressorRows(const StrictFeedbackSystem& sys,
                                               int dims,
                                               std::span<const double> state,
                                               bool disturbance) {
  const int width = disturbance ? std::max(sys.l, 1) : std::max(sys.p, 1);
  std::vector<std::vector<double>> rows(dims, std::vector<double>(width, 0.0));
  for (int i = sys.integrators; i < dims; ++i) {
    const CascadeLevel& lv = sys.levels[i - sys.integrators];
    const std::span<const double> prefix = state.subspan(0, i + 1);
    rows[i] = disturbance ? lv.alpha.Evaluate(prefix) : lv.phi.Evaluate(prefix);
  }
  return rows;
}

void CheckThetaFreeDrift(const StrictFeedbackSystem& sys, int dims,
                         const SynthesisOptions& options) {
  std::mt19937_64 rng(options.seed ^ 0x7e7aULL);
  for (int idx = sys.integrators; idx + 1 < dims; ++idx) {
    const int level = idx - sys.integrators + 1;
    const CascadeLevel& lv = sys.levels[level - 1];
    for (int s = 0; s < 64; ++s) {
      std::vector<double> x = SampleBox(rng, idx + 1, SampleScale(s, 3.0));
      std::vector<double> a = x, b = x;
      const std::vector<double> t1 = sys.theta_set.Sample(rng);
      const std::vector<double> t2 = sys.theta_set.Sample(rng);
      a.insert(a.end(), t1.begin(), t1.end());
      b.insert(b.end(), t2.begin(), t2.end());
      const double ga = lv.g.EvaluateScalar(a);
      const double gb = lv.g.EvaluateScalar(b);
      if (std::abs(ga - gb) > 1e-12 * (1.0 + std::abs(ga))) {
        throw std::invalid_argument(
            "level " + std::to_string(level) +
            ": g depends on theta below the top of the cascade; the "
            "backstepping step needs a theta-free drift");
      }
    }
  }
}

}  // namespace

MajorantViolation::MajorantViolation(MajorantCheck check)
    : std::runtime_error("majorant violated: " + check.name + " at level " +
                         std::to_string(check.level) + " (margin " +
                         std::to_string(check.worst_margin) + ")"),
      check_(std::move(check)) {}

void DadsGains::Validate() const {
  for (auto [v, what] : {std::pair{b, "b"}, {gamma, "Gamma"}, {eps_dz, "eps"},
                         {c, "c"}, {a, "a"}}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("gain ") + what +
                                  " must be positive");
    }
  }
  for (auto [f, what] : {std::pair{&kappa, "kappa"}, {&lambda, "lambda"}}) {
    if (f->arity() != 1 || f->codim() != 1) {
      throw std::invalid_argument(std::string(what) + " must map R -> R");
    }
    const std::vector<double> zero{0.0};
    if (std::abs(f->EvaluateScalar(zero)) > 1e-12) {
      throw std::invalid_argument(std::string(what) + "(0) must vanish");
    }
    double prev = 0.0;
    for (int i = 1; i <= 64; ++i) {
      const std::vector<double> s{0.05 * i * i};
      const double v = f->EvaluateScalar(s);
      if (!(v > prev)) {
        throw std::invalid_argument(std::string(what) +
                                    " must be strictly increasing");
      }
      prev = v;
    }
  }
}

BaseAlgebra SolveBaseAlgebra(int n, int m, double c) {
  if (n < 1 || m < 1 || !(c > 0.0)) {
    throw std::invalid_argument("SolveBaseAlgebra: need n, m >= 1 and c > 0");
  }
  const double s = Pow2(m - 1) * c;
  // Coefficients of prod_i (lambda + s + i/2), lowest degree first.
  Eigen::VectorXd poly = Eigen::VectorXd::Zero(n + 1);
  poly(0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double root = s + 0.5 * i;
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n + 1);
    for (int k = 0; k < i; ++k) {
      next(k) += root * poly(k);
      next(k + 1) += poly(k);
    }
    poly = next;
  }
  BaseAlgebra out;
  out.omega = -poly.head(n);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  Eigen::VectorXd bvec = Eigen::VectorXd::Zero(n);
  bvec(n - 1) = 1.0;
  const Eigen::MatrixXd Abar = A + bvec * out.omega.transpose();
  const Eigen::MatrixXd S = Abar + s * Eigen::MatrixXd::Identity(n, n);

  // S' P + P S = -I as a Kronecker system on vec(P).
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) = S(j, i) * I;
      if (i == j) L.block(i * n, j * n, n, n) += S.transpose();
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(I.data(), n * n);
  const Eigen::VectorXd vecP = L.fullPivLu().solve(rhs);
  Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(vecP.data(), n, n);
  out.P = 0.5 * (P + P.transpose());

  const Eigen::RowVectorXd krow = 2.0 * bvec.transpose() * out.P -
                                  out.omega.transpose() * A -
                                  (out.omega.transpose() * bvec) *
                                      out.omega.transpose();
  out.K_const = krow.norm();

  out.Q = Eigen::MatrixXd::Zero(n + 1, n + 1);
  out.Q.topLeftCorner(n, n) = out.P + 0.5 * out.omega * out.omega.transpose();
  out.Q.topRightCorner(n, 1) = -0.5 * out.omega;
  out.Q.bottomLeftCorner(1, n) = -0.5 * out.omega.transpose();
  out.Q(n, n) = 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(out.Q);
  out.M_raw = 1.0 / qe.eigenvalues().minCoeff();
  out.M_const = std::max(1.0, 1.01 * out.M_raw);

  const Eigen::MatrixXd lyap = out.P * Abar + Abar.transpose() * out.P +
                               Pow2(m) * c * out.P;
  out.lyapunov_max_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (lyap + lyap.transpose()))
          .eigenvalues()
          .maxCoeff();
  const Eigen::MatrixXd cmp =
      out.M_const * out.Q - Eigen::MatrixXd::Identity(n + 1, n + 1);
  out.comparison_min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cmp).eigenvalues().minCoeff();
  return out;
}

BaseStepResult solve_base_theorem1(const StrictFeedbackSystem& sys,
                                   const DadsGains& gains,
                                   const StageMajorants& majorants,
                                   const SynthesisOptions& options) {
  if (sys.pure()) {
    throw std::invalid_argument("integrator-chain base step needs n >= 1");
  }
  const int n = sys.integrators;
  const int m = sys.num_levels();
  const int dims = n + 1;
  RequireMajorant(majorants.r, dims, "r (level 1)");

  BaseStepResult result;
  result.algebra = SolveBaseAlgebra(n, m, gains.c);
  const BaseAlgebra& alg = result.algebra;
  const int order = m - 1 + options.final_order;

  const std::vector<double> P(alg.P.data(), alg.P.data() + n * n);
  const std::vector<double> omega(alg.omega.data(), alg.omega.data() + n);
  const double omega_norm = alg.omega.norm();
  const double omega_last = std::abs(alg.omega(n - 1));
  const double K = alg.K_const;
  const double M = alg.M_const;
  const double b = gains.b, a = gains.a, c = gains.c;
  const SmoothMap r = *majorants.r;
  const SmoothMap lambda = gains.lambda, kappa = gains.kappa;
  const CascadeLevel lv = sys.levels[0];

  auto error = [n, omega](const JetVec& in) {
    Jet e = in[n];
    for (int i = 0; i < n; ++i) e -= omega[i] * in[i];
    return e;
  };

  DadsStage& st = result.stage;
  st.level = 1;
  st.state_dims = dims;
  st.V = SmoothMap(
      dims + 1, 1, order,
      [n, P, error](const JetVec& in) {
        Jet v = ConstantLike(in[0], 0.0);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) v += P[i * n + j] * (in[i] * in[j]);
        }
        const Jet e = error(in);
        return JetVec{v + 0.5 * (e * e)};
      },
      "V1");
  st.k = SmoothMap(
      dims + 1, 1, order,
      [=](const JetVec& in) {
        const JetVec s(in.begin(), in.begin() + dims);
        const Jet& z = in[dims];
        const Jet rr = r(s)[0];
        const Jet ez = exp(z);
        const Jet lam = lambda({ez})[0];
        const Jet kap = kappa({ez})[0];
        const JetVec al = lv.alpha(s);
        const Jet al2 = SumSquares(al, 0, al.size(), z);
        const Jet ssq = SumSquares(s, 0, s.size(), z);
        const Jet lead = K + rr * (1.0 + omega_norm) * (1.0 + b + lam);
        const Jet G = M / (Pow2(m + 1) * c) * (lead * lead) + omega_last +
                      Pow2(m - 2) * c +
                      M * (1.0 + kap) / (Pow2(3 - m) * a) * (al2 + rr * rr * ssq) +
                      rr * (1.0 + b + lam);
        return JetVec{-(G / lv.eta(s)[0]) * error(in)};
      },
      "k1");
  st.sigma = ConstantMap(dims + 1, {M}, "sigma1");
  st.rate_c = Pow2(m - 1) * c;
  st.gain_a = Pow2(1 - m) * a / M;
  st.majorants = majorants;

  MarginTracker track("r", 1);
  std::mt19937_64 rng(options.seed);
  for (int i = 0; i < options.majorant_samples; ++i) {
    const std::vector<double> s =
        SampleBox(rng, dims, SampleScale(i, options.box_radius));
    const double lhs = std::abs(lv.h.EvaluateScalar(s)) + VecNorm(lv.phi.Evaluate(s));
    const double rhs = r.EvaluateScalar(s) * Norm(s);
    track.Add(lhs, rhs, s);
  }
  st.majorant_checks.push_back(track.Finish());
  return result;
}

DadsStage solve_base_theorem3(const StrictFeedbackSystem& sys,
                              const DadsGains& gains,
                              const StageMajorants& majorants,
                              const SynthesisOptions& options) {
  if (!sys.pure()) {
    throw std::invalid_argument("scalar base step needs a pure chain");
  }
  RequireMajorant(majorants.r, 1, "r (level 1)");
  const int n = sys.num_levels();
  const int order = n - 1 + options.final_order;
  const double b = gains.b, a = gains.a, c = gains.c;
  const SmoothMap r = *majorants.r;
  const SmoothMap lambda = gains.lambda, kappa = gains.kappa;
  const CascadeLevel lv = sys.levels[0];

  DadsStage st;
  st.level = 1;
  st.state_dims = 1;
  st.V = SmoothMap(
      2, 1, order,
      [](const JetVec& in) { return JetVec{0.5 * (in[0] * in[0])}; }, "V1");
  st.k = SmoothMap(
      2, 1, order,
      [=](const JetVec& in) {
        const JetVec x{in[0]};
        const Jet rr = r(x)[0];
        const Jet ez = exp(in[1]);
        const Jet lam = lambda({ez})[0];
        const Jet kap = kappa({ez})[0];
        const JetVec al = lv.alpha(x);
        const Jet al2 = SumSquares(al, 0, al.size(), in[0]);
        const Jet M = (b + 1.0 + lam) * rr +
                      (1.0 + kap) / (Pow2(3 - n) * a) *
                          (al2 + rr * rr * (in[0] * in[0])) +
                      Pow2(n - 2) * c;
        return JetVec{-(M / lv.eta(x)[0]) * in[0]};
      },
      "k1");
  st.sigma = ConstantMap(2, {2.0}, "sigma1");
  st.rate_c = Pow2(n - 1) * c;
  st.gain_a = Pow2(1 - n) * a;
  st.majorants = majorants;

  MarginTracker track("r", 1);
  std::mt19937_64 rng(options.seed);
  for (int i = 0; i < options.majorant_samples; ++i) {
    const std::vector<double> x =
        SampleBox(rng, 1, SampleScale(i, options.box_radius));
    const double lhs = std::abs(lv.h.EvaluateScalar(x)) + VecNorm(lv.phi.Evaluate(x));
    const double rhs = r.EvaluateScalar(x) * std::abs(x[0]);
    track.Add(lhs, rhs, x);
  }
  st.majorant_checks.push_back(track.Finish());
  return st;
}

DadsStage backstep(const DadsStage& prev, const StrictFeedbackSystem& sys,
                   const DadsGains& gains, const StageMajorants& majorants,
                   const SynthesisOptions& options) {
  const int j = prev.level;
  const int D = prev.state_dims;
  if (j < 1 || j >= sys.num_levels() || D != sys.prefix_dim(j)) {
    throw std::invalid_argument("backstep: stage does not match the system");
  }
  RequireMajorant(majorants.R, D + 1, "R (level " + std::to_string(j + 1) + ")");
  RequireMajorant(majorants.r, D, "r (level " + std::to_string(j + 1) + ")");
  RequireMajorant(majorants.rho, D + 1,
                  "rho (level " + std::to_string(j + 1) + ")");
  const CascadeLevel cur = sys.levels[j - 1];
  const CascadeLevel next = sys.levels[j];
  if (!cur.mu) {
    throw std::invalid_argument("level " + std::to_string(j) +
                                " needs an upper majorant mu for g");
  }
  const int q = prev.k.max_order() - 1;
  if (q < 0 || prev.V.max_order() < 1) {
    throw MaxOrderError("backstep: previous stage has no derivatives left");
  }
  CheckThetaFreeDrift(sys, D, options);

  const SmoothMap Vg = prev.V.WithGradient();
  const SmoothMap kg = prev.k.WithGradient();
  const SmoothMap V_prev = prev.V, k_prev = prev.k, sigma_prev = prev.sigma;
  const SmoothMap R = *majorants.R, r = *majorants.r, rho = *majorants.rho;
  const SmoothMap mu = *cur.mu;
  const SmoothMap lambda = gains.lambda, kappa = gains.kappa;
  const BackstepConstants kc{prev.rate_c, prev.gain_a, gains.b, gains.gamma};
  const StrictFeedbackSystem plant = sys;
  const int n_int = sys.integrators;
  const int l = std::max(sys.l, 1);

  DadsStage st;
  st.level = j + 1;
  st.state_dims = D + 1;
  st.rate_c = prev.rate_c / 2.0;
  st.gain_a = prev.gain_a * 2.0;
  st.majorants = majorants;

  st.V = SmoothMap(
      D + 2, 1, q,
      [=](const JetVec& in) {
        JetVec xz(in.begin(), in.begin() + D);
        xz.push_back(in[D + 1]);
        const Jet s = in[D] - k_prev(xz)[0];
        return JetVec{V_prev(xz)[0] + 0.5 * (s * s)};
      },
      "V" + std::to_string(j + 1));

  st.k = SmoothMap(
      D + 2, 1, q,
      [=](const JetVec& in) {
        const JetVec x(in.begin(), in.begin() + D);
        JetVec xz = x;
        xz.push_back(in[D + 1]);
        JetVec xy = x;
        xy.push_back(in[D]);
        const Jet& z = in[D + 1];

        const JetVec vg = Vg(xz);
        const JetVec kgv = kg(xz);
        const Jet ez = exp(z);

        BackstepTerms<Jet> t;
        t.V = vg[0];
        t.dV_dz = vg[D + 1];
        t.dk_dz = kgv[D + 1];
        t.dk_dx_sq = SumSquares(kgv, 1, D + 1, z);
        t.s = in[D] - kgv[0];
        t.x_sq = SumSquares(x, 0, x.size(), z);
        t.R = R(xz)[0];
        t.r = r(x)[0];
        t.rho = rho(xy)[0];
        t.mu = mu(x)[0];
        t.sigma = sigma_prev(xz)[0];
        t.lambda_ez = lambda({ez})[0];
        t.kappa_ez = kappa({ez})[0];
        t.exp_neg_z = exp(-z);

        JetVec mix = next.alpha(xy);
        for (int i = n_int; i < D; ++i) {
          const JetVec prefix(x.begin(), x.begin() + i + 1);
          const JetVec row = plant.levels[i - n_int].alpha(prefix);
          for (int k = 0; k < l; ++k) mix[k] -= kgv[1 + i] * row[k];
        }
        t.alpha_mix_sq = SumSquares(mix, 0, mix.size(), z);

        const Jet M = BackstepM(t, kc);
        return JetVec{-(M / next.eta(xy)[0]) * t.s};
      },
      "k" + std::to_string(j + 1));

  st.sigma = SmoothMap(
      D + 2, 1, std::max(q, 0),
      [=](const JetVec& in) {
        JetVec xz(in.begin(), in.begin() + D);
        xz.push_back(in[D + 1]);
        const Jet Rv = R(xz)[0];
        return JetVec{(1.0 + 2.0 * (Rv * Rv)) * sigma_prev(xz)[0] + 4.0};
      },
      "sigma" + std::to_string(j + 1));

  // Sampled majorant conditions.
  std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(j));
  std::uniform_real_distribution<double> zdist(-options.z_radius,
                                               options.z_radius);
  const std::vector<double> theta0(sys.p, 0.0), d0(sys.l, 0.0);
  MarginTracker tR("R", j + 1), tr("r", j + 1), trho("rho", j + 1);
  for (int i = 0; i < options.majorant_samples; ++i) {
    const double scale = SampleScale(i, options.box_radius);
    std::vector<double> x = SampleBox(rng, D, scale);
    std::vector<double> xz = x;
    xz.push_back(zdist(rng));

    const std::vector<double> vg = Vg.Evaluate(xz);
    const std::vector<double> kgv = kg.Evaluate(xz);
    double dv = 0.0;
    for (int k = 0; k < D; ++k) dv += vg[1 + k] * vg[1 + k];
    const auto Phi = RegressorRows(sys, D, x, false);
    double kphi = 0.0;
    for (std::size_t col = 0; col < Phi[0].size(); ++col) {
      double acc = 0.0;
      for (int k = 0; k < D; ++k) acc += kgv[1 + k] * Phi[k][col];
      kphi += acc * acc;
    }
    const double xn = Norm(x);
    tR.Add(std::sqrt(dv) + std::abs(kgv[0]) + std::sqrt(kphi),
           R.EvaluateScalar(xz) * xn, xz);

    const JetVec xj = LiftPoint(x, 0);
    const std::vector<double> f = Values(SubsystemDynamics(
        sys, D, xj, ConstantLike(xj[0], 0.0), theta0, d0));
    tr.Add(Norm(f), r.EvaluateScalar(x) * xn, x);

    std::vector<double> xy = x;
    xy.push_back(std::uniform_real_distribution<double>(-scale, scale)(rng));
    trho.Add(std::abs(next.h.EvaluateScalar(xy)) + VecNorm(next.phi.Evaluate(xy)),
             rho.EvaluateScalar(xy) * (xn + std::abs(xy[D])), xy);
  }
  st.majorant_checks.push_back(tR.Finish());
  st.majorant_checks.push_back(tr.Finish());
  st.majorant_checks.push_back(trho.Finish());
  return st;
}

SynthesisResult synthesize(const StrictFeedbackSystem& sys,
                           const DadsGains& gains, const MajorantPack& pack,
                           const SynthesisOptions& options) {
  sys.Validate();
  gains.Validate();
  if (static_cast<int>(pack.size()) != sys.num_levels()) {
    throw std::invalid_argument("majorant pack needs one entry per level (" +
                                std::to_string(sys.num_levels()) + ")");
  }
  if (options.final_order < 1) {
    throw std::invalid_argument("final_order must be >= 1");
  }
  SynthesisResult result;
  result.user_a = gains.a;
  result.user_c = gains.c;
  if (sys.pure()) {
    result.stage_trace.push_back(solve_base_theorem3(sys, gains, pack[0], options));
    result.M_const = 1.0;
  } else {
    BaseStepResult base = solve_base_theorem1(sys, gains, pack[0], options);
    result.M_const = base.algebra.M_const;
    result.base = std::move(base.algebra);
    result.stage_trace.push_back(std::move(base.stage));
  }
  for (int j = 1; j < sys.num_levels(); ++j) {
    result.stage_trace.push_back(
        backstep(result.stage_trace.back(), sys, gains, pack[j], options));
  }
  result.k_final = result.stage_trace.back().k;
  result.V_final = result.stage_trace.back().V;
  return result;
}

CheckReport StageCertificate(const StrictFeedbackSystem& sys,
                             const DadsStage& stage, const DadsGains& gains,
                             int n_samples, double tolerance,
                             std::uint64_t seed, double box, double z_box,
                             double d_box) {
  CheckReport report;
  report.name = "dissipation level " + std::to_string(stage.level);
  report.tolerance = tolerance;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const int dims = stage.state_dims;
  const SmoothMap Vg = stage.V.WithGradient();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zdist(-z_box, z_box);
  int skipped = 0;
  for (int i = 0; i < n_samples; ++i) {
    std::vector<double> s = SampleBox(rng, dims, SampleScale(i, box));
    const double z = zdist(rng);
    // Exogenous inputs cycle through zero, small and full size.
    const double ex[] = {0.0, 0.01, 1.0};
    const double ex_scale = ex[(i / 4) % 3];
    std::vector<double> theta = sys.theta_set.Sample(rng);
    for (double& t : theta) t *= ex_scale;
    std::vector<double> d = SampleBox(rng, sys.l, d_box);
    for (double& v : d) v *= ex_scale;
    std::vector<double> sz = s;
    sz.push_back(z);
    const std::vector<double> vg = Vg.Evaluate(sz);
    const double V = vg[0];
    if (std::abs(V - gains.eps_dz) < kKinkBand) {
      ++skipped;
      continue;
    }
    const double u = stage.k.EvaluateScalar(sz);
    const JetVec sj = LiftPoint(s, 0);
    const std::vector<double> F = Values(
        SubsystemDynamics(sys, dims, sj, ConstantLike(sj[0], u), theta, d));
    double lhs = vg[dims + 1] * gains.gamma * std::exp(-z) *
                 relu_plus(V - gains.eps_dz);
    for (int k = 0; k < dims; ++k) lhs += vg[1 + k] * F[k];
    const double ez = std::exp(z);
    const std::vector<double> ezv{ez};
    const double excess =
        relu_plus(Norm(theta) - gains.b - gains.lambda.EvaluateScalar(ezv));
    const double dn = Norm(d);
    const double rhs = -stage.rate_c * V +
                       stage.gain_a * (dn * dn + excess * excess) /
                           (1.0 + gains.kappa.EvaluateScalar(ezv));
    double m = (rhs - lhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
    if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
    ++report.n_samples;
    if (m < report.worst_margin) {
      report.worst_margin = m;
      report.witness = sz;
      report.witness.insert(report.witness.end(), theta.begin(), theta.end());
      report.witness.insert(report.witness.end(), d.begin(), d.end());
    }
  }
  std::ostringstream detail;
  detail << "rate " << stage.rate_c << ", gain " << stage.gain_a << ", "
         << skipped << " samples in the deadzone kink band skipped";
  report.detail = detail.str();
  report.Finalize();
  return report;
}

CheckReport ComparisonCertificate(const DadsStage& stage, int n_samples,
                                  double tolerance, std::uint64_t seed,
                                  double box, double z_box) {
  CheckReport report;
  report.name = "comparison level " + std::to_string(stage.level);
  report.tolerance = tolerance;
  report.worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zdist(-z_box, z_box);
  for (int i = 0; i < n_samples; ++i) {
    std::vector<double> sz = SampleBox(rng, stage.state_dims, SampleScale(i, box));
    const double n2 = Norm(sz) * Norm(sz);
    sz.push_back(zdist(rng));
    const double rhs =
        stage.sigma.EvaluateScalar(sz) * stage.V.EvaluateScalar(sz);
    double m = (rhs - n2) / (1.0 + n2 + std::abs(rhs));
    if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
    ++report.n_samples;
    if (m < report.worst_margin) {
      report.worst_margin = m;
      report.witness = sz;
    }
  }
  report.Finalize();
  return report;
}

std::string SynthesisReport(const SynthesisResult& result,
                            const std::vector<CheckReport>& certificates) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "synthesis: " << result.stage_trace.size() << " levels, user c "
     << result.user_c << ", user a " << result.user_a << ", M "
     << result.M_const << "\n";
  if (result.base) {
    os << "base: K " << result.base->K_const << ", M_raw " << result.base->M_raw
       << ", omega [";
    for (int i = 0; i < result.base->omega.size(); ++i) {
      os << (i ? ", " : "") << result.base->omega(i);
    }
    os << "]\n";
  }
  for (const DadsStage& st : result.stage_trace) {
    os << "level " << st.level << ": dims " << st.state_dims << ", rate "
       << st.rate_c << ", gain " << st.gain_a << ", max order "
       << st.k.max_order() << "\n";
    for (const MajorantCheck& mc : st.majorant_checks) {
      os << "  majorant " << mc.name << ": " << mc.n_samples
         << " samples, worst margin " << mc.worst_margin << "\n";
    }
  }
  for (const CheckReport& c : certificates) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.n_samples
       << " samples, worst margin " << c.worst_margin;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace dads
