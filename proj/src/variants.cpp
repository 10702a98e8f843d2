// Copyright 2026 The upp-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "upp/variants.hpp"

#include <cmath>

namespace upp {

namespace {

double get_param(const VariantParams& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw UsageError("missing parameter: " + key);
  return it->second;
}

// Same draw as InitRule::McInit so direct baselines can share the start.
NodeMatrix mc_init_draw(std::uint64_t seed, int n, int d, double scale = 1.0) {
  Rng rng(seed ^ 0x696e6974ULL);
  return scale * rng.normal_matrix(n, d);
}

NodeMatrix random_s_perp(std::uint64_t seed, int n, int d) {
  Rng rng(seed ^ 0x71303030ULL);
  NodeMatrix q = rng.normal_matrix(n, d);
  q.rowwise() -= q.colwise().mean();
  return q;
}

BlockFactory hessian_metric_blocks(const ProblemInstance& prob, const Graph& g,
                                   double rho) {
  return [&prob, &g, rho](int i, const VectorXd& xi, long) {
    MatrixXd h = hess_local(prob.locals[i], xi);
    h.diagonal().array() += 2.0 * rho * g.degree(i);
    return MatrixXd(h.inverse());
  };
}

}  // namespace

Variant variant_from_string(const std::string& s) {
  if (s == "UPP_MC" || s == "UPP-MC") return Variant::UPP_MC;
  if (s == "UPP_MC_CA" || s == "UPP-MC-CA") return Variant::UPP_MC_CA;
  if (s == "UPP_SC" || s == "UPP-SC") return Variant::UPP_SC;
  if (s == "UPP_SC_OPT" || s == "UPP-SC-OPT") return Variant::UPP_SC_OPT;
  if (s == "UPP_SC_SO" || s == "UPP-SC-SO") return Variant::UPP_SC_SO;
  throw UsageError("unknown variant: " + s);
}

Specialization specialization_from_string(const std::string& s) {
  if (s == "EXTRA") return Specialization::EXTRA;
  if (s == "DIGing" || s == "DIGING") return Specialization::DIGing;
  if (s == "L_ADMM" || s == "L-ADMM") return Specialization::L_ADMM;
  if (s == "ProxGPDA" || s == "Prox-GPDA") return Specialization::ProxGPDA;
  if (s == "SUDA") return Specialization::SUDA;
  if (s == "ID_FBBS" || s == "ID-FBBS") return Specialization::ID_FBBS;
  if (s == "DQM") return Specialization::DQM;
  if (s == "SoPro" || s == "SOPRO") return Specialization::SoPro;
  throw UsageError("unknown specialization: " + s);
}

bool is_variant_name(const std::string& s) {
  try {
    variant_from_string(s);
    return true;
  } catch (const UsageError&) {
    return false;
  }
}

bool is_specialization_name(const std::string& s) {
  try {
    specialization_from_string(s);
    return true;
  } catch (const UsageError&) {
    return false;
  }
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::UPP_MC: return "UPP_MC";
    case Variant::UPP_MC_CA: return "UPP_MC_CA";
    case Variant::UPP_SC: return "UPP_SC";
    case Variant::UPP_SC_OPT: return "UPP_SC_OPT";
    case Variant::UPP_SC_SO: return "UPP_SC_SO";
  }
  return "?";
}

std::string to_string(Specialization s) {
  switch (s) {
    case Specialization::EXTRA: return "EXTRA";
    case Specialization::DIGing: return "DIGing";
    case Specialization::L_ADMM: return "L_ADMM";
    case Specialization::ProxGPDA: return "ProxGPDA";
    case Specialization::SUDA: return "SUDA";
    case Specialization::ID_FBBS: return "ID_FBBS";
    case Specialization::DQM: return "DQM";
    case Specialization::SoPro: return "SoPro";
  }
  return "?";
}

UPPConfig make_variant(Variant v, const UPPMCParams* mc, const UPPSCParams* sc,
                       const MixingMatrix& mix, const ProblemInstance& prob,
                       std::uint64_t init_seed) {
  SpectralData sd = spectral_data(mix);
  UPPConfig cfg;
  cfg.init_seed = init_seed;
  cfg.variant_name = to_string(v);
  switch (v) {
    case Variant::UPP_MC: {
      if (!mc) throw UsageError("UPP_MC needs tuned MC parameters");
      cfg.rho = mc->rho;
      cfg.theta = mc->theta;
      cfg.d_op = MixingOp::identity();  // D = H
      // Dtilde = c * D * G with G = zeta I - eta P_1(H); along the sandwich,
      // Dtilde is itself a polynomial of H.
      PolynomialSpec dt;
      if (mc->eta == 0.0) {
        dt.degree = 1;
        dt.coeffs = {mc->sandwich_coeff * mc->zeta};
      } else {
        dt.degree = 2;
        dt.coeffs = {mc->sandwich_coeff * mc->zeta, -mc->sandwich_coeff * mc->eta};
      }
      cfg.dtilde_op = MixingOp::polynomial(dt);
      cfg.g_op = GOperator::polynomial(mc->zeta, mc->eta, MixingOp::identity());
      cfg.require_polynomial_metric_bounds = true;
      cfg.init = InitRule::McInit;
      break;
    }
    case Variant::UPP_MC_CA: {
      if (!mc) throw UsageError("UPP_MC_CA needs tuned MC parameters");
      cfg.rho = mc->rho;
      cfg.theta = mc->theta;
      cfg.d_op = MixingOp::identity();
      cfg.dtilde_op = MixingOp::identity();
      int tau = chebyshev_depth(sd);
      ChebyshevSpec cs = make_chebyshev_spec(sd, tau);
      cfg.g_op = GOperator::polynomial(mc->zeta, mc->eta, MixingOp::chebyshev(cs));
      cfg.require_polynomial_metric_bounds = true;
      cfg.init = InitRule::McInit;
      cfg.share_dual_primal_mixing = true;  // lines 4 and 8 share the x-transmission
      break;
    }
    case Variant::UPP_SC: {
      if (!sc) throw UsageError("UPP_SC needs tuned SC parameters");
      cfg.rho = sc->rho;
      cfg.theta = 1.0;
      cfg.d_op = MixingOp::identity();  // L = H
      cfg.dtilde_op = cfg.d_op;
      double lo = 1.0 / sc->lambda_1_b;   // metric eigenvalues within
      double hi = 1.0 / sc->lambda_n_b;   // [1/lambda_1^B, 1/lambda_N^B]
      const int n = mix.n();
      cfg.g_op = GOperator::block_diagonal(
          [lo, hi, n](int i, const VectorXd& xi, long) {
            double m = lo + (hi - lo) * (n > 1 ? double(i) / (n - 1) : 0.0);
            return MatrixXd(m * MatrixXd::Identity(xi.size(), xi.size()));
          },
          true);
      cfg.init = InitRule::ScInit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
    case Variant::UPP_SC_OPT: {
      if (!sc) throw UsageError("UPP_SC_OPT needs tuned SC parameters");
      cfg.rho = sc->rho;
      cfg.theta = 1.0;
      int tau = sc->tau;
      ChebyshevSpec cs = make_chebyshev_spec(sd, tau);
      double lam1 = 0.0;  // normalize by lambda_1^{P_tau(H)}
      {
        MixingOp raw = MixingOp::chebyshev(cs);
        VectorXd w = mixing_eigenvalues(mix);
        for (int i = 0; i < w.size(); ++i)
          lam1 = std::max(lam1, mixing_op_eigenvalue(raw, w(i)));
      }
      cfg.d_op = MixingOp::chebyshev(cs, 1.0 / lam1);
      cfg.dtilde_op = cfg.d_op;
      cfg.g_op = GOperator::scalar(sc->mu);
      cfg.init = InitRule::ScInit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
    case Variant::UPP_SC_SO: {
      if (!sc) throw UsageError("UPP_SC_SO needs tuned SC parameters");
      cfg.rho = sc->rho;
      cfg.theta = 1.0;
      int tau = sc->tau;
      ChebyshevSpec cs = make_chebyshev_spec(sd, tau);
      double lam1 = 0.0;
      {
        MixingOp raw = MixingOp::chebyshev(cs);
        VectorXd w = mixing_eigenvalues(mix);
        for (int i = 0; i < w.size(); ++i)
          lam1 = std::max(lam1, mixing_op_eigenvalue(raw, w(i)));
      }
      cfg.d_op = MixingOp::chebyshev(cs, 1.0 / lam1);
      cfg.dtilde_op = cfg.d_op;
      cfg.g_op =
          GOperator::block_diagonal(hessian_metric_blocks(prob, *mix.graph, cfg.rho),
                                    false);
      cfg.init = InitRule::ScInit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
  }
  return cfg;
}

UPPConfig make_specialization(Specialization s, const VariantParams& params,
                              const MixingMatrix& mix, const ProblemInstance& prob,
                              std::uint64_t init_seed) {
  UPPConfig cfg;
  cfg.init_seed = init_seed;
  cfg.variant_name = to_string(s);
  SpectralData sd = spectral_data(mix);
  switch (s) {
    case Specialization::EXTRA: {
      // W = I - 2cP, Wtilde = (I + W)/2 = I - cP. Needs Wtilde >= W,
      // Null(Wtilde - W) = span(1), both hold for c in (0, 1/(2 lambda_1)).
      double alpha = get_param(params, "alpha");
      double c = get_param(params, "c");
      if (!(c > 0 && 2 * c * sd.lambda_1 < 1))
        throw InvariantError("condition-violation: EXTRA needs 2c*lambda_1 < 1");
      cfg.rho = 1.0 / alpha;
      cfg.theta = 1.0;
      PolynomialSpec d{1, {c}};  // I - Wtilde = cP
      cfg.d_op = MixingOp::polynomial(d);
      cfg.dtilde_op = MixingOp::polynomial(d);  // Wtilde - W = cP
      cfg.g_op = GOperator::scalar(alpha);
      cfg.init = InitRule::McInit;
      break;
    }
    case Specialization::DIGing: {
      // Constant symmetric doubly stochastic W = I - cP; D = I - W^2,
      // Dtilde = (I - W)^2, G = alpha I, q0 = (1/alpha)(W^2 - W) x0.
      double alpha = get_param(params, "alpha");
      double c = get_param(params, "c");
      if (!(c > 0 && c * sd.lambda_1 < 1))
        throw InvariantError("condition-violation: DIGing needs ||W - J|| < 1");
      cfg.rho = 1.0 / alpha;
      cfg.theta = 1.0;
      // I - (I - cP)^2 = 2cP - c^2 P^2
      cfg.d_op = MixingOp::polynomial(PolynomialSpec{2, {2 * c, -c * c}});
      // (I - W)^2 = c^2 P^2
      cfg.dtilde_op = MixingOp::polynomial(PolynomialSpec{2, {0.0, c * c}});
      cfg.g_op = GOperator::scalar(alpha);
      cfg.init = InitRule::Explicit;
      cfg.x0 = mc_init_draw(init_seed, mix.n(), prob.dim);
      // q0 = (1/alpha)(W^2 - W) x0 = (1/alpha)(c^2 P^2 - c P) x0, in S-perp
      cfg.q0 = (1.0 / alpha) *
               (c * c * (mix.p * (mix.p * cfg.x0)) - c * (mix.p * cfg.x0));
      break;
    }
    case Specialization::L_ADMM: {
      double alpha = get_param(params, "alpha");
      double beta = get_param(params, "beta");
      double gamma = get_param(params, "gamma");
      cfg.rho = alpha;
      cfg.theta = beta;
      cfg.d_op = MixingOp::identity();  // L = H
      cfg.dtilde_op =
          MixingOp::polynomial(PolynomialSpec{1, {beta / (alpha * gamma)}});
      cfg.g_op = GOperator::scalar(1.0 / gamma);
      cfg.init = InitRule::McInit;
      break;
    }
    case Specialization::ProxGPDA: {
      // A'A = H, B'B = I: G = beta (I + H), rho = beta, theta = 1.
      double beta = get_param(params, "beta");
      cfg.rho = beta;
      cfg.theta = 1.0;
      cfg.d_op = MixingOp::identity();
      cfg.dtilde_op = MixingOp::identity();
      cfg.g_op = GOperator::polynomial(beta, -beta, MixingOp::identity());
      cfg.init = InitRule::McInit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
    case Specialization::SUDA: {
      // A = I - P/2 (positive definite), B^2 = P/2, C = I, G = alpha A.
      // D = A^{-1} - C and Dtilde = A^{-1} B^2 coincide and are rational in
      // P, so they are bound densely (reference engine route).
      double alpha = get_param(params, "alpha");
      const int n = mix.n();
      MatrixXd a = MatrixXd::Identity(n, n) - 0.5 * mix.p;
      MatrixXd a_inv = a.inverse();
      MatrixXd d = a_inv - MatrixXd::Identity(n, n);
      // commutativity check between the chosen polynomials of P
      MatrixXd b2 = 0.5 * mix.p;
      if ((a * b2 - b2 * a).cwiseAbs().maxCoeff() > 1e-10)
        throw InvariantError("condition-violation: SUDA matrices must commute");
      cfg.rho = 1.0 / alpha;
      cfg.theta = 1.0;
      cfg.dense_d = true;
      cfg.d_dense = d;
      cfg.dtilde_dense = a_inv * b2;
      // alpha A = alpha I - (alpha/2) P
      cfg.g_op = GOperator::polynomial(alpha, 0.5 * alpha, MixingOp::identity());
      cfg.init = InitRule::McInit;
      break;
    }
    case Specialization::ID_FBBS: {
      // Wtilde = I - cP > 0, W = 2 Wtilde - I; rho = 1/alpha,
      // L = I - Wtilde = cP, G = alpha I, q0 free in S-perp.
      double alpha = get_param(params, "alpha");
      double c = get_param(params, "c");
      if (!(c > 0 && c * sd.lambda_1 < 1))
        throw InvariantError("condition-violation: ID-FBBS needs Wtilde > 0");
      cfg.rho = 1.0 / alpha;
      cfg.theta = 1.0;
      cfg.d_op = MixingOp::polynomial(PolynomialSpec{1, {c}});
      cfg.dtilde_op = cfg.d_op;
      cfg.g_op = GOperator::scalar(alpha);
      cfg.init = InitRule::Explicit;  // arbitrary q0 in S-perp
      cfg.x0 = mc_init_draw(init_seed, mix.n(), prob.dim);
      cfg.q0 = random_s_perp(init_seed, mix.n(), prob.dim);
      cfg.share_dual_primal_mixing = true;
      break;
    }
    case Specialization::DQM: {
      // rho = c over the unweighted Laplacian; per-node blocks
      // (2c|N_i| I + hess f_i)^{-1}.
      double c = get_param(params, "c");
      if (mix.normalized || mix.scheme != MixingScheme::UniformLaplacian)
        throw InvariantError(
            "condition-violation: DQM expects the unweighted Laplacian mixing");
      cfg.rho = c;
      cfg.theta = 1.0;
      cfg.d_op = MixingOp::identity();
      cfg.dtilde_op = MixingOp::identity();
      cfg.g_op = GOperator::block_diagonal(hessian_metric_blocks(prob, *mix.graph, c),
                                           false);
      cfg.init = InitRule::McInit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
    case Specialization::SoPro: {
      // L = W (the weighted Laplacian mixing), blocks (hess f_i + D_i)^{-1}
      // with the default D_i = d_reg I.
      double rho = get_param(params, "rho");
      double d_reg = get_param(params, "d_reg");
      cfg.rho = rho;
      cfg.theta = 1.0;
      cfg.d_op = MixingOp::identity();
      cfg.dtilde_op = MixingOp::identity();
      cfg.g_op = GOperator::block_diagonal(
          [&prob, d_reg](int i, const VectorXd& xi, long) {
            MatrixXd h = hess_local(prob.locals[i], xi);
            h.diagonal().array() += d_reg;
            return MatrixXd(h.inverse());
          },
          false);
      cfg.init = InitRule::Explicit;
      cfg.share_dual_primal_mixing = true;
      break;
    }
  }
  return cfg;
}

VariantParams default_specialization_params(Specialization s,
                                            const MixingMatrix& mix,
                                            const ProblemInstance& prob) {
  SpectralData sd = spectral_data(mix);
  double mbar = prob.smoothness;
  VariantParams p;
  switch (s) {
    case Specialization::EXTRA:
      p["c"] = 0.4 / sd.lambda_1;
      p["alpha"] = 0.5 / (mbar + 1.0);
      break;
    case Specialization::DIGing:
      p["c"] = 0.5 / sd.lambda_1;
      p["alpha"] = 0.1 / (mbar + 1.0);
      break;
    case Specialization::L_ADMM:
      p["alpha"] = 1.0;
      p["beta"] = 1.0;
      p["gamma"] = 2.0 * (mbar + 2 * sd.lambda_1 + 1.0);
      break;
    case Specialization::ProxGPDA:
      p["beta"] = 0.5 / (mbar + 2 * sd.lambda_1 + 1.0);
      break;
    case Specialization::SUDA:
      p["alpha"] = 0.5 / (mbar + 1.0);
      break;
    case Specialization::ID_FBBS:
      p["c"] = 0.4 / sd.lambda_1;
      p["alpha"] = 0.5 / (mbar + 1.0);
      break;
    case Specialization::DQM:
      p["c"] = 1.0;
      break;
    case Specialization::SoPro:
      p["rho"] = 1.0;
      p["d_reg"] = 2.0 * sd.lambda_1 + 1.0;
      break;
  }
  return p;
}

}  // namespace upp
