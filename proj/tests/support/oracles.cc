// Copyright 2026 The moegeo Authors
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
#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace moegeo::oracle {

void ForEachSubset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> s;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(s.size()) == k) {
      fn(s);
      return;
    }
    for (int i = start; i < n; ++i) {
      s.push_back(i);
      rec(i + 1);
      s.pop_back();
    }
  };
  rec(0);
}

double CofactorDeterminant(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, cc++) = m(i, j);
      }
    }
    det += ((c % 2 == 0) ? 1.0 : -1.0) * m(0, c) * CofactorDeterminant(minor);
  }
  return det;
}

double LoopCoherence(const Eigen::MatrixXd& m) {
  double best = 0.0;
  for (int i = 0; i < m.cols(); ++i) {
    for (int j = i + 1; j < m.cols(); ++j) {
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (int r = 0; r < m.rows(); ++r) {
        dot += m(r, i) * m(r, j);
        ni += m(r, i) * m(r, i);
        nj += m(r, j) * m(r, j);
      }
      best = std::max(best, std::abs(dot) / std::sqrt(ni * nj));
    }
  }
  return best;
}

double QrResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  return (y - a * coef).squaredNorm();
}

std::vector<int> ExhaustiveSupport(const Eigen::MatrixXd& dict,
                                   const Eigen::VectorXd& y, int k) {
  std::vector<int> best;
  double best_res = std::numeric_limits<double>::infinity();
  ForEachSubset(static_cast<int>(dict.cols()), k, [&](const std::vector<int>& s) {
    Eigen::MatrixXd a(dict.rows(), k);
    for (int i = 0; i < k; ++i) a.col(i) = dict.col(s[i]);
    if (a.colPivHouseholderQr().rank() < k) return;
    const double r = QrResidual(a, y);
    if (r < best_res) {
      best_res = r;
      best = s;
    }
  });
  return best;
}

KlOracle ExhaustiveKl(const Eigen::VectorXd& p, int k, double tol) {
  KlOracle out{std::numeric_limits<double>::infinity(), {}};
  std::vector<std::pair<double, std::vector<int>>> all;
  ForEachSubset(static_cast<int>(p.size()), k, [&](const std::vector<int>& s) {
    // Renormalize and evaluate KL(q || p) term by term.
    double mass = 0.0;
    for (int j : s) mass += p(j);
    double kl = 0.0;
    for (int j : s) {
      const double q = p(j) / mass;
      kl += q * std::log(q / p(j));
    }
    all.emplace_back(kl, s);
    out.min_kl = std::min(out.min_kl, kl);
  });
  for (auto& [kl, s] : all) {
    if (kl <= out.min_kl + tol) out.minimizers.push_back(s);
  }
  return out;
}

Eigen::VectorXd SimplexProjection(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Eigen::VectorXd MinimizeCollision(Eigen::VectorXd p, int steps, double lr) {
  for (int s = 0; s < steps; ++s) p = SimplexProjection(p - lr * 2.0 * p);
  return p;
}

double LoopEntropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

Eigen::VectorXd LoopSoftmax(const Eigen::VectorXd& z) {
  double mx = z(0);
  for (int i = 1; i < z.size(); ++i) mx = std::max(mx, z(i));
  Eigen::VectorXd out(z.size());
  double sum = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    out(i) = std::exp(z(i) - mx);
    sum += out(i);
  }
  for (int i = 0; i < z.size(); ++i) out(i) /= sum;
  return out;
}

double LoopAuxLoss(const Eigen::MatrixXd& dense, const std::vector<std::vector<int>>& sel) {
  const int t = static_cast<int>(dense.rows());
  const int e = static_cast<int>(dense.cols());
  double total = 0.0;
  for (int i = 0; i < e; ++i) {
    double f = 0.0, p = 0.0;
    for (int r = 0; r < t; ++r) {
      for (int j : sel[r]) f += (j == i) ? 1.0 : 0.0;
      p += dense(r, i);
    }
    total += (f / t) * (p / t);
  }
  return e * total;
}

std::vector<int> ScanTopK(const Eigen::VectorXd& v, int k) {
  std::vector<bool> taken(v.size(), false);
  std::vector<int> out;
  for (int step = 0; step < k; ++step) {
    int best = -1;
    for (int i = 0; i < v.size(); ++i) {
      if (taken[i]) continue;
      if (best < 0 || v(i) > v(best)) best = i;
    }
    taken[best] = true;
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double GeluTanh(double x) {
  const double c = std::sqrt(2.0 / M_PI);
  return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    dot += a(i) * b(i);
    na += a(i) * a(i);
    nb += b(i) * b(i);
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace

LoopLoss LoopTotalLoss(const ParamSet& params, const MoEConfig& config,
                       const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const int b = static_cast<int>(x.rows());
  const int e = config.experts;
  LoopLoss out;
  Eigen::MatrixXd dense(b, e);
  double reg_sum = 0.0;
  for (int s = 0; s < b; ++s) {
    Eigen::VectorXd h(e);
    for (int i = 0; i < e; ++i) {
      h(i) = 0.0;
      for (int d = 0; d < config.input_dim; ++d) h(i) += params.router(i, d) * x(s, d);
    }
    const Eigen::VectorXd p = LoopSoftmax(h);
    dense.row(s) = p.transpose();
    const std::vector<int> sel = ScanTopK(h, config.k);
    out.selections.push_back(sel);
    double mass = 0.0;
    for (int i : sel) mass += p(i);

    std::vector<Eigen::VectorXd> outputs;
    Eigen::VectorXd logits = Eigen::VectorXd::Zero(config.classes);
    for (int i : sel) {
      Eigen::VectorXd hidden(config.expert_hidden);
      for (int u = 0; u < config.expert_hidden; ++u) {
        double a = 0.0;
        for (int d = 0; d < config.input_dim; ++d) a += params.w_in[i](u, d) * x(s, d);
        hidden(u) = GeluTanh(a);
      }
      Eigen::VectorXd o(config.classes);
      for (int c = 0; c < config.classes; ++c) {
        o(c) = 0.0;
        for (int u = 0; u < config.expert_hidden; ++u) o(c) += params.w_out[i](c, u) * hidden(u);
      }
      logits += (p(i) / mass) * o;
      outputs.push_back(o);
    }
    const Eigen::VectorXd probs = LoopSoftmax(logits);
    out.task -= std::log(probs(y[s])) / b;

    const int k = static_cast<int>(outputs.size());
    switch (config.reg) {
      case RegKind::kNone:
        break;
      case RegKind::kOrtho:
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            if (i != j) reg_sum += std::pow(Cosine(outputs[i], outputs[j]), 2);
          }
        }
        break;
      case RegKind::kDpp: {
        Eigen::MatrixXd l(k, k);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            l(i, j) = Cosine(outputs[i], outputs[j]) + (i == j ? config.dpp_epsilon : 0.0);
          }
        }
        reg_sum -= std::log(CofactorDeterminant(l));
        break;
      }
      case RegKind::kNcl: {
        std::vector<Eigen::VectorXd> ps;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(config.classes);
        for (const auto& o : outputs) {
          ps.push_back(LoopSoftmax(o));
          mean += ps.back() / k;
        }
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            if (i != j) reg_sum += (ps[i] - mean).dot(ps[j] - mean);
          }
        }
        break;
      }
    }
  }
  out.aux = config.aux_weight * LoopAuxLoss(dense, out.selections);
  out.reg = config.reg_weight * reg_sum / b;
  out.total = out.task + out.aux + out.reg;
  return out;
}

FdGradient FiniteDifference(const ParamSet& params, const MoEConfig& config,
                            const Eigen::MatrixXd& x, const std::vector<int>& y,
                            double h) {
  const auto base = LoopTotalLoss(params, config, x, y).selections;
  FdGradient fd{ParamSet::Zeros(config), ParamSet::Zeros(config), 0};
  ParamSet probe = params;
  std::vector<Eigen::MatrixXd*> targets, grads, flags;
  probe.ForEachTensor([&](const std::string&, Eigen::MatrixXd& t) { targets.push_back(&t); });
  fd.grad.ForEachTensor([&](const std::string&, Eigen::MatrixXd& t) { grads.push_back(&t); });
  fd.unstable.ForEachTensor([&](const std::string&, Eigen::MatrixXd& t) { flags.push_back(&t); });
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    Eigen::MatrixXd& t = *targets[ti];
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double saved = t(i);
      t(i) = saved + h;
      const LoopLoss plus = LoopTotalLoss(probe, config, x, y);
      t(i) = saved - h;
      const LoopLoss minus = LoopTotalLoss(probe, config, x, y);
      t(i) = saved;
      if (plus.selections != base || minus.selections != base) {
        (*flags[ti])(i) = 1.0;
        ++fd.skipped;
        continue;
      }
      (*grads[ti])(i) = (plus.total - minus.total) / (2.0 * h);
    }
  }
  return fd;
}

Eigen::MatrixXd GaussianMatrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.Normal();
  }
  return m;
}

Eigen::VectorXd GaussianVector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.Normal();
  return v;
}

Eigen::VectorXd RandomSimplex(Rng& rng, int n) {
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = -std::log(1.0 - rng.Uniform());
  return p / p.sum();
}

}  // namespace moegeo::oracle
