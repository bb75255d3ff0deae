// Copyright 2026 The warpbo Authors.
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

#include "warpbo/gp.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

#include "warpbo/simd.hpp"

namespace warpbo {
namespace {

constexpr double kLn2Pi = 1.837877066409345483560659472811235279;
constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-4;

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Kernel transform of a scaled-distance block, written through the
// dispatched batch kernels.
void transform_block(const double* r, std::size_t n, const KernelParams& kp, double* out) {
  const auto& kt = simd::active();
  if (kp.family == KernelFamily::kSquaredExponential) {
    kt.se_transform(r, n, kp.amplitude, out);
  } else {
    kt.m52_transform(r, n, kp.amplitude, out);
  }
}

// Scaled squared distances of point i against points [i+1, n) using the
// dim-major warped coordinate arrays.
void dist_row_upper(const std::vector<double>& warped, std::size_t n, std::size_t dim,
                    const std::vector<double>& inv_sq_ls, std::size_t i, double* out) {
  const double* cols[64];
  double q[64];
  for (std::size_t d = 0; d < dim; ++d) {
    cols[d] = warped.data() + d * n + (i + 1);
    q[d] = warped[d * n + i];
  }
  simd::active().sq_dist_row(cols, dim, n - i - 1, q, inv_sq_ls.data(), out);
}

std::vector<double> inverse_sq_length_scales(const KernelParams& kp) {
  std::vector<double> inv(kp.dim());
  for (std::size_t d = 0; d < kp.dim(); ++d) {
    inv[d] = 1.0 / (kp.length_scales[d] * kp.length_scales[d]);
  }
  return inv;
}

// Column-major symmetric Gram (diagonal excludes noise and jitter) from
// warped coordinates. `task_mat` empty in single-task mode.
void build_gram(const std::vector<double>& warped, std::size_t n, std::size_t dim,
                const HyperState& h, const std::vector<std::size_t>& tasks,
                const std::vector<double>& task_mat, std::size_t num_tasks,
                std::vector<double>& scratch_row, std::vector<double>& gram) {
  const std::vector<double> inv_sq = inverse_sq_length_scales(h.kernel);
  gram.assign(n * n, 0.0);
  scratch_row.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = n - i - 1;
    if (m > 0) {
      dist_row_upper(warped, n, dim, inv_sq, i, scratch_row.data());
      transform_block(scratch_row.data(), m, h.kernel, scratch_row.data());
      if (!task_mat.empty()) {
        const std::size_t ti = tasks.empty() ? 0 : tasks[i];
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t tj = tasks.empty() ? 0 : tasks[i + 1 + j];
          scratch_row[j] *= task_mat[ti * num_tasks + tj];
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        gram[i * n + (i + 1 + j)] = scratch_row[j];
        gram[(i + 1 + j) * n + i] = scratch_row[j];
      }
    }
    double diag = h.kernel.amplitude;
    if (!task_mat.empty()) {
      const std::size_t ti = tasks.empty() ? 0 : tasks[i];
      diag *= task_mat[ti * num_tasks + ti];
    }
    gram[i * n + i] = diag;
  }
}

// Cholesky with jitter escalation; chol holds the factor on success.
bool factor_with_escalation(const std::vector<double>& gram_base, std::size_t n,
                            double amplitude, double noise_variance,
                            std::vector<double>& chol, double& jitter_used) {
  const auto& kt = simd::active();
  for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001; jitter *= 10.0) {
    chol = gram_base;
    const double bump = noise_variance + jitter * amplitude;
    for (std::size_t i = 0; i < n; ++i) chol[i * n + i] += bump;
    if (kt.cholesky(chol.data(), n)) {
      jitter_used = jitter;
      return true;
    }
  }
  return false;
}

std::vector<double> warp_all(const ObservationSet& obs, const HyperState& h) {
  const std::size_t n = obs.size();
  const std::size_t dim = obs.dim;
  std::vector<double> warped(dim * n);
  for (std::size_t i = 0; i < n; ++i) {
    const WarpingParams& w = h.warpings.at(obs.task_of(i));
    for (std::size_t d = 0; d < dim; ++d) {
      warped[d * n + i] = beta_cdf(obs.points[i][d], w.shapes[d]);
    }
  }
  return warped;
}

}  // namespace

void ObservationSet::add(std::vector<double> x, double y, std::size_t task) {
  if (dim == 0) dim = x.size();
  if (x.size() != dim) throw std::invalid_argument("ObservationSet: dimension mismatch");
  if (!std::isfinite(y)) throw std::invalid_argument("ObservationSet: value must be finite");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("ObservationSet: coordinates must lie in [0, 1]");
    }
  }
  if (task >= num_tasks) throw std::out_of_range("ObservationSet: task index out of range");
  points.push_back(std::move(x));
  values.push_back(y);
  if (num_tasks > 1) {
    tasks.push_back(task);
  }
}

void ObservationSet::validate() const {
  if (points.size() != values.size()) {
    throw std::invalid_argument("ObservationSet: points/values length mismatch");
  }
  if (dim > 64) throw std::invalid_argument("ObservationSet: at most 64 dimensions supported");
  if (num_tasks > 1 && tasks.size() != points.size()) {
    throw std::invalid_argument("ObservationSet: task labels required in multi-task mode");
  }
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("ObservationSet: ragged points");
    for (double v : p) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("ObservationSet: coordinates must lie in [0, 1]");
      }
    }
  }
  for (double y : values) {
    if (!std::isfinite(y)) throw std::invalid_argument("ObservationSet: non-finite value");
  }
  for (std::size_t t : tasks) {
    if (t >= num_tasks) throw std::out_of_range("ObservationSet: task index out of range");
  }
}

void HyperState::validate(std::size_t dim, std::size_t num_tasks) const {
  kernel.validate();
  if (kernel.dim() != dim) {
    throw std::invalid_argument("HyperState: length scale count != dimension");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("HyperState: noise variance must be >= 0");
  }
  if (!std::isfinite(constant_mean)) {
    throw std::invalid_argument("HyperState: mean must be finite");
  }
  if (warpings.size() != num_tasks) {
    throw std::invalid_argument("HyperState: one warping per task required");
  }
  for (const auto& w : warpings) {
    if (w.dim() != dim) throw std::invalid_argument("HyperState: warping dimension mismatch");
  }
  if (num_tasks > 1) {
    if (!task_cov.has_value()) {
      throw std::invalid_argument("HyperState: task covariance required for T > 1");
    }
    task_cov->validate();
    if (task_cov->num_tasks != num_tasks) {
      throw std::invalid_argument("HyperState: task covariance size mismatch");
    }
  }
}

Standardization standardize(const ObservationSet& obs) {
  Standardization s;
  const std::size_t n = obs.size();
  if (n == 0) return s;
  double mean = 0.0;
  for (double y : obs.values) mean += y;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double y : obs.values) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n);
  s.mean = mean;
  s.stddev = var > 1e-24 ? std::sqrt(var) : 1.0;
  return s;
}

PosteriorSample fit(const ObservationSet& obs, const HyperState& h) {
  obs.validate();
  h.validate(obs.dim, obs.num_tasks);
  const std::size_t n = obs.size();
  if (n == 0) throw std::invalid_argument("fit: at least one observation required");

  PosteriorSample ps;
  ps.hyper_ = h;
  ps.n_ = n;
  ps.dim_ = obs.dim;
  ps.tasks_ = obs.tasks;
  ps.std_ = standardize(obs);
  ps.warped_dims_ = warp_all(obs, h);
  if (obs.num_tasks > 1) ps.task_mat_ = task_matrix(*h.task_cov);

  std::vector<double> gram;
  std::vector<double> scratch;
  build_gram(ps.warped_dims_, n, obs.dim, h, ps.tasks_, ps.task_mat_, obs.num_tasks,
             scratch, gram);
  if (!factor_with_escalation(gram, n, h.kernel.amplitude, h.noise_variance, ps.chol_,
                              ps.jitter_)) {
    throw FactorizationError("fit: Gram matrix not positive definite after jitter escalation");
  }

  ps.alpha_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ps.alpha_[i] = (obs.values[i] - ps.std_.mean) / ps.std_.stddev - h.constant_mean;
  }
  const auto& kt = simd::active();
  kt.solve_lower(ps.chol_.data(), n, ps.alpha_.data());
  kt.solve_lower_t(ps.chol_.data(), n, ps.alpha_.data());
  return ps;
}

PosteriorSample::Prediction PosteriorSample::predict(std::span<const double> x,
                                                     std::size_t task) const {
  const WarpingParams& w = hyper_.warpings.at(task);
  if (x.size() != dim_) throw std::invalid_argument("predict: dimension mismatch");
  double q[64];
  for (std::size_t d = 0; d < dim_; ++d) q[d] = beta_cdf(x[d], w.shapes[d]);

  std::vector<double> k(n_);
  const std::vector<double> inv_sq = inverse_sq_length_scales(hyper_.kernel);
  const double* cols[64];
  for (std::size_t d = 0; d < dim_; ++d) cols[d] = warped_dims_.data() + d * n_;
  simd::active().sq_dist_row(cols, dim_, n_, q, inv_sq.data(), k.data());
  transform_block(k.data(), n_, hyper_.kernel, k.data());

  double prior_var = hyper_.kernel.amplitude;
  const std::size_t num_tasks = task_mat_.empty() ? 1 : hyper_.task_cov->num_tasks;
  if (!task_mat_.empty()) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t ti = tasks_.empty() ? 0 : tasks_[i];
      k[i] *= task_mat_[ti * num_tasks + task];
    }
    prior_var *= task_mat_[task * num_tasks + task];
  }

  const double mean_std = hyper_.constant_mean + dot(k.data(), alpha_.data(), n_);

  std::vector<double> v = k;
  simd::active().solve_lower(chol_.data(), n_, v.data());
  double var_std = prior_var + hyper_.noise_variance - dot(v.data(), v.data(), n_);
  if (var_std < 0.0) var_std = 0.0;

  Prediction out;
  out.mean = std_.mean + std_.stddev * mean_std;
  out.variance = std_.stddev * std_.stddev * var_std;
  return out;
}

// ---------------------------------------------------------------------------

struct MarginalLikelihoodEvaluator::Impl {
  ObservationSet obs;
  Standardization stdz;
  std::vector<double> y_std;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t num_tasks = 1;

  // Warp cache: one shape key per (task, dim); dirty columns recomputed.
  struct ShapeKey {
    double a = -1.0;
    double b = -1.0;
  };
  std::vector<ShapeKey> warp_keys;  // task-major: t * dim + d
  std::vector<double> warped;       // dim-major coordinates
  std::uint64_t warp_gen = 0;

  // Distance cache keyed by (warp generation, length scales).
  std::vector<double> ls_key;
  std::uint64_t dist_warp_gen = ~0ULL;
  std::vector<double> dist;  // column-major symmetric, zero diagonal

  // Factorization cache.
  bool chol_valid = false;
  std::uint64_t chol_warp_gen = 0;
  std::vector<double> chol_ls_key;
  double chol_amp = -1.0, chol_noise = -1.0;
  int chol_family = -1;
  std::vector<double> chol_angles, chol_scales;
  std::vector<double> chol;
  double half_logdet = 0.0;
  double jitter_used = 0.0;

  std::vector<double> gram_scratch;
  std::vector<double> row_scratch;
  std::vector<double> solve_scratch;

  void refresh_warps(const HyperState& h) {
    bool any = false;
    for (std::size_t t = 0; t < num_tasks; ++t) {
      for (std::size_t d = 0; d < dim; ++d) {
        const BetaShape& s = h.warpings[t].shapes[d];
        ShapeKey& key = warp_keys[t * dim + d];
        if (key.a == s.alpha() && key.b == s.beta()) continue;
        for (std::size_t i = 0; i < n; ++i) {
          if (obs.task_of(i) != t) continue;
          warped[d * n + i] = beta_cdf(obs.points[i][d], s);
        }
        key.a = s.alpha();
        key.b = s.beta();
        any = true;
      }
    }
    if (any) ++warp_gen;
  }

  void refresh_distances(const HyperState& h) {
    if (dist_warp_gen == warp_gen && ls_key == h.kernel.length_scales) return;
    const std::vector<double> inv_sq = inverse_sq_length_scales(h.kernel);
    dist.assign(n * n, 0.0);
    row_scratch.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      dist_row_upper(warped, n, dim, inv_sq, i, row_scratch.data());
      const std::size_t m = n - i - 1;
      for (std::size_t j = 0; j < m; ++j) {
        dist[i * n + (i + 1 + j)] = row_scratch[j];
        dist[(i + 1 + j) * n + i] = row_scratch[j];
      }
    }
    dist_warp_gen = warp_gen;
    ls_key = h.kernel.length_scales;
  }

  bool refresh_factorization(const HyperState& h) {
    static const std::vector<double> kNoTasks;
    const std::vector<double>& angles = h.task_cov.has_value() ? h.task_cov->angles : kNoTasks;
    const std::vector<double>& scales = h.task_cov.has_value() ? h.task_cov->scales : kNoTasks;
    if (chol_valid && chol_warp_gen == warp_gen && chol_ls_key == h.kernel.length_scales &&
        chol_amp == h.kernel.amplitude && chol_noise == h.noise_variance &&
        chol_family == static_cast<int>(h.kernel.family) && chol_angles == angles &&
        chol_scales == scales) {
      return true;
    }

    // Kernel transform of the cached distance matrix, whole buffer at once.
    gram_scratch.resize(n * n);
    transform_block(dist.data(), n * n, h.kernel, gram_scratch.data());
    if (num_tasks > 1) {
      const std::vector<double> kt = task_matrix(*h.task_cov);
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t tj = obs.task_of(j);
        double* col = gram_scratch.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) {
          col[i] *= kt[obs.task_of(i) * num_tasks + tj];
        }
      }
    }

    const bool ok = factor_with_escalation(gram_scratch, n, h.kernel.amplitude,
                                           h.noise_variance, chol, jitter_used);
    if (!ok) {
      chol_valid = false;
      return false;
    }
    half_logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) half_logdet += std::log(chol[i * n + i]);
    chol_valid = true;
    chol_warp_gen = warp_gen;
    chol_ls_key = h.kernel.length_scales;
    chol_amp = h.kernel.amplitude;
    chol_noise = h.noise_variance;
    chol_family = static_cast<int>(h.kernel.family);
    chol_angles = angles;
    chol_scales = scales;
    return true;
  }
};

MarginalLikelihoodEvaluator::MarginalLikelihoodEvaluator(ObservationSet obs)
    : impl_(new Impl) {
  obs.validate();
  impl_->obs = std::move(obs);
  impl_->n = impl_->obs.size();
  impl_->dim = impl_->obs.dim;
  impl_->num_tasks = impl_->obs.num_tasks;
  impl_->stdz = standardize(impl_->obs);
  impl_->y_std.resize(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) {
    impl_->y_std[i] = (impl_->obs.values[i] - impl_->stdz.mean) / impl_->stdz.stddev;
  }
  impl_->warp_keys.assign(impl_->num_tasks * impl_->dim, {});
  impl_->warped.assign(impl_->dim * impl_->n, 0.0);
}

MarginalLikelihoodEvaluator::~MarginalLikelihoodEvaluator() { delete impl_; }

const ObservationSet& MarginalLikelihoodEvaluator::observations() const { return impl_->obs; }

const Standardization& MarginalLikelihoodEvaluator::standardization() const {
  return impl_->stdz;
}

double MarginalLikelihoodEvaluator::log_marginal(const HyperState& h) {
  Impl& im = *impl_;
  h.validate(im.dim, im.num_tasks);
  if (im.n == 0) throw std::invalid_argument("log_marginal: empty observation set");
  im.refresh_warps(h);
  im.refresh_distances(h);
  if (!im.refresh_factorization(h)) {
    return -std::numeric_limits<double>::infinity();
  }
  im.solve_scratch.resize(im.n);
  for (std::size_t i = 0; i < im.n; ++i) im.solve_scratch[i] = im.y_std[i] - h.constant_mean;
  simd::active().solve_lower(im.chol.data(), im.n, im.solve_scratch.data());
  const double quad = dot(im.solve_scratch.data(), im.solve_scratch.data(), im.n);
  return -0.5 * quad - im.half_logdet - 0.5 * static_cast<double>(im.n) * kLn2Pi;
}

double log_marginal_likelihood(const ObservationSet& obs, const HyperState& h) {
  MarginalLikelihoodEvaluator eval(obs);
  const double value = eval.log_marginal(h);
  if (value == -std::numeric_limits<double>::infinity()) {
    throw FactorizationError(
        "log_marginal_likelihood: Gram matrix not positive definite after jitter escalation");
  }
  return value;
}

}  // namespace warpbo
