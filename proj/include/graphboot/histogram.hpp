#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphboot/graph.hpp"
#include "graphboot/graphon.hpp"
#include "graphboot/rng.hpp"

namespace graphboot {

/// Balanced stochastic block model fitted by least squares. Blocks are
/// 0-based internally; every block holds exactly n / r nodes.
class HistogramModel {
 public:
  HistogramModel() = default;
  HistogramModel(std::size_t bin_count, std::vector<std::uint32_t> assignment, std::vector<double> block_probs,
                 double loss);

  std::size_t node_count() const noexcept { return z_.size(); }
  std::size_t bin_count() const noexcept { return r_; }
  std::size_t block_size() const noexcept { return r_ == 0 ? 0 : z_.size() / r_; }
  const std::vector<std::uint32_t>& assignment() const noexcept { return z_; }
  const std::vector<double>& block_probs() const noexcept { return q_; }
  double block_prob(std::size_t a, std::size_t b) const noexcept { return q_[a * r_ + b]; }
  double loss() const noexcept { return loss_; }

  /// theta_ij = Q[z_i][z_j] (also defined for i == j).
  double theta(NodeId i, NodeId j) const noexcept { return block_prob(z_[i], z_[j]); }
  /// h_hist(u, v) = Q[z(ceil(n u))][z(ceil(n v))] for u, v in (0, 1].
  double evaluate(double u, double v) const;
  /// P_K2(h_hist): mean of Q over all r x r block pairs.
  double edge_density() const noexcept;

 private:
  std::size_t r_ = 0;
  std::vector<std::uint32_t> z_;
  std::vector<double> q_;
  double loss_ = 0.0;
};

struct SearchOptions {
  int restarts = 8;
  int max_sweeps = 50;
  int threads = 1;
};

/// r = sqrt(n rho / ln n), clamped to [2, n/2] and rounded to the nearest
/// divisor of n in that range (ties to the smaller). Throws
/// std::invalid_argument when n < 4, rho is outside (0, 1], or n has no such
/// divisor.
std::size_t select_bin_count(std::size_t n, double edge_density);

/// Q_ab = mean of A_ij over ordered pairs i != j with z_i = a, z_j = b.
std::vector<double> block_means(const Graph& graph, std::span<const std::uint32_t> assignment, std::size_t r);

/// Sum over ordered pairs i != j of (A_ij - Q[z_i][z_j])^2, from scratch.
double histogram_loss(const Graph& graph, std::span<const std::uint32_t> assignment, std::span<const double> q,
                      std::size_t r);

/// Balanced-swap local search starting from `assignment` (modified in
/// place). Returns the number of sweeps run. If `trace` is non-null, the
/// loss after each accepted swap is appended to it.
int refine_assignment(const Graph& graph, std::vector<std::uint32_t>& assignment, std::size_t r, int max_sweeps,
                      std::vector<double>* trace = nullptr);

/// Best model over `restarts` random balanced starts refined by local
/// search. Restart k uses stream derive_seed(seed, histogram_restart, k).
/// Throws std::invalid_argument if r does not divide n or restarts < 1.
HistogramModel fit_histogram(const Graph& graph, std::size_t r, const SearchOptions& search, Seed seed);

/// Block means for a given balanced assignment, no search.
HistogramModel fit_histogram_fixed(const Graph& graph, std::span<const std::uint32_t> assignment, std::size_t r);

/// A_{ceil(nu), ceil(nv)}; 0 on the diagonal.
int empirical_link(const Graph& graph, double u, double v);

struct EstimatorError {
  double mse = 0.0;
  double max_dev = 0.0;
};

/// Errors of theta_hat against theta_ij = rho w(eps_i, eps_j) over all n^2
/// ordered pairs, diagonal included.
EstimatorError estimator_error(const HistogramModel& model, const GraphonSpec& spec, double rho,
                               const LatentSample& latent);

}  // namespace graphboot
