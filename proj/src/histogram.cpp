#include "graphboot/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "graphboot/parallel.hpp"

namespace graphboot {

namespace {

std::size_t node_of(std::size_t n, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("latent position must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * u));
  return std::clamp<std::size_t>(k, 1, n) - 1;
}

void check_balanced(std::span<const std::uint32_t> z, std::size_t r) {
  const std::size_t n = z.size();
  if (r == 0 || n % r != 0) throw std::invalid_argument("bin count must divide the node count");
  std::vector<std::size_t> size(r, 0);
  for (auto a : z) {
    if (a >= r) throw std::invalid_argument("assignment label out of range");
    ++size[a];
  }
  for (auto s : size) {
    if (s != n / r) throw std::invalid_argument("assignment is not balanced");
  }
}

// Local search state: unordered edge counts between blocks and, per node,
// the number of neighbours in each block.
class SwapSearch {
 public:
  SwapSearch(const Graph& g, std::vector<std::uint32_t>& z, std::size_t r)
      : g_(g), z_(z), r_(r), n_(z.size()), s_(static_cast<double>(n_ / r)), e_(r * r, 0), d_(n_ * r, 0) {
    for (NodeId i = 0; i < n_; ++i) {
      for (NodeId j = 0; j < n_; ++j) {
        if (g_.has_edge(i, j)) ++d_[i * r_ + z_[j]];
      }
    }
    for (NodeId i = 0; i < n_; ++i) {
      for (std::size_t c = 0; c < r_; ++c) e_[z_[i] * r_ + c] += d_[i * r_ + c];
    }
    for (std::size_t a = 0; a < r_; ++a) e_[a * r_ + a] /= 2;
  }

  double loss() const {
    double total = 0.0;
    for (std::size_t a = 0; a < r_; ++a) {
      total += within(e_[a * r_ + a]);
      for (std::size_t b = a + 1; b < r_; ++b) total += between(e_[a * r_ + b]);
    }
    return total;
  }

  double swap_delta(NodeId i, NodeId j) const {
    const std::size_t a = z_[i];
    const std::size_t b = z_[j];
    const std::int64_t aij = g_.has_edge(i, j) ? 1 : 0;
    const std::int64_t* di = &d_[i * r_];
    const std::int64_t* dj = &d_[j * r_];
    const std::int64_t eaa = e_[a * r_ + a];
    const std::int64_t ebb = e_[b * r_ + b];
    const std::int64_t eab = e_[a * r_ + b];
    double delta = within(eaa - di[a] + dj[a] - aij) - within(eaa);
    delta += within(ebb - dj[b] + di[b] - aij) - within(ebb);
    delta += between(eab - di[b] - dj[a] + 2 * aij + di[a] + dj[b]) - between(eab);
    for (std::size_t c = 0; c < r_; ++c) {
      if (c == a || c == b) continue;
      const std::int64_t shift = dj[c] - di[c];
      if (shift == 0) continue;
      const std::int64_t eac = e_[a * r_ + c];
      const std::int64_t ebc = e_[b * r_ + c];
      delta += between(eac + shift) - between(eac) + between(ebc - shift) - between(ebc);
    }
    return delta;
  }

  void apply_swap(NodeId i, NodeId j) {
    const std::size_t a = z_[i];
    const std::size_t b = z_[j];
    const std::int64_t aij = g_.has_edge(i, j) ? 1 : 0;
    const std::int64_t* di = &d_[i * r_];
    const std::int64_t* dj = &d_[j * r_];
    std::vector<std::int64_t> row_a(r_), row_b(r_);
    for (std::size_t c = 0; c < r_; ++c) {
      if (c == a || c == b) continue;
      row_a[c] = e_[a * r_ + c] + dj[c] - di[c];
      row_b[c] = e_[b * r_ + c] - dj[c] + di[c];
    }
    const std::int64_t eaa = e_[a * r_ + a] - di[a] + dj[a] - aij;
    const std::int64_t ebb = e_[b * r_ + b] - dj[b] + di[b] - aij;
    const std::int64_t eab = e_[a * r_ + b] - di[b] - dj[a] + 2 * aij + di[a] + dj[b];
    for (std::size_t c = 0; c < r_; ++c) {
      if (c == a || c == b) continue;
      e_[a * r_ + c] = e_[c * r_ + a] = row_a[c];
      e_[b * r_ + c] = e_[c * r_ + b] = row_b[c];
    }
    e_[a * r_ + a] = eaa;
    e_[b * r_ + b] = ebb;
    e_[a * r_ + b] = e_[b * r_ + a] = eab;
    for (NodeId k = 0; k < n_; ++k) {
      const std::int64_t aki = g_.has_edge(k, i) ? 1 : 0;
      const std::int64_t akj = g_.has_edge(k, j) ? 1 : 0;
      d_[k * r_ + a] += akj - aki;
      d_[k * r_ + b] += aki - akj;
    }
    z_[i] = static_cast<std::uint32_t>(b);
    z_[j] = static_cast<std::uint32_t>(a);
  }

 private:
  // Ordered-pair loss contributions with Q set to the block mean.
  double within(std::int64_t e) const {
    if (s_ < 2.0) return 0.0;
    const double ordered = 2.0 * static_cast<double>(e);
    return ordered - ordered * ordered / (s_ * (s_ - 1.0));
  }
  double between(std::int64_t e) const {
    const double x = static_cast<double>(e);
    return 2.0 * (x - x * x / (s_ * s_));
  }

  const Graph& g_;
  std::vector<std::uint32_t>& z_;
  std::size_t r_;
  std::size_t n_;
  double s_;
  std::vector<std::int64_t> e_;
  std::vector<std::int64_t> d_;
};

}  // namespace

HistogramModel::HistogramModel(std::size_t bin_count, std::vector<std::uint32_t> assignment,
                               std::vector<double> block_probs, double loss)
    : r_(bin_count), z_(std::move(assignment)), q_(std::move(block_probs)), loss_(loss) {
  check_balanced(z_, r_);
  if (q_.size() != r_ * r_) throw std::invalid_argument("block probability matrix has the wrong size");
  for (std::size_t a = 0; a < r_; ++a) {
    for (std::size_t b = 0; b < r_; ++b) {
      const double q = q_[a * r_ + b];
      if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("block probabilities must lie in [0, 1]");
      if (q != q_[b * r_ + a]) throw std::invalid_argument("block probability matrix must be symmetric");
    }
  }
}

double HistogramModel::evaluate(double u, double v) const {
  return theta(node_of(z_.size(), u), node_of(z_.size(), v));
}

double HistogramModel::edge_density() const noexcept {
  double total = 0.0;
  for (double q : q_) total += q;
  return r_ == 0 ? 0.0 : total / static_cast<double>(r_ * r_);
}

std::size_t select_bin_count(std::size_t n, double edge_density) {
  if (n < 4) throw std::invalid_argument("select_bin_count needs n >= 4");
  if (!(edge_density > 0.0 && edge_density <= 1.0)) {
    throw std::invalid_argument("edge density must lie in (0, 1]");
  }
  const double nd = static_cast<double>(n);
  const double raw = std::clamp(std::sqrt(nd * edge_density / std::log(nd)), 2.0, nd / 2.0);
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t d = 2; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    const double gap = std::abs(static_cast<double>(d) - raw);
    if (gap < best_gap) {
      best = d;
      best_gap = gap;
    }
  }
  if (best == 0) {
    throw std::invalid_argument("n = " + std::to_string(n) +
                                " has no divisor in [2, n/2]; truncate the graph to a divisible size");
  }
  return best;
}

std::vector<double> block_means(const Graph& graph, std::span<const std::uint32_t> z, std::size_t r) {
  if (z.size() != graph.node_count()) throw std::invalid_argument("assignment length does not match the graph");
  check_balanced(z, r);
  const std::size_t n = z.size();
  const double s = static_cast<double>(n / r);
  std::vector<double> edges(r * r, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && graph.has_edge(i, j)) edges[z[i] * r + z[j]] += 1.0;
    }
  }
  std::vector<double> q(r * r, 0.0);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      const double pairs = a == b ? s * (s - 1.0) : s * s;
      q[a * r + b] = pairs > 0.0 ? edges[a * r + b] / pairs : 0.0;
    }
  }
  return q;
}

double histogram_loss(const Graph& graph, std::span<const std::uint32_t> z, std::span<const double> q,
                      std::size_t r) {
  if (z.size() != graph.node_count()) throw std::invalid_argument("assignment length does not match the graph");
  if (q.size() != r * r) throw std::invalid_argument("block probability matrix has the wrong size");
  double total = 0.0;
  for (NodeId i = 0; i < z.size(); ++i) {
    for (NodeId j = 0; j < z.size(); ++j) {
      if (i == j) continue;
      const double diff = (graph.has_edge(i, j) ? 1.0 : 0.0) - q[z[i] * r + z[j]];
      total += diff * diff;
    }
  }
  return total;
}

int refine_assignment(const Graph& graph, std::vector<std::uint32_t>& z, std::size_t r, int max_sweeps,
                      std::vector<double>* trace) {
  if (z.size() != graph.node_count()) throw std::invalid_argument("assignment length does not match the graph");
  check_balanced(z, r);
  if (r < 2) return 0;
  SwapSearch search(graph, z, r);
  double current = search.loss();
  if (trace) trace->push_back(current);
  int sweeps = 0;
  const std::size_t n = z.size();
  while (sweeps < max_sweeps) {
    ++sweeps;
    bool improved = false;
    for (NodeId i = 0; i < n; ++i) {
      double best = -1e-9;
      NodeId best_j = i;
      for (NodeId j = 0; j < n; ++j) {
        if (z[i] == z[j]) continue;
        const double delta = search.swap_delta(i, j);
        if (delta < best) {
          best = delta;
          best_j = j;
        }
      }
      if (best_j != i) {
        search.apply_swap(i, best_j);
        current += best;
        improved = true;
        if (trace) trace->push_back(current);
      }
    }
    if (!improved) break;
  }
  return sweeps;
}

HistogramModel fit_histogram_fixed(const Graph& graph, std::span<const std::uint32_t> z, std::size_t r) {
  auto q = block_means(graph, z, r);
  const double loss = histogram_loss(graph, z, q, r);
  return HistogramModel(r, std::vector<std::uint32_t>(z.begin(), z.end()), std::move(q), loss);
}

HistogramModel fit_histogram(const Graph& graph, std::size_t r, const SearchOptions& search, Seed seed) {
  const std::size_t n = graph.node_count();
  if (r == 0 || n % r != 0) {
    throw std::invalid_argument("bin count " + std::to_string(r) + " does not divide n = " + std::to_string(n));
  }
  if (search.restarts < 1) throw std::invalid_argument("fit_histogram needs at least one restart");
  const auto restarts = static_cast<std::size_t>(search.restarts);
  std::vector<std::vector<std::uint32_t>> found(restarts);
  std::vector<double> losses(restarts);
  parallel_for(restarts, search.threads, [&](std::size_t k) {
    Rng rng(derive_seed(seed, StreamTag::histogram_restart, k));
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<std::uint32_t> z(n);
    const std::size_t s = n / r;
    for (std::size_t pos = 0; pos < n; ++pos) z[order[pos]] = static_cast<std::uint32_t>(pos / s);
    refine_assignment(graph, z, r, search.max_sweeps);
    const auto q = block_means(graph, z, r);
    losses[k] = histogram_loss(graph, z, q, r);
    found[k] = std::move(z);
  });
  const auto best = static_cast<std::size_t>(std::min_element(losses.begin(), losses.end()) - losses.begin());
  return fit_histogram_fixed(graph, found[best], r);
}

int empirical_link(const Graph& graph, double u, double v) {
  const std::size_t i = node_of(graph.node_count(), u);
  const std::size_t j = node_of(graph.node_count(), v);
  return i != j && graph.has_edge(i, j) ? 1 : 0;
}

EstimatorError estimator_error(const HistogramModel& model, const GraphonSpec& spec, double rho,
                               const LatentSample& latent) {
  const std::size_t n = model.node_count();
  if (latent.values.size() != n) throw std::invalid_argument("latent sample length does not match the model");
  validate_rho(spec, rho);
  EstimatorError out;
  double total = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const double diff = model.theta(i, j) - rho * spec.weight(latent.values[i], latent.values[j]);
      total += diff * diff;
      out.max_dev = std::max(out.max_dev, std::abs(diff));
    }
  }
  out.mse = total / (static_cast<double>(n) * static_cast<double>(n));
  return out;
}

}  // namespace graphboot
