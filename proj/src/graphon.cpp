#include "graphboot/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphboot {

GraphonSpec GraphonSpec::constant() { return GraphonSpec{}; }

GraphonSpec GraphonSpec::additive() {
  GraphonSpec s;
  s.kind_ = GraphonKind::additive;
  s.k_ = 0;
  s.cells_.clear();
  s.sup_ = 2.0;
  return s;
}

GraphonSpec GraphonSpec::block(const std::vector<std::vector<double>>& weights) {
  const std::size_t k = weights.size();
  if (k == 0) throw std::invalid_argument("block graphon needs at least one cell");
  GraphonSpec s;
  s.kind_ = GraphonKind::block;
  s.k_ = k;
  s.cells_.assign(k * k, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (weights[a].size() != k) throw std::invalid_argument("block graphon matrix must be square");
    for (std::size_t b = 0; b < k; ++b) {
      const double w = weights[a][b];
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("block weights must be finite and nonnegative");
      if (w != weights[b][a]) throw std::invalid_argument("block graphon matrix must be symmetric");
      s.cells_[a * k + b] = w;
      total += w;
    }
  }
  if (total <= 0.0) throw std::invalid_argument("block graphon matrix is all zero");
  const double mean = total / static_cast<double>(k * k);
  for (auto& w : s.cells_) w /= mean;
  s.sup_ = *std::max_element(s.cells_.begin(), s.cells_.end());
  return s;
}

std::size_t GraphonSpec::cell_of(double u) const noexcept {
  if (k_ <= 1) return 0;
  const auto c = static_cast<std::size_t>(u * static_cast<double>(k_));
  return std::min(c, k_ - 1);
}

double GraphonSpec::weight(double u, double v) const noexcept {
  switch (kind_) {
    case GraphonKind::constant:
      return 1.0;
    case GraphonKind::additive:
      return u + v;
    case GraphonKind::block:
      return cells_[cell_of(u) * k_ + cell_of(v)];
  }
  return 0.0;
}

double GraphonSpec::integral() const noexcept {
  switch (kind_) {
    case GraphonKind::constant:
      return 1.0;
    case GraphonKind::additive:
      return 0.5 + 0.5;
    case GraphonKind::block: {
      double total = 0.0;
      for (double w : cells_) total += w;
      return total / static_cast<double>(k_ * k_);
    }
  }
  return 0.0;
}

std::optional<double> GraphonSpec::lipschitz_constant() const noexcept {
  switch (kind_) {
    case GraphonKind::constant:
      return 0.0;
    case GraphonKind::additive:
      return 1.0;
    case GraphonKind::block:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string GraphonSpec::kind_name() const {
  switch (kind_) {
    case GraphonKind::constant:
      return "constant";
    case GraphonKind::additive:
      return "additive";
    case GraphonKind::block:
      return "block";
  }
  return "?";
}

GraphonKind parse_graphon_kind(const std::string& name) {
  if (name == "constant") return GraphonKind::constant;
  if (name == "additive") return GraphonKind::additive;
  if (name == "block") return GraphonKind::block;
  throw std::invalid_argument("unknown graphon kind '" + name + "'");
}

SparsitySchedule::SparsitySchedule(Kind kind, double c, double alpha) : kind_(kind), c_(c), alpha_(alpha) {
  if (!(c > 0.0)) throw std::invalid_argument("sparsity constant c must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("sparsity exponent alpha must lie in [0, 1)");
}

SparsitySchedule SparsitySchedule::constant(double c) { return {Kind::constant, c, 0.0}; }
SparsitySchedule SparsitySchedule::power(double c, double alpha) { return {Kind::power, c, alpha}; }

double SparsitySchedule::rho(std::size_t n) const {
  if (kind_ == Kind::constant) return c_;
  return c_ * std::pow(static_cast<double>(n), -alpha_);
}

void validate_rho(const GraphonSpec& spec, double rho) {
  if (!(rho >= 0.0) || rho * spec.sup() > 1.0 + 1e-12) {
    throw std::invalid_argument("invalid sparsity " + std::to_string(rho) + ": rho * sup(w) = " +
                                std::to_string(rho * spec.sup()) + " must lie in [0, 1]");
  }
}

double link_probability(const GraphonSpec& spec, double rho, double u, double v) {
  validate_rho(spec, rho);
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("latent positions must lie in [0, 1]");
  }
  return std::min(1.0, rho * spec.weight(u, v));
}

SampledGraph sample_graph(const GraphonSpec& spec, double rho, std::size_t n, Seed seed) {
  if (n < 2) throw std::invalid_argument("sample_graph needs n >= 2");
  validate_rho(spec, rho);
  Rng rng(derive_seed(seed, StreamTag::graph_sampling, 0));
  SampledGraph out{Graph(n), LatentSample{std::vector<double>(n)}};
  auto& eps = out.latent.values;
  for (auto& e : eps) e = rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < rho * spec.weight(eps[i], eps[j])) out.graph.add_edge(i, j);
    }
  }
  return out;
}

SampledGraph sample_graph(const GraphonSpec& spec, const SparsitySchedule& schedule, std::size_t n,
                          Seed seed) {
  return sample_graph(spec, schedule.rho(n), n, seed);
}

namespace {

double cell_closed_form(const GraphonSpec& spec, double rho, const Motif& motif) {
  const int p = motif.vertex_count();
  const std::size_t k = spec.cell_count();
  std::vector<std::size_t> cell(static_cast<std::size_t>(p), 0);
  const double weight = std::pow(1.0 / static_cast<double>(k), p);
  long double total = 0.0L;
  for (;;) {
    long double term = 1.0L;
    for (int a = 0; a < p && term != 0.0L; ++a) {
      for (int b = a + 1; b < p; ++b) {
        const double h = rho * spec.cell_weight(cell[static_cast<std::size_t>(a)], cell[static_cast<std::size_t>(b)]);
        term *= motif.has_edge(a, b) ? h : 1.0 - h;
      }
    }
    total += term;
    int pos = 0;
    while (pos < p && ++cell[static_cast<std::size_t>(pos)] == k) cell[static_cast<std::size_t>(pos++)] = 0;
    if (pos == p) break;
  }
  return static_cast<double>(total * weight);
}

// Expands prod_{pairs} (alpha + beta (u_a + u_b)) as a dense polynomial with
// per-variable degree < p and integrates each monomial over the unit cube.
double additive_polynomial(double rho, const Motif& motif) {
  const int p = motif.vertex_count();
  if (p > 7) throw std::domain_error("polynomial integration supports at most 7 vertices");
  std::vector<std::size_t> stride(static_cast<std::size_t>(p));
  std::size_t size = 1;
  for (int v = 0; v < p; ++v) {
    stride[static_cast<std::size_t>(v)] = size;
    size *= static_cast<std::size_t>(p);
  }
  std::vector<double> coef(size, 0.0);
  coef[0] = 1.0;
  auto exponent = [&](std::size_t idx, int v) {
    return (idx / stride[static_cast<std::size_t>(v)]) % static_cast<std::size_t>(p);
  };
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      const bool edge = motif.has_edge(a, b);
      const double alpha = edge ? 0.0 : 1.0;
      const double beta = edge ? rho : -rho;
      const std::size_t sa = stride[static_cast<std::size_t>(a)];
      const std::size_t sb = stride[static_cast<std::size_t>(b)];
      for (std::size_t idx = size; idx-- > 0;) {
        double v = alpha * coef[idx];
        if (exponent(idx, a) > 0) v += beta * coef[idx - sa];
        if (exponent(idx, b) > 0) v += beta * coef[idx - sb];
        coef[idx] = v;
      }
    }
  }
  long double total = 0.0L;
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (coef[idx] == 0.0) continue;
    long double m = coef[idx];
    for (int v = 0; v < p; ++v) m /= static_cast<long double>(exponent(idx, v) + 1);
    total += m;
  }
  return static_cast<double>(total);
}

}  // namespace

ProbabilityMethod exact_method_for(const GraphonSpec& spec) noexcept {
  return spec.kind() == GraphonKind::additive ? ProbabilityMethod::polynomial : ProbabilityMethod::closed_form;
}

ProbabilityEstimate true_motif_probability(const GraphonSpec& spec, double rho, const Motif& motif,
                                           const ProbabilityOptions& options) {
  validate_rho(spec, rho);
  switch (options.method) {
    case ProbabilityMethod::closed_form:
      if (spec.kind() == GraphonKind::additive) {
        throw std::domain_error("closed-form motif probability is unavailable for the additive graphon");
      }
      return {cell_closed_form(spec, rho, motif), 0.0};
    case ProbabilityMethod::polynomial:
      if (spec.kind() != GraphonKind::additive) {
        throw std::domain_error("polynomial integration applies to the additive graphon only");
      }
      return {additive_polynomial(rho, motif), 0.0};
    case ProbabilityMethod::monte_carlo:
      break;
  }
  if (options.samples < 2) throw std::invalid_argument("monte-carlo needs at least 2 samples");
  const int p = motif.vertex_count();
  Rng rng(derive_seed(options.seed, StreamTag::monte_carlo, 0));
  std::vector<double> u(static_cast<std::size_t>(p));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < options.samples; ++s) {
    for (auto& x : u) x = rng.uniform();
    double term = 1.0;
    for (int a = 0; a < p && term != 0.0; ++a) {
      for (int b = a + 1; b < p; ++b) {
        const double h = rho * spec.weight(u[static_cast<std::size_t>(a)], u[static_cast<std::size_t>(b)]);
        term *= motif.has_edge(a, b) ? h : 1.0 - h;
      }
    }
    const double delta = term - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (term - mean);
  }
  const double var = m2 / static_cast<double>(options.samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(options.samples))};
}

}  // namespace graphboot
