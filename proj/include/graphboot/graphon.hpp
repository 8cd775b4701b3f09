#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphboot/graph.hpp"
#include "graphboot/motif.hpp"
#include "graphboot/rng.hpp"

namespace graphboot {

enum class GraphonKind { constant, additive, block };

/// Shape w of a link function h_n = rho_n * w, normalised so that w
/// integrates to one over the unit square.
class GraphonSpec {
 public:
  /// w == 1.
  static GraphonSpec constant();
  /// w(u, v) = u + v. Lipschitz with constant 1.
  static GraphonSpec additive();
  /// Piecewise constant on a k x k grid of equal cells; `weights` must be
  /// symmetric, nonnegative and not all zero, and is rescaled to integrate
  /// to one.
  static GraphonSpec block(const std::vector<std::vector<double>>& weights);

  GraphonKind kind() const noexcept { return kind_; }
  double weight(double u, double v) const noexcept;
  double sup() const noexcept { return sup_; }
  /// Exact double integral of w (1 up to rounding).
  double integral() const noexcept;
  /// Lipschitz constant on the whole square; empty for the block kind,
  /// which is only Lipschitz inside cells.
  std::optional<double> lipschitz_constant() const noexcept;

  /// Number of latent cells (1 for constant, k for block, 0 for additive).
  std::size_t cell_count() const noexcept { return k_; }
  double cell_weight(std::size_t a, std::size_t b) const noexcept { return cells_[a * k_ + b]; }
  std::size_t cell_of(double u) const noexcept;

  std::string kind_name() const;

 private:
  GraphonKind kind_ = GraphonKind::constant;
  std::size_t k_ = 1;
  std::vector<double> cells_{1.0};
  double sup_ = 1.0;
};

GraphonKind parse_graphon_kind(const std::string& name);

/// rho_n = c * n^{-alpha}; the constant kind has alpha = 0.
class SparsitySchedule {
 public:
  enum class Kind { constant, power };

  static SparsitySchedule constant(double c);
  static SparsitySchedule power(double c, double alpha);

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  double rho(std::size_t n) const;

 private:
  SparsitySchedule(Kind kind, double c, double alpha);
  Kind kind_;
  double c_;
  double alpha_;
};

struct LatentSample {
  std::vector<double> values;
};

/// h(u, v) = rho * w(u, v). Throws std::invalid_argument when
/// rho * sup(w) > 1, rho < 0, or u, v lie outside [0, 1].
double link_probability(const GraphonSpec& spec, double rho, double u, double v);

/// Checks that rho * sup(w) <= 1 and rho >= 0.
void validate_rho(const GraphonSpec& spec, double rho);

struct SampledGraph {
  Graph graph;
  LatentSample latent;
};

/// Draws eps_1..eps_n iid uniform, then each pair i < j (row-major order)
/// independently with probability h_n(eps_i, eps_j). Deterministic in seed.
SampledGraph sample_graph(const GraphonSpec& spec, const SparsitySchedule& schedule, std::size_t n,
                          Seed seed);
SampledGraph sample_graph(const GraphonSpec& spec, double rho, std::size_t n, Seed seed);

enum class ProbabilityMethod {
  closed_form,  // constant and block kinds: finite sums over cells
  monte_carlo,  // all kinds
  polynomial,   // additive kind: exact integration of the expanded integrand
};

struct ProbabilityOptions {
  ProbabilityMethod method = ProbabilityMethod::closed_form;
  std::size_t samples = 1'000'000;
  Seed seed = 0;
};

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// P_R(h): probability that nodes 1..p induce exactly the labelled motif,
/// E[prod_{edges} h * prod_{non-edges} (1 - h)] over iid uniform latents.
/// Throws std::domain_error when the method does not apply to the kind.
ProbabilityEstimate true_motif_probability(const GraphonSpec& spec, double rho, const Motif& motif,
                                           const ProbabilityOptions& options = {});

/// The exact method available for the kind (closed form or polynomial).
ProbabilityMethod exact_method_for(const GraphonSpec& spec) noexcept;

}  // namespace graphboot
