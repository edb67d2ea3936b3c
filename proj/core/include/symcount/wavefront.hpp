#pragma once

#include "symcount/cartan.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace symcount::wavefront {

using cartan::CartanFactors;
using cartan::Signature;
using linalg::Matrix;
using linalg::Vector;

class DistanceDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Killing form B(X,Y) = -Tr(ad X ad theta Y), evaluated on the explicit sl_d basis.
double killing_form(const Matrix& x, const Matrix& y);
// Closed form of the same bilinear form: 2d Tr(X Y^T).
double b_inner(const Matrix& x, const Matrix& y);
double b_norm(const Matrix& x);

// ||log(x y^{-1})||_B; throws DistanceDomainError when ||x y^{-1} - I||_2 >= 1.
double group_distance(const Matrix& x, const Matrix& y);

// Uniform direction on the B-unit sphere of sl_d.
Matrix random_tangent(int d, std::mt19937_64& rng);

struct BaseSummary {
  Vector a;
  std::vector<int> w;
  Vector margins;
};

struct ProbeReport {
  BaseSummary base_point;
  double epsilon = 0.0;
  int samples = 0;
  double ratio_k = 0.0;
  double ratio_a = 0.0;
  double ratio_h = 0.0;
  double ratio_coarse_aI = 0.0;
  double ratio_coarse_frame = 0.0;
  double regularity_c = 0.0;
  double chamber_depth = 0.0;
  int crossings = 0;        // perturbations that changed w
  int domain_failures = 0;  // factor distances outside the local metric domain
  bool success = true;
};

struct ProbeOptions {
  cartan::DecomposeOptions decompose;
};

ProbeReport fine_probe(const Matrix& g, Signature sig, double epsilon, int n, std::uint64_t seed,
                       const ProbeOptions& opts = {});

// subset I of 0-based simple roots glued into blocks; c is the regularity required off I.
ProbeReport coarse_probe(const Matrix& g, Signature sig, const std::vector<int>& I, double epsilon, int n,
                         std::uint64_t seed, double c, const ProbeOptions& opts = {});

// Runs fine and coarse probes on the same perturbations and fills both sets of ratios.
ProbeReport paired_probe(const Matrix& g, Signature sig, const std::vector<int>& I, double epsilon, int n,
                         std::uint64_t seed, const ProbeOptions& opts = {});

// g = k a w~ h with k Haar, h = exp(Y), Y in so(p,q) with ||Y||_F <= h_radius.
Matrix synthesize_base_point(Signature sig, const Vector& log_a, const std::vector<int>& w, std::mt19937_64& rng,
                             double h_radius = 0.5);

// log a with sum zero, margins as given.
Vector log_a_from_margins(const Vector& margins);

struct SweepConfig {
  Signature signature{2, 1};
  std::vector<double> c_grid;
  std::vector<double> depth_edges;  // consecutive pairs define bins
  double epsilon = 1e-3;
  int base_points = 16;             // per cell
  int directions = 16;              // per base point
  std::uint64_t seed = 0;
  std::optional<int> wall_root;     // 0-based root held at margin c; others lie deeper
  std::vector<int> coarse_subset;   // I for the coarse probe; defaults to {wall_root}
  std::vector<int> w;               // sign pattern; defaults to (+..+, -..-)
  double h_radius = 0.5;
  unsigned threads = 0;
};

struct SweepCell {
  double c = 0.0;
  double depth_lo = 0.0;
  double depth_hi = 0.0;
  int base_points = 0;  // successful base points
  int rejected = 0;
  std::optional<double> ratio_k, ratio_a, ratio_h, ratio_coarse_aI, ratio_coarse_frame;
  int crossings = 0;
  std::vector<double> depths;  // realized ||log a|| per accepted base point
};

std::vector<SweepCell> lipschitz_sweep(const SweepConfig& config);
void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);

}  // namespace symcount::wavefront
