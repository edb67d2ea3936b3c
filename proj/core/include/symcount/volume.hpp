#pragma once

#include "symcount/rootdata.hpp"
#include "symcount/sector.hpp"
#include "symcount/series.hpp"

#include <cstdint>
#include <vector>

namespace symcount::volume {

using linalg::Matrix;
using linalg::Vector;

struct DensityContext {
  rootdata::RootDatum datum;  // signs per slot: the sign arrangement w
  std::vector<int> I;         // 0-based simple roots glued into blocks
  rootdata::BlockDecomposition blocks;
  Matrix base_form;           // v0 = diag(w)
};

DensityContext make_context(const rootdata::RootDatum& datum, std::vector<int> I);

// One context per sign arrangement admitted by the spec (the finite W_I sum).
std::vector<DensityContext> contexts_for_spec(const sector::SectorSpec& spec);

bool in_chamber(const Vector& log_a, double tol = 1e-12);

// Product over positive roots outside <I> of sinh(alpha)^{l+} cosh(alpha)^{l-}.
double xi_density(const DensityContext& ctx, const Vector& log_a);
// Same product over the roots inside <I>.
double delta_density(const DensityContext& ctx, const Vector& log_b);

enum class Method { quadrature, monte_carlo };
Method parse_method(const std::string& text);

struct VolumeOptions {
  Method method = Method::monte_carlo;
  std::uint64_t seed = 0;
  std::size_t samples = 200'000;  // per T (Monte Carlo)
  std::size_t rotations = 32;     // frame samples (quadrature with a non-invariant norm)
  double rel_tol = 1e-6;
  std::size_t max_cells = 20'000;
  unsigned threads = 0;
};

// Volume of S_T for each T, up to the Haar normalization; stderr_values carry the error estimate.
CountSeries volume_series(const sector::SectorSpec& spec, const std::vector<double>& T_grid, const VolumeOptions& opts);

// Volume of the part of S_T within c of a wall outside I.
CountSeries singular_volume(const sector::SectorSpec& spec, double c, const std::vector<double>& T_grid,
                            const VolumeOptions& opts);

struct WellRoundedness {
  double ratio = 0.0;
  double stderr_value = 0.0;
  bool inconclusive = false;
  std::size_t interior = 0;  // sampled points of S_T
  std::size_t boundary = 0;  // of which leave S_T under some probe
};

// Fraction of S_T (by volume) whose epsilon-perturbations leave S_T.
WellRoundedness wellroundedness_ratio(const sector::SectorSpec& spec, double epsilon, double T, std::uint64_t seed,
                                      std::size_t n, std::size_t probes = 16, unsigned threads = 0);

}  // namespace symcount::volume
