#include "symcount/volume.hpp"

#include "symcount/cubature.hpp"
#include "symcount/parallel.hpp"
#include "symcount/rng.hpp"
#include "symcount/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace symcount::volume {

using rootdata::BlockDecomposition;
using sector::SectorSpec;

DensityContext make_context(const rootdata::RootDatum& datum, std::vector<int> I) {
  std::sort(I.begin(), I.end());
  I.erase(std::unique(I.begin(), I.end()), I.end());
  DensityContext ctx;
  ctx.blocks = rootdata::blocks_from_subset(datum.d, I);
  ctx.datum = datum;
  ctx.I = std::move(I);
  ctx.base_form = linalg::diagonal_sign_matrix(datum.signs);
  return ctx;
}

std::vector<DensityContext> contexts_for_spec(const SectorSpec& spec) {
  spec.validate();
  const int d = spec.blocks.d();
  const auto interior = spec.blocks.interior_simple_roots();
  std::vector<DensityContext> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> signs(d);
    for (int i = 0; i < d; ++i) signs[i] = (mask >> i) & 1u ? -1 : 1;
    bool ok = true;
    for (int b = 0; b <= spec.blocks.n() && ok; ++b) {
      const auto& c = spec.constraints[b];
      if (!c.signature) continue;
      int plus = 0;
      for (int i = spec.blocks.block_start(b); i < spec.blocks.block_start(b) + spec.blocks.dims()[b]; ++i)
        plus += signs[i] > 0;
      ok = plus == c.signature->p;
    }
    if (ok && spec.total_signature) {
      const int plus = static_cast<int>(std::count(signs.begin(), signs.end(), 1));
      ok = plus == spec.total_signature->p;
    }
    if (!ok) continue;
    out.push_back(make_context(rootdata::build_root_datum(signs), interior));
  }
  // deterministic order: lexicographic with + first
  std::sort(out.begin(), out.end(), [](const DensityContext& a, const DensityContext& b) {
    return std::lexicographical_compare(b.datum.signs.begin(), b.datum.signs.end(), a.datum.signs.begin(), a.datum.signs.end());
  });
  return out;
}

bool in_chamber(const Vector& log_a, double tol) {
  for (Eigen::Index i = 0; i + 1 < log_a.size(); ++i)
    if (log_a(i) - log_a(i + 1) < -tol) return false;
  return true;
}

namespace {

double root_factor(const rootdata::RestrictedRoot& r, double alpha) {
  return r.l_plus ? std::sinh(alpha) : std::cosh(alpha);
}

double root_product(const DensityContext& ctx, const Vector& v, bool inside) {
  if (v.size() != ctx.datum.d) throw std::invalid_argument("density: dimension mismatch");
  double acc = 1.0;
  for (const auto& r : ctx.datum.roots) {
    const bool same_block = ctx.blocks.block_of(r.i) == ctx.blocks.block_of(r.j);
    if (same_block != inside) continue;
    acc *= root_factor(r, v(r.i) - v(r.j));
  }
  return acc;
}

}  // namespace

double xi_density(const DensityContext& ctx, const Vector& log_a) {
  if (!in_chamber(log_a)) throw std::invalid_argument("xi_density: log a lies outside the chamber");
  return root_product(ctx, log_a, false);
}

double delta_density(const DensityContext& ctx, const Vector& log_b) {
  for (int b = 0; b <= ctx.blocks.n(); ++b) {
    const int s = ctx.blocks.block_start(b);
    if (!in_chamber(log_b.segment(s, ctx.blocks.dims()[b]))) throw std::invalid_argument("delta_density: log b lies outside the chamber");
  }
  return root_product(ctx, log_b, true);
}

Method parse_method(const std::string& text) {
  if (text == "mc" || text == "monte-carlo" || text == "monte_carlo") return Method::monte_carlo;
  if (text == "quadrature" || text == "quad") return Method::quadrature;
  throw std::invalid_argument("unknown volume method '" + text + "'");
}

namespace {

// S_T(Omega, w) in coordinates: cut margins x (one per cut) then within-block margins y.
class SectorIntegrand {
 public:
  explicit SectorIntegrand(const SectorSpec& spec) : spec_(spec), blocks_(spec.blocks), d_(spec.blocks.d()) {
    if (blocks_.n() < 1) throw std::invalid_argument("volume: need at least two blocks");
    contexts_ = contexts_for_spec(spec);
    if (contexts_.empty()) throw std::invalid_argument("volume: no sign arrangement satisfies the spec");
    const auto w = rootdata::weight_coefficients(blocks_);
    for (std::size_t k = 0; k < w.u.size(); ++k) {
      m_.push_back(boost::rational_cast<double>(w.m[k]));
      rate_ = std::max(rate_, boost::rational_cast<double>(w.u[k] / w.m[k]));
    }
    for (int s : blocks_.interior_simple_roots()) {
      const double L = spec.constraints[blocks_.block_of(s)].max_log_spread;
      if (!std::isfinite(L)) throw std::invalid_argument("volume: blocks of dimension > 1 need a finite spread bound");
      inner_roots_.push_back(s);
      inner_bounds_.push_back(0.5 * L);
    }
    full_spec_ = spec;
    full_spec_.frame = sector::FrameConstraint::full();
  }

  int cuts() const { return blocks_.n(); }
  int inner() const { return static_cast<int>(inner_roots_.size()); }
  int dims() const { return cuts() + inner(); }
  double rate() const { return rate_; }
  const std::vector<double>& m() const { return m_; }
  const std::vector<double>& inner_bounds() const { return inner_bounds_; }
  const std::vector<DensityContext>& contexts() const { return contexts_; }
  std::size_t arrangements() const { return contexts_.size(); }

  // log|lambda_1| is bounded by this for every form in B_T
  double s_max(double T) const {
    return spec_.norm == enumerate::Norm::max_entry ? std::log(static_cast<double>(d_) * T) : std::log(T);
  }

  std::vector<double> upper_box(double T) const {
    std::vector<double> hi;
    for (double mk : m_) hi.push_back(std::max(0.0, s_max(T)) / mk);
    for (double b : inner_bounds_) hi.push_back(b);
    return hi;
  }

  // Fills ta (block-constant part) and tb (within-block part); returns false off the sector's chamber.
  bool coordinates(const double* z, Vector& ta, Vector& tb) const {
    const int nb = blocks_.n() + 1;
    double C[16];
    C[nb - 1] = 0.0;
    for (int b = nb - 2; b >= 0; --b) {
      if (z[b] < 0) return false;
      C[b] = C[b + 1] + z[b];
    }
    double mean = 0.0;
    for (int b = 0; b < nb; ++b) mean += blocks_.dims()[b] * C[b];
    mean /= d_;
    ta.resize(d_);
    tb.setZero(d_);
    for (int i = 0; i < d_; ++i) ta(i) = C[blocks_.block_of(i)] - mean;
    for (std::size_t r = 0; r < inner_roots_.size(); ++r)
      if (z[cuts() + r] < 0) return false;
    for (int b = 0; b < nb; ++b) {
      const int s = blocks_.block_start(b), dim = blocks_.dims()[b];
      if (dim == 1) continue;
      double acc = 0.0, sum = 0.0;
      tb(s + dim - 1) = 0.0;
      for (int j = s + dim - 2; j >= s; --j) {
        const auto it = std::find(inner_roots_.begin(), inner_roots_.end(), j);
        acc += z[cuts() + (it - inner_roots_.begin())];
        tb(j) = acc;
      }
      for (int j = s; j < s + dim; ++j) sum += tb(j);
      for (int j = s; j < s + dim; ++j) tb(j) -= sum / dim;
    }
    // slot order must agree with the |lambda| order across every cut
    for (int cut : blocks_.cuts())
      if (!(ta(cut - 1) + tb(cut - 1) > ta(cut) + tb(cut))) return false;
    return true;
  }

  // Sum over arrangements of xi * delta * indicator; per-arrangement values go to `parts` when given.
  double evaluate(const double* z, const Matrix& k, double T, bool check_frame, double singular_c,
                  std::vector<double>* parts = nullptr, std::vector<Matrix>* forms = nullptr) const {
    if (parts) parts->assign(contexts_.size(), 0.0);
    if (forms) forms->assign(contexts_.size(), Matrix());
    if (singular_c >= 0) {
      double mn = std::numeric_limits<double>::infinity();
      for (int c = 0; c < cuts(); ++c) mn = std::min(mn, z[c]);
      if (!(mn <= singular_c) || singular_c == 0.0) return 0.0;
    }
    Vector ta, tb;
    if (!coordinates(z, ta, tb)) return 0.0;
    const Vector t = ta + tb;
    Vector lambda(d_);
    double total = 0.0;
    for (std::size_t a = 0; a < contexts_.size(); ++a) {
      const auto& ctx = contexts_[a];
      for (int i = 0; i < d_; ++i) lambda(i) = ctx.datum.signs[i] * std::exp(2.0 * t(i));
      const Matrix F = k * lambda.asDiagonal() * k.transpose();
      if (!(enumerate::matrix_norm(F, spec_.norm) < T)) continue;
      const auto sd = sector::spectral_from_parts(lambda, k);
      if (sector::sector_membership(sd, check_frame ? spec_ : full_spec_, 0.0).verdict != sector::Verdict::member) continue;
      const double v = root_product(ctx, ta, false) * root_product(ctx, tb, true);
      total += v;
      if (parts) (*parts)[a] = v;
      if (forms) (*forms)[a] = F;
    }
    return total;
  }

  const SectorSpec& spec() const { return spec_; }

 private:
  SectorSpec spec_;
  SectorSpec full_spec_;
  BlockDecomposition blocks_;
  int d_;
  std::vector<DensityContext> contexts_;
  std::vector<double> m_;
  double rate_ = 0.0;
  std::vector<int> inner_roots_;
  std::vector<double> inner_bounds_;
};

// Frames: Haar on SO(d), or Haar conditioned on the top column lying in the cap.
class FrameSampler {
 public:
  explicit FrameSampler(const sector::FrameConstraint& f, int d) : frame_(f), d_(d) {}

  double weight() const { return conditioned() ? frame_.measure() : 1.0; }

  Matrix draw(std::mt19937_64& rng) const {
    Matrix k = d_ == 3 ? linalg::quaternion_rotation(rng) : linalg::haar_rotation(d_, rng);
    if (!conditioned()) return k;
    const Vector u = cap_direction(rng);
    const Vector v = k.col(0);
    const Vector target = u.dot(v) >= 0 ? u : Vector(-u);
    return linalg::plane_rotation(v, target) * k;
  }

 private:
  bool conditioned() const {
    return frame_.kind == sector::FrameConstraint::Kind::cap && frame_.angle < std::numbers::pi / 2;
  }

  Vector cap_direction(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double alpha = frame_.angle;
    double theta;
    if (d_ == 3) {
      theta = std::acos(1.0 - unif(rng) * (1.0 - std::cos(alpha)));
    } else {
      // density proportional to sin^{d-2}(theta) on [0, alpha]
      const double top = std::pow(std::sin(alpha), d_ - 2);
      do theta = alpha * unif(rng);
      while (unif(rng) * top > std::pow(std::sin(theta), d_ - 2));
    }
    const Vector& axis = frame_.axis;
    Vector g(d_);
    for (int i = 0; i < d_; ++i) g(i) = normal(rng);
    g -= g.dot(axis) * axis;
    g.normalize();
    Vector u = std::cos(theta) * axis + std::sin(theta) * g;
    if (unif(rng) < 0.5) u = -u;
    return u;
  }

  sector::FrameConstraint frame_;
  int d_;
};

// Importance sampler for the cut coordinates plus uniform within-block coordinates.
class PointSampler {
 public:
  PointSampler(const SectorIntegrand& f, double T) : f_(f), smax_(std::max(f.s_max(T), 1e-12)) {}

  // Draws z, returns the proposal density at z.
  double draw(std::mt19937_64& rng, double* z) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = f_.cuts();
    const double a = f_.rate();
    const double u = unif(rng);
    const double tail = std::exp(-a * smax_);
    const double S = smax_ + std::log(u + (1.0 - u) * tail) / a;
    const double pS = a * std::exp(a * (S - smax_)) / (1.0 - tail);
    double esum = 0.0;
    for (int k = 0; k < n; ++k) {
      z[k] = -std::log(1.0 - unif(rng));
      esum += z[k];
    }
    double px = pS;
    for (int k = 0; k < n; ++k) {
      z[k] = S * z[k] / esum / f_.m()[k];
      px *= f_.m()[k];
    }
    for (int k = 1; k < n; ++k) px *= k / S;
    for (int j = 0; j < f_.inner(); ++j) {
      const double b = f_.inner_bounds()[j];
      z[n + j] = b * unif(rng);
      px /= b;
    }
    return px;
  }

 private:
  const SectorIntegrand& f_;
  double smax_;
};

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
};

constexpr std::size_t kBatch = 4096;

CountSeries run_series(const SectorSpec& spec, const std::vector<double>& T_grid, const VolumeOptions& opts,
                       double singular_c, const char* kind) {
  if (T_grid.empty()) throw std::invalid_argument("volume: empty grid");
  if (!std::is_sorted(T_grid.begin(), T_grid.end())) throw std::invalid_argument("volume: T grid must be increasing");
  for (double T : T_grid)
    if (!(T > 0)) throw std::invalid_argument("volume: T must be positive");
  const SectorIntegrand f(spec);
  const int d = spec.blocks.d();
  const FrameSampler frames(spec.frame, d);
  const std::size_t g = T_grid.size();

  CountSeries out;
  out.T_grid = T_grid;
  out.values.assign(g, 0.0);
  out.stderr_values.assign(g, 0.0);
  out.spec_digest = spec.digest();
  const auto pred = rootdata::predict_exponent(spec.blocks);

  if (opts.method == Method::monte_carlo) {
    if (opts.samples < 2) throw std::invalid_argument("volume: need at least two samples");
    const std::size_t batches = (opts.samples + kBatch - 1) / kBatch;
    std::vector<Moments> mom(g * batches);
    parallel_for(mom.size(), opts.threads, [&](std::size_t idx) {
      const std::size_t j = idx / batches, b = idx % batches;
      const double T = T_grid[j];
      auto rng = make_stream(opts.seed, (static_cast<std::uint64_t>(j) << 32) | b);
      const PointSampler sampler(f, T);
      const std::size_t count = std::min(kBatch, opts.samples - b * kBatch);
      double z[16];
      Moments& m = mom[idx];
      for (std::size_t s = 0; s < count; ++s) {
        const double p = sampler.draw(rng, z);
        const Matrix k = frames.draw(rng);
        const double v = f.evaluate(z, k, T, true, singular_c) * frames.weight() / p;
        m.sum += v;
        m.sum_sq += v * v;
        ++m.n;
      }
    });
    for (std::size_t j = 0; j < g; ++j) {
      Moments tot;
      for (std::size_t b = 0; b < batches; ++b) {
        tot.sum += mom[j * batches + b].sum;
        tot.sum_sq += mom[j * batches + b].sum_sq;
        tot.n += mom[j * batches + b].n;
      }
      const double mean = tot.sum / tot.n;
      const double var = std::max(0.0, tot.sum_sq / tot.n - mean * mean);
      out.values[j] = mean;
      out.stderr_values[j] = std::sqrt(var / (tot.n - 1));
    }
  } else {
    if (f.dims() > 3) throw std::invalid_argument("volume: quadrature supports chamber dimension <= 3; use monte-carlo");
    const bool invariant = spec.norm == enumerate::Norm::frobenius;
    const std::size_t rot = invariant ? 1 : std::max<std::size_t>(opts.rotations, 2);
    std::vector<double> vals(g * rot, 0.0), errs(g * rot, 0.0);
    parallel_for(vals.size(), opts.threads, [&](std::size_t idx) {
      const std::size_t j = idx / rot, r = idx % rot;
      const double T = T_grid[j];
      Matrix k = Matrix::Identity(d, d);
      double weight = spec.frame.measure();
      if (!invariant) {
        auto rng = make_stream(opts.seed, (static_cast<std::uint64_t>(j) << 32) | r);
        k = frames.draw(rng);
        weight = frames.weight();
      }
      const auto hi = f.upper_box(T);
      auto integrand = [&](const double* z) { return f.evaluate(z, k, T, !invariant, singular_c); };
      std::vector<std::pair<std::vector<double>, std::vector<double>>> boxes;
      const std::vector<double> lo(hi.size(), 0.0);
      if (singular_c < 0) {
        boxes.emplace_back(lo, hi);
      } else if (singular_c > 0) {
        // {min_k x_k <= c} as a disjoint union of boxes
        for (int c = 0; c < f.cuts(); ++c) {
          std::vector<double> l = lo, h = hi;
          bool empty = false;
          for (int q = 0; q < c; ++q) {
            l[q] = singular_c;
            if (l[q] >= h[q]) empty = true;
          }
          h[c] = std::min(h[c], singular_c);
          if (!empty) boxes.emplace_back(l, h);
        }
      }
      double v = 0.0, e = 0.0;
      for (const auto& [l, h] : boxes) {
        const auto res = cubature::integrate(integrand, l, h, opts.rel_tol, 0.0, opts.max_cells);
        v += res.value;
        e += res.error;
      }
      vals[idx] = v * weight;
      errs[idx] = e * weight;
    });
    for (std::size_t j = 0; j < g; ++j) {
      double mean = 0.0, err = 0.0, var = 0.0;
      for (std::size_t r = 0; r < rot; ++r) {
        mean += vals[j * rot + r];
        err += errs[j * rot + r];
      }
      mean /= rot;
      err /= rot;
      for (std::size_t r = 0; r < rot; ++r) var += std::pow(vals[j * rot + r] - mean, 2);
      if (rot > 1) var /= (rot - 1) * rot;
      out.values[j] = mean;
      out.stderr_values[j] = std::sqrt(var) + err;
    }
  }

  out.manifest = nlohmann::json{{"kind", kind},
                                {"spec", spec.describe()},
                                {"spec_digest", out.spec_digest},
                                {"method", opts.method == Method::monte_carlo ? "monte-carlo" : "quadrature"},
                                {"seed", opts.seed},
                                {"samples", opts.samples},
                                {"rotations", opts.rotations},
                                {"rel_tol", opts.rel_tol},
                                {"max_cells", opts.max_cells},
                                {"arrangements", f.arrangements()},
                                {"T_grid", T_grid},
                                {"predicted_a", rootdata::to_string(pred.a)},
                                {"predicted_b", pred.b}};
  if (singular_c >= 0) out.manifest["c"] = singular_c;
  out.fit_b_fixed = pred.b;
  try {
    out.refit(pred.b);
  } catch (const std::invalid_argument&) {
    out.fit.reset();
  }
  return out;
}

}  // namespace

CountSeries volume_series(const SectorSpec& spec, const std::vector<double>& T_grid, const VolumeOptions& opts) {
  return run_series(spec, T_grid, opts, -1.0, "volume");
}

CountSeries singular_volume(const SectorSpec& spec, double c, const std::vector<double>& T_grid, const VolumeOptions& opts) {
  if (!(c >= 0)) throw std::invalid_argument("singular_volume: c must be nonnegative");
  if (c == 0.0) {
    CountSeries out;
    out.T_grid = T_grid;
    out.values.assign(T_grid.size(), 0.0);
    out.stderr_values.assign(T_grid.size(), 0.0);
    out.spec_digest = spec.digest();
    out.manifest = nlohmann::json{{"kind", "singular-volume"}, {"spec", spec.describe()}, {"c", 0.0}};
    return out;
  }
  return run_series(spec, T_grid, opts, c, "singular-volume");
}

WellRoundedness wellroundedness_ratio(const SectorSpec& spec, double epsilon, double T, std::uint64_t seed,
                                      std::size_t n, std::size_t probes, unsigned threads) {
  if (!(epsilon > 0)) throw std::invalid_argument("wellroundedness_ratio: epsilon must be positive");
  if (!(T > 0)) throw std::invalid_argument("wellroundedness_ratio: T must be positive");
  if (n < 2 || probes < 1) throw std::invalid_argument("wellroundedness_ratio: need samples and probes");
  const SectorIntegrand f(spec);
  const int d = spec.blocks.d();
  const FrameSampler frames(spec.frame, d);
  const std::size_t batches = (n + kBatch - 1) / kBatch;
  struct Acc {
    double num = 0, den = 0, num2 = 0, den2 = 0, cross = 0;
    std::size_t interior = 0, boundary = 0, n = 0;
  };
  std::vector<Acc> acc(batches);
  parallel_for(batches, threads, [&](std::size_t b) {
    auto rng = make_stream(seed, b);
    const PointSampler sampler(f, T);
    const std::size_t count = std::min(kBatch, n - b * kBatch);
    double z[16];
    std::vector<double> parts;
    std::vector<Matrix> forms;
    Acc& a = acc[b];
    for (std::size_t s = 0; s < count; ++s) {
      const double p = sampler.draw(rng, z);
      const Matrix k = frames.draw(rng);
      f.evaluate(z, k, T, true, -1.0, &parts, &forms);
      double num = 0.0, den = 0.0;
      for (std::size_t r = 0; r < parts.size(); ++r) {
        if (parts[r] <= 0) continue;
        const double wgt = parts[r] * frames.weight() / p;
        ++a.interior;
        bool leaves = false;
        for (std::size_t j = 0; j < probes && !leaves; ++j) {
          const Matrix g = linalg::expm(epsilon * wavefront::random_tangent(d, rng));
          const Matrix Fp = g * forms[r] * g.transpose();
          if (!(enumerate::matrix_norm(Fp, spec.norm) < T)) {
            leaves = true;
            break;
          }
          if (sector::sector_membership(sector::spectral_data(Fp), spec).verdict != sector::Verdict::member) leaves = true;
        }
        den += wgt;
        if (leaves) {
          num += wgt;
          ++a.boundary;
        }
      }
      a.num += num;
      a.den += den;
      a.num2 += num * num;
      a.den2 += den * den;
      a.cross += num * den;
      ++a.n;
    }
  });
  Acc tot;
  for (const auto& a : acc) {
    tot.num += a.num;
    tot.den += a.den;
    tot.num2 += a.num2;
    tot.den2 += a.den2;
    tot.cross += a.cross;
    tot.interior += a.interior;
    tot.boundary += a.boundary;
    tot.n += a.n;
  }
  WellRoundedness out;
  out.interior = tot.interior;
  out.boundary = tot.boundary;
  if (!(tot.den > 0)) {
    out.inconclusive = true;
    return out;
  }
  const double N = static_cast<double>(tot.n);
  const double R = tot.num / tot.den;
  const double mean_den = tot.den / N;
  // delta method for a ratio of means
  const double var = (tot.num2 - 2 * R * tot.cross + R * R * tot.den2) / N;
  out.ratio = R;
  out.stderr_value = std::sqrt(std::max(0.0, var) / (N - 1)) / mean_den;
  out.inconclusive = R > 0 ? out.stderr_value / R > 0.1 : true;
  return out;
}

}  // namespace symcount::volume
