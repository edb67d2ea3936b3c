#include "symcount/wavefront.hpp"

#include "symcount/parallel.hpp"
#include "symcount/rng.hpp"
#include "symcount/rootdata.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace symcount::wavefront {

namespace {

// Basis of sl_d: E_ij (i != j) followed by H_k = E_kk - E_{k+1,k+1}.
std::vector<Matrix> sl_basis(int d) {
  std::vector<Matrix> basis;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) {
        Matrix e = Matrix::Zero(d, d);
        e(i, j) = 1.0;
        basis.push_back(e);
      }
  for (int k = 0; k + 1 < d; ++k) {
    Matrix h = Matrix::Zero(d, d);
    h(k, k) = 1.0;
    h(k + 1, k + 1) = -1.0;
    basis.push_back(h);
  }
  return basis;
}

// Coordinates of a traceless matrix in sl_basis order.
Vector sl_coordinates(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  Vector c(d * d - 1);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) c(idx++) = m(i, j);
  double acc = 0.0;
  for (int k = 0; k + 1 < d; ++k) {
    acc += m(k, k);
    c(idx++) = acc;
  }
  return c;
}

Matrix traceless(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  return m - (m.trace() / d) * Matrix::Identity(d, d);
}

}  // namespace

double killing_form(const Matrix& x, const Matrix& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows())
    throw std::invalid_argument("killing_form: shape mismatch");
  const int d = static_cast<int>(x.rows());
  const Matrix X = traceless(x);
  const Matrix thetaY = -traceless(y).transpose();
  const auto basis = sl_basis(d);
  double tr = 0.0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const Matrix inner = thetaY * basis[b] - basis[b] * thetaY;
    const Matrix outer = X * inner - inner * X;
    tr += sl_coordinates(outer)(static_cast<Eigen::Index>(b));
  }
  return -tr;
}

double b_inner(const Matrix& x, const Matrix& y) {
  const double d = static_cast<double>(x.rows());
  return 2.0 * d * (traceless(x).cwiseProduct(traceless(y))).sum();
}

double b_norm(const Matrix& x) { return std::sqrt(std::max(0.0, killing_form(x, x))); }

double group_distance(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    throw std::invalid_argument("group_distance: shape mismatch");
  const int d = static_cast<int>(x.rows());
  Eigen::PartialPivLU<Matrix> lu(y.transpose());
  if (!(std::abs(lu.determinant()) > 0)) throw std::invalid_argument("group_distance: y is singular");
  // x y^{-1} = (y^{-T} x^T)^T
  const Matrix r = lu.solve(x.transpose()).transpose();
  const Matrix delta = r - Matrix::Identity(d, d);
  if (delta.norm() == 0.0) return 0.0;
  if (!(linalg::spectral_norm(delta) < 1.0))
    throw DistanceDomainError("group_distance: points too far apart for the local metric");
  return b_norm(linalg::logm(r));
}

Matrix random_tangent(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = normal(rng);
  x = traceless(x);
  return x / std::sqrt(b_inner(x, x));
}

Vector log_a_from_margins(const Vector& margins) {
  const int d = static_cast<int>(margins.size()) + 1;
  Vector t(d);
  t(d - 1) = 0.0;
  for (int i = d - 2; i >= 0; --i) t(i) = t(i + 1) + margins(i);
  t.array() -= t.mean();
  return t;
}

Matrix synthesize_base_point(Signature sig, const Vector& log_a, const std::vector<int>& w, std::mt19937_64& rng,
                             double h_radius) {
  const int d = sig.d();
  const Matrix k = d == 3 ? linalg::quaternion_rotation(rng) : linalg::haar_rotation(d, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // so(p,q): skew blocks on the diagonal, symmetric coupling off the diagonal
  Matrix Y = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = normal(rng);
      const bool same = (i < sig.p) == (j < sig.p);
      Y(i, j) = v;
      Y(j, i) = same ? -v : v;
    }
  const double n = Y.norm();
  if (n > 0 && h_radius > 0) Y *= h_radius * unif(rng) / n;
  else Y.setZero();
  const Matrix h = linalg::expm(Y);
  return cartan::synthesize(k, log_a.array().exp().matrix(), w, h, sig);
}

namespace {

bool same_pattern(const std::vector<int>& a, const std::vector<int>& b) { return a == b; }

Vector block_log_means(const Vector& a, const rootdata::BlockDecomposition& blocks) {
  Vector out(blocks.n() + 1);
  for (int b = 0; b <= blocks.n(); ++b) {
    const int s = blocks.block_start(b), dim = blocks.dims()[b];
    double acc = 0.0;
    for (int i = s; i < s + dim; ++i) acc += std::log(a(i));
    out(b) = acc / dim;
  }
  return out;
}

double frame_distance(const Matrix& k1, const Matrix& k2, const rootdata::BlockDecomposition& blocks) {
  double worst = 0.0;
  for (int b = 0; b <= blocks.n(); ++b) {
    const int s = blocks.block_start(b), dim = blocks.dims()[b];
    worst = std::max(worst, linalg::max_principal_angle(k1.middleCols(s, dim), k2.middleCols(s, dim)));
  }
  return worst;
}

ProbeReport run_probe(const Matrix& g, Signature sig, const std::vector<int>& I, double epsilon, int n,
                      std::uint64_t seed, const ProbeOptions& opts) {
  if (!(epsilon > 0)) throw std::invalid_argument("probe: epsilon must be positive");
  if (n < 1) throw std::invalid_argument("probe: need at least one sample");
  const int d = sig.d();
  const CartanFactors f0 = cartan::kah_decompose(g, sig, opts.decompose);
  const auto blocks = rootdata::blocks_from_subset(d, I);
  const Vector log_a0 = f0.a.array().log().matrix();
  const Vector coarse0 = block_log_means(f0.a, blocks);

  ProbeReport rep;
  rep.base_point = BaseSummary{f0.a, f0.w, f0.margins};
  rep.epsilon = epsilon;
  rep.samples = n;
  rep.chamber_depth = log_a0.norm();
  rep.regularity_c = f0.margins.size() ? f0.margins.minCoeff() : 0.0;
  const double inf = std::numeric_limits<double>::infinity();

  auto rng = make_stream(seed, 0);
  for (int s = 0; s < n; ++s) {
    const Matrix X = random_tangent(d, rng);
    const Matrix gp = linalg::expm(epsilon * X) * g;
    CartanFactors f1;
    try {
      f1 = cartan::kah_decompose(gp, sig, opts.decompose);
    } catch (const std::exception&) {
      ++rep.domain_failures;
      rep.success = false;
      continue;
    }
    const Vector log_a1 = f1.a.array().log().matrix();
    rep.ratio_a = std::max(rep.ratio_a, (log_a1 - log_a0).norm() / epsilon);
    rep.ratio_coarse_aI = std::max(rep.ratio_coarse_aI, (block_log_means(f1.a, blocks) - coarse0).norm() / epsilon);
    rep.ratio_coarse_frame = std::max(rep.ratio_coarse_frame, frame_distance(f1.k, f0.k, blocks) / epsilon);
    if (!same_pattern(f1.w, f0.w)) {
      ++rep.crossings;
      continue;
    }
    const CartanFactors f1a = cartan::align_frame(f1, f0.k);
    try {
      rep.ratio_k = std::max(rep.ratio_k, group_distance(f1a.k, f0.k) / epsilon);
    } catch (const DistanceDomainError&) {
      ++rep.domain_failures;
      rep.ratio_k = inf;
      rep.success = false;
    }
    try {
      rep.ratio_h = std::max(rep.ratio_h, group_distance(f1a.h, f0.h) / epsilon);
    } catch (const DistanceDomainError&) {
      ++rep.domain_failures;
      rep.ratio_h = inf;
      rep.success = false;
    }
  }
  return rep;
}

}  // namespace

ProbeReport fine_probe(const Matrix& g, Signature sig, double epsilon, int n, std::uint64_t seed,
                       const ProbeOptions& opts) {
  return run_probe(g, sig, {}, epsilon, n, seed, opts);
}

ProbeReport coarse_probe(const Matrix& g, Signature sig, const std::vector<int>& I, double epsilon, int n,
                         std::uint64_t seed, double c, const ProbeOptions& opts) {
  const int d = sig.d();
  const CartanFactors f0 = cartan::kah_decompose(g, sig, opts.decompose);
  std::vector<int> J;
  for (int s = 0; s + 1 < d; ++s)
    if (std::find(I.begin(), I.end(), s) == I.end()) J.push_back(s);
  if (!J.empty() && cartan::regularity(f0, c, J).classification != cartan::Regularity::regular)
    throw std::invalid_argument("coarse_probe: base point is not regular off I");
  for (int s : J)
    if (f0.margins(s) < 10.0 * epsilon)
      throw std::invalid_argument("coarse_probe: block clustering ambiguous (inter-block gap below 10 epsilon)");
  return run_probe(g, sig, I, epsilon, n, seed, opts);
}

ProbeReport paired_probe(const Matrix& g, Signature sig, const std::vector<int>& I, double epsilon, int n,
                         std::uint64_t seed, const ProbeOptions& opts) {
  return run_probe(g, sig, I, epsilon, n, seed, opts);
}

namespace {

std::vector<int> default_pattern(Signature sig) {
  std::vector<int> w(sig.d(), -1);
  for (int i = 0; i < sig.p; ++i) w[i] = 1;
  return w;
}

void merge_max(std::optional<double>& slot, double v) { slot = slot ? std::max(*slot, v) : v; }

}  // namespace

std::vector<SweepCell> lipschitz_sweep(const SweepConfig& cfg) {
  const Signature sig = cfg.signature;
  const int d = sig.d();
  if (cfg.c_grid.empty() || cfg.depth_edges.size() < 2) throw std::invalid_argument("lipschitz_sweep: grids must be nonempty");
  for (double c : cfg.c_grid)
    if (!(c > 0)) throw std::invalid_argument("lipschitz_sweep: c values must be positive");
  if (!std::is_sorted(cfg.depth_edges.begin(), cfg.depth_edges.end()))
    throw std::invalid_argument("lipschitz_sweep: depth grid must be increasing");
  if (cfg.wall_root && (*cfg.wall_root < 0 || *cfg.wall_root >= d - 1))
    throw std::invalid_argument("lipschitz_sweep: wall root out of range");
  const std::vector<int> w = cfg.w.empty() ? default_pattern(sig) : cfg.w;
  std::vector<int> I = cfg.coarse_subset;
  if (I.empty() && cfg.wall_root) I = {*cfg.wall_root};
  const double deep = 0.5;  // floor for margins that are not held at a wall

  const std::size_t nbins = cfg.depth_edges.size() - 1;
  std::vector<SweepCell> cells(cfg.c_grid.size() * nbins);
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    SweepCell& cell = cells[idx];
    cell.c = cfg.c_grid[idx / nbins];
    cell.depth_lo = cfg.depth_edges[idx % nbins];
    cell.depth_hi = cfg.depth_edges[idx % nbins + 1];
    auto rng = make_stream(cfg.seed, 0x1000 + idx);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int b = 0; b < cfg.base_points; ++b) {
      const double target = cell.depth_lo + (cell.depth_hi - cell.depth_lo) * unif(rng);
      const int wall = cfg.wall_root ? *cfg.wall_root : static_cast<int>(unif(rng) * (d - 1)) % (d - 1);
      const double base_other = cfg.wall_root ? std::max(cell.c, deep) : cell.c;
      Vector u(d - 1), m0(d - 1);
      for (int i = 0; i < d - 1; ++i) {
        u(i) = i == wall ? 0.0 : 0.1 + unif(rng);
        m0(i) = i == wall ? cell.c : base_other;
      }
      auto depth_at = [&](double t) { return log_a_from_margins(m0 + t * u).norm(); };
      Vector log_a;
      if (d == 2) {
        // a single margin, fixed by the wall: depth cannot be tuned
        log_a = log_a_from_margins(m0);
        if (log_a.norm() < cell.depth_lo || log_a.norm() > cell.depth_hi) {
          ++cell.rejected;
          continue;
        }
      } else {
        if (depth_at(0.0) > target) {
          ++cell.rejected;
          continue;
        }
        double lo = 0.0, hi = 1.0;
        while (depth_at(hi) < target) hi *= 2.0;
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          (depth_at(mid) < target ? lo : hi) = mid;
        }
        log_a = log_a_from_margins(m0 + 0.5 * (lo + hi) * u);
      }
      const Matrix g = synthesize_base_point(sig, log_a, w, rng, cfg.h_radius);
      ProbeReport rep;
      try {
        rep = paired_probe(g, sig, I, cfg.epsilon, cfg.directions, splitmix64(cfg.seed ^ (idx << 20) ^ b), {});
      } catch (const std::exception&) {
        ++cell.rejected;
        continue;
      }
      if (!rep.success) {
        ++cell.rejected;
        cell.crossings += rep.crossings;
        continue;
      }
      ++cell.base_points;
      cell.depths.push_back(rep.chamber_depth);
      cell.crossings += rep.crossings;
      merge_max(cell.ratio_a, rep.ratio_a);
      merge_max(cell.ratio_coarse_aI, rep.ratio_coarse_aI);
      merge_max(cell.ratio_coarse_frame, rep.ratio_coarse_frame);
      if (rep.crossings < rep.samples) {
        merge_max(cell.ratio_k, rep.ratio_k);
        merge_max(cell.ratio_h, rep.ratio_h);
      }
    }
  });
  return cells;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  const auto old_precision = os.precision(12);
  os << "c,depth,ratio_k,ratio_a,ratio_h,ratio_coarse_aI,ratio_coarse_frame,crossings,base_points\n";
  auto field = [&](const std::optional<double>& v) {
    if (v) os << *v;
  };
  for (const auto& c : cells) {
    os << c.c << "," << c.depth_lo << ":" << c.depth_hi << ",";
    field(c.ratio_k);
    os << ",";
    field(c.ratio_a);
    os << ",";
    field(c.ratio_h);
    os << ",";
    field(c.ratio_coarse_aI);
    os << ",";
    field(c.ratio_coarse_frame);
    os << "," << c.crossings << "," << c.base_points << "\n";
  }
  os.precision(old_precision);
}

}  // namespace symcount::wavefront
