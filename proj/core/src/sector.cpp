#include "symcount/sector.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace symcount::sector {

SpectralData spectral_from_parts(const Vector& lambda, const Matrix& frame) {
  const int d = static_cast<int>(lambda.size());
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const double ax = std::abs(lambda(x)), ay = std::abs(lambda(y));
    if (ax != ay) return ax > ay;
    return lambda(x) > 0 && lambda(y) < 0;
  });
  SpectralData s;
  s.eigenvalues.resize(d);
  s.frame.resize(d, d);
  for (int i = 0; i < d; ++i) {
    s.eigenvalues(i) = lambda(order[i]);
    s.frame.col(i) = frame.col(order[i]);
  }
  if (s.frame.determinant() < 0) s.frame.col(d - 1) *= -1.0;
  s.gaps.resize(std::max(0, d - 1));
  for (int i = 0; i + 1 < d; ++i) s.gaps(i) = std::abs(s.eigenvalues(i)) - std::abs(s.eigenvalues(i + 1));
  return s;
}

SpectralData spectral_data(const Matrix& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("spectral_data: matrix must be square");
  const auto eig = linalg::jacobi_eigen(q);
  return spectral_from_parts(eig.values, eig.vectors);
}

SpectralData spectral_data(const QuadraticForm& q) { return spectral_data(q.matrix()); }

FrameConstraint FrameConstraint::cap(const Vector& axis, double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi)) throw std::invalid_argument("frame cap: angle must lie in (0, pi)");
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("frame cap: axis must be nonzero");
  FrameConstraint f;
  f.kind = Kind::cap;
  f.axis = axis / n;
  f.angle = angle;
  return f;
}

double FrameConstraint::measure() const {
  if (kind == Kind::full) return 1.0;
  const double d = static_cast<double>(axis.size());
  if (angle >= std::numbers::pi / 2) return 1.0;
  // fraction of S^{d-1} within angle of +-axis
  const double s = std::sin(angle);
  return boost::math::ibeta((d - 1.0) / 2.0, 0.5, s * s);
}

void SectorSpec::validate() const {
  const int nb = blocks.n() + 1;
  if (blocks.d() < 2) throw std::invalid_argument("SectorSpec: dimension must be at least 2");
  if (static_cast<int>(constraints.size()) != nb) throw std::invalid_argument("SectorSpec: need one constraint per block");
  for (int b = 0; b < nb; ++b) {
    const auto& c = constraints[b];
    if (c.signature && c.signature->p + c.signature->q != blocks.dims()[b])
      throw std::invalid_argument("SectorSpec: block signature does not sum to the block dimension");
    if (c.signature && (c.signature->p < 0 || c.signature->q < 0)) throw std::invalid_argument("SectorSpec: negative signature");
    if (!(c.max_log_spread >= 0.0)) throw std::invalid_argument("SectorSpec: spread bound must be nonnegative");
  }
  if (total_signature && total_signature->p + total_signature->q != blocks.d())
    throw std::invalid_argument("SectorSpec: total signature does not sum to d");
  if (frame.kind == FrameConstraint::Kind::cap && frame.axis.size() != blocks.d())
    throw std::invalid_argument("SectorSpec: cap axis has the wrong dimension");
}

std::string SectorSpec::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "d=" << blocks.d() << ";blocks=";
  for (std::size_t b = 0; b < blocks.dims().size(); ++b) os << (b ? "," : "") << blocks.dims()[b];
  os << ";constraints=";
  for (std::size_t b = 0; b < constraints.size(); ++b) {
    const auto& c = constraints[b];
    os << (b ? "," : "");
    if (c.signature) os << c.signature->p << ":" << c.signature->q;
    else os << "*";
    if (std::isfinite(c.max_log_spread)) os << "@" << c.max_log_spread;
  }
  if (total_signature) os << ";signature=" << total_signature->p << ":" << total_signature->q;
  os << ";frame=";
  if (frame.kind == FrameConstraint::Kind::full) {
    os << "full";
  } else {
    os << "cap:";
    for (Eigen::Index i = 0; i < frame.axis.size(); ++i) os << (i ? "," : "") << frame.axis(i);
    os << ":" << frame.angle;
  }
  os << ";norm=" << enumerate::to_string(norm);
  return os.str();
}

std::string SectorSpec::digest() const {
  const std::string text = describe();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

SectorSpec sign_pattern_spec(const std::vector<int>& signs, FrameConstraint frame, Norm norm) {
  SectorSpec spec;
  spec.blocks = BlockDecomposition(std::vector<int>(signs.size(), 1));
  for (int s : signs) {
    BlockConstraint c;
    c.signature = s > 0 ? BlockSignature{1, 0} : BlockSignature{0, 1};
    spec.constraints.push_back(c);
  }
  spec.frame = std::move(frame);
  spec.norm = norm;
  spec.validate();
  return spec;
}

std::vector<BlockConstraint> parse_block_constraints(const std::string& text, const BlockDecomposition& blocks) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) tokens.push_back(item);
  if (static_cast<int>(tokens.size()) != blocks.n() + 1)
    throw std::invalid_argument("block constraints: expected one token per block");
  std::vector<BlockConstraint> out;
  for (std::size_t b = 0; b < tokens.size(); ++b) {
    const std::string& t = tokens[b];
    BlockConstraint c;
    if (t == "+") c.signature = BlockSignature{blocks.dims()[b], 0};
    else if (t == "-") c.signature = BlockSignature{0, blocks.dims()[b]};
    else if (t == "*" || t.empty()) c.signature.reset();
    else {
      const auto colon = t.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("block constraints: bad token '" + t + "'");
      c.signature = BlockSignature{std::stoi(t.substr(0, colon)), std::stoi(t.substr(colon + 1))};
    }
    out.push_back(c);
  }
  return out;
}

FrameConstraint parse_frame(const std::string& text, int d) {
  if (text.empty() || text == "full") return FrameConstraint::full();
  if (text.rfind("cap:", 0) != 0) throw std::invalid_argument("frame must be 'full' or 'cap:x,y,z:angle'");
  const std::string rest = text.substr(4);
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("frame cap needs an angle");
  std::vector<double> comps;
  std::stringstream ss(rest.substr(0, colon));
  std::string item;
  while (std::getline(ss, item, ',')) comps.push_back(std::stod(item));
  if (static_cast<int>(comps.size()) != d) throw std::invalid_argument("frame cap axis has the wrong dimension");
  Vector axis(d);
  for (int i = 0; i < d; ++i) axis(i) = comps[i];
  return FrameConstraint::cap(axis, std::stod(rest.substr(colon + 1)));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::nonmember: return "nonmember";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

MembershipResult sector_membership(const SpectralData& s, const SectorSpec& spec, double tie_tol) {
  if (!(tie_tol >= 0)) throw std::invalid_argument("sector_membership: tie_tol must be nonnegative");
  const int d = spec.blocks.d();
  if (s.eigenvalues.size() != d) throw std::invalid_argument("sector_membership: dimension mismatch");
  const int nb = spec.blocks.n() + 1;
  MembershipResult result;

  std::vector<double> logabs(d);
  for (int i = 0; i < d; ++i) {
    const double v = std::abs(s.eigenvalues(i));
    if (!(v > 0)) {
      result.verdict = Verdict::degenerate;
      return result;
    }
    logabs[i] = std::log(v);
  }
  for (int cut : spec.blocks.cuts()) {
    if (logabs[cut - 1] - logabs[cut] <= tie_tol) {
      result.verdict = Verdict::degenerate;
      return result;
    }
  }
  std::vector<double> block_log(nb);
  for (int b = 0; b < nb; ++b) {
    const int start = spec.blocks.block_start(b), dim = spec.blocks.dims()[b];
    double acc = 0.0;
    for (int i = start; i < start + dim; ++i) acc += logabs[i];
    block_log[b] = acc / dim;
    if (b > 0 && block_log[b - 1] - block_log[b] <= tie_tol) {
      result.verdict = Verdict::degenerate;
      return result;
    }
  }

  if (spec.total_signature) {
    int plus = 0;
    for (int i = 0; i < d; ++i) plus += s.eigenvalues(i) > 0;
    if (plus != spec.total_signature->p) return result;
  }

  Witness w;
  for (int b = 0; b < nb; ++b) {
    const int start = spec.blocks.block_start(b), dim = spec.blocks.dims()[b];
    int plus = 0;
    for (int i = start; i < start + dim; ++i) plus += s.eigenvalues(i) > 0;
    const BlockSignature sig{plus, dim - plus};
    const auto& c = spec.constraints[b];
    if (c.signature && *c.signature != sig) return result;
    const double spread = logabs[start] - logabs[start + dim - 1];
    if (spread > c.max_log_spread) return result;
    w.a.push_back(std::exp(block_log[b]));
    w.block_signatures.push_back(sig);
    w.block_dets.push_back(sig.q % 2 == 0 ? 1 : -1);
  }

  if (spec.frame.kind == FrameConstraint::Kind::full) {
    w.frame = s.frame;
    w.column_signs.assign(d, 1);
  } else {
    const double cosang = std::cos(spec.frame.angle);
    bool found = false;
    for (unsigned mask = 0; mask < (1u << d) && !found; ++mask) {
      if (std::popcount(mask) % 2 != 0) continue;  // det-preserving flips only
      const double sign0 = (mask & 1u) ? -1.0 : 1.0;
      if (sign0 * s.frame.col(0).dot(spec.frame.axis) > cosang) {
        found = true;
        w.column_signs.resize(d);
        w.frame = s.frame;
        for (int j = 0; j < d; ++j) {
          w.column_signs[j] = (mask >> j) & 1u ? -1 : 1;
          w.frame.col(j) *= w.column_signs[j];
        }
      }
    }
    if (!found) return result;
  }
  result.verdict = Verdict::member;
  result.witness = std::move(w);
  return result;
}

MembershipResult sector_membership(const QuadraticForm& q, const SectorSpec& spec, double tie_tol) {
  return sector_membership(spectral_data(q), spec, tie_tol);
}

namespace {

struct Tally {
  std::vector<std::uint64_t> ball;
  std::vector<std::uint64_t> member;      // spec-major, g+1 per spec
  std::vector<std::uint64_t> degenerate;
};

}  // namespace

SectorCounts count_sectors(int d, const std::vector<double>& T_grid, const std::vector<SectorSpec>& specs, unsigned threads,
                           double tie_tol) {
  if (T_grid.empty()) throw std::invalid_argument("count_sectors: empty grid");
  if (!std::is_sorted(T_grid.begin(), T_grid.end()) || std::adjacent_find(T_grid.begin(), T_grid.end()) != T_grid.end())
    throw std::invalid_argument("count_sectors: grid must be strictly increasing");
  if (specs.empty()) throw std::invalid_argument("count_sectors: no specs");
  const Norm norm = specs.front().norm;
  for (const auto& s : specs) {
    s.validate();
    if (s.blocks.d() != d) throw std::invalid_argument("count_sectors: spec dimension differs from d");
    if (s.norm != norm) throw std::invalid_argument("count_sectors: specs must share a norm");
  }
  const std::size_t g = T_grid.size(), ns = specs.size();
  Tally init{std::vector<std::uint64_t>(g + 1, 0), std::vector<std::uint64_t>(ns * (g + 1), 0),
             std::vector<std::uint64_t>(ns * (g + 1), 0)};
  enumerate::EnumerateOptions opts{d, T_grid.back(), norm, threads};
  const auto tallies = enumerate::tally_chunks(opts, init, [&](Tally& t, const std::int64_t* tri, int) {
    const std::size_t j = enumerate::first_threshold_above(T_grid, enumerate::form_norm(d, tri, norm));
    if (j >= g) return;
    ++t.ball[j];
    linalg::Matrix m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = static_cast<double>(tri[enumerate::triangle_index(d, r, c)]);
    const SpectralData sd = spectral_data(m);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto v = sector_membership(sd, specs[s], tie_tol).verdict;
      if (v == Verdict::member) ++t.member[s * (g + 1) + j];
      else if (v == Verdict::degenerate) ++t.degenerate[s * (g + 1) + j];
    }
  });
  Tally sum = init;
  for (const auto& t : tallies) {
    for (std::size_t i = 0; i < sum.ball.size(); ++i) sum.ball[i] += t.ball[i];
    for (std::size_t i = 0; i < sum.member.size(); ++i) {
      sum.member[i] += t.member[i];
      sum.degenerate[i] += t.degenerate[i];
    }
  }
  SectorCounts out;
  out.T_grid = T_grid;
  out.ball.assign(g, 0);
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < g; ++j) out.ball[j] = (acc += sum.ball[j]);
  for (std::size_t s = 0; s < ns; ++s) {
    CountSeries cs;
    cs.T_grid = T_grid;
    cs.values.assign(g, 0.0);
    cs.degenerate.assign(g, 0.0);
    cs.stderr_values.assign(g, 0.0);
    std::uint64_t m = 0, dg = 0;
    for (std::size_t j = 0; j < g; ++j) {
      m += sum.member[s * (g + 1) + j];
      dg += sum.degenerate[s * (g + 1) + j];
      cs.values[j] = static_cast<double>(m);
      cs.degenerate[j] = static_cast<double>(dg);
    }
    cs.spec_digest = specs[s].digest();
    cs.manifest = nlohmann::json{{"kind", "sector-count"},
                                 {"spec", specs[s].describe()},
                                 {"spec_digest", cs.spec_digest},
                                 {"d", d},
                                 {"norm", enumerate::to_string(norm)},
                                 {"tie_tol", tie_tol},
                                 {"T_grid", T_grid}};
    out.series.push_back(std::move(cs));
  }
  return out;
}

CountSeries count_sector(const std::vector<double>& T_grid, const SectorSpec& spec, int d, unsigned threads) {
  auto counts = count_sectors(d, T_grid, {spec}, threads);
  return std::move(counts.series.front());
}

}  // namespace symcount::sector
