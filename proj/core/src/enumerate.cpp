#include "symcount/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace symcount::enumerate {

namespace {
constexpr std::int64_t kMaxBound = std::int64_t{1} << 20;
}

std::int64_t entry_bound(double T) {
  if (!(T > 0) || !std::isfinite(T)) throw std::invalid_argument("entry_bound: T must be positive and finite");
  const double c = std::ceil(T) - 1.0;
  if (c > static_cast<double>(kMaxBound)) throw std::overflow_error("entry_bound: T exceeds the overflow-safe range");
  return static_cast<std::int64_t>(c);
}

void validate(const EnumerateOptions& opts) {
  if (opts.d < 2 || opts.d > 4) throw std::invalid_argument("enumerate: d must be 2, 3 or 4");
  if (!(opts.T >= 1.0)) throw std::invalid_argument("enumerate: T must be at least 1");
  entry_bound(opts.T);
}

std::size_t chunk_count(const EnumerateOptions& opts) {
  const std::int64_t side = 2 * entry_bound(opts.T) + 1;
  return static_cast<std::size_t>(opts.d == 2 ? side : side * side);
}

namespace detail {

Int128 leading_minor_det(int d, const std::int64_t* tri) {
  std::int64_t sub[QuadraticForm::max_entries] = {};
  for (int i = 0; i + 1 < d; ++i)
    for (int j = i; j + 1 < d; ++j) sub[triangle_index(d - 1, i, j)] = tri[triangle_index(d, i, j)];
  return triangle_determinant(d - 1, sub);
}

}  // namespace detail

namespace {

QuadraticForm make_form(int d, const std::int64_t* tri, int det, Norm norm) {
  QuadraticForm::Triangle t{};
  std::copy(tri, tri + d * (d + 1) / 2, t.begin());
  QuadraticForm q(d, t, norm);  // re-derives det exactly and rejects anything but +-1
  if (q.det() != det) throw std::logic_error("enumerate: solver determinant disagrees with exact determinant");
  return q;
}

}  // namespace

void enumerate_forms(const EnumerateOptions& opts, const FormSink& sink) {
  validate(opts);
  const std::size_t n = chunk_count(opts);
  const unsigned threads = resolve_threads(opts.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < n; ++c)
      for_each_in_chunk(opts, c, [&](const std::int64_t* tri, int det) { sink(make_form(opts.d, tri, det, opts.norm)); });
    return;
  }
  const std::size_t wave = static_cast<std::size_t>(threads) * 8;
  std::vector<std::vector<QuadraticForm>> buffers(wave);
  for (std::size_t base = 0; base < n; base += wave) {
    const std::size_t count = std::min(wave, n - base);
    parallel_for(count, threads, [&](std::size_t i) {
      auto& buf = buffers[i];
      buf.clear();
      for_each_in_chunk(opts, base + i, [&](const std::int64_t* tri, int det) { buf.push_back(make_form(opts.d, tri, det, opts.norm)); });
    });
    for (std::size_t i = 0; i < count; ++i)
      for (const auto& q : buffers[i]) sink(q);
  }
}

std::vector<QuadraticForm> enumerate_all(const EnumerateOptions& opts) {
  std::vector<QuadraticForm> out;
  enumerate_forms(opts, [&](const QuadraticForm& q) { out.push_back(q); });
  return out;
}

std::uint64_t count_ball(const EnumerateOptions& opts) {
  const auto tallies = tally_chunks(opts, std::uint64_t{0}, [&](std::uint64_t& t, const std::int64_t* tri, int) {
    if (opts.norm == Norm::max_entry || form_norm(opts.d, tri, opts.norm) < opts.T) ++t;
  });
  std::uint64_t total = 0;
  for (auto t : tallies) total += t;
  return total;
}

std::size_t first_threshold_above(std::span<const double> T_grid, double value) {
  return static_cast<std::size_t>(std::upper_bound(T_grid.begin(), T_grid.end(), value) - T_grid.begin());
}

std::vector<std::uint64_t> count_ball_grid(int d, std::span<const double> T_grid, Norm norm, unsigned threads) {
  if (T_grid.empty()) throw std::invalid_argument("count_ball_grid: empty grid");
  if (!std::is_sorted(T_grid.begin(), T_grid.end())) throw std::invalid_argument("count_ball_grid: grid must be increasing");
  EnumerateOptions opts{d, T_grid.back(), norm, threads};
  const std::size_t g = T_grid.size();
  const auto tallies = tally_chunks(opts, std::vector<std::uint64_t>(g + 1, 0), [&](std::vector<std::uint64_t>& t, const std::int64_t* tri, int) {
    ++t[first_threshold_above(T_grid, form_norm(d, tri, norm))];
  });
  std::vector<std::uint64_t> hist(g + 1, 0);
  for (const auto& t : tallies)
    for (std::size_t j = 0; j <= g; ++j) hist[j] += t[j];
  std::vector<std::uint64_t> out(g, 0);
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < g; ++j) {
    acc += hist[j];
    out[j] = acc;
  }
  return out;
}

namespace {

// g^T q g for g = I + s E_ij (i != j): adds s * row/column i into row/column j.
QuadraticForm::Triangle act_elementary(int d, const QuadraticForm::Triangle& tri, int i, int j, std::int64_t s) {
  std::int64_t m[4][4];
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m[r][c] = tri[triangle_index(d, r, c)];
  // column j += s * column i; then row j += s * row i
  for (int r = 0; r < d; ++r) m[r][j] += s * m[r][i];
  for (int c = 0; c < d; ++c) m[j][c] += s * m[i][c];
  QuadraticForm::Triangle out{};
  for (int r = 0; r < d; ++r)
    for (int c = r; c < d; ++c) out[triangle_index(d, r, c)] = m[r][c];
  return out;
}

}  // namespace

OrbitResult orbit_enumerate(const QuadraticForm& q0, double T, const OrbitOptions& opts) {
  if (q0.det() != 1 && q0.det() != -1) throw std::invalid_argument("orbit_enumerate: det(q0) must be +-1");
  if (!(opts.slack >= 1.0)) throw std::invalid_argument("orbit_enumerate: slack must be at least 1");
  if (!(T > 0)) throw std::invalid_argument("orbit_enumerate: T must be positive");
  const int d = q0.dim();
  const Norm norm = q0.norm_kind();
  const double corridor = opts.slack * T;
  if (corridor > 1e9) throw std::overflow_error("orbit_enumerate: corridor too wide for exact arithmetic");

  OrbitResult result;
  std::unordered_set<QuadraticForm::Triangle, TriangleHash> seen;
  std::deque<QuadraticForm::Triangle> frontier;
  seen.insert(q0.triangle());
  frontier.push_back(q0.triangle());
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop_front();
    ++result.states_explored;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        for (std::int64_t s : {std::int64_t{1}, std::int64_t{-1}}) {
          auto next = act_elementary(d, cur, i, j, s);
          if (!(form_norm(d, next.data(), norm) < corridor)) continue;
          if (!seen.insert(next).second) continue;
          if (seen.size() > opts.state_budget) {
            result.partial = true;
            frontier.clear();
            break;
          }
          frontier.push_back(next);
        }
        if (result.partial) break;
      }
      if (result.partial) break;
    }
  }
  for (const auto& t : seen) {
    if (form_norm(d, t.data(), norm) < T) result.forms.emplace_back(d, t, norm);
  }
  std::sort(result.forms.begin(), result.forms.end(),
            [](const QuadraticForm& a, const QuadraticForm& b) { return a.triangle() < b.triangle(); });
  return result;
}

}  // namespace symcount::enumerate
