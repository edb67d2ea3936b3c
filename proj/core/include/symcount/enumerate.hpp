#pragma once

#include "symcount/parallel.hpp"
#include "symcount/quadratic_form.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace symcount::enumerate {

struct EnumerateOptions {
  int d = 3;
  double T = 0.0;
  Norm norm = Norm::max_entry;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Largest integer strictly below T.
std::int64_t entry_bound(double T);
void validate(const EnumerateOptions& opts);
std::size_t chunk_count(const EnumerateOptions& opts);

namespace detail {

inline std::int64_t mod_pos(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// d = 3, max-entry norm. Free entries (q11,q12,q13,q22,q23) in that order; q33 is solved.
template <class Emit>
void kernel3_max(std::int64_t B, std::int64_t q11, std::int64_t q12, Emit&& emit) {
  std::int64_t tri[6];
  tri[0] = q11;
  tri[1] = q12;
  for (std::int64_t q13 = -B; q13 <= B; ++q13) {
    tri[2] = q13;
    for (std::int64_t q22 = -B; q22 <= B; ++q22) {
      tri[3] = q22;
      const std::int64_t M = q11 * q22 - q12 * q12;
      const std::int64_t c0 = -q13 * q13 * q22;
      const std::int64_t c1 = 2 * q12 * q13;
      // R(x) = c0 + c1 x - q11 x^2 with x = q23
      if (M == 0) {
        for (std::int64_t q23 = -B; q23 <= B; ++q23) {
          const std::int64_t R = c0 + c1 * q23 - q11 * q23 * q23;
          if (R == 1 || R == -1) {
            tri[4] = q23;
            for (std::int64_t q33 = -B; q33 <= B; ++q33) {
              tri[5] = q33;
              emit(static_cast<const std::int64_t*>(tri), static_cast<int>(R));
            }
          }
        }
        continue;
      }
      const std::int64_t m = M < 0 ? -M : M;
      const std::int64_t t_plus = 1 % m;
      const std::int64_t t_minus = (m - 1) % m;
      const std::int64_t x0 = -B;
      std::int64_t r = mod_pos(c0 + c1 * x0 - q11 * x0 * x0, m);
      std::int64_t dr = mod_pos(c1 - q11 * (2 * x0 + 1), m);
      const std::int64_t dd = mod_pos(-2 * q11, m);
      for (std::int64_t q23 = -B; q23 <= B; ++q23) {
        if (r == t_plus || r == t_minus) {
          const std::int64_t R = c0 + c1 * q23 - q11 * q23 * q23;
          std::int64_t sol[2];
          int det[2];
          int ns = 0;
          for (int eps : {-1, 1}) {
            const std::int64_t num = eps - R;
            if (num % M == 0) {
              const std::int64_t q33 = num / M;
              if (q33 >= -B && q33 <= B) {
                sol[ns] = q33;
                det[ns] = eps;
                ++ns;
              }
            }
          }
          if (ns == 2 && sol[1] < sol[0]) {
            std::swap(sol[0], sol[1]);
            std::swap(det[0], det[1]);
          }
          tri[4] = q23;
          for (int s = 0; s < ns; ++s) {
            tri[5] = sol[s];
            emit(static_cast<const std::int64_t*>(tri), det[s]);
          }
        }
        r += dr;
        if (r >= m) r -= m;
        dr += dd;
        if (dr >= m) dr -= m;
      }
    }
  }
}

Int128 leading_minor_det(int d, const std::int64_t* tri);

// Any d in {2,3,4} and either norm: depth-first over free entries, then solve q_dd exactly.
template <class Emit>
void kernel_generic(int d, std::int64_t B, double T, Norm norm, std::int64_t* tri, int pos, double frob_sq, Emit&& emit) {
  const int n = d * (d + 1) / 2;
  const double T2 = T * T;
  if (pos == n - 1) {
    tri[n - 1] = 0;
    const Int128 R = triangle_determinant(d, tri);
    const Int128 M = leading_minor_det(d, tri);
    auto try_emit = [&](std::int64_t qdd, int det) {
      if (qdd < -B || qdd > B) return;
      if (norm == Norm::frobenius && !(frob_sq + static_cast<double>(qdd) * static_cast<double>(qdd) < T2)) return;
      tri[n - 1] = qdd;
      emit(static_cast<const std::int64_t*>(tri), det);
    };
    if (M == 0) {
      if (R == 1 || R == -1) {
        for (std::int64_t qdd = -B; qdd <= B; ++qdd) try_emit(qdd, static_cast<int>(R));
      }
      tri[n - 1] = 0;
      return;
    }
    std::int64_t sol[2];
    int det[2];
    int ns = 0;
    for (int eps : {-1, 1}) {
      const Int128 num = static_cast<Int128>(eps) - R;
      if (num % M == 0) {
        const Int128 v = num / M;
        if (v >= -B && v <= B) {
          sol[ns] = static_cast<std::int64_t>(v);
          det[ns] = eps;
          ++ns;
        }
      }
    }
    if (ns == 2 && sol[1] < sol[0]) {
      std::swap(sol[0], sol[1]);
      std::swap(det[0], det[1]);
    }
    for (int s = 0; s < ns; ++s) try_emit(sol[s], det[s]);
    return;
  }
  // entry pos is diagonal iff it starts a row of the triangle
  bool diagonal = false;
  for (int i = 0, start = 0; i < d; start += d - i, ++i)
    if (start == pos) diagonal = true;
  const double weight = diagonal ? 1.0 : 2.0;
  for (std::int64_t v = -B; v <= B; ++v) {
    const double next = frob_sq + weight * static_cast<double>(v) * static_cast<double>(v);
    if (norm == Norm::frobenius && !(next < T2)) continue;
    tri[pos] = v;
    kernel_generic(d, B, T, norm, tri, pos + 1, next, emit);
  }
}

}  // namespace detail

// Visits every form of chunk `chunk` in lexicographic order of the free entries.
// emit(const std::int64_t* triangle, int det)
template <class Emit>
void for_each_in_chunk(const EnumerateOptions& opts, std::size_t chunk, Emit&& emit) {
  const std::int64_t B = entry_bound(opts.T);
  const std::int64_t side = 2 * B + 1;
  std::int64_t tri[QuadraticForm::max_entries] = {};
  if (opts.d == 2) {
    const std::int64_t q11 = static_cast<std::int64_t>(chunk) - B;
    const double w = static_cast<double>(q11) * static_cast<double>(q11);
    if (opts.norm == Norm::frobenius && !(w < opts.T * opts.T)) return;
    tri[0] = q11;
    detail::kernel_generic(2, B, opts.T, opts.norm, tri, 1, w, emit);
    return;
  }
  const std::int64_t q11 = static_cast<std::int64_t>(chunk) / side - B;
  const std::int64_t q12 = static_cast<std::int64_t>(chunk) % side - B;
  if (opts.d == 3 && opts.norm == Norm::max_entry) {
    detail::kernel3_max(B, q11, q12, emit);
    return;
  }
  const double w = static_cast<double>(q11 * q11) + 2.0 * static_cast<double>(q12 * q12);
  if (opts.norm == Norm::frobenius && !(w < opts.T * opts.T)) return;
  tri[0] = q11;
  tri[1] = q12;
  detail::kernel_generic(opts.d, B, opts.T, opts.norm, tri, 2, w, emit);
}

// Runs visit(tally, triangle, det) over every form, one tally per chunk (in chunk order).
template <class Tally, class Visit>
std::vector<Tally> tally_chunks(const EnumerateOptions& opts, const Tally& init, Visit&& visit) {
  validate(opts);
  const std::size_t n = chunk_count(opts);
  std::vector<Tally> out(n, init);
  parallel_for(n, opts.threads, [&](std::size_t c) {
    Tally& t = out[c];
    for_each_in_chunk(opts, c, [&](const std::int64_t* tri, int det) { visit(t, tri, det); });
  });
  return out;
}

using FormSink = std::function<void(const QuadraticForm&)>;

// Streams all forms in deterministic lexicographic order.
void enumerate_forms(const EnumerateOptions& opts, const FormSink& sink);
std::vector<QuadraticForm> enumerate_all(const EnumerateOptions& opts);

std::uint64_t count_ball(const EnumerateOptions& opts);
// One enumeration at max(T_grid); result[j] counts forms with norm < T_grid[j].
std::vector<std::uint64_t> count_ball_grid(int d, std::span<const double> T_grid, Norm norm, unsigned threads = 0);

// Index of the first threshold strictly above value, or T_grid.size() if none.
std::size_t first_threshold_above(std::span<const double> T_grid, double value);

struct OrbitOptions {
  double slack = 4.0;
  std::size_t state_budget = 2'000'000;
};

struct OrbitResult {
  std::vector<QuadraticForm> forms;  // norm < T, sorted by triangle
  bool partial = false;
  std::size_t states_explored = 0;
};

OrbitResult orbit_enumerate(const QuadraticForm& q0, double T, const OrbitOptions& opts = {});

}  // namespace symcount::enumerate
