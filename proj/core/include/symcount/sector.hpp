#pragma once

#include "symcount/enumerate.hpp"
#include "symcount/linalg.hpp"
#include "symcount/rootdata.hpp"
#include "symcount/series.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace symcount::sector {

using linalg::Matrix;
using linalg::Vector;
using enumerate::Norm;
using enumerate::QuadraticForm;
using rootdata::BlockDecomposition;

struct SpectralData {
  Vector eigenvalues;  // sorted by |lambda| descending
  Matrix frame;        // columns aligned with eigenvalues, det +1
  Vector gaps;         // |lambda_i| - |lambda_{i+1}|
};

SpectralData spectral_data(const Matrix& q);
SpectralData spectral_data(const QuadraticForm& q);
// Sorts given eigenpairs into canonical order (used when the spectrum is known by construction).
SpectralData spectral_from_parts(const Vector& lambda, const Matrix& frame);

struct BlockSignature {
  int p = 0;
  int q = 0;
  bool operator==(const BlockSignature&) const = default;
};

struct BlockConstraint {
  std::optional<BlockSignature> signature;  // unconstrained when empty
  double max_log_spread = std::numeric_limits<double>::infinity();
};

struct FrameConstraint {
  enum class Kind { full, cap };
  Kind kind = Kind::full;
  Vector axis;         // unit vector for caps
  double angle = 0.0;  // radians, in (0, pi)

  static FrameConstraint full() { return {}; }
  static FrameConstraint cap(const Vector& axis, double angle);
  // Normalized Haar measure of SO(d) frames whose top column lies in the cap (up to sign).
  double measure() const;
};

struct SectorSpec {
  BlockDecomposition blocks;
  std::vector<BlockConstraint> constraints;  // one per block
  std::optional<BlockSignature> total_signature;
  FrameConstraint frame;
  Norm norm = Norm::max_entry;

  void validate() const;
  std::string describe() const;
  std::string digest() const;
};

// All-one-dimensional blocks with one sign per slot; "+" / "-".
SectorSpec sign_pattern_spec(const std::vector<int>& signs, FrameConstraint frame = FrameConstraint::full(), Norm norm = Norm::max_entry);

// "+", "-", "p:q" or "*" per block, comma separated.
std::vector<BlockConstraint> parse_block_constraints(const std::string& text, const BlockDecomposition& blocks);
// "full" or "cap:x,y,z:angle"
FrameConstraint parse_frame(const std::string& text, int d);

enum class Verdict { member, nonmember, degenerate };
std::string to_string(Verdict v);

struct Witness {
  std::vector<double> a;          // block scalars a_0 > ... > a_n
  std::vector<int> block_dets;    // det q_i, +-1
  std::vector<BlockSignature> block_signatures;
  Matrix frame;                   // representative satisfying the frame constraint
  std::vector<int> column_signs;  // flip applied to the spectral frame
};

struct MembershipResult {
  Verdict verdict = Verdict::nonmember;
  std::optional<Witness> witness;
};

constexpr double default_tie_tol = 1e-9;

MembershipResult sector_membership(const SpectralData& s, const SectorSpec& spec, double tie_tol = default_tie_tol);
MembershipResult sector_membership(const QuadraticForm& q, const SectorSpec& spec, double tie_tol = default_tie_tol);

struct SectorCounts {
  std::vector<double> T_grid;
  std::vector<std::uint64_t> ball;
  std::vector<CountSeries> series;  // one per spec
};

// Single enumeration pass at max(T_grid) for all specs (which must share a norm).
SectorCounts count_sectors(int d, const std::vector<double>& T_grid, const std::vector<SectorSpec>& specs,
                           unsigned threads = 0, double tie_tol = default_tie_tol);
CountSeries count_sector(const std::vector<double>& T_grid, const SectorSpec& spec, int d, unsigned threads = 0);

}  // namespace symcount::sector
