#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "loscap/channel.hpp"

namespace loscap::sweep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number literal with power syntax: "2^-3", "1e-4", "0.5".
double parse_number(const std::string& s);

/// Grid literal: "start:stop:xfactor" (geometric), "start:stop:+step"
/// (arithmetic), or a single value. Bounds are inclusive up to a relative
/// 1e-9 snap.
struct GridSpec {
  std::vector<double> values;
  std::string raw;
};
GridSpec parse_grid(const std::string& s);

enum class Kind { MimoBound, EqDecay, Lln, Scaling, Protocol, Lemma7, Lemma8 };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct SweepSpec {
  Kind kind = Kind::Scaling;
  std::uint64_t seed = 1;
  int jobs = 0;  // 0: use LOSCAP_JOBS env var, else 1
  std::string out;  // empty: stdout

  // shared knobs
  std::uint64_t trials = 100000;
  double d = 1.0;
  double l = 2.0;
  double alpha = 2.0;
  int h = 3;
  int q = 3;
  Regime regime = Regime::Dense;

  GridSpec lambda_grid;  // per-kind default applied when empty
  GridSpec beta_grid;    // scaling: lambda = n^-beta (overrides lambda_grid)
  GridSpec n_grid;       // scaling / protocol

  // mimo-bound
  std::size_t n_nodes = 32;
  std::size_t instances = 200;
  std::string sigma_kind = "mixed";  // none | interference | random | mixed

  // lln
  std::vector<std::size_t> n_list = {16, 32, 64, 128};
  std::size_t seeds_count = 10;
};

struct RenderResult {
  std::string csv;
  bool violation = false;
};

/// Builds the full CSV (comment header with the spec echo and library
/// version, fixed header row, one row per grid point, 17-significant-digit
/// floats). Grid points run concurrently up to the jobs bound; rows are
/// emitted in grid order regardless of completion order and are independent
/// of the job count.
RenderResult render_csv(const SweepSpec& spec);

/// render + write to spec.out (stdout when empty). Returns an exit code:
/// 0 ok, 1 an acceptance-style check failed, 2 usage error, 3 I/O error.
int run(const SweepSpec& spec);

}  // namespace loscap::sweep
