#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hostembed/achievability.hpp"
#include "hostembed/model.hpp"

namespace hostembed::mc {

// Trials are generated in fixed-size chunks, each with its own random stream
// derived from (seed, chunk index), so results do not depend on `workers`.
inline constexpr std::size_t kChunkTrials = 1024;

struct TrialConfig {
  std::uint64_t seed = 0;
  std::size_t blocklength = 1;  // m
  std::size_t trials = 1;
  ProblemParams params;
  std::size_t workers = 1;

  void validate() const;
};

struct TrialStats {
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t blocklength = 0;
  std::size_t trials = 0;
  double mean_power = 0.0;
  double mean_power_stderr = 0.0;
  double mean_mmse = 0.0;
  double mean_mmse_stderr = 0.0;
  // Fraction of trials whose auxiliary codeword (or quantizer cell) is
  // decoded wrongly.
  double decode_error_rate = 0.0;
  double decode_error_stderr = 0.0;
  // Fraction of trials with a wrong message; zero for rate-free strategies.
  double message_error_rate = 0.0;
  double message_error_stderr = 0.0;
  // Largest per-message average power (post-hoc check of the power budget).
  double max_message_power = 0.0;
  std::string notes;
};

// 64-bit seed for chunk `index` of stream `stream`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

enum class Observation { joint, y_only, t_only };

struct OracleEstimate {
  double mmse = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

// Samples (X1, Y, T) of the linear + DPC construction with V_dpc independent
// of the host, fits the least-squares linear estimate of X1 from the chosen
// observations and returns the in-sample residual mean square.
OracleEstimate lmmse_oracle(const StrategyParams& strategy, std::size_t samples, std::uint64_t seed,
                            Observation obs = Observation::joint, std::size_t workers = 1);

// X1 = (1 - gain) X0, decoded by the scalar LMMSE estimate from Y.
TrialStats simulate_linear(const TrialConfig& config, double gain);

// X1 = X0 rounded to the nearest multiple of `step`; the decoder rounds Y.
TrialStats simulate_quantizer(const TrialConfig& config, double step);

// Auxiliary codebook of round(2^{m rate_t}) words binned into
// round(2^{m R}) bins (word j in bin j mod bins).
struct Codebook {
  std::size_t length = 0;
  std::size_t count = 0;
  std::size_t bins = 1;
  std::vector<double> words;  // coordinate-major: words[i * count + j]
  std::vector<double> norms;  // squared norm of each word

  std::size_t bin_of(std::size_t word) const { return word % bins; }
  double at(std::size_t word, std::size_t coord) const { return words[coord * count + word]; }
};

inline constexpr std::size_t kMaxCodebookLog2 = 20;

Codebook make_codebook(const StrategyParams& strategy, std::size_t blocklength, double rate_t,
                       double rate, std::uint64_t seed);

// Random-binning DPC encoder (moment-distance surrogate of joint typicality,
// lowest index on ties) with a maximum-likelihood codeword decoder and joint
// LMMSE reconstruction from (Y, decoded T).
TrialStats simulate_dpc_smallm(const TrialConfig& config, const StrategyParams& strategy, double rate_t);

// Header line plus one data row.
void write_csv(const TrialStats& stats, std::ostream& out);

}  // namespace hostembed::mc
