#include "hostembed/mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <random>

#include "hostembed/errors.hpp"
#include "hostembed/kernels.hpp"
#include "hostembed/parallel.hpp"
#include "hostembed/sweep.hpp"

namespace hostembed::mc {

namespace {

enum Stream : std::uint64_t { kOracleStream = 1, kLinearStream, kQuantizerStream, kDpcStream, kCodebookStream };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Moments {
  std::size_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
  void merge(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stderr_() const {
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    const double var = std::max(sumsq - sum * sum / dn, 0.0) / (dn - 1.0);
    return std::sqrt(var / dn);
  }
};

struct Tally {
  Moments power;
  Moments mmse;
  std::size_t decode_errors = 0;
  std::size_t message_errors = 0;
  std::vector<double> bin_power;
  std::vector<std::size_t> bin_count;

  explicit Tally(std::size_t bins = 1) : bin_power(bins, 0.0), bin_count(bins, 0) {}

  void record(double p, double d, bool decode_error, bool message_error, std::size_t bin) {
    power.add(p);
    mmse.add(d);
    decode_errors += decode_error;
    message_errors += message_error;
    bin_power[bin] += p;
    ++bin_count[bin];
  }
  void merge(const Tally& o) {
    power.merge(o.power);
    mmse.merge(o.mmse);
    decode_errors += o.decode_errors;
    message_errors += o.message_errors;
    for (std::size_t b = 0; b < bin_power.size(); ++b) {
      bin_power[b] += o.bin_power[b];
      bin_count[b] += o.bin_count[b];
    }
  }
};

double rate_stderr(std::size_t hits, std::size_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// Runs `body(rng, trials_in_chunk, tally)` per chunk in parallel and merges
// the chunk tallies in chunk order.
template <class Body>
Tally run_chunks(const TrialConfig& config, Stream stream, std::size_t bins, Body&& body) {
  const std::size_t chunks = (config.trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<Tally> tallies(chunks, Tally(bins));
  parallel_for(chunks, config.workers, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(config.seed, stream, c));
    const std::size_t count = std::min(kChunkTrials, config.trials - c * kChunkTrials);
    body(rng, count, tallies[c]);
  });
  Tally total(bins);
  for (const Tally& t : tallies) total.merge(t);
  return total;
}

TrialStats finish(const TrialConfig& config, const Tally& t, std::string strategy) {
  TrialStats s;
  s.strategy = std::move(strategy);
  s.seed = config.seed;
  s.blocklength = config.blocklength;
  s.trials = config.trials;
  s.mean_power = t.power.mean();
  s.mean_power_stderr = t.power.stderr_();
  s.mean_mmse = t.mmse.mean();
  s.mean_mmse_stderr = t.mmse.stderr_();
  s.decode_error_rate = static_cast<double>(t.decode_errors) / static_cast<double>(config.trials);
  s.decode_error_stderr = rate_stderr(t.decode_errors, config.trials);
  s.message_error_rate = static_cast<double>(t.message_errors) / static_cast<double>(config.trials);
  s.message_error_stderr = rate_stderr(t.message_errors, config.trials);
  for (std::size_t b = 0; b < t.bin_power.size(); ++b) {
    if (t.bin_count[b] > 0) {
      s.max_message_power =
          std::max(s.max_message_power, t.bin_power[b] / static_cast<double>(t.bin_count[b]));
    }
  }
  return s;
}

// Second-order statistics of the asymptotic (X1, Y, T) triple.
struct TripleCov {
  double vx, vy, vt, cxy, cxt, cyt;
};

TripleCov triple_cov(const StrategyParams& s) {
  const double st2 = s.sigma_tilde2();
  const double pd = s.p_dpc();
  return {st2 + pd, st2 + pd + 1.0, s.alpha * s.alpha * st2 + pd,
          st2 + pd,  s.alpha * st2 + pd, s.alpha * st2 + pd};
}

struct Weights {
  double y = 0.0;
  double t = 0.0;
};

// Least-squares weights of x on the chosen observations from second moments.
Weights regression(const TripleCov& c, Observation obs) {
  const bool t_usable = c.vt > 0.0;
  if (obs == Observation::y_only || (obs == Observation::joint && !t_usable)) {
    return {c.cxy / c.vy, 0.0};
  }
  if (obs == Observation::t_only) return {0.0, t_usable ? c.cxt / c.vt : 0.0};
  const double det = c.vy * c.vt - c.cyt * c.cyt;
  if (!(det > 1e-14 * c.vy * c.vt)) return {c.cxy / c.vy, 0.0};
  return {(c.vt * c.cxy - c.cyt * c.cxt) / det, (c.vy * c.cxt - c.cyt * c.cxy) / det};
}

void require_positive_trials(std::size_t n, const char* what) {
  if (n == 0) throw ValidationError(std::string(what) + " must be at least 1");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

void TrialConfig::validate() const {
  require_positive_trials(trials, "trials");
  require_positive_trials(blocklength, "blocklength");
  require_positive_trials(workers, "workers");
  params.validate();
}

OracleEstimate lmmse_oracle(const StrategyParams& strategy, std::size_t samples, std::uint64_t seed,
                            Observation obs, std::size_t workers) {
  strategy.validate();
  if (samples < 10000) throw ValidationError("the LMMSE oracle needs at least 1e4 samples");
  const double st = std::sqrt(strategy.sigma_tilde2());
  const double sd = std::sqrt(strategy.p_dpc());
  const double alpha = strategy.alpha;
  const std::size_t chunks = (samples + kChunkTrials - 1) / kChunkTrials;

  auto for_each_sample = [&](std::size_t c, auto&& visit) {
    std::mt19937_64 rng(derive_seed(seed, kOracleStream, c));
    std::normal_distribution<double> g;
    const std::size_t count = std::min(kChunkTrials, samples - c * kChunkTrials);
    for (std::size_t i = 0; i < count; ++i) {
      const double host = st * g(rng);
      const double vdpc = sd * g(rng);
      const double z = g(rng);
      const double x1 = host + vdpc;
      visit(x1, x1 + z, vdpc + alpha * host);
    }
  };

  // First pass: sample second moments.
  std::vector<std::array<double, 6>> partial(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::array<double, 6> m{};
    for_each_sample(c, [&](double x, double y, double t) {
      m[0] += x * x;
      m[1] += y * y;
      m[2] += t * t;
      m[3] += x * y;
      m[4] += x * t;
      m[5] += y * t;
    });
    partial[c] = m;
  });
  std::array<double, 6> m{};
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < 6; ++k) m[k] += p[k];
  }
  const Weights w = regression({m[0], m[1], m[2], m[3], m[4], m[5]}, obs);

  // Second pass: residuals of the fitted estimate on the same samples.
  std::vector<Moments> residual(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    for_each_sample(c, [&](double x, double y, double t) {
      const double e = x - w.y * y - w.t * t;
      residual[c].add(e * e);
    });
  });
  Moments total;
  for (const Moments& r : residual) total.merge(r);
  return {total.mean(), total.stderr_(), samples};
}

TrialStats simulate_linear(const TrialConfig& config, double gain) {
  config.validate();
  if (!std::isfinite(gain)) throw ValidationError("gain must be finite");
  const double sigma = config.params.sigma();
  const double keep = 1.0 - gain;
  const double s2x1 = keep * keep * config.params.sigma2;
  const double coeff = s2x1 / (s2x1 + 1.0);
  const std::size_t m = config.blocklength;
  const Tally t = run_chunks(config, kLinearStream, 1, [&](std::mt19937_64& rng, std::size_t count, Tally& tally) {
    std::normal_distribution<double> g;
    for (std::size_t trial = 0; trial < count; ++trial) {
      double p = 0.0, d = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double x0 = sigma * g(rng);
        const double v = -gain * x0;
        const double x1 = x0 + v;
        const double y = x1 + g(rng);
        const double e = x1 - coeff * y;
        p += v * v;
        d += e * e;
      }
      const double dm = static_cast<double>(m);
      tally.record(p / dm, d / dm, false, false, 0);
    }
  });
  return finish(config, t, "linear");
}

TrialStats simulate_quantizer(const TrialConfig& config, double step) {
  config.validate();
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("step must be positive and finite");
  const double sigma = config.params.sigma();
  const std::size_t m = config.blocklength;
  const Tally t = run_chunks(config, kQuantizerStream, 1, [&](std::mt19937_64& rng, std::size_t count, Tally& tally) {
    std::normal_distribution<double> g;
    for (std::size_t trial = 0; trial < count; ++trial) {
      double p = 0.0, d = 0.0;
      bool wrong = false;
      for (std::size_t i = 0; i < m; ++i) {
        const double x0 = sigma * g(rng);
        const double x1 = step * std::round(x0 / step);
        const double y = x1 + g(rng);
        const double xhat = step * std::round(y / step);
        const double v = x1 - x0;
        const double e = x1 - xhat;
        p += v * v;
        d += e * e;
        wrong = wrong || xhat != x1;
      }
      const double dm = static_cast<double>(m);
      tally.record(p / dm, d / dm, wrong, false, 0);
    }
  });
  return finish(config, t, "quantizer");
}

Codebook make_codebook(const StrategyParams& strategy, std::size_t blocklength, double rate_t,
                       double rate, std::uint64_t seed) {
  strategy.validate();
  if (blocklength == 0) throw ValidationError("blocklength must be at least 1");
  if (!(rate_t >= 0.0) || !std::isfinite(rate_t)) throw ValidationError("codebook rate must be non-negative");
  if (rate_t < rate) throw ValidationError("codebook rate must be at least the message rate");
  const double bits = static_cast<double>(blocklength) * rate_t;
  if (bits > static_cast<double>(kMaxCodebookLog2)) {
    throw ResourceError("codebook of 2^" + format_number(bits) + " words exceeds the 2^20 limit");
  }
  Codebook book;
  book.length = blocklength;
  book.count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::exp2(bits))));
  book.bins = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(std::exp2(static_cast<double>(blocklength) * rate))));
  book.bins = std::min(book.bins, book.count);
  const double sd = std::sqrt(strategy.p_dpc() + strategy.alpha * strategy.alpha * strategy.sigma_tilde2());
  std::mt19937_64 rng(derive_seed(seed, kCodebookStream, 0));
  std::normal_distribution<double> g;
  book.words.resize(book.length * book.count);
  for (double& w : book.words) w = sd * g(rng);
  book.norms.assign(book.count, 0.0);
  for (std::size_t i = 0; i < book.length; ++i) {
    for (std::size_t j = 0; j < book.count; ++j) {
      const double w = book.words[i * book.count + j];
      book.norms[j] += w * w;
    }
  }
  return book;
}

TrialStats simulate_dpc_smallm(const TrialConfig& config, const StrategyParams& strategy, double rate_t) {
  config.validate();
  strategy.validate();
  if (strategy.sigma2 != config.params.sigma2 || strategy.power != config.params.power) {
    throw ValidationError("strategy and problem parameters disagree on sigma^2 or P");
  }
  if (!(strategy.p_dpc() > 0.0)) throw ValidationError("the DPC simulator needs P_dpc > 0");
  const Codebook book = make_codebook(strategy, config.blocklength, rate_t, config.params.rate, config.seed);

  const std::size_t m = config.blocklength;
  const double dm = static_cast<double>(m);
  const double sigma = config.params.sigma();
  const double alpha = strategy.alpha;
  const double beta = strategy.beta;
  const double st2 = strategy.sigma_tilde2();
  const TripleCov cov = triple_cov(strategy);
  const Weights w = regression(cov, Observation::joint);
  const double channel_gain = cov.cyt / cov.vt;
  const double corr_scale = st2 > 0.0 ? std::sqrt(cov.vt * st2) : 0.0;
  const kernels::CodebookView view{book.words, book.length, book.count};

  const Tally t = run_chunks(config, kDpcStream, book.bins, [&](std::mt19937_64& rng, std::size_t count, Tally& tally) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<std::size_t> message(0, book.bins - 1);
    std::vector<double> x0(m), host(m), y(m), x1(m), scores(book.count);
    for (std::size_t trial = 0; trial < count; ++trial) {
      for (std::size_t i = 0; i < m; ++i) {
        x0[i] = sigma * g(rng);
        host[i] = (1.0 - beta) * x0[i];
      }
      const std::size_t msg = message(rng);

      // Encoder: in-bin word whose empirical moments with the host are
      // closest to the ensemble values.
      kernels::dot_products(host, view, scores);
      std::size_t chosen = msg;
      double best = INFINITY;
      for (std::size_t j = msg; j < book.count; j += book.bins) {
        const double a = (book.norms[j] / dm - cov.vt) / cov.vt;
        const double b = corr_scale > 0.0 ? (scores[j] / dm - alpha * st2) / corr_scale : 0.0;
        const double dist = a * a + b * b;
        if (dist < best) {
          best = dist;
          chosen = j;
        }
      }

      double p = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double vdpc = book.at(chosen, i) - alpha * host[i];
        const double v = -beta * x0[i] + vdpc;
        p += v * v;
        x1[i] = x0[i] + v;
        y[i] = x1[i] + g(rng);
      }

      // Decoder: maximum likelihood under Y = a T + Gaussian noise.
      kernels::scaled_sq_distances(y, channel_gain, view, scores);
      const std::size_t decoded =
          static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin());

      double d = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double e = x1[i] - (w.y * y[i] + w.t * book.at(decoded, i));
        d += e * e;
      }
      tally.record(p / dm, d / dm, decoded != chosen, book.bin_of(decoded) != msg, msg);
    }
  });
  TrialStats s = finish(config, t, "dpc");
  s.notes = "encoder: moment-distance surrogate for joint typicality, lowest-index tie-break; "
            "decoder: maximum likelihood";
  return s;
}

void write_csv(const TrialStats& s, std::ostream& out) {
  out << "strategy,seed,blocklength,trials,mean_power,mean_power_stderr,mean_mmse,mean_mmse_stderr,"
         "decode_error_rate,decode_error_stderr,message_error_rate,message_error_stderr,"
         "max_message_power\n";
  out << s.strategy << ',' << s.seed << ',' << s.blocklength << ',' << s.trials << ','
      << format_number(s.mean_power) << ',' << format_number(s.mean_power_stderr) << ','
      << format_number(s.mean_mmse) << ',' << format_number(s.mean_mmse_stderr) << ','
      << format_number(s.decode_error_rate) << ',' << format_number(s.decode_error_stderr) << ','
      << format_number(s.message_error_rate) << ',' << format_number(s.message_error_stderr) << ','
      << format_number(s.max_message_power) << '\n';
}

}  // namespace hostembed::mc
