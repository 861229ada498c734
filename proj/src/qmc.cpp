#include <algorithm>
#include <cmath>

#include "mahler/errors.hpp"
#include "mahler/measures.hpp"
#include "mahler/parallel.hpp"

namespace mahler {

void QmcConfig::validate() const {
  if (samples < 1024) throw ComputationError("qmc: samples must be at least 1024");
  if (shifts < 2) throw ComputationError("qmc: shifts must be at least 2");
  if (!(clip > 0.0 && clip < 1.0)) throw ComputationError("qmc: clip must lie in (0, 1)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::vector<unsigned long> first_primes(std::size_t count) {
  std::vector<unsigned long> primes;
  for (unsigned long c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

// frac(sqrt(p)) as a 64-bit fixed point fraction, exactly truncated.
std::uint64_t sqrt_fraction(unsigned long p) {
  mpz_class scaled = mpz_class(p) << 128;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  mpz_class frac = root & mpz_class("18446744073709551615");
  return static_cast<std::uint64_t>(frac.get_ui());
}

constexpr std::uint64_t kChunk = 1u << 14;

}  // namespace

MeasureEstimate torus_qmc(const MeasureKind& kind, const std::vector<LaurentPoly>& polys, const QmcConfig& cfg) {
  const std::size_t n = validate_measure_input(kind, polys);
  cfg.validate();

  // Generator multipliers frac(sqrt(p)) over consecutive primes, starting at
  // a seed-dependent offset.
  const std::size_t offset = splitmix64(cfg.seed) % 32;
  auto primes = first_primes(offset + n);
  std::vector<std::uint64_t> mult(n);
  for (std::size_t j = 0; j < n; ++j) mult[j] = sqrt_fraction(primes[offset + j]);

  std::vector<std::vector<std::uint64_t>> shift(cfg.shifts, std::vector<std::uint64_t>(n));
  for (std::uint64_t s = 0; s < cfg.shifts; ++s) {
    std::uint64_t h = splitmix64(cfg.seed ^ splitmix64(s + 1));
    for (std::size_t j = 0; j < n; ++j) {
      h = splitmix64(h + j);
      shift[s][j] = h;
    }
  }

  // Identical polynomials share one evaluation.
  std::vector<TorusEvaluator> evals;
  std::vector<std::size_t> slot(polys.size());
  std::vector<const LaurentPoly*> distinct;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    auto it = std::find_if(distinct.begin(), distinct.end(), [&](const LaurentPoly* q) { return *q == polys[i]; });
    if (it == distinct.end()) {
      slot[i] = distinct.size();
      distinct.push_back(&polys[i]);
      evals.emplace_back(polys[i]);
    } else {
      slot[i] = static_cast<std::size_t>(it - distinct.begin());
    }
  }

  const double log_clip = std::log(cfg.clip);
  const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
  std::vector<double> partial(cfg.shifts * chunks, 0.0);
  const auto tag = kind.tag;
  const std::size_t k = polys.size();

  parallel_for(partial.size(), [&](std::size_t job) {
    const std::uint64_t s = job / chunks, c = job % chunks;
    const std::uint64_t begin = c * kChunk, end = std::min(cfg.samples, begin + kChunk);
    std::vector<std::uint64_t> x(n);
    std::vector<double> distinct_logs(evals.size()), logs(k);
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n; ++j) x[j] = i * mult[j] + shift[s][j];
      for (std::size_t e = 0; e < evals.size(); ++e) {
        double v = evals[e].log_abs_fixed(x);
        distinct_logs[e] = (v >= log_clip) ? v : log_clip;
      }
      for (std::size_t q = 0; q < k; ++q) logs[q] = distinct_logs[slot[q]];
      double g;
      switch (tag) {
        case MeasureKind::Tag::Classic: g = logs[0]; break;
        case MeasureKind::Tag::Max: g = *std::max_element(logs.begin(), logs.end()); break;
        default: {
          g = 1.0;
          for (double l : logs) g *= l;
        }
      }
      double t = sum + g;
      comp += std::abs(sum) >= std::abs(g) ? (sum - t) + g : (g - t) + sum;
      sum = t;
    }
    partial[job] = sum + comp;
  });

  std::vector<double> means(cfg.shifts);
  for (std::uint64_t s = 0; s < cfg.shifts; ++s) {
    double total = 0.0;
    for (std::uint64_t c = 0; c < chunks; ++c) total += partial[s * chunks + c];
    means[s] = total / static_cast<double>(cfg.samples);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(cfg.shifts);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(cfg.shifts - 1);

  MeasureEstimate est;
  est.value = mean;
  est.error_estimate = std::sqrt(var);
  est.method = Method::TorusQMC;
  est.detail["samples"] = cfg.samples;
  est.detail["shifts"] = cfg.shifts;
  est.detail["seed"] = cfg.seed;
  est.detail["clip"] = cfg.clip;
  est.detail["dims"] = static_cast<std::int64_t>(n);
  return est;
}

}  // namespace mahler
