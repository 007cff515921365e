#include "rmedge/ensembles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "rmedge/error.hpp"

namespace rmedge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2 * std::log(u1)), t = 2 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::string to_string(Ensemble e) { return e == Ensemble::gue ? "gue" : "wishart"; }

namespace {

void require_n(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "ensembles", "n must be >= 2");
}

}  // namespace

HermitianMatrix build_gue(int n, std::uint64_t seed, std::uint64_t sample) {
  require_n(n);
  CounterRng rng(seed, sample);
  const double sd = 1 / std::sqrt(static_cast<double>(n)), r2 = 1 / std::numbers::sqrt2;
  HermitianMatrix h{Matrix(n, n), Matrix(n, n)};
  for (int j = 0; j < n; ++j) {
    h.re(j, j) = sd * rng.normal();
    for (int k = j + 1; k < n; ++k) {
      double x = sd * rng.normal(), y = sd * rng.normal();
      h.re(j, k) = h.re(k, j) = x * r2;
      h.im(j, k) = y * r2;
      h.im(k, j) = -y * r2;
    }
  }
  return h;
}

HermitianEigen hermitian_eigenvalues(const HermitianMatrix& h) {
  const std::size_t n = h.re.rows();
  Matrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      e(i, j) = e(i + n, j + n) = h.re(i, j);
      e(i, j + n) = -h.im(i, j);
      e(i + n, j) = h.im(i, j);
    }
  std::vector<double> all = symmetric_eigenvalues(std::move(e));
  std::sort(all.begin(), all.end());
  HermitianEigen out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = 0.5 * (all[2 * k] + all[2 * k + 1]);
    out.max_pair_gap = std::max(out.max_pair_gap, all[2 * k + 1] - all[2 * k]);
  }
  return out;
}

Matrix build_wishart_factor(int n, std::uint64_t seed, std::uint64_t sample) {
  require_n(n);
  CounterRng rng(seed, sample);
  const double sd = 1 / std::sqrt(static_cast<double>(n));
  Matrix y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y(i, j) = sd * rng.normal();
  return y;
}

double soft_edge_scale(Ensemble e, int n, double lambda) {
  double s = std::pow(static_cast<double>(n), 2.0 / 3.0);
  return e == Ensemble::gue ? s * (lambda - 2) : s * (lambda - 4) / std::pow(2.0, 4.0 / 3.0);
}

EnsembleSample sample_gue_eigs(int n, std::uint64_t seed, std::uint64_t sample) {
  HermitianEigen he = hermitian_eigenvalues(build_gue(n, seed, sample));
  EnsembleSample s{Ensemble::gue, n, seed, sample, std::move(he.values), {}, he.max_pair_gap};
  for (double l : s.eigenvalues) s.scaled_edge.push_back(soft_edge_scale(Ensemble::gue, n, l));
  return s;
}

EnsembleSample sample_wishart_eigs(int n, std::uint64_t seed, std::uint64_t sample) {
  Matrix y = build_wishart_factor(n, seed, sample);
  Matrix g = y.transpose() * y;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
  EnsembleSample s{Ensemble::wishart, n, seed, sample, symmetric_eigenvalues(std::move(g)), {}, 0.0};
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  for (double l : s.eigenvalues) s.scaled_edge.push_back(soft_edge_scale(Ensemble::wishart, n, l));
  return s;
}

EnsembleSample sample_eigs(Ensemble e, int n, std::uint64_t seed, std::uint64_t sample) {
  return e == Ensemble::gue ? sample_gue_eigs(n, seed, sample) : sample_wishart_eigs(n, seed, sample);
}

double semicircle_cdf(double x) {
  if (x <= -2) return 0.0;
  if (x >= 2) return 1.0;
  double p = std::asin(x / 2);
  return 0.5 + (2 * p + std::sin(2 * p)) / (2 * std::numbers::pi);
}

double marchenko_pastur_cdf(double x) {
  if (x <= 0) return 0.0;
  if (x >= 4) return 1.0;
  double t = std::asin(std::sqrt(x) / 2);
  return (2 * t + std::sin(2 * t)) / std::numbers::pi;
}

namespace {

// Runs body(sample) for every sample, split across threads; body must only
// touch per-sample state.
void for_samples(int samples, int threads, const std::function<void(int)>& body) {
  int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  t = std::min(t, samples);
  if (t <= 1) {
    for (int s = 0; s < samples; ++s) body(s);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      for (int s = w; s < samples; s += t) body(s);
    });
  for (auto& th : pool) th.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

HistogramCheck bulk_law_check(Ensemble e, int n, int samples, std::uint64_t seed, int bins, int threads) {
  require_n(n);
  if (samples < 1 || bins < 1) throw Error(ErrorKind::invalid_argument, "ensembles", "samples and bins must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  HistogramCheck h;
  h.ensemble = e;
  h.n = n;
  h.samples = samples;
  h.seed = seed;
  const double lo = e == Ensemble::gue ? -2.0 : 0.0, width = 4.0 / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
  std::vector<std::vector<long>> counts(samples);
  for_samples(samples, threads, [&](int s) {
    std::vector<long> c(bins, 0);
    for (double l : sample_eigs(e, n, seed, s).eigenvalues) {
      int b = static_cast<int>(std::floor((l - lo) / width));
      if (b >= 0 && b < bins) ++c[b];
    }
    counts[s] = std::move(c);
  });
  const double total = static_cast<double>(n) * samples;
  auto cdf = e == Ensemble::gue ? semicircle_cdf : marchenko_pastur_cdf;
  for (int b = 0; b < bins; ++b) {
    long c = 0;
    for (const auto& v : counts) c += v[b];
    h.empirical.push_back(c / total / width);
    h.expected.push_back((cdf(h.edges[b + 1]) - cdf(h.edges[b])) / width);
    h.sup_deviation = std::max(h.sup_deviation, std::fabs(h.empirical.back() - h.expected.back()));
  }
  h.seconds = seconds_since(t0);
  return h;
}

GapCounts soft_edge_gap_counts(Ensemble e, int n, int samples, double alpha, std::uint64_t seed, int kmax,
                               int threads) {
  if (n < 100) throw Error(ErrorKind::invalid_argument, "ensembles", "soft-edge counts need n >= 100");
  if (samples < 500) throw Error(ErrorKind::invalid_argument, "ensembles", "soft-edge counts need >= 500 samples");
  if (kmax < 0) throw Error(ErrorKind::invalid_argument, "ensembles", "kmax must be >= 0");
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> k(samples);
  for_samples(samples, threads, [&](int s) {
    EnsembleSample es = sample_eigs(e, n, seed, s);
    k[s] = static_cast<int>(std::count_if(es.scaled_edge.begin(), es.scaled_edge.end(),
                                          [&](double x) { return x > alpha; }));
  });
  GapCounts g;
  g.ensemble = e;
  g.n = n;
  g.samples = samples;
  g.seed = seed;
  g.alpha = alpha;
  std::vector<long> c(kmax + 1, 0);
  for (int v : k) ++c[std::min(v, kmax)];
  for (long v : c) {
    double p = static_cast<double>(v) / samples;
    g.probs.push_back(p);
    g.std_errors.push_back(std::sqrt(p * (1 - p) / samples));
  }
  g.seconds = seconds_since(t0);
  return g;
}

GapCounts soft_edge_gap_counts(int n, int samples, double alpha, std::uint64_t seed, int kmax, int threads) {
  return soft_edge_gap_counts(Ensemble::gue, n, samples, alpha, seed, kmax, threads);
}

}  // namespace rmedge
