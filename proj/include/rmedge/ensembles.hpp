#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmedge/matrix.hpp"

namespace rmedge {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based stream: the k-th draw is a pure function of (seed, stream, k).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // Box-Muller

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class Ensemble { gue, wishart };

std::string to_string(Ensemble e);

// H = re + i im, Hermitian: diagonal N(0, 1/n), off-diagonal (x + i y)/sqrt(2)
// with x, y independent N(0, 1/n).
struct HermitianMatrix {
  Matrix re, im;
};

HermitianMatrix build_gue(int n, std::uint64_t seed, std::uint64_t sample = 0);

// Eigenvalues of H from the real embedding [[re, -im], [im, re]], whose spectrum
// is that of H with every eigenvalue doubled.
struct HermitianEigen {
  std::vector<double> values;  // ascending, n of them
  double max_pair_gap = 0.0;   // largest gap within a doubled pair
};

HermitianEigen hermitian_eigenvalues(const HermitianMatrix& h);

// n x n with independent N(0, 1/n) entries.
Matrix build_wishart_factor(int n, std::uint64_t seed, std::uint64_t sample = 0);

struct EnsembleSample {
  Ensemble ensemble = Ensemble::gue;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> scaled_edge;  // soft-edge variables, same order
  double max_pair_gap = 0.0;
};

EnsembleSample sample_gue_eigs(int n, std::uint64_t seed, std::uint64_t sample = 0);
EnsembleSample sample_wishart_eigs(int n, std::uint64_t seed, std::uint64_t sample = 0);
EnsembleSample sample_eigs(Ensemble e, int n, std::uint64_t seed, std::uint64_t sample = 0);

// n^{2/3} (lambda - 2) for GUE, n^{2/3} (lambda - 4) / 2^{4/3} for Wishart.
double soft_edge_scale(Ensemble e, int n, double lambda);

double semicircle_cdf(double x);          // density sqrt(4 - x^2) / (2 pi) on [-2, 2]
double marchenko_pastur_cdf(double x);    // density sqrt((4 - x) / x) / (2 pi) on (0, 4)

struct HistogramCheck {
  Ensemble ensemble = Ensemble::gue;
  int n = 0, samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> edges;      // bins + 1
  std::vector<double> empirical;  // density per bin
  std::vector<double> expected;   // bin-averaged limit density
  double sup_deviation = 0.0;
  double seconds = 0.0;
};

// Bins cover [-2, 2] for GUE and [0, 4] for Wishart.
HistogramCheck bulk_law_check(Ensemble e, int n, int samples, std::uint64_t seed, int bins = 40, int threads = 0);

struct GapCounts {
  Ensemble ensemble = Ensemble::gue;
  int n = 0, samples = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::vector<double> probs;       // k = 0..kmax; the last entry also counts k > kmax
  std::vector<double> std_errors;  // binomial sqrt(p (1 - p) / samples)
  double seconds = 0.0;
};

// Frequencies of k = #{scaled eigenvalues in (alpha, inf)}.
GapCounts soft_edge_gap_counts(Ensemble e, int n, int samples, double alpha, std::uint64_t seed, int kmax = 5,
                               int threads = 0);
GapCounts soft_edge_gap_counts(int n, int samples, double alpha, std::uint64_t seed, int kmax = 5, int threads = 0);

}  // namespace rmedge
