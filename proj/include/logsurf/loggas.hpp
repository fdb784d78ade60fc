#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "logsurf/core.hpp"
#include "logsurf/grid.hpp"
#include "logsurf/meanfield.hpp"

namespace logsurf {

// Deterministic RNG wrapper. u01 is strictly inside (0, 1], normal caches the
// second Box-Muller draw, so the stream is reproducible across platforms that
// agree on mt19937_64 (all of them) without touching std::normal_distribution,
// whose draw count is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t raw() { return gen_(); }
    double u01() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    }
    double normal();

  private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// One interacting-particle chain. pair_sum and tau_sum are maintained
// incrementally by the sweep and re-derivable from the positions, which the
// detailed-balance tests exploit.
struct Chain {
    std::vector<Vec2> x;
    double pair_sum = 0.0; // sum over pairs ln|x_i - x_j|
    double tau_sum = 0.0;  // sum of ln tau(x_i)
};

// ln of the unnormalized ensemble density at the chain state,
//   -(beta/N) sum_{i<j} ln|x_i - x_j| + sum_i ln tau(x_i).
double chain_log_weight(const Chain& c, double beta);

// Same, from scratch. Agreement with the cached version bounds the drift of
// the incremental bookkeeping.
double chain_log_weight_recomputed(const Chain& c,
                                   const std::function<double(Vec2)>& tau_density,
                                   double beta);

double pair_log_sum(const std::vector<Vec2>& x);

// Seed particles inside the support of tau: draws from init_radial by inverse
// CDF when provided, otherwise uniformly on a small disk with rejection on
// tau = 0.
Chain init_chain(const std::function<double(Vec2)>& tau_density, int n_particles,
                 double r_window, const RadialProfile& init_radial, Rng& rng);

// One Metropolis sweep (n single-particle Gaussian proposals). Proposals
// leaving the window disk or producing a non-finite weight are rejected.
// Returns the number of accepted moves.
int sweep_chain(Chain& c, const std::function<double(Vec2)>& tau_density,
                double beta, double sigma, double r_window, Rng& rng);

struct LogGasConfig {
    int n_particles = 100;
    double beta = 0.0;
    long long sweeps = 100000;   // total post-burn-in sweeps across all chains
    double burn_fraction = 0.1;  // warm-up share prepended per chain
    int n_chains = 8;
    std::uint64_t seed = 1;
    double sigma0 = 0.5;         // proposal width before tuning
    double r_window = 10.0;      // confinement disk radius
    RadialProfile init_radial;   // optional start distribution (empty: uniform)
    double r_hist = 0.0;         // histogram extent; 0 means r_window
    int n_bins = 96;
    long long sample_cap = 200000; // max recorded particle rows
    ExecMode mode = ExecMode::Serial;
};

struct LogGasResult {
    int n_particles = 0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    long long total_sweeps = 0;    // post burn-in, summed over chains
    double acceptance_rate = 0.0;  // post burn-in
    double sigma_final = 0.0;      // mean tuned width over chains

    // mean over pairs and sweeps of ln|x_i - x_j|, with a batch-means
    // standard error (about 80 batches per chain)
    double pair_log_moment = 0.0;
    double pair_log_se = 0.0;

    // radial histogram of all post-burn-in positions as a density estimate:
    // radii are bin centers, values are counts / (total * annulus area),
    // weights are annulus areas
    RadialProfile marginal;
    double overflow_share = 0.0; // fraction of positions beyond r_hist

    // stride-recorded positions, chain-major then sweep-major
    std::vector<Vec2> samples;
    int sample_stride = 1;
    long long recorded_sweeps = 0;
};

LogGasResult sample_log_gas(const std::function<double(Vec2)>& tau_density,
                            const LogGasConfig& config);

// Mean of ln|x - y| when x, y are drawn independently from the density rho;
// equals twice the logarithmic energy of rho.
double product_pair_log_moment(const MinimizerResult& result);

// Mean of ln|x - y| for two particles with joint density proportional to
//   |x - y|^{-beta/2} tau(x) tau(y)
// on the window disk, by midpoint quadrature on two half-cell-offset grids
// (the offset keeps x = y off the nodes). n is the per-axis resolution.
double two_particle_log_moment(const std::function<double(Vec2)>& tau_density,
                               double beta, double r_window, int n,
                               ExecMode mode = ExecMode::Serial);

// Kolmogorov-Smirnov distance between the empirical law of |x| over samples
// and a reference CDF.
double ks_distance_radii(const std::vector<Vec2>& samples,
                         const std::function<double(double)>& cdf);

} // namespace logsurf
