#include "logsurf/loggas.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Proposal-width tuning targets this acceptance band during burn-in.
constexpr double kAcceptLow = 0.3;
constexpr double kAcceptHigh = 0.5;
constexpr double kTuneFactor = 1.3;
constexpr int kTuneWindow = 100; // sweeps between adjustments

// Incremental pair/tau sums are rebuilt from scratch this often to stop
// roundoff drift from accumulating over long runs.
constexpr int kRebuildInterval = 10000;

constexpr int kSeedTries = 10000;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double log_distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return 0.5 * std::log(dx * dx + dy * dy);
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

} // namespace

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = u01();
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double pair_log_sum(const std::vector<Vec2>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            s += log_distance(x[i], x[j]);
    return s;
}

double chain_log_weight(const Chain& c, double beta) {
    const double n = static_cast<double>(c.x.size());
    return -(beta / n) * c.pair_sum + c.tau_sum;
}

double chain_log_weight_recomputed(const Chain& c,
                                   const std::function<double(Vec2)>& tau_density,
                                   double beta) {
    const double n = static_cast<double>(c.x.size());
    double taus = 0.0;
    for (const Vec2& p : c.x)
        taus += safe_log(tau_density(p));
    return -(beta / n) * pair_log_sum(c.x) + taus;
}

Chain init_chain(const std::function<double(Vec2)>& tau_density, int n_particles,
                 double r_window, const RadialProfile& init_radial, Rng& rng) {
    if (n_particles < 2)
        throw config_error("the particle system needs at least two particles");
    if (!(r_window > 0.0))
        throw config_error("the confinement window needs a positive radius");

    // inverse CDF over the start profile, when one is supplied
    std::vector<double> cdf;
    if (init_radial.size() >= 2) {
        cdf.resize(init_radial.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < init_radial.size(); ++i) {
            acc += std::max(0.0, init_radial.values[i]) * init_radial.weights[i];
            cdf[i] = acc;
        }
        if (!(acc > 0.0))
            throw config_error("start profile carries no mass");
        for (double& v : cdf)
            v /= acc;
    }

    const double r_uniform = std::min(2.0, r_window);
    Chain c;
    c.x.reserve(n_particles);
    for (int i = 0; i < n_particles; ++i) {
        Vec2 p{0.0, 0.0};
        bool placed = false;
        for (int attempt = 0; attempt < kSeedTries; ++attempt) {
            double r;
            if (!cdf.empty()) {
                const double u = rng.u01();
                const std::size_t k =
                    std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
                r = init_radial.radii[std::min(k, init_radial.size() - 1)];
            } else {
                r = r_uniform * std::sqrt(rng.u01());
            }
            const double a = 2.0 * 3.14159265358979323846 * rng.u01();
            p = {r * std::cos(a), r * std::sin(a)};
            if (norm(p) <= r_window && tau_density(p) > 0.0) {
                placed = true;
                break;
            }
        }
        if (!placed)
            throw config_error("could not seed particles inside the support of tau");
        c.x.push_back(p);
    }
    c.pair_sum = pair_log_sum(c.x);
    c.tau_sum = 0.0;
    for (const Vec2& p : c.x)
        c.tau_sum += std::log(tau_density(p));
    return c;
}

int sweep_chain(Chain& c, const std::function<double(Vec2)>& tau_density,
                double beta, double sigma, double r_window, Rng& rng) {
    const int n = static_cast<int>(c.x.size());
    const double w2 = r_window * r_window;
    int accepted = 0;
    for (int i = 0; i < n; ++i) {
        const Vec2 old = c.x[i];
        const Vec2 prop{old.x + sigma * rng.normal(), old.y + sigma * rng.normal()};
        if (prop.x * prop.x + prop.y * prop.y > w2)
            continue;
        const double tau_new = tau_density(prop);
        if (!(tau_new > 0.0) || !std::isfinite(tau_new))
            continue;
        const double dtau = std::log(tau_new) - std::log(tau_density(old));
        double dpair = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            dpair += log_distance(prop, c.x[j]) - log_distance(old, c.x[j]);
        }
        const double dw = -(beta / n) * dpair + dtau;
        if (!std::isfinite(dw) && dw > 0.0)
            continue; // coincident points give +inf for attractive signs; skip
        if (std::isnan(dw))
            continue;
        if (dw >= 0.0 || rng.u01() < std::exp(dw)) {
            c.x[i] = prop;
            c.pair_sum += dpair;
            c.tau_sum += dtau;
            ++accepted;
        }
    }
    return accepted;
}

namespace {

struct ChainOutput {
    std::vector<std::int64_t> bins;
    std::int64_t overflow = 0;
    std::int64_t inside = 0;
    std::vector<double> batch_means;
    std::vector<Vec2> recorded;
    long long recorded_sweeps = 0;
    long long accepted = 0;
    long long attempted = 0;
    double sigma = 0.0;
};

void run_chain(const std::function<double(Vec2)>& tau, const LogGasConfig& cfg,
               long long sweeps, std::uint64_t chain_seed, double r_hist,
               int stride, ChainOutput& out) {
    Rng rng(chain_seed);
    Chain chain = init_chain(tau, cfg.n_particles, cfg.r_window, cfg.init_radial, rng);

    const long long burn = static_cast<long long>(std::ceil(cfg.burn_fraction * sweeps));
    double sigma = cfg.sigma0;
    long long tune_acc = 0;
    for (long long t = 0; t < burn; ++t) {
        tune_acc += sweep_chain(chain, tau, cfg.beta, sigma, cfg.r_window, rng);
        if ((t + 1) % kTuneWindow == 0) {
            const double rate = static_cast<double>(tune_acc) /
                                (static_cast<double>(kTuneWindow) * cfg.n_particles);
            if (rate > kAcceptHigh)
                sigma = std::min(sigma * kTuneFactor, cfg.r_window);
            else if (rate < kAcceptLow)
                sigma = std::max(sigma / kTuneFactor, 1e-6 * cfg.r_window);
            tune_acc = 0;
        }
    }
    chain.pair_sum = pair_log_sum(chain.x);
    chain.tau_sum = 0.0;
    for (const Vec2& p : chain.x)
        chain.tau_sum += std::log(tau(p));

    out.sigma = sigma;
    out.bins.assign(cfg.n_bins, 0);
    const double bin_w = r_hist / cfg.n_bins;
    const double pairs = 0.5 * cfg.n_particles * (cfg.n_particles - 1);
    const long long batch_len = std::max<long long>(1, sweeps / 80);
    double batch_acc = 0.0;
    long long batch_fill = 0;

    for (long long t = 0; t < sweeps; ++t) {
        out.accepted += sweep_chain(chain, tau, cfg.beta, sigma, cfg.r_window, rng);
        out.attempted += cfg.n_particles;
        if ((t + 1) % kRebuildInterval == 0) {
            chain.pair_sum = pair_log_sum(chain.x);
            chain.tau_sum = 0.0;
            for (const Vec2& p : chain.x)
                chain.tau_sum += std::log(tau(p));
        }
        for (const Vec2& p : chain.x) {
            const double r = norm(p);
            const int k = static_cast<int>(r / bin_w);
            if (k < cfg.n_bins) {
                ++out.bins[k];
                ++out.inside;
            } else {
                ++out.overflow;
            }
        }
        batch_acc += chain.pair_sum / pairs;
        if (++batch_fill == batch_len) {
            out.batch_means.push_back(batch_acc / batch_len);
            batch_acc = 0.0;
            batch_fill = 0;
        }
        if (t % stride == 0) {
            out.recorded.insert(out.recorded.end(), chain.x.begin(), chain.x.end());
            ++out.recorded_sweeps;
        }
    }
}

} // namespace

LogGasResult sample_log_gas(const std::function<double(Vec2)>& tau_density,
                            const LogGasConfig& config) {
    if (config.n_particles < 2)
        throw config_error("the particle system needs at least two particles");
    if (config.sweeps < 1 || config.n_chains < 1)
        throw config_error("sampling needs positive sweep and chain counts");
    if (!(config.r_window > 0.0) || !(config.sigma0 > 0.0))
        throw config_error("sampling needs a positive window and proposal width");
    if (config.beta >= 2.0 * config.n_particles)
        throw config_error("beta/N >= 2 makes coincident pairs non-integrable");
    if (config.n_bins < 1)
        throw config_error("histogram needs at least one bin");

    const double r_hist = config.r_hist > 0.0 ? config.r_hist : config.r_window;
    const long long per_chain = config.sweeps / config.n_chains;
    const long long extra = config.sweeps % config.n_chains;
    const int stride = static_cast<int>(std::max<long long>(
        1, (config.sweeps * config.n_particles + config.sample_cap - 1) /
               std::max<long long>(1, config.sample_cap)));

    std::vector<ChainOutput> outs(config.n_chains);
    std::vector<long long> chain_sweeps(config.n_chains);
    std::vector<std::uint64_t> chain_seeds(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) {
        chain_sweeps[c] = per_chain + (c < extra ? 1 : 0);
        chain_seeds[c] = splitmix64(config.seed + static_cast<std::uint64_t>(c));
    }

    // exceptions (bad seeding, vanishing support) must not unwind through the
    // parallel region; stash the first one and rethrow outside
    std::exception_ptr chain_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (config.mode == ExecMode::Parallel)
#endif
    for (int c = 0; c < config.n_chains; ++c) {
        try {
            if (chain_sweeps[c] > 0)
                run_chain(tau_density, config, chain_sweeps[c], chain_seeds[c],
                          r_hist, stride, outs[c]);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(loggas_chain_error)
#endif
            if (!chain_error)
                chain_error = std::current_exception();
        }
    }
    if (chain_error)
        std::rethrow_exception(chain_error);

    LogGasResult res;
    res.n_particles = config.n_particles;
    res.beta = config.beta;
    res.seed = config.seed;
    res.sample_stride = stride;

    std::vector<std::int64_t> bins(config.n_bins, 0);
    std::int64_t overflow = 0, inside = 0;
    std::vector<double> batches;
    long long accepted = 0, attempted = 0;
    double sigma_sum = 0.0;
    int live_chains = 0;
    for (const ChainOutput& o : outs) {
        if (o.attempted == 0)
            continue;
        ++live_chains;
        for (int k = 0; k < config.n_bins; ++k)
            bins[k] += o.bins[k];
        overflow += o.overflow;
        inside += o.inside;
        batches.insert(batches.end(), o.batch_means.begin(), o.batch_means.end());
        accepted += o.accepted;
        attempted += o.attempted;
        sigma_sum += o.sigma;
        res.samples.insert(res.samples.end(), o.recorded.begin(), o.recorded.end());
        res.recorded_sweeps += o.recorded_sweeps;
        res.total_sweeps += o.attempted / config.n_particles;
    }
    res.acceptance_rate = attempted > 0 ? static_cast<double>(accepted) / attempted : 0.0;
    res.sigma_final = live_chains > 0 ? sigma_sum / live_chains : config.sigma0;

    const double total_positions = static_cast<double>(inside + overflow);
    res.overflow_share = total_positions > 0 ? overflow / total_positions : 0.0;
    const double bin_w = r_hist / config.n_bins;
    res.marginal.radii.resize(config.n_bins);
    res.marginal.values.resize(config.n_bins);
    res.marginal.weights.resize(config.n_bins);
    for (int k = 0; k < config.n_bins; ++k) {
        const double area =
            3.14159265358979323846 * bin_w * bin_w * (2.0 * k + 1.0);
        res.marginal.radii[k] = (k + 0.5) * bin_w;
        res.marginal.weights[k] = area;
        res.marginal.values[k] =
            total_positions > 0 ? bins[k] / (total_positions * area) : 0.0;
    }

    if (!batches.empty()) {
        double m = 0.0;
        for (double b : batches)
            m += b;
        m /= batches.size();
        res.pair_log_moment = m;
        if (batches.size() > 1) {
            double var = 0.0;
            for (double b : batches)
                var += (b - m) * (b - m);
            var /= (batches.size() - 1.0);
            res.pair_log_se = std::sqrt(var / batches.size());
        }
    }
    return res;
}

double product_pair_log_moment(const MinimizerResult& result) {
    return 2.0 * result.E;
}

double two_particle_log_moment(const std::function<double(Vec2)>& tau_density,
                               double beta, double r_window, int n,
                               ExecMode mode) {
    if (n < 4)
        throw config_error("two-particle quadrature needs at least 4 cells per axis");
    if (!(beta < 4.0))
        throw config_error("two-particle weight is non-integrable for beta >= 4");
    const double h = 2.0 * r_window / n;
    const double w2 = r_window * r_window;

    // Outer variable x on Cartesian cell centers inside the window disk.
    std::vector<Vec2> xs;
    std::vector<double> tx;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 a{-r_window + (ix + 0.5) * h, -r_window + (iy + 0.5) * h};
            if (norm2(a) <= w2) {
                const double t = tau_density(a);
                if (t > 0.0) {
                    xs.push_back(a);
                    tx.push_back(t);
                }
            }
        }
    if (xs.empty())
        throw config_error("two-particle quadrature found no mass in the window");

    // Relative variable u = y - x on a polar grid, log-spaced in |u|. The
    // kernel |u|^{-beta/2} (and its ln|u| moment) integrates in closed form
    // over each radial cell, so the coincidence singularity costs nothing;
    // tau(x + u) is sampled at the cell's geometric-mean radius.
    const double a_exp = 2.0 - 0.5 * beta; // |u|^{a-1} after the area element
    const double u_min = 1e-4 * h;
    const double u_max = 2.0 * r_window + h;
    const int n_u = std::max(48, 2 * n);
    const int n_ang = std::max(32, n / 2);
    const double dt = std::log(u_max / u_min) / n_u;
    const double dang = 2.0 * 3.14159265358979323846 / n_ang;

    struct UCell {
        double cx, cy; // offset of the sampling point
        double w_mass; // integral of |u|^{-beta/2} over the cell
        double w_log;  // integral of |u|^{-beta/2} ln|u| over the cell
    };
    std::vector<UCell> cells;
    cells.reserve(static_cast<std::size_t>(n_u) * n_ang + 1);
    auto mass_to = [a_exp](double r) { return std::pow(r, a_exp) / a_exp; };
    auto logm_to = [a_exp](double r) {
        return std::pow(r, a_exp) * (a_exp * std::log(r) - 1.0) / (a_exp * a_exp);
    };
    // innermost disk |u| <= u_min, sampled at u = 0
    cells.push_back({0.0, 0.0, 2.0 * 3.14159265358979323846 * mass_to(u_min),
                     2.0 * 3.14159265358979323846 * logm_to(u_min)});
    for (int k = 0; k < n_u; ++k) {
        const double r0 = u_min * std::exp(k * dt);
        const double r1 = u_min * std::exp((k + 1) * dt);
        const double rc = std::sqrt(r0 * r1);
        const double wm = dang * (mass_to(r1) - mass_to(r0));
        const double wl = dang * (logm_to(r1) - logm_to(r0));
        for (int m = 0; m < n_ang; ++m) {
            const double ang = (m + 0.5) * dang;
            cells.push_back({rc * std::cos(ang), rc * std::sin(ang), wm, wl});
        }
    }

    std::vector<double> num_rows(xs.size(), 0.0), den_rows(xs.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double num = 0.0, den = 0.0;
        for (const UCell& c : cells) {
            const Vec2 y{xs[i].x + c.cx, xs[i].y + c.cy};
            if (norm2(y) > w2)
                continue; // the second particle is confined to the window too
            const double t = tau_density(y);
            if (t <= 0.0)
                continue;
            num += tx[i] * t * c.w_log;
            den += tx[i] * t * c.w_mass;
        }
        num_rows[i] = num;
        den_rows[i] = den;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += num_rows[i];
        den += den_rows[i];
    }
    return num / den;
}

double ks_distance_radii(const std::vector<Vec2>& samples,
                         const std::function<double(double)>& cdf) {
    if (samples.empty())
        throw config_error("KS distance needs samples");
    std::vector<double> radii(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        radii[i] = norm(samples[i]);
    std::sort(radii.begin(), radii.end());
    const double n = static_cast<double>(radii.size());
    double d = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double f = cdf(radii[i]);
        d = std::max(d, std::abs(f - i / n));
        d = std::max(d, std::abs(f - (i + 1) / n));
    }
    return d;
}

} // namespace logsurf
