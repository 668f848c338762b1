#include "rnncover/bounds.hpp"

#include "rnncover/losses.hpp"
#include "rnncover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rnncover {

namespace {

void set_flat_weight(MLPSpec& spec, std::size_t flat, double v) {
    for (Matrix& W : spec.weights) {
        if (flat < W.data.size()) {
            W.data[flat] = v;
            return;
        }
        flat -= W.data.size();
    }
    throw std::invalid_argument("grid class: free index out of range");
}

} // namespace

std::vector<MLPSpec> enumerate_grid_class(const GridClassSpec& spec) {
    const MLPSpec base = make_mlp(spec.dims, spec.base_weights);
    const std::size_t total = base.weight_count();
    if (spec.grid.empty())
        throw std::invalid_argument("grid class: empty value grid");
    std::vector<std::size_t> sorted = spec.free_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("grid class: duplicate free index");
    if (!sorted.empty() && sorted.back() >= total)
        throw std::invalid_argument("grid class: free index out of range");

    const std::size_t G = spec.grid.size();
    std::size_t count = 1;
    for (std::size_t i = 0; i < spec.free_indices.size(); ++i) {
        if (count > spec.cap / G)
            throw std::length_error("grid class: size exceeds cap");
        count *= G;
    }
    if (count > spec.cap)
        throw std::length_error("grid class: size exceeds cap");

    std::vector<MLPSpec> members;
    members.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        MLPSpec member = base;
        std::size_t rem = idx;
        // Last listed free coordinate varies fastest, so the first one
        // is the most significant lexicographic digit.
        for (std::size_t pos = spec.free_indices.size(); pos-- > 0;) {
            set_flat_weight(member, spec.free_indices[pos],
                            spec.grid[rem % G]);
            rem /= G;
        }
        members.push_back(std::move(member));
    }
    return members;
}

CoverResult empirical_cover_greedy(const std::vector<RealVec>& dist,
                                   double epsilon) {
    const std::size_t n = dist.size();
    if (n == 0) throw std::invalid_argument("cover: empty distance matrix");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("cover: negative radius");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n)
            throw std::invalid_argument("cover: matrix not square");
        if (dist[i][i] != 0.0)
            throw std::invalid_argument("cover: nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(dist[i][j] >= 0.0) || !std::isfinite(dist[i][j]))
                throw std::invalid_argument("cover: invalid distance");
            if (dist[i][j] != dist[j][i])
                throw std::invalid_argument("cover: matrix not symmetric");
        }
    }

    std::vector<bool> covered(n, false);
    std::vector<std::size_t> centers;
    std::size_t remaining = n;
    while (remaining > 0) {
        std::size_t best_c = 0, best_gain = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t gain = 0;
            for (std::size_t u = 0; u < n; ++u)
                if (!covered[u] && dist[c][u] <= epsilon) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
            }
        }
        centers.push_back(best_c);
        for (std::size_t u = 0; u < n; ++u)
            if (!covered[u] && dist[best_c][u] <= epsilon) {
                covered[u] = true;
                --remaining;
            }
    }

    bool certified = true;
    for (std::size_t u = 0; u < n && certified; ++u) {
        bool ok = false;
        for (std::size_t c : centers)
            if (dist[c][u] <= epsilon) {
                ok = true;
                break;
            }
        certified = ok;
    }
    return CoverResult{std::move(centers), epsilon, certified};
}

double single_layer_cover_bound(std::size_t d, std::size_t p, double epsilon,
                                double sigma) {
    if (d < 1 || p < 1)
        throw std::domain_error("single_layer_cover_bound: need d, p >= 1");
    if (!(epsilon > 0.0) || !(sigma > 0.0))
        throw std::domain_error("single_layer_cover_bound: need eps, sigma > 0");
    const double dd = static_cast<double>(d);
    const double es = epsilon * sigma;
    if (!(sigma < 5.0 * dd / epsilon))
        throw std::domain_error("single_layer_cover_bound: sigma too large");
    const double inner = (5.0 * dd - es) / es;
    const double outer = 5.0 * dd / es;
    if (!(inner > 1.0) || !(outer > 1.0))
        throw std::domain_error(
            "single_layer_cover_bound: eps*sigma outside the bound's domain");
    const double arg = 30.0 * std::pow(dd, 2.5) * std::sqrt(std::log(inner)) /
                       (std::pow(epsilon, 1.5) * sigma * sigma) *
                       std::log(outer);
    return static_cast<double>(p) * (dd + 1.0) * std::log(arg);
}

double composition_cover_bound(double logN1, double logN2) {
    if (!(logN1 >= 0.0) || !(logN2 >= 0.0))
        throw std::domain_error("composition_cover_bound: negative log size");
    return logN1 + logN2;
}

double multilayer_cover_bound(std::size_t w, double epsilon, double sigma) {
    if (w < 1) throw std::domain_error("multilayer_cover_bound: need w >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("multilayer_cover_bound: epsilon outside (0,1)");
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::domain_error("multilayer_cover_bound: sigma outside (0,1)");
    const double wd = static_cast<double>(w);
    const double ratio = 5.0 * wd * wd / (epsilon * sigma);
    return wd * std::log(wd) +
           3.0 * wd *
               std::log(30.0 * std::sqrt(5.0) * wd * wd / (epsilon * sigma) *
                        std::log(ratio));
}

double recurrent_cover_reduction(double epsilon, std::size_t T) {
    if (T < 1) throw std::domain_error("recurrent_cover_reduction: need T >= 1");
    if (!(epsilon > 0.0))
        throw std::domain_error("recurrent_cover_reduction: need epsilon > 0");
    return epsilon / static_cast<double>(T);
}

double rnn_cover_bound(std::size_t w, std::size_t T, double epsilon,
                       double sigma) {
    return multilayer_cover_bound(w, recurrent_cover_reduction(epsilon, T),
                                  sigma);
}

double ell2_cover_radius_from_tv(double B, std::size_t q, double epsilon) {
    if (!(B > 0.0)) throw std::domain_error("ell2_cover_radius: need B > 0");
    if (q < 1) throw std::domain_error("ell2_cover_radius: need q >= 1");
    if (!(epsilon >= 0.0))
        throw std::domain_error("ell2_cover_radius: need epsilon >= 0");
    return 2.0 * B * epsilon * std::sqrt(static_cast<double>(q));
}

LowerBound sample_complexity_lower(std::size_t w, std::size_t T,
                                   double epsilon, double delta, double C) {
    if (w < 1 || T < 1)
        throw std::domain_error("sample_complexity_lower: need w, T >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("sample_complexity_lower: epsilon outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("sample_complexity_lower: delta outside (0,1)");
    if (!(C > 0.0))
        throw std::domain_error("sample_complexity_lower: need C > 0");
    const double value =
        C *
        (static_cast<double>(w) * static_cast<double>(T) +
         std::log(1.0 / delta)) /
        (epsilon * epsilon);
    const bool in_range =
        T >= 3 && w >= 19 && epsilon < 1.0 / 40.0 && delta < 1.0 / 40.0;
    return LowerBound{value, in_range};
}

UpperBound sample_complexity_upper(std::size_t w, std::size_t T, double sigma,
                                   double epsilon, double delta,
                                   double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::domain_error("sample_complexity_upper: gamma outside (0,1/2)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("sample_complexity_upper: epsilon outside (0,1)");
    const double eps_inner = epsilon / 32.0;
    const double log_cover = rnn_cover_bound(w, T, gamma * eps_inner, sigma);

    auto bound_at = [&](unsigned long long m) {
        return pac_excess_risk_bound(m, log_cover, eps_inner, delta);
    };
    unsigned long long hi = 1;
    while (bound_at(hi) > epsilon) {
        if (hi > (1ull << 62))
            throw std::runtime_error(
                "sample_complexity_upper: search exceeded 2^62 samples");
        hi *= 2;
    }
    unsigned long long lo = hi / 2; // bound_at(lo) > epsilon or lo == 0
    while (hi - lo > 1 && lo > 0) {
        const unsigned long long mid = lo + (hi - lo) / 2;
        if (bound_at(mid) > epsilon)
            lo = mid;
        else
            hi = mid;
    }
    return UpperBound{hi, log_cover, eps_inner};
}

CertReport check_mean_distance_radius(const RadiusCheckOptions& opts,
                                      RngStream rng) {
    if (opts.q != 1)
        throw std::invalid_argument(
            "check_mean_distance_radius: exact output laws need q = 1");
    if (opts.pairs == 0 || opts.d == 0)
        throw std::invalid_argument("check_mean_distance_radius: empty setup");
    if (!(opts.sigma_in > 0.0))
        throw std::invalid_argument("check_mean_distance_radius: sigma_in <= 0");

    CertReport report;
    report.check = "mean-radius";
    report.rows.resize(opts.pairs);
    const double rhs = ell2_cover_radius_from_tv(opts.B, opts.q, opts.epsilon);

    parallel_for(opts.pairs, opts.threads, [&](std::size_t i) {
        RngStream st = rng.substream(i);
        RealVec x(opts.d), w1(opts.d), dir(opts.d);
        for (double& v : x) v = -0.4 + 0.8 * st.next_unit();
        for (double& v : w1) {
            v = 0.3 + 0.7 * st.next_unit();
            if (st.next_unit() > 0.5) v = -v;
        }
        for (double& v : dir) v = st.next_gaussian();

        auto law_params = [&](const RealVec& w) {
            double m = 0.0, n2 = 0.0;
            for (std::size_t a = 0; a < opts.d; ++a) {
                m += w[a] * x[a];
                n2 += w[a] * w[a];
            }
            return std::make_pair(m, opts.sigma_in * std::sqrt(n2));
        };

        // Shrink the weight perturbation until the MC-estimated TV of
        // the two output laws sits safely inside epsilon; the assertion
        // then has margin 2B(eps - TV) over the mean-estimation noise.
        const auto [m1, s1] = law_params(w1);
        double t = 1.0;
        RealVec w2;
        TVEstimate tv{1.0, 0.0, TvMethod::mixture_mc};
        for (int iter = 0; iter < 60; ++iter) {
            w2 = w1;
            for (std::size_t a = 0; a < opts.d; ++a) w2[a] += t * dir[a];
            const auto [m2, s2] = law_params(w2);
            if (s2 > 0.0) {
                tv = tv_mixture_mc(sigmoid_pushforward_gaussian(m1, s1),
                                   sigmoid_pushforward_gaussian(m2, s2),
                                   opts.mc_samples,
                                   st.substream(1000 + iter));
                if (tv.value <= 0.8 * opts.epsilon) break;
            }
            t *= 0.5;
        }
        const auto [m2, s2] = law_params(w2);

        auto mc_mean = [&](double m, double s, std::uint64_t tag) {
            RngStream ms = st.substream(tag);
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t k = 0; k < opts.mean_draws; ++k) {
                RngStream one = ms.substream(k);
                const double v = sigmoid_centered(m + s * one.next_gaussian());
                sum += v;
                sumsq += v * v;
            }
            const double mean = sum / static_cast<double>(opts.mean_draws);
            const double var = std::max(
                0.0, (sumsq - sum * mean) /
                         static_cast<double>(opts.mean_draws - 1));
            return MeanEstimate{
                mean, std::sqrt(var / static_cast<double>(opts.mean_draws))};
        };
        const MeanEstimate e1 = mc_mean(m1, s1, 2000);
        const MeanEstimate e2 = mc_mean(m2, s2, 2001);

        const double lhs = std::fabs(e1.mean - e2.mean);
        const double mean_se =
            std::sqrt(e1.stderr_ * e1.stderr_ + e2.stderr_ * e2.stderr_);
        const double tv_term =
            2.0 * opts.B * std::sqrt(static_cast<double>(opts.q)) * tv.stderr_;
        const bool pass =
            lhs <= rhs + opts.stderr_mult * (mean_se + tv_term);
        report.rows[i] = CertRow{static_cast<long long>(i), lhs, rhs,
                                 mean_se, tv_term, pass};
    });
    return report;
}

// ---------------------------------------------------------------------------
// Recurrent cover certification.
// ---------------------------------------------------------------------------

namespace {

constexpr double kEdge = 0.5 - 1e-9;

/// Exact law of one noisy block application Phi(W^T(x + z)) at probe x:
/// the pre-activation is N(W^T x, sigma^2 W^T W), pushed through the
/// coordinatewise sigmoid. Only q <= 2 is materialized.
struct BlockLaw {
    std::size_t q = 0;
    double mu0 = 0.0, mu1 = 0.0;
    double s = 0.0;                              // q = 1 scale
    double inv00 = 0.0, inv01 = 0.0, inv11 = 0.0; // q = 2 inverse cov
    double norm = 0.0;

    double density1(double y) const {
        return sigmoid_pushforward_density(y, mu0, s);
    }
    double density2(double y0, double y1) const {
        if (!(std::fabs(y0) < 0.5) || !(std::fabs(y1) < 0.5)) return 0.0;
        const double t0 = sigmoid_centered_inv(y0) - mu0;
        const double t1 = sigmoid_centered_inv(y1) - mu1;
        const double qf =
            inv00 * t0 * t0 + 2.0 * inv01 * t0 * t1 + inv11 * t1 * t1;
        return norm * std::exp(-0.5 * qf) /
               ((0.25 - y0 * y0) * (0.25 - y1 * y1));
    }
};

BlockLaw block_law(const Matrix& W, const RealVec& x, double sigma) {
    BlockLaw law;
    law.q = W.cols;
    RealVec mu(W.cols, 0.0);
    for (std::size_t j = 0; j < W.cols; ++j)
        for (std::size_t r = 0; r < W.rows; ++r)
            mu[j] += W.at(r, j) * x[r];
    if (W.cols == 1) {
        double n2 = 0.0;
        for (std::size_t r = 0; r < W.rows; ++r)
            n2 += W.at(r, 0) * W.at(r, 0);
        law.mu0 = mu[0];
        law.s = sigma * std::sqrt(n2);
        if (!(law.s > 0.0))
            throw std::runtime_error("block law: zero noise scale");
        return law;
    }
    double c00 = 0.0, c01 = 0.0, c11 = 0.0;
    for (std::size_t r = 0; r < W.rows; ++r) {
        c00 += W.at(r, 0) * W.at(r, 0);
        c01 += W.at(r, 0) * W.at(r, 1);
        c11 += W.at(r, 1) * W.at(r, 1);
    }
    const double s2 = sigma * sigma;
    c00 *= s2;
    c01 *= s2;
    c11 *= s2;
    const double det = c00 * c11 - c01 * c01;
    if (!(det > 1e-12 * (c00 * c11 + 1e-300)))
        throw std::runtime_error(
            "block law: singular pre-activation covariance (dependent "
            "weight columns)");
    law.mu0 = mu[0];
    law.mu1 = mu[1];
    law.inv00 = c11 / det;
    law.inv01 = -c01 / det;
    law.inv11 = c00 / det;
    law.norm = 1.0 / (2.0 * 3.14159265358979323846 * std::sqrt(det));
    return law;
}

double block_pair_tv(const Matrix& WA, const Matrix& WB, const RealVec& x,
                     double sigma, std::size_t intervals) {
    const BlockLaw a = block_law(WA, x, sigma);
    const BlockLaw b = block_law(WB, x, sigma);
    if (a.q == 1) {
        return tv_numeric_1d([&](double y) { return a.density1(y); },
                             [&](double y) { return b.density1(y); }, -kEdge,
                             kEdge, intervals)
            .value;
    }
    return tv_numeric_2d(
               [&](double y0, double y1) { return a.density2(y0, y1); },
               [&](double y0, double y1) { return b.density2(y0, y1); },
               -kEdge, kEdge, -kEdge, kEdge, intervals)
        .value;
}

/// Conditional readout means of path_draws noisy trajectories. The
/// caller passes the same stream for both members of a pair, coupling
/// their path noise (common random numbers).
RealVec readout_means(const MLPSpec& spec, const SequenceInput& u,
                      std::size_t q, std::size_t T, double sigma,
                      std::size_t path_draws, RngStream paths) {
    const Matrix& W = spec.weights[0];
    const std::size_t s = W.rows;
    RealVec mus(path_draws, 0.0);
    for (std::size_t m = 0; m < path_draws; ++m) {
        RngStream st = paths.substream(m);
        RealVec state(q - 1, 0.0);
        for (std::size_t t = 0; t + 1 < T; ++t) {
            RealVec x;
            x.reserve(s);
            x.insert(x.end(), state.begin(), state.end());
            for (std::size_t d = 0; d < u.p; ++d) x.push_back(u.at(d, t));
            const RealVec z = gaussian_sample(st, s, sigma);
            for (std::size_t r = 0; r < s; ++r) x[r] += z[r];
            const RealVec out = layer_forward(W, x);
            state.assign(out.begin(), out.end() - 1);
        }
        double mu = 0.0;
        std::size_t r = 0;
        for (; r < q - 1; ++r) mu += W.at(r, q - 1) * state[r];
        for (std::size_t d = 0; d < u.p; ++d, ++r)
            mu += W.at(r, q - 1) * u.at(d, T - 1);
        mus[m] = mu;
    }
    return mus;
}

} // namespace

RecurrentCoverReport certify_recurrent_cover(const RecurrentCoverJob& job,
                                             RngStream rng) {
    if (job.grid.dims.size() != 2)
        throw std::invalid_argument(
            "certify_recurrent_cover: block must be single-layer");
    if (job.q < 1 || job.q > 2)
        throw std::invalid_argument(
            "certify_recurrent_cover: exact block laws need q in {1, 2}");
    if (job.grid.dims[0] != job.p + job.q - 1 || job.grid.dims[1] != job.q)
        throw std::invalid_argument(
            "certify_recurrent_cover: block dims inconsistent with (p, q)");
    if (!(job.sigma > 0.0 && job.sigma < 1.0))
        throw std::invalid_argument(
            "certify_recurrent_cover: sigma outside (0, 1)");
    if (!(job.epsilon > 0.0))
        throw std::invalid_argument("certify_recurrent_cover: epsilon <= 0");
    if (job.block_probes.empty() || job.seq_probes.empty())
        throw std::invalid_argument("certify_recurrent_cover: no probes");
    const std::size_t s = job.grid.dims[0];
    for (const RealVec& x : job.block_probes) {
        if (x.size() != s)
            throw std::invalid_argument(
                "certify_recurrent_cover: block probe dimension mismatch");
        for (double v : x)
            if (!(v >= -0.5 && v <= 0.5))
                throw std::invalid_argument(
                    "certify_recurrent_cover: block probe outside the cube");
    }
    for (const SequenceInput& u : job.seq_probes)
        if (u.p != job.p || u.T != job.T)
            throw std::invalid_argument(
                "certify_recurrent_cover: sequence probe shape mismatch");
    if (job.path_repeats < 2)
        throw std::invalid_argument(
            "certify_recurrent_cover: need path_repeats >= 2 for a stderr");

    const std::vector<MLPSpec> members = enumerate_grid_class(job.grid);
    const std::size_t N = members.size();
    std::vector<std::size_t> subset = job.cover_subset;
    if (subset.empty())
        for (std::size_t i = 0; i < N; ++i) subset.push_back(i);
    for (std::size_t c : subset)
        if (c >= N)
            throw std::invalid_argument(
                "certify_recurrent_cover: cover index out of range");

    const double block_radius =
        recurrent_cover_reduction(job.epsilon, job.T);

    RecurrentCoverReport report;
    report.block_rows.check = "cover-block";
    report.recurrent_rows.check = "cover-recurrent";

    // Phase 1: exact block TVs for every (member, center) pair.
    struct PairRef {
        std::size_t member, center;
    };
    std::vector<PairRef> pairs;
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t c : subset) pairs.push_back(PairRef{m, c});
    report.block_rows.rows.resize(pairs.size());
    parallel_for(pairs.size(), job.threads, [&](std::size_t k) {
        const auto [m, c] = pairs[k];
        const long long id = static_cast<long long>(m * N + c);
        double worst = 0.0;
        if (m != c)
            for (const RealVec& x : job.block_probes)
                worst = std::max(
                    worst, block_pair_tv(members[m].weights[0],
                                         members[c].weights[0], x, job.sigma,
                                         job.block_quad_intervals));
        report.block_rows.rows[k] =
            CertRow{id, worst, block_radius, 0.0, 0.0, worst <= block_radius};
    });

    // Coverage bookkeeping and the admissible cross pairs.
    std::vector<bool> covered(N, false);
    std::vector<PairRef> admissible;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (!report.block_rows.rows[k].pass) continue;
        covered[pairs[k].member] = true;
        if (pairs[k].member != pairs[k].center) admissible.push_back(pairs[k]);
    }
    for (std::size_t m = 0; m < N; ++m)
        if (!covered[m]) report.uncovered.push_back(m);

    // Phase 2: readout TV of every admissible cross pair.
    report.recurrent_rows.rows.resize(admissible.size());
    parallel_for(admissible.size(), job.threads, [&](std::size_t k) {
        const auto [m, c] = admissible[k];
        const long long id = static_cast<long long>(m * N + c);
        RngStream pair_rng = rng.substream(static_cast<std::uint64_t>(id));
        const Matrix& WA = members[m].weights[0];
        const Matrix& WB = members[c].weights[0];
        double a_n2 = 0.0, b_n2 = 0.0;
        for (std::size_t r = 0; r < WA.rows; ++r) {
            a_n2 += WA.at(r, job.q - 1) * WA.at(r, job.q - 1);
            b_n2 += WB.at(r, job.q - 1) * WB.at(r, job.q - 1);
        }
        const double sA = job.sigma * std::sqrt(a_n2);
        const double sB = job.sigma * std::sqrt(b_n2);
        if (!(sA > 0.0) || !(sB > 0.0))
            throw std::runtime_error(
                "certify_recurrent_cover: zero readout noise scale");

        double sum = 0.0, sumsq = 0.0;
        for (std::size_t r = 0; r < job.path_repeats; ++r) {
            double worst = 0.0;
            for (std::size_t pi = 0; pi < job.seq_probes.size(); ++pi) {
                RngStream paths =
                    pair_rng.substream(r).substream(pi);
                const RealVec muA =
                    readout_means(members[m], job.seq_probes[pi], job.q,
                                  job.T, job.sigma, job.path_draws, paths);
                const RealVec muB =
                    readout_means(members[c], job.seq_probes[pi], job.q,
                                  job.T, job.sigma, job.path_draws, paths);
                const double inv_m =
                    1.0 / static_cast<double>(job.path_draws);
                auto densA = [&](double y) {
                    double acc = 0.0;
                    for (double mu : muA)
                        acc += sigmoid_pushforward_density(y, mu, sA);
                    return acc * inv_m;
                };
                auto densB = [&](double y) {
                    double acc = 0.0;
                    for (double mu : muB)
                        acc += sigmoid_pushforward_density(y, mu, sB);
                    return acc * inv_m;
                };
                const double tv =
                    tv_numeric_1d(densA, densB, -kEdge, kEdge,
                                  job.quad_intervals)
                        .value;
                worst = std::max(worst, tv);
            }
            sum += worst;
            sumsq += worst * worst;
        }
        const double R = static_cast<double>(job.path_repeats);
        const double mean = sum / R;
        const double var = std::max(0.0, (sumsq - sum * mean) / (R - 1.0));
        const double se = std::sqrt(var / R);
        const bool pass = mean <= job.epsilon + job.stderr_mult * se;
        report.recurrent_rows.rows[k] = CertRow{id, mean, job.epsilon, se,
                                                0.0, pass};
    });

    report.certified =
        report.uncovered.empty() && report.recurrent_rows.all_pass();
    return report;
}

} // namespace rnncover
