// Release gate: twelve checks covering the oracle agreements, lemma
// certifications, bound fidelity, scaling behavior, learner equivalence
// and artifact determinism. Prints one PASS/FAIL line per check and
// exits nonzero if any fails.

#include "rnncover/bounds.hpp"
#include "rnncover/csv.hpp"
#include "rnncover/losses.hpp"
#include "rnncover/networks.hpp"
#include "rnncover/numerics.hpp"
#include "rnncover/parallel.hpp"
#include "rnncover/tv.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace rnncover;

namespace {

std::size_t worker_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : std::min<unsigned>(hc, 8);
}

double normal_density(double x, double m, double s) {
    const double z = (x - m) / s;
    return std::exp(-0.5 * z * z) /
           (s * std::sqrt(2.0 * 3.14159265358979323846));
}

SequenceInput random_sequence(std::size_t p, std::size_t T, RngStream st) {
    RealVec data(p * T);
    for (double& v : data) v = st.next_unit() - 0.5;
    return make_sequence(p, T, std::move(data));
}

MLPSpec random_block(std::size_t s, std::size_t q, double scale,
                     RngStream st) {
    Matrix W(s, q);
    for (double& v : W.data) v = scale * (2.0 * st.next_unit() - 1.0);
    return make_mlp({s, q}, {std::move(W)});
}

// --- 1: closed-form TV vs quadrature and Monte Carlo ---------------------

bool gate_tv_oracles(std::string& detail) {
    RngStream rng(4242, 1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        RngStream st = rng.substream(i);
        const double m1 = 3.0 * st.next_unit() - 1.5;
        const double m2 = 3.0 * st.next_unit() - 1.5;
        const double s = 0.25 + 0.95 * st.next_unit();
        const double lo = std::min(m1, m2) - 10.0 * s;
        const double hi = std::max(m1, m2) + 10.0 * s;
        const double quad =
            tv_numeric_1d([&](double x) { return normal_density(x, m1, s); },
                          [&](double x) { return normal_density(x, m2, s); },
                          lo, hi)
                .value;
        const double closed = tv_gaussian_pair({m1}, {m2}, s).value;
        worst = std::max(worst, std::fabs(quad - closed));
    }
    if (worst > 1e-6) {
        detail = "quadrature deviates by " + fmt_double(worst);
        return false;
    }

    std::atomic<int> hits{0};
    RngStream mc_rng(4242, 11);
    parallel_for(100, worker_threads(), [&](std::size_t i) {
        RngStream st = mc_rng.substream(i);
        const double m1 = 2.0 * st.next_unit() - 1.0;
        const double m2 = 2.0 * st.next_unit() - 1.0;
        const double s = 0.3 + 0.9 * st.next_unit();
        const GaussianMixture a = make_mixture(1, s, {{m1}});
        const GaussianMixture b = make_mixture(1, s, {{m2}});
        const TVEstimate est =
            tv_mixture_mc(a.handle(), b.handle(), 100000, st.substream(7));
        const double truth = tv_gaussian_pair({m1}, {m2}, s).value;
        if (std::fabs(est.value - truth) <= 3.0 * est.stderr_) ++hits;
    });
    detail = "worst quadrature gap " + fmt_double(worst) + ", MC hits " +
             std::to_string(hits.load()) + "/100";
    return hits >= 99;
}

// --- 2: data processing certification ------------------------------------

bool gate_dpi(std::string& detail) {
    TvCheckOptions opts;
    opts.threads = worker_threads();
    const CertReport rep = check_dpi(200, opts, RngStream(4242, 2));
    int fails = 0;
    for (const CertRow& r : rep.rows) fails += r.pass ? 0 : 1;
    detail = std::to_string(rep.rows.size() - fails) + "/200 trials";
    return rep.all_pass();
}

// --- 3: marginal contraction and concatenation preservation --------------

bool gate_first_last_concat(std::string& detail) {
    TvCheckOptions opts;
    opts.threads = worker_threads();
    const CertReport fl =
        check_first_last_contraction(100, opts, RngStream(4242, 3));
    const CertReport cc =
        check_concat_preservation(100, opts, RngStream(4242, 4));
    detail = std::string("marginals ") + (fl.all_pass() ? "ok" : "FAIL") +
             ", concatenation " + (cc.all_pass() ? "ok" : "FAIL");
    return fl.all_pass() && cc.all_pass();
}

// --- 4: readout rescaling leaves the carried state untouched -------------

bool gate_rescale_exactness(std::string& detail) {
    RngStream rng(4242, 5);
    const std::size_t T = 4;
    for (int net = 0; net < 50; ++net) {
        RngStream st = rng.substream(net);
        const std::size_t q = 2 + net % 2;
        const std::size_t p = 1 + net % 3;
        const std::size_t s = p + q - 1;
        const MLPSpec spec = random_block(s, q, 1.5, st.substream(1));
        const double c = 0.2 + 3.0 * st.next_unit();
        const MLPSpec scaled = rescale_last_row(spec, c);
        const RecurrentConfig cfg = make_recurrent(spec, q, p, T);
        const RecurrentConfig cfg2 = make_recurrent(scaled, q, p, T);
        for (int probe = 0; probe < 100; ++probe) {
            const SequenceInput u =
                random_sequence(p, T, st.substream(100 + probe));
            for (std::size_t t = 0; t < T; ++t) {
                const RealVec a = recurrent_apply(cfg, u, t);
                const RealVec b = recurrent_apply(cfg2, u, t);
                for (std::size_t d = 0; d + 1 < q; ++d)
                    if (a[d] != b[d]) {
                        detail = "carried state moved at net " +
                                 std::to_string(net);
                        return false;
                    }
                const bool sa = a[q - 1] >= 0.0, sb = b[q - 1] >= 0.0;
                if (sa != sb) {
                    detail = "readout sign flipped at net " +
                             std::to_string(net);
                    return false;
                }
            }
        }
    }
    detail = "50 nets x 100 sequences x 4 steps bit-exact";
    return true;
}

// --- 5: margin surrogate bounded by the classification error -------------

bool gate_margin_surrogate(std::string& detail) {
    RngStream rng(4242, 6);
    const double gamma = 0.1;
    double worst_slack = -1.0;
    for (int inst = 0; inst < 20; ++inst) {
        RngStream st = rng.substream(inst);
        const std::size_t p = 1 + inst % 2, q = 2, s = p + q - 1, T = 3;
        const MLPSpec net = random_block(s, q, 1.2, st.substream(1));
        const MLPSpec teacher = random_block(s, q, 1.2, st.substream(2));
        const RecurrentConfig ncfg = make_recurrent(net, q, p, T);
        const RecurrentConfig tcfg = make_recurrent(teacher, q, p, T);

        // threshold from an independent probe sample
        RealVec probe_vals;
        for (int j = 0; j < 300; ++j)
            probe_vals.push_back(recurrent_hypothesis(
                ncfg, random_sequence(p, T, st.substream(1000 + j))));
        RealVec zgrid;
        for (int k = 1; k <= 20; ++k) zgrid.push_back(0.015 * k);
        const MarginThreshold mt =
            margin_threshold_from_sample(probe_vals, zgrid, 0.25);
        const MLPSpec scaled =
            rescale_last_row(net, margin_rescale_factor(gamma, mt.z));
        const RecurrentConfig scfg = make_recurrent(scaled, q, p, T);

        // risks and the small-margin mass on one evaluation sample
        double ramp_sum = 0.0, zo_sum = 0.0, eta_sum = 0.0;
        const int m = 500;
        for (int j = 0; j < m; ++j) {
            const SequenceInput u =
                random_sequence(p, T, st.substream(5000 + j));
            const double f = recurrent_hypothesis(ncfg, u);
            const double fs = recurrent_hypothesis(scfg, u);
            const double y =
                recurrent_hypothesis(tcfg, u) >= 0.0 ? 1.0 : -1.0;
            ramp_sum += ramp_loss(fs, y, gamma);
            zo_sum += zero_one_loss(f, y);
            eta_sum += std::fabs(f) < mt.z ? 1.0 : 0.0;
        }
        const double lhs = ramp_sum / m;
        const double rhs = zo_sum / m + eta_sum / m + 0.02;
        worst_slack = std::max(worst_slack, lhs - rhs);
        if (lhs > rhs) {
            detail = "instance " + std::to_string(inst) + ": ramp " +
                     fmt_double(lhs) + " > " + fmt_double(rhs);
            return false;
        }
    }
    detail = "worst slack " + fmt_double(worst_slack);
    return true;
}

// --- 6: T-step inflation of the block cover radius ------------------------

bool gate_recurrent_inflation(std::string& detail) {
    RecurrentCoverJob job;
    job.grid.dims = {2, 2};
    job.grid.base_weights = {Matrix(2, 2, {0.0, 0.5, 3.0, 0.8})};
    job.grid.free_indices = {0};
    job.grid.grid = {-1.0, 0.0, 1.0};
    job.q = 2;
    job.p = 1;
    job.T = 3;
    job.sigma = 0.5;
    job.epsilon = 0.8;
    job.threads = worker_threads();
    RngStream probes(4242, 7);
    for (int i = 0; i < 4; ++i) {
        RngStream st = probes.substream(i);
        job.block_probes.push_back(
            RealVec{0.9 * st.next_unit() - 0.45, 0.9 * st.next_unit() - 0.45});
    }
    for (int i = 0; i < 3; ++i)
        job.seq_probes.push_back(
            random_sequence(1, 3, probes.substream(100 + i)));

    const RecurrentCoverReport rep =
        certify_recurrent_cover(job, RngStream(4242, 17));
    std::size_t cross = 0;
    for (const CertRow& r : rep.recurrent_rows.rows)
        if (r.trial_id / 3 != r.trial_id % 3) ++cross;
    detail = std::to_string(rep.recurrent_rows.rows.size()) +
             " admissible pairs (" + std::to_string(cross) + " cross)";
    if (cross == 0) {
        detail += ": premise never fires, nothing certified";
        return false;
    }
    return rep.certified;
}

// --- 7: TV radius controls the distance of derandomized means -------------

bool gate_mean_radius(std::string& detail) {
    RadiusCheckOptions opts;
    opts.pairs = 50;
    opts.mc_samples = 100000;
    opts.mean_draws = 100000;
    opts.stderr_mult = 5.0;
    opts.threads = worker_threads();
    const CertReport rep = check_mean_distance_radius(opts, RngStream(4242, 8));
    int fails = 0;
    for (const CertRow& r : rep.rows) fails += r.pass ? 0 : 1;
    detail = std::to_string(rep.rows.size() - fails) + "/50 pairs";
    return rep.all_pass();
}

// --- 8: formula fidelity against a re-derived oracle ----------------------

long double oracle_single(long double d, long double p, long double eps,
                          long double sig) {
    const long double l1 = std::log((5.0L * d - eps * sig) / (eps * sig));
    const long double l2 = std::log(5.0L * d / (eps * sig));
    const long double inner = std::log(30.0L) + 2.5L * std::log(d) +
                              0.5L * std::log(l1) - 1.5L * std::log(eps) -
                              2.0L * std::log(sig) + std::log(l2);
    return p * (d + 1.0L) * inner;
}

long double oracle_multilayer(long double w, long double eps, long double sig) {
    const long double inner = std::log(30.0L) + 0.5L * std::log(5.0L) +
                              2.0L * std::log(w) - std::log(eps) -
                              std::log(sig) +
                              std::log(std::log(5.0L * w * w / (eps * sig)));
    return w * std::log(w) + 3.0L * w * inner;
}

long double oracle_lower(long double w, long double T, long double eps,
                         long double delta, long double C) {
    return C * w * T / (eps * eps) +
           C * std::log(1.0L / delta) / (eps * eps);
}

// Checks that vals is strictly monotone in the stated direction.
bool strictly_monotone(const RealVec& vals, bool increasing) {
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (increasing ? vals[i] <= vals[i - 1] : vals[i] >= vals[i - 1])
            return false;
    }
    return true;
}

bool gate_formula_fidelity(std::string& detail) {
    const auto rel_gap = [](double main_v, long double oracle_v) {
        const long double denom =
            std::max<long double>(std::fabs(oracle_v), 1e-30L);
        return static_cast<double>(std::fabs(main_v - oracle_v) / denom);
    };
    double worst = 0.0;
    std::size_t points = 0;
    auto geom = [](double a, double b, int n) {
        RealVec v;
        for (int i = 0; i < n; ++i)
            v.push_back(a * std::pow(b / a, i / (n - 1.0)));
        return v;
    };
    auto sweep = [&](const char* what, bool increasing,
                     const std::function<double(std::size_t)>& val,
                     std::size_t n) {
        RealVec vals;
        for (std::size_t i = 0; i < n; ++i) vals.push_back(val(i));
        if (!strictly_monotone(vals, increasing)) {
            detail = what;
            return false;
        }
        return true;
    };

    const std::vector<std::size_t> ds{1, 2, 3, 5, 8};
    const std::vector<std::size_t> ps{1, 3};
    const RealVec eps10 = geom(0.02, 0.45, 10);
    const RealVec sig10 = geom(0.02, 0.9, 10);
    for (std::size_t d : ds)
        for (std::size_t pp : ps)
            for (double e : eps10)
                for (double s : sig10) {
                    const double v = single_layer_cover_bound(d, pp, e, s);
                    worst =
                        std::max(worst, rel_gap(v, oracle_single(d, pp, e, s)));
                    ++points;
                }
    for (double e : eps10)
        for (double s : sig10) {
            if (!sweep("single-layer bound not increasing in d", true,
                       [&](std::size_t i) {
                           return single_layer_cover_bound(ds[i], 1, e, s);
                       },
                       ds.size()))
                return false;
            if (single_layer_cover_bound(2, 3, e, s) <=
                single_layer_cover_bound(2, 1, e, s)) {
                detail = "single-layer bound not increasing in p";
                return false;
            }
        }
    for (std::size_t d : ds) {
        if (!sweep("single-layer bound not decreasing in epsilon", false,
                   [&](std::size_t i) {
                       return single_layer_cover_bound(d, 2, eps10[i], 0.3);
                   },
                   eps10.size()))
            return false;
        if (!sweep("single-layer bound not decreasing in sigma", false,
                   [&](std::size_t i) {
                       return single_layer_cover_bound(d, 2, 0.2, sig10[i]);
                   },
                   sig10.size()))
            return false;
    }

    const std::vector<std::size_t> ws{2, 5, 7, 19, 33, 50, 120, 361, 700, 1000};
    const RealVec eps_m = geom(0.02, 0.9, 10);
    const RealVec sig_m = geom(0.02, 0.9, 10);
    for (std::size_t w : ws)
        for (double e : eps_m)
            for (double s : sig_m) {
                const double v = multilayer_cover_bound(w, e, s);
                worst = std::max(worst, rel_gap(v, oracle_multilayer(w, e, s)));
                ++points;
            }
    for (double e : eps_m) {
        if (!sweep("multilayer bound not increasing in w", true,
                   [&](std::size_t i) {
                       return multilayer_cover_bound(ws[i], e, 0.25);
                   },
                   ws.size()))
            return false;
        if (!sweep("multilayer bound not decreasing in sigma", false,
                   [&](std::size_t i) {
                       return multilayer_cover_bound(19, e, sig_m[i]);
                   },
                   sig_m.size()))
            return false;
    }
    for (double s : sig_m)
        if (!sweep("multilayer bound not decreasing in epsilon", false,
                   [&](std::size_t i) {
                       return multilayer_cover_bound(19, eps_m[i], s);
                   },
                   eps_m.size()))
            return false;

    const std::vector<std::size_t> wr{5, 7, 19, 50, 361};
    const std::vector<std::size_t> Tr{2, 3, 4, 10, 16, 64, 100, 256, 1024,
                                      4096};
    const RealVec eps_r = geom(0.05, 0.8, 5);
    const RealVec sig_r = geom(0.05, 0.8, 4);
    for (std::size_t w : wr)
        for (double e : eps_r)
            for (double s : sig_r)
                for (std::size_t T : Tr) {
                    const double v = rnn_cover_bound(w, T, e, s);
                    worst = std::max(
                        worst,
                        rel_gap(v, oracle_multilayer(
                                       w, e / static_cast<long double>(T), s)));
                    ++points;
                }
    for (double e : eps_r)
        for (double s : sig_r) {
            if (!sweep("recurrent bound not increasing in T", true,
                       [&](std::size_t i) {
                           return rnn_cover_bound(19, Tr[i], e, s);
                       },
                       Tr.size()))
                return false;
            if (!sweep("recurrent bound not increasing in w", true,
                       [&](std::size_t i) {
                           return rnn_cover_bound(wr[i], 8, e, s);
                       },
                       wr.size()))
                return false;
        }

    const std::vector<std::size_t> wl{19, 20, 40, 100, 361};
    const std::vector<std::size_t> Tl{3, 5, 17, 129, 4096};
    const RealVec eps_l = geom(0.005, 0.024, 5);
    const RealVec del_l = geom(0.001, 0.024, 8);
    for (std::size_t w : wl)
        for (std::size_t T : Tl)
            for (double e : eps_l)
                for (double dl : del_l) {
                    const LowerBound lb = sample_complexity_lower(w, T, e, dl);
                    worst = std::max(
                        worst, rel_gap(lb.value, oracle_lower(w, T, e, dl, 1.0L)));
                    ++points;
                    if (!lb.in_stated_range) {
                        detail = "stated-range flag wrong on valid point";
                        return false;
                    }
                }
    for (double e : eps_l)
        for (double dl : del_l) {
            if (!sweep("lower bound not increasing in w", true,
                       [&](std::size_t i) {
                           return sample_complexity_lower(wl[i], 5, e, dl).value;
                       },
                       wl.size()))
                return false;
            if (!sweep("lower bound not increasing in T", true,
                       [&](std::size_t i) {
                           return sample_complexity_lower(19, Tl[i], e, dl).value;
                       },
                       Tl.size()))
                return false;
        }
    for (std::size_t w : wl) {
        if (!sweep("lower bound not decreasing in epsilon", false,
                   [&](std::size_t i) {
                       return sample_complexity_lower(w, 7, eps_l[i], 0.01).value;
                   },
                   eps_l.size()))
            return false;
        if (!sweep("lower bound not decreasing in delta", false,
                   [&](std::size_t i) {
                       return sample_complexity_lower(w, 7, 0.01, del_l[i]).value;
                   },
                   del_l.size()))
            return false;
    }

    detail = std::to_string(points) + " points, worst relative gap " +
             fmt_double(worst);
    return worst <= 1e-9;
}

// --- 9: upper bound grows like log T, lower bound exactly linearly --------

bool gate_scaling_separation(std::string& detail) {
    std::vector<double> Ts, ups, lows;
    for (std::size_t T = 2; T <= 4096; T *= 2) {
        const UpperBound up = sample_complexity_upper(19, T, 0.01, 0.1, 0.1, 0.1);
        const LowerBound low = sample_complexity_lower(19, T, 0.1, 0.1);
        Ts.push_back(static_cast<double>(T));
        ups.push_back(static_cast<double>(up.m));
        lows.push_back(low.value);
    }
    const std::size_t n = Ts.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(Ts[i]);
        my += ups[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(Ts[i]) - mx) * (ups[i] - my);
        sxx += (std::log(Ts[i]) - mx) * (std::log(Ts[i]) - mx);
        sst += (ups[i] - my) * (ups[i] - my);
    }
    const double b = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = my + b * (std::log(Ts[i]) - mx);
        ssr += (ups[i] - fit) * (ups[i] - fit);
    }
    const double r2 = 1.0 - ssr / sst;

    // exact linearity of the lower bound in T
    const double slope = (lows[1] - lows[0]) / (Ts[1] - Ts[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = lows[0] + slope * (Ts[i] - Ts[0]);
        if (std::fabs(lows[i] - expect) > 1e-9 * std::fabs(expect)) {
            detail = "lower bound deviates from linearity at T=" +
                     std::to_string(static_cast<std::size_t>(Ts[i]));
            return false;
        }
    }

    const double ratio16 = lows[3] / ups[3];     // T = 16
    const double ratio4096 = lows[11] / ups[11]; // T = 4096
    const double factor = ratio4096 / ratio16;
    detail = "R2 " + fmt_double(r2) + ", separation factor " +
             fmt_double(factor);
    return r2 >= 0.99 && factor >= 10.0;
}

// --- 10: grid ERM equals exhaustive search --------------------------------

bool gate_erm_equivalence(std::string& detail) {
    RngStream rng(4242, 9);
    for (int inst = 0; inst < 20; ++inst) {
        RngStream st = rng.substream(inst);
        const std::size_t q = 2, p = 1, s = 2, T = 3;
        GridClassSpec gspec;
        gspec.dims = {s, q};
        Matrix base(s, q);
        for (double& v : base.data) v = 2.0 * st.next_unit() - 1.0;
        gspec.base_weights = {std::move(base)};
        gspec.free_indices = {0, 1, 3};
        gspec.grid = {-0.8, 0.1, 0.9};
        const std::vector<MLPSpec> members = enumerate_grid_class(gspec);
        if (members.size() != 27) {
            detail = "class size " + std::to_string(members.size());
            return false;
        }
        SampleSet S;
        for (int j = 0; j < 8; ++j) {
            SequenceInput u = random_sequence(p, T, st.substream(50 + j));
            S.items.push_back(
                make_labeled(std::move(u), j % 2 == 0 ? 1.0 : -1.0));
        }
        const ErmResult got =
            erm_grid(members, 0.0, q, p, T, false, S, 0.1, 1, st.substream(99));

        std::size_t best = 0;
        double best_risk = 2.0;
        for (std::size_t c = 0; c < members.size(); ++c) {
            const RecurrentConfig cfg = make_recurrent(members[c], q, p, T);
            double sum = 0.0;
            for (const auto& item : S.items)
                sum +=
                    ramp_loss(recurrent_hypothesis(cfg, item.u), item.y, 0.1);
            const double risk = sum / static_cast<double>(S.size());
            if (risk < best_risk) {
                best_risk = risk;
                best = c;
            }
        }
        if (got.index != best || std::fabs(got.risk - best_risk) > 1e-12) {
            detail = "instance " + std::to_string(inst) + ": got " +
                     std::to_string(got.index) + " want " +
                     std::to_string(best);
            return false;
        }

        // constructed tie: duplicate the winner ahead of itself
        std::vector<MLPSpec> dup;
        dup.push_back(members[best]);
        dup.push_back(members[(best + 5) % 27]);
        dup.push_back(members[best]);
        const ErmResult tie =
            erm_grid(dup, 0.0, q, p, T, false, S, 0.1, 1, st.substream(99));
        if (tie.index != 0) {
            detail = "tie broke to index " + std::to_string(tie.index);
            return false;
        }
    }
    detail = "20 instances, 27 members each, ties to smallest index";
    return true;
}

// --- 11: backpropagation against central differences -----------------------

bool gate_gradient_check(std::string& detail) {
    RngStream rng(4242, 10);
    int tested_zero = 0, tested_noisy = 0;
    double worst_zero = 0.0, worst_noisy = 0.0;
    for (int inst = 0; inst < 200 && (tested_zero < 20 || tested_noisy < 20);
         ++inst) {
        RngStream st = rng.substream(inst);
        const std::size_t q = 2, p = 1 + inst % 2, s = p + q - 1, T = 3;
        const MLPSpec spec = random_block(s, q, 1.0, st.substream(1));
        SampleSet S;
        for (int j = 0; j < 4; ++j) {
            SequenceInput u = random_sequence(p, T, st.substream(40 + j));
            S.items.push_back(
                make_labeled(std::move(u), j % 2 == 0 ? 1.0 : -1.0));
        }
        for (const double sigma : {0.0, 0.3}) {
            if ((sigma == 0.0 ? tested_zero : tested_noisy) >= 20) continue;
            const TrainProblem prob{q,     p, T, false, 0.4,
                                    sigma, 3, st.substream(4)};
            const std::vector<Matrix> grad =
                fixed_noise_risk_grad(prob, S, spec);
            auto central = [&](std::size_t i, double h) {
                MLPSpec up = spec, dn = spec;
                up.weights[0].data[i] += h;
                dn.weights[0].data[i] -= h;
                return (fixed_noise_risk(prob, S, up) -
                        fixed_noise_risk(prob, S, dn)) /
                       (2.0 * h);
            };
            bool kink_free = true;
            double max_rel = 0.0;
            for (std::size_t i = 0; i < spec.weights[0].data.size(); ++i) {
                const double fd1 = central(i, 1e-5);
                const double fd2 = central(i, 2.5e-6);
                const double an = grad[0].data[i];
                // The denominator floor keeps difference-quotient
                // roundoff (absolute, ~1e-11) from registering as a
                // relative error on near-zero components.
                const double scale =
                    std::max({std::fabs(fd2), std::fabs(an), 1e-4});
                if (std::fabs(fd1 - fd2) > 1e-6 * scale) {
                    kink_free = false; // step-size unstable: straddles a kink
                    break;
                }
                max_rel = std::max(max_rel, std::fabs(fd2 - an) / scale);
            }
            if (!kink_free) continue;
            const double tol = sigma == 0.0 ? 1e-5 : 1e-4;
            if (max_rel > tol) {
                detail = "relative error " + fmt_double(max_rel) +
                         " at sigma " + fmt_double(sigma);
                return false;
            }
            if (sigma == 0.0) {
                worst_zero = std::max(worst_zero, max_rel);
                ++tested_zero;
            } else {
                worst_noisy = std::max(worst_noisy, max_rel);
                ++tested_noisy;
            }
        }
    }
    detail = "20+20 nets, worst rel err " + fmt_double(worst_zero) + " / " +
             fmt_double(worst_noisy);
    return tested_zero >= 20 && tested_noisy >= 20;
}

// --- 12: artifacts are byte-identical across runs and thread counts -------

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " >> acceptance_cli.log 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc;
}

bool gate_determinism(std::string& detail) {
    const char* env = std::getenv("RNNCOVER_CLI");
    const std::string cli = env ? env : "./tools/rnncover";
    std::remove("acceptance_cli.log");

    const std::string suite_cfg =
        "master_seed = 777\n"
        "dpi_trials = 40\nfirst_last_trials = 24\nconcat_trials = 24\n"
        "coupling_trials = 6\ncomposition_trials = 6\nradius_pairs = 8\n"
        "mc_samples = 30000\nradius_mean_draws = 30000\n"
        "quad_intervals = 2048\ncover_path_draws = 128\n"
        "cover_path_repeats = 2\ncover_block_probes = 2\n"
        "cover_seq_probes = 2\ncover_block_quad_intervals = 384\n";
    write_text_file("acc12_suite.cfg", suite_cfg);
    write_text_file("acc12_bounds.cfg", "master_seed = 777\n");

    struct Run {
        const char* sub;
        const char* cfg;
        const char* out;
        const char* threads;
    };
    const std::vector<Run> runs{
        {"suite", "acc12_suite.cfg", "acc12_s1a.csv", "1"},
        {"suite", "acc12_suite.cfg", "acc12_s1b.csv", "1"},
        {"suite", "acc12_suite.cfg", "acc12_s8.csv", "8"},
        {"bounds", "acc12_bounds.cfg", "acc12_b1a.csv", "1"},
        {"bounds", "acc12_bounds.cfg", "acc12_b1b.csv", "1"},
        {"bounds", "acc12_bounds.cfg", "acc12_b8.csv", "8"},
    };
    for (const Run& r : runs) {
        const int rc = run_cli(cli, std::string(r.sub) + " --config " + r.cfg +
                                        " --out " + r.out + " --threads " +
                                        r.threads);
        if (rc != 0) {
            detail = std::string("CLI run failed (") + r.sub + ", threads " +
                     r.threads + ")";
            return false;
        }
    }
    const std::string s1a = read_text_file("acc12_s1a.csv");
    const std::string s1b = read_text_file("acc12_s1b.csv");
    const std::string s8 = read_text_file("acc12_s8.csv");
    const std::string b1a = read_text_file("acc12_b1a.csv");
    const std::string b1b = read_text_file("acc12_b1b.csv");
    const std::string b8 = read_text_file("acc12_b8.csv");
    for (const char* f :
         {"acc12_s1a.csv", "acc12_s1b.csv", "acc12_s8.csv", "acc12_b1a.csv",
          "acc12_b1b.csv", "acc12_b8.csv", "acc12_suite.cfg",
          "acc12_bounds.cfg", "acceptance_cli.log"})
        std::remove(f);
    if (s1a.empty() || b1a.empty()) {
        detail = "artifacts missing or empty";
        return false;
    }
    if (s1a != s1b || s1a != s8) {
        detail = "suite artifacts differ";
        return false;
    }
    if (b1a != b1b || b1a != b8) {
        detail = "bounds artifacts differ";
        return false;
    }
    detail = "suite and bounds stable across reruns and threads {1,8}";
    return true;
}

} // namespace

int main() {
    struct Gate {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Gate> gates{
        {1, "closed-form vs numeric and Monte Carlo TV", gate_tv_oracles},
        {2, "data-processing contraction certification", gate_dpi},
        {3, "marginal and concatenation TV lemmas", gate_first_last_concat},
        {4, "readout rescaling exactness", gate_rescale_exactness},
        {5, "margin surrogate vs classification error", gate_margin_surrogate},
        {6, "recurrent cover radius inflation", gate_recurrent_inflation},
        {7, "derandomized mean distance radius", gate_mean_radius},
        {8, "bound formula fidelity and monotonicity", gate_formula_fidelity},
        {9, "logarithmic vs linear scaling separation", gate_scaling_separation},
        {10, "grid ERM equals exhaustive search", gate_erm_equivalence},
        {11, "backpropagation gradient fidelity", gate_gradient_check},
        {12, "artifact determinism across threads", gate_determinism},
    };
    int failures = 0;
    for (const Gate& g : gates) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = g.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        std::printf("%s %2d %-48s %7.2fs  %s\n", ok ? "PASS" : "FAIL", g.id,
                    g.name, secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) {
        std::printf("%d of 12 checks failed\n", failures);
        return 1;
    }
    std::printf("all 12 checks passed\n");
    return 0;
}
