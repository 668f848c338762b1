#include "rnncover/losses.hpp"

#include "rnncover/csv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rnncover {

LabeledSequence make_labeled(SequenceInput u, double y) {
    if (y != 1.0 && y != -1.0)
        throw std::invalid_argument("make_labeled: label must be +1 or -1");
    return LabeledSequence{std::move(u), y};
}

double ramp_loss(double fval, double y, double gamma) {
    if (y != 1.0 && y != -1.0)
        throw std::invalid_argument("ramp_loss: label must be +1 or -1");
    return ramp(-fval * y, gamma);
}

double zero_one_loss(double fval, double y) {
    if (y != 1.0 && y != -1.0)
        throw std::invalid_argument("zero_one_loss: label must be +1 or -1");
    const double s = fval >= 0.0 ? 1.0 : -1.0;
    return s == y ? 0.0 : 1.0;
}

MeanEstimate derandomized_predict(const RecurrentConfig& cfg,
                                  const SequenceInput& u, double sigma,
                                  std::size_t K, RngStream rng) {
    if (K == 0)
        throw std::invalid_argument("derandomized_predict: need K >= 1");
    if (sigma == 0.0)
        return MeanEstimate{recurrent_hypothesis(cfg, u), 0.0};
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        RngStream st = rng.substream(k);
        const double v = recurrent_hypothesis(cfg, u, sigma, &st);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(K);
    if (K == 1) return MeanEstimate{mean, 0.0};
    const double var =
        std::max(0.0, (sumsq - sum * mean) / static_cast<double>(K - 1));
    return MeanEstimate{mean, std::sqrt(var / static_cast<double>(K))};
}

double empirical_ramp_risk(const Predictor& predictor, const SampleSet& S,
                           double gamma) {
    if (S.items.empty())
        throw std::invalid_argument("empirical_ramp_risk: empty sample");
    double sum = 0.0;
    for (const LabeledSequence& item : S.items)
        sum += ramp_loss(predictor(item.u), item.y, gamma);
    return sum / static_cast<double>(S.size());
}

double empirical_zero_one_risk(const Predictor& predictor,
                               const SampleSet& S) {
    if (S.items.empty())
        throw std::invalid_argument("empirical_zero_one_risk: empty sample");
    double sum = 0.0;
    for (const LabeledSequence& item : S.items)
        sum += zero_one_loss(predictor(item.u), item.y);
    return sum / static_cast<double>(S.size());
}

ErmResult erm_grid(const std::vector<MLPSpec>& candidates, double sigma,
                   std::size_t q, std::size_t p, std::size_t T,
                   bool output_noise, const SampleSet& S, double gamma,
                   std::size_t K, RngStream rng) {
    if (candidates.empty())
        throw std::invalid_argument("erm_grid: empty candidate list");
    ErmResult best{0, 2.0};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const RecurrentConfig cfg =
            make_recurrent(candidates[c], q, p, T, output_noise);
        double sum = 0.0;
        for (std::size_t i = 0; i < S.size(); ++i) {
            // Sample i always consumes rng.substream(i) no matter which
            // candidate is being scored, so candidates face identical
            // noise and the argmin does not depend on evaluation order.
            const MeanEstimate est = derandomized_predict(
                cfg, S.items[i].u, sigma, K, rng.substream(i));
            sum += ramp_loss(est.mean, S.items[i].y, gamma);
        }
        const double risk = sum / static_cast<double>(S.size());
        if (risk < best.risk) best = ErmResult{c, risk};
    }
    return best;
}

MarginThreshold margin_threshold_from_sample(const RealVec& values,
                                             const RealVec& grid,
                                             double target_mass) {
    if (values.empty() || grid.empty())
        throw std::invalid_argument("margin_threshold_from_sample: empty input");
    const double m = static_cast<double>(values.size());
    auto mass_below = [&](double z) {
        std::size_t c = 0;
        for (double v : values)
            if (std::fabs(v) < z) ++c;
        return static_cast<double>(c) / m;
    };
    double best_z = *std::min_element(grid.begin(), grid.end());
    bool found = false;
    for (double z : grid) {
        if (mass_below(z) < target_mass && (!found || z > best_z)) {
            best_z = z;
            found = true;
        }
    }
    return MarginThreshold{best_z, mass_below(best_z)};
}

namespace {

struct Tape {
    // Per step, per layer: post-noise layer input and activation output.
    std::vector<RealVec> inputs;      // T*L entries
    std::vector<RealVec> activations; // T*L entries
};

RealVec layer_noise(const TrainProblem& prob, std::size_t i, std::size_t k,
                    std::size_t slot, std::size_t dim) {
    RngStream st = prob.noise_base.substream(i).substream(k).substream(slot);
    return gaussian_sample(st, dim, prob.sigma);
}

/// Unrolled noisy forward for sample i under noise draw k; fills the
/// tape when given. Returns the readout value.
double unrolled_forward(const TrainProblem& prob, const MLPSpec& spec,
                        const SequenceInput& u, std::size_t i, std::size_t k,
                        Tape* tape) {
    const std::size_t L = spec.layer_count();
    const std::size_t q = prob.q;
    if (tape) {
        tape->inputs.assign(prob.T * L, {});
        tape->activations.assign(prob.T * L, {});
    }
    RealVec state(q - 1, 0.0);
    RealVec out;
    for (std::size_t t = 0; t < prob.T; ++t) {
        RealVec a;
        a.reserve(state.size() + prob.p);
        a.insert(a.end(), state.begin(), state.end());
        for (std::size_t d = 0; d < prob.p; ++d) a.push_back(u.at(d, t));
        for (std::size_t l = 0; l < L; ++l) {
            const RealVec z =
                layer_noise(prob, i, k, t * L + l, spec.dims[l]);
            for (std::size_t d = 0; d < a.size(); ++d) a[d] += z[d];
            if (tape) tape->inputs[t * L + l] = a;
            a = layer_forward(spec.weights[l], a);
            if (tape) tape->activations[t * L + l] = a;
        }
        out = a;
        state.assign(out.begin(), out.end() - 1);
    }
    double val = out[q - 1];
    if (prob.output_noise) {
        const RealVec z = layer_noise(prob, i, k, prob.T * L, q);
        val += z[q - 1];
    }
    return val;
}

double ramp_slope(double x, double gamma) {
    return (x > -gamma && x < 0.0) ? 1.0 / gamma : 0.0;
}

} // namespace

double fixed_noise_risk(const TrainProblem& prob, const SampleSet& S,
                        const MLPSpec& spec) {
    if (S.items.empty())
        throw std::invalid_argument("fixed_noise_risk: empty sample");
    if (prob.k_noise == 0)
        throw std::invalid_argument("fixed_noise_risk: need k_noise >= 1");
    validate_recurrent(make_recurrent(spec, prob.q, prob.p, prob.T,
                                      prob.output_noise));
    double sum = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t k = 0; k < prob.k_noise; ++k) {
            const double val =
                unrolled_forward(prob, spec, S.items[i].u, i, k, nullptr);
            sum += ramp_loss(val, S.items[i].y, prob.gamma);
        }
    return sum / static_cast<double>(S.size() * prob.k_noise);
}

std::vector<Matrix> fixed_noise_risk_grad(const TrainProblem& prob,
                                          const SampleSet& S,
                                          const MLPSpec& spec) {
    if (S.items.empty())
        throw std::invalid_argument("fixed_noise_risk_grad: empty sample");
    if (prob.k_noise == 0)
        throw std::invalid_argument("fixed_noise_risk_grad: need k_noise >= 1");
    validate_recurrent(make_recurrent(spec, prob.q, prob.p, prob.T,
                                      prob.output_noise));
    const std::size_t L = spec.layer_count();
    const std::size_t q = prob.q;
    std::vector<Matrix> grad;
    for (const Matrix& W : spec.weights) grad.emplace_back(W.rows, W.cols);

    Tape tape;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t k = 0; k < prob.k_noise; ++k) {
            const double val =
                unrolled_forward(prob, spec, S.items[i].u, i, k, &tape);
            const double y = S.items[i].y;
            const double dval =
                ramp_slope(-val * y, prob.gamma) * (-y);
            if (dval == 0.0) continue;

            // Backpropagate through the unrolled steps; the gradient on
            // a step's output is the state feedback from the step after
            // it, plus the readout seed at the final step.
            RealVec g_out(q, 0.0);
            g_out[q - 1] = dval;
            for (std::size_t t = prob.T; t-- > 0;) {
                RealVec g_a = g_out;
                for (std::size_t l = L; l-- > 0;) {
                    const Matrix& W = spec.weights[l];
                    const RealVec& in = tape.inputs[t * L + l];
                    const RealVec& act = tape.activations[t * L + l];
                    RealVec g_pre(W.cols);
                    for (std::size_t j = 0; j < W.cols; ++j)
                        g_pre[j] = g_a[j] * (0.25 - act[j] * act[j]);
                    Matrix& G = grad[l];
                    for (std::size_t r = 0; r < W.rows; ++r)
                        for (std::size_t j = 0; j < W.cols; ++j)
                            G.at(r, j) += in[r] * g_pre[j];
                    RealVec g_in(W.rows, 0.0);
                    for (std::size_t r = 0; r < W.rows; ++r)
                        for (std::size_t j = 0; j < W.cols; ++j)
                            g_in[r] += W.at(r, j) * g_pre[j];
                    g_a = std::move(g_in);
                }
                if (t > 0) {
                    g_out.assign(q, 0.0);
                    for (std::size_t d = 0; d + 1 < q; ++d) g_out[d] = g_a[d];
                }
            }
        }

    const double scale = 1.0 / static_cast<double>(S.size() * prob.k_noise);
    for (Matrix& G : grad)
        for (double& v : G.data) {
            v *= scale;
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "fixed_noise_risk_grad: non-finite gradient component");
        }
    return grad;
}

MLPSpec sgd_train(const MLPSpec& spec0, double sigma, std::size_t q,
                  std::size_t p, std::size_t T, bool output_noise,
                  const SampleSet& S, double gamma, const SgdHyper& hyper) {
    if (hyper.lr < 0.0)
        throw std::invalid_argument("sgd_train: negative learning rate");
    validate_recurrent(make_recurrent(spec0, q, p, T, output_noise));

    // Fixed evaluation noise, independent of the per-epoch training
    // noise, so best-seen tracking compares like against like.
    TrainProblem eval_prob{q, p, T, output_noise, gamma,
                           sigma, hyper.k_noise, RngStream(hyper.seed, 1)};
    MLPSpec current = spec0;
    MLPSpec best = spec0;
    double best_risk = fixed_noise_risk(eval_prob, S, current);

    const RngStream epoch_root(hyper.seed, 2);
    for (std::size_t e = 0; e < hyper.epochs; ++e) {
        TrainProblem prob{q, p, T, output_noise, gamma,
                          sigma, hyper.k_noise, epoch_root.substream(e)};
        const std::vector<Matrix> g = fixed_noise_risk_grad(prob, S, current);
        for (std::size_t l = 0; l < g.size(); ++l)
            for (std::size_t d = 0; d < g[l].data.size(); ++d)
                current.weights[l].data[d] -= hyper.lr * g[l].data[d];
        const double risk = fixed_noise_risk(eval_prob, S, current);
        if (risk < best_risk) {
            best_risk = risk;
            best = current;
        }
    }
    return best;
}

double pac_excess_risk_bound(unsigned long long m, double log_cover,
                             double epsilon, double delta) {
    if (m < 1) throw std::domain_error("pac_excess_risk_bound: need m >= 1");
    if (!(log_cover >= 0.0))
        throw std::domain_error("pac_excess_risk_bound: log_cover must be >= 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("pac_excess_risk_bound: epsilon outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("pac_excess_risk_bound: delta outside (0,1)");
    const double md = static_cast<double>(m);
    return 16.0 * epsilon + 24.0 / std::sqrt(md) * std::sqrt(log_cover) +
           6.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * md));
}

std::string sample_set_csv(const SampleSet& S, std::size_t p, std::size_t T) {
    std::string out = "y";
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t t = 0; t < T; ++t)
            out += ",u_" + std::to_string(i) + "_" + std::to_string(t);
    out += '\n';
    for (const LabeledSequence& item : S.items) {
        if (item.u.p != p || item.u.T != T)
            throw std::invalid_argument("sample_set_csv: shape mismatch");
        out += fmt_double(item.y);
        for (double v : item.u.data) {
            out += ',';
            out += fmt_double(v);
        }
        out += '\n';
    }
    return out;
}

SampleSet sample_set_from_csv(const std::string& text, std::size_t* p_out,
                              std::size_t* T_out) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    std::size_t first = 0;
    while (first < lines.size() &&
           (lines[first].empty() || lines[first][0] == '#'))
        ++first;
    if (first >= lines.size())
        throw std::invalid_argument("sample_set_from_csv: missing header");

    const std::vector<std::string> header = split_fields(lines[first], ',');
    if (header.empty() || header[0] != "y")
        throw std::invalid_argument("sample_set_from_csv: bad header");
    // Recover p and T from the last column name u_{p-1}_{T-1}, then
    // insist the whole header matches the canonical layout.
    const std::string& last = header.back();
    std::size_t p = 0, T = 0;
    if (last.size() > 2 && last.rfind("u_", 0) == 0) {
        const std::size_t sep = last.find('_', 2);
        if (sep != std::string::npos) {
            p = static_cast<std::size_t>(parse_uint(last.substr(2, sep - 2))) + 1;
            T = static_cast<std::size_t>(parse_uint(last.substr(sep + 1))) + 1;
        }
    }
    if (p == 0 || T == 0 || header.size() != 1 + p * T)
        throw std::invalid_argument("sample_set_from_csv: bad header");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t t = 0; t < T; ++t) {
            const std::string expect =
                "u_" + std::to_string(i) + "_" + std::to_string(t);
            if (header[1 + i * T + t] != expect)
                throw std::invalid_argument("sample_set_from_csv: bad header");
        }

    SampleSet S;
    for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[ln], ',');
        if (fields.size() != 1 + p * T)
            throw std::invalid_argument("sample_set_from_csv: bad row width");
        RealVec data(p * T);
        for (std::size_t d = 0; d < p * T; ++d)
            data[d] = parse_double(fields[1 + d]);
        S.items.push_back(
            make_labeled(make_sequence(p, T, std::move(data)),
                         parse_double(fields[0])));
    }
    if (p_out) *p_out = p;
    if (T_out) *T_out = T;
    return S;
}

} // namespace rnncover
