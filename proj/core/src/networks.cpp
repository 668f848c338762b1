#include "rnncover/networks.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rnncover {

Matrix::Matrix(std::size_t r, std::size_t c, RealVec d)
    : rows(r), cols(c), data(std::move(d)) {
    if (data.size() != rows * cols)
        throw std::invalid_argument("Matrix: data size does not match shape");
}

std::size_t MLPSpec::weight_count() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) w += dims[i] * dims[i + 1];
    return w;
}

void validate_mlp(const MLPSpec& spec) {
    if (spec.dims.size() < 2)
        throw std::invalid_argument("MLPSpec: need at least one layer (two dims)");
    for (std::size_t d : spec.dims)
        if (d == 0) throw std::invalid_argument("MLPSpec: zero layer width");
    if (spec.weights.size() != spec.dims.size() - 1)
        throw std::invalid_argument("MLPSpec: weight count does not match dims");
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        const Matrix& W = spec.weights[i];
        if (W.rows != spec.dims[i] || W.cols != spec.dims[i + 1])
            throw std::invalid_argument("MLPSpec: weight matrix shape mismatch");
        if (W.data.size() != W.rows * W.cols)
            throw std::invalid_argument("MLPSpec: weight storage mismatch");
        for (double v : W.data)
            if (!std::isfinite(v))
                throw std::invalid_argument("MLPSpec: non-finite weight");
    }
}

MLPSpec make_mlp(std::vector<std::size_t> dims, std::vector<Matrix> weights,
                 std::size_t declared_w) {
    MLPSpec spec{std::move(dims), std::move(weights)};
    validate_mlp(spec);
    if (declared_w != 0 && spec.weight_count() != declared_w)
        throw std::invalid_argument("make_mlp: declared weight count mismatch");
    return spec;
}

NoiseScale make_noise_scale(double sigma) {
    if (!(sigma >= 0.0 && sigma < 1.0))
        throw std::domain_error("NoiseScale: sigma must lie in [0, 1)");
    return NoiseScale{sigma};
}

void validate_recurrent(const RecurrentConfig& cfg) {
    validate_mlp(cfg.net);
    if (cfg.q == 0 || cfg.p == 0 || cfg.T == 0)
        throw std::invalid_argument("RecurrentConfig: q, p, T must be positive");
    const std::size_t s = cfg.p + cfg.q - 1;
    if (cfg.net.input_dim() != s)
        throw std::invalid_argument("RecurrentConfig: net input dim must be p+q-1");
    if (cfg.net.output_dim() != cfg.q)
        throw std::invalid_argument("RecurrentConfig: net output dim must be q");
    if (cfg.net.input_dim() < cfg.net.output_dim())
        throw std::invalid_argument("RecurrentConfig: input dim must be >= output dim");
}

RecurrentConfig make_recurrent(MLPSpec net, std::size_t q, std::size_t p,
                               std::size_t T, bool output_noise) {
    RecurrentConfig cfg{std::move(net), q, p, T, output_noise};
    validate_recurrent(cfg);
    return cfg;
}

SequenceInput make_sequence(std::size_t p, std::size_t T, RealVec data) {
    if (p == 0 || T == 0)
        throw std::invalid_argument("SequenceInput: p and T must be positive");
    if (data.size() != p * T)
        throw std::invalid_argument("SequenceInput: data size must be p*T");
    for (double v : data)
        if (!(std::fabs(v) <= 0.5))
            throw std::invalid_argument(
                "SequenceInput: entries must lie in [-1/2, 1/2]");
    return SequenceInput{p, T, std::move(data)};
}

RealVec layer_forward(const Matrix& W, const RealVec& x) {
    if (x.size() != W.rows)
        throw std::invalid_argument("layer_forward: input size mismatch");
    RealVec out(W.cols);
    for (std::size_t j = 0; j < W.cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < W.rows; ++i) acc += W.at(i, j) * x[i];
        out[j] = sigmoid_centered(acc);
    }
    return out;
}

static void check_input_cube(const RealVec& x) {
    for (double v : x)
        if (!(std::fabs(v) <= 0.5))
            throw std::invalid_argument("forward: input outside [-1/2, 1/2] cube");
}

RealVec mlp_forward(const MLPSpec& spec, const RealVec& x) {
    if (x.size() != spec.input_dim())
        throw std::invalid_argument("mlp_forward: input size mismatch");
    check_input_cube(x);
    RealVec cur = x;
    for (const Matrix& W : spec.weights) cur = layer_forward(W, cur);
    return cur;
}

RealVec noisy_mlp_forward(const MLPSpec& spec, const RealVec& x, double sigma,
                          RngStream* rng, bool output_noise) {
    if (x.size() != spec.input_dim())
        throw std::invalid_argument("noisy_mlp_forward: input size mismatch");
    if (!(sigma >= 0.0))
        throw std::domain_error("noisy_mlp_forward: sigma must be >= 0");
    if (sigma > 0.0 && rng == nullptr)
        throw std::invalid_argument("noisy_mlp_forward: rng required when sigma > 0");
    check_input_cube(x);
    RealVec cur = x;
    for (const Matrix& W : spec.weights) {
        if (sigma > 0.0) {
            const RealVec z = gaussian_sample(*rng, cur.size(), sigma);
            for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += z[i];
        }
        cur = layer_forward(W, cur);
    }
    if (output_noise && sigma > 0.0) {
        const RealVec z = gaussian_sample(*rng, cur.size(), sigma);
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += z[i];
    }
    return cur;
}

RealVec recurrent_apply(const RecurrentConfig& cfg, const SequenceInput& u,
                        std::size_t t, double sigma, RngStream* rng,
                        EvalCounters* counters) {
    validate_recurrent(cfg);
    if (u.p != cfg.p || u.T != cfg.T)
        throw std::invalid_argument("recurrent_apply: sequence shape mismatch");
    if (t >= cfg.T)
        throw std::invalid_argument("recurrent_apply: step index out of range");
    if (sigma > 0.0 && rng == nullptr)
        throw std::invalid_argument("recurrent_apply: rng required when sigma > 0");

    RealVec state(cfg.q - 1, 0.0);
    RealVec out;
    for (std::size_t step = 0; step <= t; ++step) {
        RealVec xin;
        xin.reserve(cfg.p + cfg.q - 1);
        xin.insert(xin.end(), state.begin(), state.end());
        for (std::size_t i = 0; i < cfg.p; ++i) xin.push_back(u.at(i, step));
        const bool last = (step == t);
        out = noisy_mlp_forward(cfg.net, xin, sigma, rng,
                                cfg.output_noise && last);
        if (counters) counters->block_forward_passes += 1;
        if (!last) state.assign(out.begin(), out.end() - 1);
    }
    return out;
}

double recurrent_hypothesis(const RecurrentConfig& cfg, const SequenceInput& u,
                            double sigma, RngStream* rng) {
    const RealVec out = recurrent_apply(cfg, u, cfg.T - 1, sigma, rng);
    return out.back();
}

std::pair<RealVec, double> split_state(const RealVec& v) {
    if (v.empty())
        throw std::invalid_argument("split_state: empty vector");
    return {RealVec(v.begin(), v.end() - 1), v.back()};
}

MLPSpec rescale_last_row(const MLPSpec& spec, double c) {
    validate_mlp(spec);
    if (!std::isfinite(c))
        throw std::domain_error("rescale_last_row: factor must be finite");
    MLPSpec out = spec;
    Matrix& W = out.weights.back();
    for (std::size_t i = 0; i < W.rows; ++i) W.at(i, W.cols - 1) *= c;
    return out;
}

double margin_rescale_factor(double gamma, double z) {
    if (!(gamma > 0.0 && gamma < 0.5) || !(z > 0.0 && z < 0.5))
        throw std::domain_error("margin_rescale_factor: gamma, z must lie in (0, 1/2)");
    return sigmoid_centered_inv(gamma) / sigmoid_centered_inv(z);
}

namespace {

std::string double_to_hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
}

double hex_to_double(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw std::invalid_argument("weight parse error: '" + s + "'");
    return v;
}

} // namespace

std::string mlp_to_json(const MLPSpec& spec) {
    validate_mlp(spec);
    nlohmann::json j;
    j["dims"] = spec.dims;
    auto& ws = j["weights"] = nlohmann::json::array();
    for (const Matrix& W : spec.weights) {
        nlohmann::json layer = nlohmann::json::array();
        for (double v : W.data) layer.push_back(double_to_hex(v));
        ws.push_back(std::move(layer));
    }
    return j.dump(2) + "\n";
}

MLPSpec mlp_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("weight file parse error: ") + e.what());
    }
    if (!j.contains("dims") || !j.contains("weights"))
        throw std::invalid_argument("weight file: missing dims or weights");
    std::vector<std::size_t> dims = j["dims"].get<std::vector<std::size_t>>();
    if (dims.size() < 2)
        throw std::invalid_argument("weight file: need at least two dims");
    std::vector<Matrix> weights;
    const auto& ws = j["weights"];
    if (!ws.is_array() || ws.size() + 1 != dims.size())
        throw std::invalid_argument("weight file: weights/dims mismatch");
    for (std::size_t i = 0; i < ws.size(); ++i) {
        RealVec data;
        for (const auto& el : ws[i]) {
            if (el.is_string())
                data.push_back(hex_to_double(el.get<std::string>()));
            else if (el.is_number())
                data.push_back(el.get<double>());
            else
                throw std::invalid_argument("weight file: bad weight entry");
        }
        weights.emplace_back(dims[i], dims[i + 1], std::move(data));
    }
    return make_mlp(std::move(dims), std::move(weights));
}

void save_mlp(const std::string& path, const MLPSpec& spec) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_mlp: cannot open " + path);
    f << mlp_to_json(spec);
}

MLPSpec load_mlp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_mlp: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return mlp_from_json(ss.str());
}

} // namespace rnncover
