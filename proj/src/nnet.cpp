#include "enff/nnet.hpp"

#include "enff/error.hpp"
#include "enff/text.hpp"

#include <cmath>
#include <istream>
#include <ostream>

namespace enff::nnet {

std::string_view to_string(Kind kind) noexcept {
    switch (kind) {
        case Kind::FNN: return "FNN";
        case Kind::Elman: return "Elman";
        case Kind::RBF: return "RBF";
    }
    return "?";
}

Kind parse_kind(std::string_view name) {
    if (name == "FNN") return Kind::FNN;
    if (name == "Elman") return Kind::Elman;
    if (name == "RBF") return Kind::RBF;
    throw Error(ErrorCode::InvalidConfig, "unknown network kind '" + std::string(name) + "'");
}

void NetworkSpec::validate() const {
    if (input_dim == 0 || hidden_units == 0) {
        throw Error(ErrorCode::DimensionMismatch, "network dims must be >= 1");
    }
    if (output_dim != 1) throw Error(ErrorCode::DimensionMismatch, "only single-output networks are supported");
}

std::size_t param_count(const NetworkSpec& s) {
    s.validate();
    const std::size_t in = s.input_dim;
    const std::size_t h = s.hidden_units;
    switch (s.kind) {
        case Kind::FNN: return (in + 1) * h + (h + 1);
        case Kind::Elman: return (in + h + 1) * h + (h + 1);
        case Kind::RBF: return h * in + h + (h + 1);
    }
    return 0;
}

double softplus(double x) noexcept {
    // log(1 + e^x) without overflow for large x
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double decode_width(double raw) noexcept { return kMinWidth + softplus(raw); }

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

void check_dims(const NetworkSpec& spec, Kind expected, std::span<const double> weights,
                std::span<const double> input) {
    if (spec.kind != expected) {
        throw Error(ErrorCode::DimensionMismatch, "network kind is " + std::string(to_string(spec.kind)) +
                                                      ", expected " + std::string(to_string(expected)));
    }
    const auto n = param_count(spec);
    if (weights.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(n) + " weights, got " + std::to_string(weights.size()));
    }
    if (input.size() != spec.input_dim) {
        throw Error(ErrorCode::DimensionMismatch, "expected input of length " +
                                                      std::to_string(spec.input_dim) + ", got " +
                                                      std::to_string(input.size()));
    }
}

double fnn_eval(const NetworkSpec& spec, const double* w, const double* x) {
    const std::size_t in = spec.input_dim;
    const std::size_t h = spec.hidden_units;
    const double* out_w = w + (in + 1) * h;
    double y = out_w[h];
    for (std::size_t j = 0; j < h; ++j) {
        const double* row = w + j * (in + 1);
        double z = row[in];
        for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
        y += out_w[j] * sigmoid(z);
    }
    return y;
}

double rbf_eval(const NetworkSpec& spec, const double* w, const double* x) {
    const std::size_t in = spec.input_dim;
    const std::size_t h = spec.hidden_units;
    const double* centers = w;
    const double* widths = w + h * in;
    const double* out_w = widths + h;
    double y = out_w[h];
    for (std::size_t j = 0; j < h; ++j) {
        const double* c = centers + j * in;
        double d2 = 0.0;
        for (std::size_t i = 0; i < in; ++i) {
            const double d = x[i] - c[i];
            d2 += d * d;
        }
        const double sigma = decode_width(widths[j]);
        y += out_w[j] * std::exp(-d2 / (2.0 * sigma * sigma));
    }
    return y;
}

double elman_eval(const NetworkSpec& spec, const double* w, const double* x, double* context, double* hidden) {
    const std::size_t in = spec.input_dim;
    const std::size_t h = spec.hidden_units;
    const std::size_t stride = in + h + 1;
    for (std::size_t j = 0; j < h; ++j) {
        const double* row = w + j * stride;
        double z = row[in + h];
        for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
        for (std::size_t k = 0; k < h; ++k) z += row[in + k] * context[k];
        hidden[j] = sigmoid(z);
    }
    const double* out_w = w + stride * h;
    double y = out_w[h];
    for (std::size_t j = 0; j < h; ++j) {
        y += out_w[j] * hidden[j];
        context[j] = hidden[j];
    }
    return y;
}

}  // namespace

NetworkParams unflatten(const NetworkSpec& spec, std::span<const double> w) {
    const auto n = param_count(spec);
    if (w.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
    }
    const std::size_t in = spec.input_dim;
    const std::size_t h = spec.hidden_units;
    NetworkParams p;
    p.spec = spec;
    p.output_weights.resize(h);
    std::size_t pos = 0;
    switch (spec.kind) {
        case Kind::FNN:
        case Kind::Elman: {
            const bool elman = spec.kind == Kind::Elman;
            p.input_weights.resize(h * in);
            p.hidden_bias.resize(h);
            if (elman) p.context_weights.resize(h * h);
            for (std::size_t j = 0; j < h; ++j) {
                for (std::size_t i = 0; i < in; ++i) p.input_weights[j * in + i] = w[pos++];
                if (elman) {
                    for (std::size_t k = 0; k < h; ++k) p.context_weights[j * h + k] = w[pos++];
                }
                p.hidden_bias[j] = w[pos++];
            }
            break;
        }
        case Kind::RBF:
            p.input_weights.assign(w.begin(), w.begin() + static_cast<long>(h * in));
            pos = h * in;
            p.raw_widths.assign(w.begin() + static_cast<long>(pos), w.begin() + static_cast<long>(pos + h));
            pos += h;
            break;
    }
    for (std::size_t j = 0; j < h; ++j) p.output_weights[j] = w[pos++];
    p.output_bias = w[pos++];
    return p;
}

WeightVector flatten(const NetworkParams& p) {
    const std::size_t in = p.spec.input_dim;
    const std::size_t h = p.spec.hidden_units;
    WeightVector w;
    w.reserve(param_count(p.spec));
    switch (p.spec.kind) {
        case Kind::FNN:
        case Kind::Elman:
            for (std::size_t j = 0; j < h; ++j) {
                for (std::size_t i = 0; i < in; ++i) w.push_back(p.input_weights.at(j * in + i));
                if (p.spec.kind == Kind::Elman) {
                    for (std::size_t k = 0; k < h; ++k) w.push_back(p.context_weights.at(j * h + k));
                }
                w.push_back(p.hidden_bias.at(j));
            }
            break;
        case Kind::RBF:
            if (p.input_weights.size() != h * in || p.raw_widths.size() != h) {
                throw Error(ErrorCode::DimensionMismatch, "RBF parameter blocks have wrong sizes");
            }
            w.insert(w.end(), p.input_weights.begin(), p.input_weights.end());
            w.insert(w.end(), p.raw_widths.begin(), p.raw_widths.end());
            break;
    }
    if (p.output_weights.size() != h) throw Error(ErrorCode::DimensionMismatch, "output weight count");
    w.insert(w.end(), p.output_weights.begin(), p.output_weights.end());
    w.push_back(p.output_bias);
    return w;
}

double fnn_forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input) {
    check_dims(spec, Kind::FNN, weights, input);
    return fnn_eval(spec, weights.data(), input.data());
}

double rbf_forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input) {
    check_dims(spec, Kind::RBF, weights, input);
    return rbf_eval(spec, weights.data(), input.data());
}

std::pair<double, ElmanState> elman_forward(const NetworkSpec& spec, std::span<const double> weights,
                                            std::span<const double> input, const ElmanState& state) {
    check_dims(spec, Kind::Elman, weights, input);
    if (state.context.size() != spec.hidden_units) {
        throw Error(ErrorCode::DimensionMismatch, "Elman context length differs from hidden_units");
    }
    ElmanState next = state;
    std::vector<double> hidden(spec.hidden_units);
    const double y = elman_eval(spec, weights.data(), input.data(), next.context.data(), hidden.data());
    return {y, std::move(next)};
}

double elman_step(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input,
                  std::span<double> context, std::span<double> scratch) {
    check_dims(spec, Kind::Elman, weights, input);
    if (context.size() != spec.hidden_units || scratch.size() < spec.hidden_units) {
        throw Error(ErrorCode::DimensionMismatch, "Elman context/scratch length differs from hidden_units");
    }
    return elman_eval(spec, weights.data(), input.data(), context.data(), scratch.data());
}

double forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input) {
    switch (spec.kind) {
        case Kind::FNN: return fnn_forward(spec, weights, input);
        case Kind::RBF: return rbf_forward(spec, weights, input);
        case Kind::Elman: break;
    }
    throw Error(ErrorCode::UnsupportedKind, "Elman networks need a state; use elman_forward");
}

double mean_squared_error(const NetworkSpec& spec, std::span<const double> weights, const BatchView& batch) {
    if (batch.rows() == 0) throw Error(ErrorCode::EmptyDataset, "empty batch");
    if (batch.input_dim != spec.input_dim || batch.inputs.size() != batch.rows() * batch.input_dim) {
        throw Error(ErrorCode::DimensionMismatch, "batch shape does not match network input");
    }
    if (weights.size() != param_count(spec)) throw Error(ErrorCode::DimensionMismatch, "weight count");
    double sum = 0.0;
    switch (spec.kind) {
        case Kind::FNN:
            for (std::size_t r = 0; r < batch.rows(); ++r) {
                const double e = fnn_eval(spec, weights.data(), batch.row(r).data()) - batch.targets[r];
                sum += e * e;
            }
            break;
        case Kind::RBF:
            for (std::size_t r = 0; r < batch.rows(); ++r) {
                const double e = rbf_eval(spec, weights.data(), batch.row(r).data()) - batch.targets[r];
                sum += e * e;
            }
            break;
        case Kind::Elman: {
            std::vector<double> context(spec.hidden_units, 0.0);
            std::vector<double> hidden(spec.hidden_units);
            for (std::size_t r = 0; r < batch.rows(); ++r) {
                const double y = elman_eval(spec, weights.data(), batch.row(r).data(), context.data(), hidden.data());
                const double e = y - batch.targets[r];
                sum += e * e;
            }
            break;
        }
    }
    return sum / static_cast<double>(batch.rows());
}

std::vector<double> backprop_gradient(const NetworkSpec& spec, std::span<const double> weights,
                                      const BatchView& batch) {
    if (spec.kind != Kind::FNN) {
        throw Error(ErrorCode::UnsupportedKind, "backprop is implemented for FNN only");
    }
    if (batch.rows() == 0) throw Error(ErrorCode::EmptyDataset, "empty batch");
    if (batch.input_dim != spec.input_dim || batch.inputs.size() != batch.rows() * batch.input_dim) {
        throw Error(ErrorCode::DimensionMismatch, "batch shape does not match network input");
    }
    const auto n = param_count(spec);
    if (weights.size() != n) throw Error(ErrorCode::DimensionMismatch, "weight count");

    const std::size_t in = spec.input_dim;
    const std::size_t h = spec.hidden_units;
    const double* w = weights.data();
    const double* out_w = w + (in + 1) * h;
    std::vector<double> grad(n, 0.0);
    double* g_out = grad.data() + (in + 1) * h;
    std::vector<double> act(h);
    const double scale = 2.0 / static_cast<double>(batch.rows());

    for (std::size_t r = 0; r < batch.rows(); ++r) {
        const double* x = batch.row(r).data();
        double y = out_w[h];
        for (std::size_t j = 0; j < h; ++j) {
            const double* row = w + j * (in + 1);
            double z = row[in];
            for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
            act[j] = sigmoid(z);
            y += out_w[j] * act[j];
        }
        const double delta = scale * (y - batch.targets[r]);
        g_out[h] += delta;
        for (std::size_t j = 0; j < h; ++j) {
            g_out[j] += delta * act[j];
            const double dz = delta * out_w[j] * act[j] * (1.0 - act[j]);
            double* g_row = grad.data() + j * (in + 1);
            for (std::size_t i = 0; i < in; ++i) g_row[i] += dz * x[i];
            g_row[in] += dz;
        }
    }
    return grad;
}

std::string model_to_string(const NetworkSpec& spec, std::span<const double> weights) {
    if (weights.size() != param_count(spec)) throw Error(ErrorCode::DimensionMismatch, "weight count");
    std::string line(to_string(spec.kind));
    line += ',' + std::to_string(spec.input_dim) + ',' + std::to_string(spec.hidden_units) + ',' +
            std::to_string(spec.output_dim);
    for (double v : weights) {
        line += ',';
        line += text::format_double(v);
    }
    return line;
}

std::pair<NetworkSpec, WeightVector> model_from_string(std::string_view line) {
    const auto fields = text::split(text::trim(line));
    if (fields.size() < 4) throw Error(ErrorCode::MalformedRow, "model line needs kind and dims");
    NetworkSpec spec;
    spec.kind = parse_kind(text::trim(fields[0]));
    const auto in = text::parse_int(fields[1]);
    const auto hid = text::parse_int(fields[2]);
    const auto out = text::parse_int(fields[3]);
    if (!in || !hid || !out || *in < 1 || *hid < 1 || *out < 1) {
        throw Error(ErrorCode::MalformedRow, "bad model dims");
    }
    spec.input_dim = static_cast<std::size_t>(*in);
    spec.hidden_units = static_cast<std::size_t>(*hid);
    spec.output_dim = static_cast<std::size_t>(*out);
    const auto n = param_count(spec);
    if (fields.size() != 4 + n) {
        throw Error(ErrorCode::MalformedRow,
                    "expected " + std::to_string(n) + " weights, got " + std::to_string(fields.size() - 4));
    }
    WeightVector w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = text::parse_double(fields[4 + i]);
        if (!v) throw Error(ErrorCode::MalformedRow, "bad weight at position " + std::to_string(i));
        w[i] = *v;
    }
    return {spec, std::move(w)};
}

void write_model(std::ostream& out, const NetworkSpec& spec, std::span<const double> weights) {
    out << model_to_string(spec, weights) << '\n';
}

std::pair<NetworkSpec, WeightVector> read_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, "empty model file");
    return model_from_string(line);
}

}  // namespace enff::nnet
