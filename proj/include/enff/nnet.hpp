#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace enff::nnet {

enum class Kind { FNN, Elman, RBF };

std::string_view to_string(Kind kind) noexcept;
Kind parse_kind(std::string_view name);

/// Single-output network. Hidden activation is the logistic sigmoid for
/// FNN/Elman and a Gaussian for RBF; the output unit is linear.
struct NetworkSpec {
    Kind kind = Kind::FNN;
    std::size_t input_dim = 8;
    std::size_t hidden_units = 12;
    std::size_t output_dim = 1;

    /// Throws DimensionMismatch for zero dims or output_dim != 1.
    void validate() const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// FNN: (in+1)h + (h+1); Elman: (in+h+1)h + (h+1); RBF: h·in + h + (h+1).
std::size_t param_count(const NetworkSpec& spec);

using WeightVector = std::vector<double>;

/// Structured view of the flat parameter layouts.
///
/// FNN    per hidden unit j: [W_x(j,0..in), b(j)], then w_out[0..h), b_out
/// Elman  per hidden unit j: [W_x(j,0..in), W_c(j,0..h), b(j)], then w_out, b_out
/// RBF    centers (h × in, row-major), raw widths (h), w_out (h), b_out
///
/// RBF widths are decoded as sigma_j = kMinWidth + softplus(raw_j).
struct NetworkParams {
    NetworkSpec spec;
    std::vector<double> input_weights;      // h × in (centers for RBF)
    std::vector<double> context_weights;    // h × h, Elman only
    std::vector<double> hidden_bias;        // h, FNN/Elman
    std::vector<double> raw_widths;         // h, RBF only
    std::vector<double> output_weights;     // h
    double output_bias = 0.0;

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

inline constexpr double kMinWidth = 1e-6;
double softplus(double x) noexcept;
double decode_width(double raw) noexcept;

NetworkParams unflatten(const NetworkSpec& spec, std::span<const double> weights);
WeightVector flatten(const NetworkParams& params);

double sigmoid(double x) noexcept;

/// Throws DimensionMismatch on wrong input/weight lengths or kind.
double fnn_forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input);
double rbf_forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input);

/// Context (previous hidden activations) of an Elman network.
struct ElmanState {
    std::vector<double> context;

    static ElmanState zeros(std::size_t hidden_units) { return {std::vector<double>(hidden_units, 0.0)}; }
};

std::pair<double, ElmanState> elman_forward(const NetworkSpec& spec, std::span<const double> weights,
                                            std::span<const double> input, const ElmanState& state);

/// In-place Elman step for hot loops: `context` is read, then overwritten with
/// the new hidden activations. `scratch` must hold hidden_units values.
double elman_step(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input,
                  std::span<double> context, std::span<double> scratch);

/// Stateless evaluation for FNN and RBF; Elman throws UnsupportedKind.
double forward(const NetworkSpec& spec, std::span<const double> weights, std::span<const double> input);

/// Row-major inputs (rows × input_dim) with one target per row.
struct BatchView {
    std::span<const double> inputs;
    std::span<const double> targets;
    std::size_t input_dim = 0;

    std::size_t rows() const noexcept { return targets.size(); }
    std::span<const double> row(std::size_t i) const { return inputs.subspan(i * input_dim, input_dim); }
};

/// Mean squared error of a stateless network over a batch.
double mean_squared_error(const NetworkSpec& spec, std::span<const double> weights, const BatchView& batch);

/// Exact gradient of (1/B)·sum (y - t)^2 for an FNN. Throws UnsupportedKind
/// for other kinds and EmptyDataset for an empty batch.
std::vector<double> backprop_gradient(const NetworkSpec& spec, std::span<const double> weights,
                                      const BatchView& batch);

/// Model file: a single CSV line `kind,input_dim,hidden_units,output_dim,w0,w1,...`
/// using shortest round-trip decimal forms, so reading back is bit-exact.
void write_model(std::ostream& out, const NetworkSpec& spec, std::span<const double> weights);
std::pair<NetworkSpec, WeightVector> read_model(std::istream& in);
std::string model_to_string(const NetworkSpec& spec, std::span<const double> weights);
std::pair<NetworkSpec, WeightVector> model_from_string(std::string_view line);

}  // namespace enff::nnet
