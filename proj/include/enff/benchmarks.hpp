#pragma once

#include "enff/dataio.hpp"
#include "enff/features.hpp"
#include "enff/nnet.hpp"
#include "enff/trainer.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace enff::benchmarks {

struct ArimaOrder {
    int p = 2;
    int d = 1;
    int q = 2;

    /// p, q >= 0 and d in {0, 1, 2}; `require_terms` additionally demands p + q >= 1.
    void validate(bool require_terms = true) const;

    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

/// d-fold differences kept in double-double precision so that integrate()
/// recovers the original doubles exactly.
struct Differenced {
    int order = 0;
    std::vector<double> values;      // high parts of the d-th difference
    std::vector<double> low;         // low parts: values[i] + low[i] is the exact difference
    std::vector<double> anchors_hi;  // first element of levels 0..d-1
    std::vector<double> anchors_lo;
};

/// Throws SeriesTooShort unless series.size() > d, InvalidConfig for d outside {0,1,2}.
Differenced difference(std::span<const double> series, int d);
std::vector<double> integrate(const Differenced& diff);

struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar;  // phi_1..phi_p
    std::vector<double> ma;  // theta_1..theta_q
    double mean = 0.0;       // mean of the differenced process
    double intercept = 0.0;  // c = mean · (1 − sum phi)
    double presample_mean = 0.0;
    double residual_variance = 0.0;
    double css = 0.0;
    std::size_t observations = 0;  // differenced samples used in the fit
    bool converged = true;
    bool stationary = true;
    bool invertible = true;
    std::vector<double> css_trace;  // best CSS after each optimizer iteration

    // Forecast origin: the most recent differenced values (oldest first),
    // residuals, and the last value of each integration level 0..d-1.
    std::vector<double> recent_values;
    std::vector<double> recent_residuals;
    std::vector<double> level_anchors;
};

/// Conditional-sum-of-squares fit by Nelder-Mead over (mean, phi, theta),
/// starting from zero coefficients and the sample mean. Pre-sample values are
/// held at the sample mean of the differenced series and pre-sample residuals
/// at zero. Throws SeriesTooShort when series.size() < 10·(p+q+1). Hitting the
/// iteration cap returns the best point with converged = false.
ArimaModel fit_arima(std::span<const double> series, const ArimaOrder& order, int max_css_iterations = 5000);

/// Recomputes the forecast origin from `history` with the fitted coefficients
/// (no re-estimation).
ArimaModel condition_on(const ArimaModel& model, std::span<const double> history);

/// Iterated one-step forecasts with future shocks at zero, integrated back to level.
std::vector<double> forecast_arima(const ArimaModel& model, int horizon);

/// AR stationarity (roots of 1 − phi_1 z − ... outside the unit circle), via
/// the Levinson step-down recursion.
bool is_stationary(std::span<const double> ar);
bool is_invertible(std::span<const double> ma);

struct OrderSearch {
    int p_max = 4;
    int q_max = 4;
    std::vector<int> d_grid{0, 1};
    int max_css_iterations = 5000;
};

double arima_aic(const ArimaModel& model);

/// Minimizes AIC = n·ln(CSS/n) + 2(p+q+1) over the grid (p + q >= 1). Fits
/// that come out non-stationary or non-invertible are not admissible. Ties
/// go to the earlier candidate in (d, p, q) order.
ArimaOrder select_order(std::span<const double> series, const OrderSearch& search = {});

/// Named-coefficient CSV (`name,value`).
void write_arima(std::ostream& out, const ArimaModel& model);
ArimaModel read_arima(std::istream& in);

struct BpnnModel {
    nnet::NetworkSpec spec;
    nnet::WeightVector weights;
    features::NormalizationParams normalization;
    trainer::TrainingTrace trace;
};

/// One FNN on the raw (non-decomposed) normalized features of the training
/// range, trained by full-batch backprop.
BpnnModel train_bpnn_baseline(const dataio::TaggedSeries& series, const dataio::SplitSpec& split,
                              const nnet::NetworkSpec& spec, const trainer::BackpropConfig& config);

/// 24 hourly forecasts using the same recursive previous-hour protocol as the ensemble.
std::vector<double> forecast_bpnn(const BpnnModel& model, const dataio::TaggedSeries& series, dataio::Date day);

void write_bpnn(std::ostream& out, const BpnnModel& model);
BpnnModel read_bpnn(std::istream& in);

}  // namespace enff::benchmarks
