#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linkcalc/errors.hpp"

namespace linkcalc::fitting {

struct MeasurementRow {
    double distance_m = 0.0;
    double rx_power_dbm = 0.0;
};

struct MeasurementSet {
    std::vector<MeasurementRow> rows;   // raw (distance, rx power) records
    std::vector<double> envelope;       // alternatively: pre-processed envelopes
    std::string location_label;

    bool preprocessed() const { return !envelope.empty(); }
    std::size_t size() const { return preprocessed() ? envelope.size() : rows.size(); }
};

// Delimited text with a header row; columns distance_m, rx_power_dbm, or a
// single column envelope. '#' starts a comment line. Malformed rows raise
// InputError with the row number.
MeasurementSet load_measurements(const std::string& path);

// Removes the log-distance trend 10 alpha log10(d/d0) from the rx powers,
// converts to linear envelope and normalizes to unit RMS. Distances below d0
// are flagged via `warnings` when provided.
std::vector<double> compensate_path_loss(const MeasurementSet& ms, double alpha, double d0,
                                         std::vector<std::string>* warnings = nullptr);

enum class FitModel { Rayleigh, Nakagami, FisherF };

std::string model_name(FitModel m);

struct FitReport {
    FitModel model = FitModel::Rayleigh;
    double s = 0.0;       // Rayleigh scale
    double m = 0.0;       // Nakagami / F multipath shape
    double omega = 0.0;   // Nakagami mean power; for F the product omega_m*omega_s
    double m_s = 0.0;     // F shadowing shape
    double omega_m = 0.0;
    double omega_s = 0.0;
    double mse = 0.0;
    int n_grid = 0;
    bool normalized_omega = false;
};

struct FitOptions {
    int n_grid = 200;
    int n_starts = 16;
    std::uint64_t seed = 7;
    bool normalized = false; // tie the F model to unit mean power
    int max_iters = 400;
};

// Least-squares CDF fit on a quantile-spaced grid, multi-start Nelder-Mead
// within parameter bounds. Needs at least 50 samples.
FitReport fit_model(const std::vector<double>& envelope, FitModel model,
                    const FitOptions& opts = {});

// Envelope-domain CDF of a fitted model.
double model_cdf(const FitReport& r, double x);

} // namespace linkcalc::fitting
