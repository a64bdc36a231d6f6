#pragma once
// Flat machine-readable renderings of a SensitivityReport.
//
// JSON keys: config_digest, slope, noise, delta_phi, n_ps, sql, qfi, qcrb,
// beats_sql, balanced, term_lin, term_nonlin, term_nonlin_corr (null unless balanced).
// CSV: the same keys as a header row followed by one data row.

#include <string>

#include "kerrmzi/analytic.hpp"

namespace kerrmzi::io {

std::string report_json(const analytic::SensitivityReport& report, const InterferometerConfig& config);
std::string report_csv(const analytic::SensitivityReport& report, const InterferometerConfig& config);

/// Short human-readable rendering.
std::string report_text(const analytic::SensitivityReport& report);

}  // namespace kerrmzi::io
