#pragma once

#include <string>
#include <vector>

#include "shockfan/diagnostics.hpp"
#include "shockfan/shock_predictor.hpp"

#include <json.hpp>

namespace shockfan {

// All columns are written with 17 significant digits so that re-runs of the
// same scenario produce byte-identical files.
std::string format_double(double v);

// fan_<family+1>.csv: z,t,X,rho,v,w (one row per recorded sample).
void write_fan_csv(const std::string& path, const CharacteristicFan& fan);

// diagnostics.csv: t,W,V,S,J,U.
void write_diagnostics_csv(const std::string& path,
                           const DiagnosticsHistory& h);

// slice_<index>.csv: x,D_y,D_z,B_y,B_z at one fixed time.
void write_slice_csv(const std::string& path, const std::vector<double>& x,
                     const std::vector<Vec4>& u);

// Shock report (families 1-based in the file):
// {detected, family, z_star, t_obs, t_extrap, fit_r2, rho_stop, rho_min,
//  t_lower, t_upper, epsilon, verdict, status}
// status is "ok" for a completed detection pipeline and otherwise names the
// condition that ended it early (for example NoShockDetected for data that
// never steepened).
nlohmann::ordered_json report_json(const ShockReport& rep,
                                   const ShockForecast& fc, bool verdict,
                                   const std::string& status = "ok");

void write_json(const std::string& path, const nlohmann::ordered_json& j);

} // namespace shockfan
