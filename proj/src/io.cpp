#include "shockfan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "shockfan/errors.hpp"

namespace shockfan {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

} // namespace

void write_fan_csv(const std::string& path, const CharacteristicFan& fan) {
  std::ofstream out = open_out(path);
  out << "z,t,X,rho,v,w\n";
  for (const CharacteristicTrace& tr : fan.traces) {
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
      out << format_double(tr.z) << ',' << format_double(tr.t[j]) << ','
          << format_double(tr.X[j]) << ',' << format_double(tr.rho[j]) << ','
          << format_double(tr.v[j]) << ',' << format_double(tr.w[j]) << '\n';
    }
  }
}

void write_diagnostics_csv(const std::string& path,
                           const DiagnosticsHistory& h) {
  std::ofstream out = open_out(path);
  out << "t,W,V,S,J,U\n";
  for (std::size_t j = 0; j < h.t.size(); ++j) {
    out << format_double(h.t[j]) << ',' << format_double(h.W[j]) << ','
        << format_double(h.V[j]) << ',' << format_double(h.S[j]) << ','
        << format_double(h.J[j]) << ',' << format_double(h.U[j]) << '\n';
  }
}

void write_slice_csv(const std::string& path, const std::vector<double>& x,
                     const std::vector<Vec4>& u) {
  if (x.size() != u.size())
    throw InvalidParams("slice grid and states differ in length");
  std::ofstream out = open_out(path);
  out << "x,D_y,D_z,B_y,B_z\n";
  for (std::size_t j = 0; j < x.size(); ++j) {
    out << format_double(x[j]) << ',' << format_double(u[j][0]) << ','
        << format_double(u[j][1]) << ',' << format_double(u[j][2]) << ','
        << format_double(u[j][3]) << '\n';
  }
}

namespace {

// JSON has no infinity; report unbounded times as null.
nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

} // namespace

nlohmann::ordered_json report_json(const ShockReport& rep,
                                   const ShockForecast& fc, bool verdict,
                                   const std::string& status) {
  nlohmann::ordered_json j;
  j["detected"] = rep.detected;
  j["family"] = rep.family >= 0 ? nlohmann::ordered_json(rep.family + 1)
                                : nlohmann::ordered_json(nullptr);
  j["z_star"] = rep.z_star;
  j["t_obs"] = finite_or_null(rep.t_obs);
  j["t_extrap"] = finite_or_null(rep.t_extrap);
  j["fit_r2"] = rep.fit_r2;
  j["rho_stop"] = rep.rho_stop;
  j["rho_min"] = finite_or_null(rep.rho_min);
  j["t_lower"] = finite_or_null(fc.t_lower);
  j["t_upper"] = finite_or_null(fc.t_upper);
  j["epsilon"] = fc.epsilon;
  j["verdict"] = verdict;
  j["status"] = status;
  return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

} // namespace shockfan
