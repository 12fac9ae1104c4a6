// File formats: potential JSON, curve CSV, spectral report JSON, pipeline
// config. Floats are serialized with 17 significant digits so numeric
// fields round-trip exactly.
#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fingap/closing.hpp"
#include "fingap/config.hpp"
#include "fingap/hyperbolic.hpp"
#include "fingap/potential.hpp"
#include "fingap/sl2.hpp"
#include "fingap/spectral.hpp"

namespace fingap {

namespace io {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Minimal JSON writer; keeps full float precision and a stable field order.
class JsonWriter {
 public:
  JsonWriter& raw(const std::string& s) {
    out_ << s;
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    out_ << '"' << k << "\":";
    fresh_ = true;
    return *this;
  }
  JsonWriter& num(double x) {
    sep();
    out_ << fmt17(x);
    return *this;
  }
  JsonWriter& num(int x) {
    sep();
    out_ << x;
    return *this;
  }
  JsonWriter& boolean(bool b) {
    sep();
    out_ << (b ? "true" : "false");
    return *this;
  }
  JsonWriter& str(const std::string& s) {
    sep();
    out_ << '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ << '\\';
      out_ << c;
    }
    out_ << '"';
    return *this;
  }
  JsonWriter& begin_obj() {
    sep();
    out_ << '{';
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_obj() {
    out_ << '}';
    fresh_ = false;
    return *this;
  }
  JsonWriter& begin_arr() {
    sep();
    out_ << '[';
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_arr() {
    out_ << ']';
    fresh_ = false;
    return *this;
  }
  std::string take() { return out_.str(); }

 private:
  void sep() {
    if (!fresh_) out_ << ',';
    fresh_ = false;
  }
  std::ostringstream out_;
  bool fresh_{true};
};

inline void write_complex(JsonWriter& w, cplx z) {
  w.begin_arr().num(z.real()).num(z.imag()).end_arr();
}

}  // namespace io

// {"T": float, "theta": float, "modes": [[k, re, im], ...]}
inline std::string potential_to_json(const Potential& q,
                                     const std::string& extra_fields = "") {
  io::JsonWriter w;
  w.begin_obj();
  w.key("T").num(q.T());
  w.key("theta").num(q.theta());
  w.key("modes").begin_arr();
  for (int k = -q.K(); k <= q.K(); ++k) {
    const cplx m = q.mode(k);
    if (k != 0 && m == cplx(0.0)) continue;
    w.begin_arr().num(k).num(m.real()).num(m.imag()).end_arr();
  }
  w.end_arr();
  if (!extra_fields.empty()) w.raw("," + extra_fields);
  w.end_obj();
  return w.take();
}

inline Potential potential_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("potential JSON parse error: ") + e.what());
  }
  try {
    const double T = j.at("T").get<double>();
    const double theta = j.value("theta", 0.0);
    std::map<int, cplx> modes;
    for (const auto& row : j.at("modes")) {
      if (!row.is_array() || row.size() != 3)
        throw input_error("potential JSON: each mode must be [k, re, im]");
      modes[row[0].get<int>()] =
          cplx(row[1].get<double>(), row[2].get<double>());
    }
    return Potential::from_modes(T, theta, modes);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("potential JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
}

inline Potential load_potential(const std::string& path) {
  return potential_from_json(read_file(path));
}

enum class CurveChart { Hyperboloid, Ball, Both };

// CSV columns: t, x0..x3 (hyperboloid) and/or b1..b3 (ball).
inline std::string curve_to_csv(const CurveSamples& curve, CurveChart chart) {
  std::ostringstream out;
  out << "t";
  if (chart != CurveChart::Ball) out << ",x0,x1,x2,x3";
  if (chart != CurveChart::Hyperboloid) out << ",b1,b2,b3";
  out << "\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    out << io::fmt17(curve.t[j]);
    if (chart != CurveChart::Ball) {
      const Vec4 h = curve.points[j].hyperboloid();
      out << ',' << io::fmt17(h.x0) << ',' << io::fmt17(h.x1) << ','
          << io::fmt17(h.x2) << ',' << io::fmt17(h.x3);
    }
    if (chart != CurveChart::Hyperboloid) {
      const auto b = curve.points[j].ball();
      out << ',' << io::fmt17(b[0]) << ',' << io::fmt17(b[1]) << ','
          << io::fmt17(b[2]);
    }
    out << "\n";
  }
  return out.str();
}

// Reads a curve CSV with columns t, x0, x1, x2, x3 (header optional).
inline CurveSamples curve_from_csv(const std::string& text) {
  CurveSamples curve;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    bool numeric = true;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) continue;  // header row
    if (vals.size() < 5) throw input_error("curve CSV: need columns t,x0,x1,x2,x3");
    curve.t.push_back(vals[0]);
    curve.points.push_back(h3_from_hyperboloid({vals[1], vals[2], vals[3], vals[4]}));
  }
  if (curve.points.size() < 2) throw input_error("curve CSV: too few rows");
  // Period: grid spacing times the row count (uniform grid without endpoint),
  // unless the last row sits at t = first + (n-1) h exactly with a wrapped
  // point; the caller may override.
  const double h = curve.t[1] - curve.t[0];
  curve.T = h * static_cast<double>(curve.points.size());
  return curve;
}

inline std::string closure_report_to_json_fields(const ClosureReport& rep) {
  io::JsonWriter w;
  w.key("lambda_star");
  io::write_complex(w, rep.lambda_star);
  w.key("delta");
  io::write_complex(w, rep.delta);
  w.key("delta1");
  io::write_complex(w, rep.delta1);
  w.key("sign").num(rep.sign);
  w.key("m_residual").num(rep.m_residual);
  w.key("order_n").num(rep.n);
  w.key("order_j0").num(rep.j0);
  w.key("semisimple").boolean(rep.semisimple);
  return w.take();
}

// {"lambda_k": [[k,re,im],...], "z_k": [[k,re,im],...], "closure": {...},
//  "order_reports": [...]}
inline std::string spectral_report_to_json(const std::vector<SpectralSample>& samples,
                                           const ClosureReport& closure,
                                           const OrderReport& order) {
  io::JsonWriter w;
  w.begin_obj();
  w.key("lambda_k").begin_arr();
  for (const auto& s : samples)
    w.begin_arr().num(s.k).num(s.lambda.real()).num(s.lambda.imag()).end_arr();
  w.end_arr();
  w.key("z_k").begin_arr();
  for (const auto& s : samples)
    w.begin_arr().num(s.k).num(s.z.real()).num(s.z.imag()).end_arr();
  w.end_arr();
  w.key("closure").begin_obj().raw(closure_report_to_json_fields(closure)).end_obj();
  w.key("order_reports").begin_arr();
  w.begin_obj();
  w.key("lambda");
  io::write_complex(w, order.lambda_star);
  w.key("n").num(order.n);
  w.key("j0").num(order.j0);
  w.key("nilpotent").boolean(order.nilpotent);
  if (order.ba_line) {
    w.key("ba_line").begin_arr();
    io::write_complex(w, order.ba_line->v1());
    io::write_complex(w, order.ba_line->v2());
    w.end_arr();
  }
  w.end_obj();
  w.end_arr();
  w.end_obj();
  return w.take();
}

// Config keys: n_steps, lambda_stencil_h, n, K_margin, newton_tol, max_iter,
// sign_policy, threads, tol. Unknown keys are ignored.
inline void apply_config_json(const std::string& text, Config* cfg, int* pipeline_n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("config JSON parse error: ") + e.what());
  }
  if (j.contains("n_steps")) cfg->n_steps = j["n_steps"].get<int>();
  if (j.contains("lambda_stencil_h")) cfg->lambda_stencil_h = j["lambda_stencil_h"].get<double>();
  if (j.contains("K_margin")) cfg->K_margin = j["K_margin"].get<int>();
  if (j.contains("N_fixed")) cfg->N_fixed = j["N_fixed"].get<int>();
  if (j.contains("newton_tol")) cfg->newton_tol = j["newton_tol"].get<double>();
  if (j.contains("max_iter")) cfg->max_iter = j["max_iter"].get<int>();
  if (j.contains("threads")) cfg->threads = j["threads"].get<int>();
  if (j.contains("tol")) cfg->closure_tol = j["tol"].get<double>();
  if (j.contains("sign_policy")) {
    const std::string p = j["sign_policy"].get<std::string>();
    if (p != "nearest")
      throw input_error("config: unsupported sign_policy '" + p + "'");
    cfg->sign_nearest = true;
  }
  if (pipeline_n && j.contains("n")) *pipeline_n = j["n"].get<int>();
}

}  // namespace fingap
