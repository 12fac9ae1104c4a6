// Command-line front end: analyze / close / reconstruct / dress.
// Exit codes: 0 success, 1 input error, 2 numerical or pipeline failure.

#include <CLI11.hpp>

#include <complex>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fingap/fingap.hpp"

namespace {

using fingap::cplx;

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ','))
    vals.push_back(std::stod(cell));
  return vals;
}

struct GlobalOpts {
  std::string config_path;
  int threads = 1;
  double tol = -1.0;
};

fingap::Config make_config(const GlobalOpts& g, int* pipeline_n) {
  fingap::Config cfg;
  if (!g.config_path.empty())
    fingap::apply_config_json(fingap::read_file(g.config_path), &cfg, pipeline_n);
  if (g.threads > 0) cfg.threads = g.threads;
  if (g.tol > 0.0) cfg.closure_tol = g.tol;
  return cfg;
}

int run_analyze(const std::string& file, int k_max, const std::string& out,
                const GlobalOpts& g) {
  const fingap::Config cfg = make_config(g, nullptr);
  const fingap::Potential q = fingap::load_potential(file);
  const auto samples = fingap::perturbed_coeffs(q, -k_max, k_max, cfg);
  const fingap::ClosureReport closure = fingap::closure_residual(q, q.theta(), cfg);
  fingap::OrderReport order =
      fingap::zero_order_at(q, cplx(q.theta(), 1.0), cfg);
  if (order.n >= 1) fingap::baker_akhiezer_line(order);
  const std::string json = fingap::spectral_report_to_json(samples, closure, order);
  if (out.empty())
    std::cout << json << "\n";
  else
    fingap::write_file(out, json);
  std::cerr << "analyze: " << samples.size() << " spectral samples, closure "
            << (closure.semisimple ? "passes" : "fails")
            << " (m_residual " << closure.m_residual << ")\n";
  return 0;
}

int run_close(const std::string& file, int n, const std::string& out,
              const GlobalOpts& g) {
  int cfg_n = -1;
  const fingap::Config cfg = make_config(g, &cfg_n);
  if (n <= 0) n = cfg_n;
  if (n <= 0) throw fingap::input_error("close: need --n or config key n");
  const fingap::Potential q = fingap::load_potential(file);
  const fingap::PipelineResult res =
      fingap::finite_gap_approximate(q, q.theta(), n, cfg);

  fingap::io::JsonWriter prov;
  prov.key("provenance").begin_obj();
  prov.key("n").num(n);
  prov.key("iterations").num(res.newton.iterations);
  prov.key("newton_residual").num(res.newton.final_residual);
  prov.key("closure_residual").num(res.closure_out.m_residual);
  prov.key("delta");
  fingap::io::write_complex(prov, res.closure_out.delta);
  prov.key("delta1");
  fingap::io::write_complex(prov, res.closure_out.delta1);
  prov.key("l2_distance_to_input").num(res.l2_to_input);
  prov.key("undressed").boolean(res.undressed);
  prov.key("redressed").boolean(res.redressed);
  prov.end_obj();
  const std::string json = fingap::potential_to_json(res.q_n, prov.take());
  if (out.empty())
    std::cout << json << "\n";
  else
    fingap::write_file(out, json);
  std::cerr << "close: n=" << n << " closure residual "
            << res.closure_out.m_residual << ", distance to input "
            << res.l2_to_input << "\n";
  return 0;
}

int run_reconstruct(const std::string& file, int samples, const std::string& out,
                    const std::string& chart, const GlobalOpts& g) {
  const fingap::Config cfg = make_config(g, nullptr);
  if (samples < 8) throw fingap::input_error("reconstruct: need at least 8 samples");
  const fingap::Potential q = fingap::load_potential(file);
  const fingap::CurveSamples curve =
      fingap::sym_reconstruct(q, q.theta(), samples, cfg);
  fingap::CurveChart ch = fingap::CurveChart::Both;
  if (chart == "ball") ch = fingap::CurveChart::Ball;
  else if (chart == "hyperboloid") ch = fingap::CurveChart::Hyperboloid;
  else if (chart != "both")
    throw fingap::input_error("reconstruct: unknown chart '" + chart + "'");
  const std::string csv = fingap::curve_to_csv(curve, ch);
  if (out.empty())
    std::cout << csv;
  else
    fingap::write_file(out, csv);
  const double gap = fingap::curve_closure_gap(q, q.theta(), cfg);
  std::cerr << "reconstruct: closure gap " << gap << ", endpoint distance "
            << curve.closure_gap() << "\n";
  return 0;
}

int run_dress(const std::string& file, const std::string& lambda_star_arg,
              const std::string& line_arg, const std::string& out,
              const GlobalOpts& g) {
  const fingap::Config cfg = make_config(g, nullptr);
  const std::vector<double> lsv = parse_csv_doubles(lambda_star_arg);
  if (lsv.size() != 2)
    throw fingap::input_error("dress: --lambda-star expects 're,im'");
  const cplx ls(lsv[0], lsv[1]);
  if (std::abs(ls.imag()) < 1e-12 * (1.0 + std::abs(ls)))
    throw fingap::input_error("dress: lambda_star must not be real");

  const std::vector<double> lv = parse_csv_doubles(line_arg);
  fingap::CPLine line;
  if (lv.size() == 2)
    line = fingap::CPLine(lv[0], lv[1]);
  else if (lv.size() == 4)
    line = fingap::CPLine(cplx(lv[0], lv[1]), cplx(lv[2], lv[3]));
  else
    throw fingap::input_error("dress: --line expects 'a,b' or 're1,im1,re2,im2'");

  const fingap::Potential q = fingap::load_potential(file);
  const fingap::SimpleFactor sf(ls, line);
  const fingap::FrameResult fr = fingap::integrate_frame(q, ls, cfg.n_steps);
  const fingap::DressResult res = fingap::dress_potential(q, sf, fr, cfg);

  fingap::io::JsonWriter prov;
  if (res.periodicity_warning)
    prov.key("warning").str(
        "line is not an eigenline of M(lambda_star): dressed potential is not T-periodic");
  prov.key("provenance").begin_obj();
  prov.key("lambda_star");
  fingap::io::write_complex(prov, ls);
  prov.key("line").begin_arr();
  fingap::io::write_complex(prov, line.v1());
  fingap::io::write_complex(prov, line.v2());
  prov.end_arr();
  prov.key("c_samples").begin_arr();
  const std::size_t stride = std::max<std::size_t>(1, res.c.size() / 256);
  for (std::size_t j = 0; j < res.c.size(); j += stride)
    prov.begin_arr().num(res.t[j]).num(res.c[j].real()).num(res.c[j].imag()).end_arr();
  prov.end_arr();
  prov.end_obj();
  const std::string json = fingap::potential_to_json(res.potential, prov.take());
  if (out.empty())
    std::cout << json << "\n";
  else
    fingap::write_file(out, json);
  if (res.periodicity_warning)
    std::cerr << "dress: warning: line is not an eigenline of M(lambda_star); "
                 "dressed potential is not T-periodic\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed finite-gap curves in H^3: spectral analysis, closing, "
               "reconstruction and dressing"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "config JSON path");
  app.add_option("--threads", g.threads, "worker cap for parallel stages");
  app.add_option("--tol", g.tol, "closing tolerance override");

  std::string in_file, out_file;
  int k_max = 8;
  auto* analyze = app.add_subcommand("analyze", "spectral report of a potential");
  analyze->add_option("potential", in_file, "potential JSON")->required();
  analyze->add_option("--k-max", k_max, "spectral sample range |k| <= k_max");
  analyze->add_option("--out", out_file, "output report path (default stdout)");

  int close_n = -1;
  auto* close = app.add_subcommand("close", "finite-gap approximation pipeline");
  close->add_option("potential", in_file, "potential JSON")->required();
  close->add_option("--n", close_n, "truncation index n");
  close->add_option("--out", out_file, "output potential path (default stdout)");

  int samples = 256;
  std::string chart = "both";
  bool ball_flag = false, hyp_flag = false;
  auto* rec = app.add_subcommand("reconstruct", "Sym reconstruction to a curve file");
  rec->add_option("potential", in_file, "potential JSON")->required();
  rec->add_option("--samples", samples, "output sample count");
  rec->add_option("--chart", chart, "hyperboloid | ball | both");
  rec->add_flag("--ball", ball_flag, "shorthand for --chart ball");
  rec->add_flag("--hyperboloid", hyp_flag, "shorthand for --chart hyperboloid");
  rec->add_option("--out", out_file, "output CSV path (default stdout)");

  std::string lambda_star_arg, line_arg;
  auto* dress = app.add_subcommand("dress", "simple-factor dressing of a potential");
  dress->add_option("potential", in_file, "potential JSON")->required();
  dress->add_option("--lambda-star", lambda_star_arg, "pole 're,im'")->required();
  dress->add_option("--line", line_arg, "projective line 'a,b' or 're1,im1,re2,im2'")
      ->required();
  dress->add_option("--out", out_file, "output potential path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze) return run_analyze(in_file, k_max, out_file, g);
    if (*close) return run_close(in_file, close_n, out_file, g);
    if (*rec) {
      if (ball_flag) chart = "ball";
      if (hyp_flag) chart = "hyperboloid";
      return run_reconstruct(in_file, samples, out_file, chart, g);
    }
    if (*dress) return run_dress(in_file, lambda_star_arg, line_arg, out_file, g);
  } catch (const fingap::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const fingap::numeric_error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
