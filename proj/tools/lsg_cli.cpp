// Command-line front end: verification suites, pointwise curvature and
// operator dumps, machine-readable reports.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lsg/suites.hpp"

using namespace lsg;

namespace {

int finish(const SuiteReport& rep, const std::string& json_path) {
  int failed = 0;
  for (const auto& c : rep.checks) {
    if (!c.pass) {
      ++failed;
      std::cout << "FAIL  " << c.module << "/" << c.op << "  " << c.name
                << "  residual=" << c.residual << "  tol=" << c.tolerance << "\n";
    }
  }
  std::cout << (rep.overall_pass() ? "PASS" : "FAIL") << "  checks=" << rep.checks.size()
            << "  failed=" << failed << "  time=" << rep.wall_time_s << "s\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << to_json(rep).dump(2) << "\n";
  }
  return rep.overall_pass() ? 0 : 1;
}

nlohmann::json load_params(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--params", "cannot open '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.contains("params")) return doc.at("params");
  return doc;
}

nlohmann::json tensor4_json(const Tensor4& t) {
  nlohmann::json out = nlohmann::json::array();
  const int n = t.dim();
  for (int a = 0; a < n; ++a) {
    nlohmann::json ja = nlohmann::json::array();
    for (int b = 0; b < n; ++b) {
      nlohmann::json jb = nlohmann::json::array();
      for (int c = 0; c < n; ++c) {
        nlohmann::json jc = nlohmann::json::array();
        for (int d = 0; d < n; ++d) jc.push_back(t(a, b, c, d));
        jb.push_back(jc);
      }
      ja.push_back(jb);
    }
    out.push_back(ja);
  }
  return out;
}

nlohmann::json matrix_json(const MatR& m) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

nlohmann::json spinor_json(const VecC& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lsg: numerical Lorentzian spin geometry verification engine"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  double tol_scale = 1.0;
  int grid = 5;
  std::string json_path, params_path;
  app.add_option("--seed", seed, "seed for every random draw");
  app.add_option("--tol", tol_scale, "multiplier applied to every default tolerance");
  app.add_option("--grid", grid, "lattice points per dimension for sample grids");
  app.add_option("--json", json_path, "write the report as JSON to this path");

  auto* alg = app.add_subcommand("algebra", "Clifford/spinor invariants for one dimension");
  alg->fallthrough();
  int alg_n = 7;
  alg->add_option("n", alg_n, "vector space dimension (2..8)")->required();

  auto* geo = app.add_subcommand("geometry", "verify a model geometry's expectation list");
  geo->fallthrough();
  std::string geo_name;
  geo->add_option("name", geo_name, "geometry name")->required();
  geo->add_option("--params", params_path, "JSON parameter file {\"name\":..,\"params\":{..}}");

  auto* pnt = app.add_subcommand("point", "single-point computation dumped as JSON");
  pnt->fallthrough();
  std::string pnt_name, pnt_what = "curvature", pnt_coords;
  pnt->add_option("name", pnt_name, "geometry name")->required();
  pnt->add_option("--point", pnt_coords, "comma-separated coordinates")->required();
  pnt->add_option("--what", pnt_what, "curvature|dirac|twistor-residual|killing-analysis");
  pnt->add_option("--params", params_path, "JSON parameter file");

  auto* sut = app.add_subcommand("suite", "run verification suites");
  sut->fallthrough();
  std::string sut_which = "all";
  sut->add_option("which", sut_which, "'all' runs the complete acceptance sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  SuiteOptions opt;
  opt.seed = seed;
  opt.tol_scale = tol_scale;
  opt.grid = grid;

  try {
    if (*alg) {
      if (alg_n < 2 || alg_n > 8) {
        std::cerr << "algebra: n must be in 2..8\n";
        return 2;
      }
      return finish(algebra_suite(alg_n, opt), json_path);
    }
    if (*geo) {
      GeometrySpec spec = make_geometry(geo_name, load_params(params_path));
      return finish(geometry_suite(spec, opt), json_path);
    }
    if (*pnt) {
      GeometrySpec spec = make_geometry(pnt_name, load_params(params_path));
      VecR x(spec.chart->dim);
      {
        std::stringstream ss(pnt_coords);
        std::string tok;
        int k = 0;
        while (std::getline(ss, tok, ',') && k < spec.chart->dim) x(k++) = std::stod(tok);
        if (k != spec.chart->dim) {
          std::cerr << "point: need " << spec.chart->dim << " coordinates\n";
          return 2;
        }
      }
      if (!spec.chart->in_domain(x)) {
        std::cerr << "point: outside the chart domain\n";
        return 2;
      }
      nlohmann::json out{{"geometry", pnt_name}, {"what", pnt_what}};
      if (pnt_what == "curvature") {
        auto p = curvature_pack(*spec.chart, x);
        out["riemann"] = tensor4_json(p.riemann);
        out["ricci"] = matrix_json(p.ricci);
        out["scalar"] = p.scalar;
        out["rho"] = matrix_json(p.rho);
        out["weyl"] = tensor4_json(p.weyl);
      } else if (pnt_what == "dirac" || pnt_what == "twistor-residual") {
        if (spec.spinors.empty() || !spec.rep) {
          std::cerr << "point: geometry has no bundled spinor field\n";
          return 2;
        }
        const auto& [nm, field] = *spec.spinors.begin();
        FrameField fr = spec.frame();
        out["field"] = nm;
        if (pnt_what == "dirac")
          out["dirac"] = spinor_json(dirac_operator(*spec.rep, *spec.chart, fr, field, x));
        else
          out["twistor_residual"] = twistor_residual(*spec.rep, *spec.chart, fr, field, x);
      } else if (pnt_what == "killing-analysis") {
        std::string vec_name = spec.vectors.count("fiber")          ? "fiber"
                               : spec.vectors.count("parallel_null") ? "parallel_null"
                                                                     : "";
        if (vec_name.empty()) {
          std::cerr << "point: geometry has no bundled lightlike Killing field\n";
          return 2;
        }
        Rng rng(seed);
        auto region = random_interior_points(*spec.chart, rng, 6);
        auto an = lightlike_killing_analysis(*spec.chart, spec.vectors.at(vec_name), x, region,
                                             1e-6 * tol_scale);
        out["vector_field"] = vec_name;
        out["eps"] = an.eps;
        out["verdict"] = to_string(an.verdict);
        out["ric_vv"] = an.ric_vv;
        out["eta_v"] = an.eta_v;
        out["twist"] = an.twist;
        out["report"] = to_json(an.report);
      } else {
        std::cerr << "point: unknown --what '" << pnt_what << "'\n";
        return 2;
      }
      std::cout << out.dump(2) << "\n";
      if (!json_path.empty()) {
        std::ofstream o(json_path);
        o << out.dump(2) << "\n";
      }
      return 0;
    }
    if (*sut) {
      if (sut_which != "all") {
        std::cerr << "suite: only 'all' is available\n";
        return 2;
      }
      return finish(suite_all(opt), json_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (*geo || *pnt) {
      std::cerr << "known geometries:";
      for (const auto& g : geometry_registry()) std::cerr << " " << g;
      std::cerr << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
