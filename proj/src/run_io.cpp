#include "laplacerf/run_io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "laplacerf/chebyshev.hpp"
#include "laplacerf/gallery.hpp"
#include "laplacerf/nystrom.hpp"

namespace laprf::io {

namespace {

cplx read_coeff(const json& v) {
  if (v.is_array()) return cplx(v.at(0).get<double>(), v.at(1).get<double>());
  return cplx(v.get<double>(), 0.0);
}

double param(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

} // namespace

geom::Boundary boundary_from_json(const json& j) {
  std::vector<geom::RationalSection> sections;
  std::vector<int> contour_of;
  std::vector<std::vector<cplx>> point_contours;
  geom::Smoothness smooth = geom::Smoothness::cubic;
  int contour = 0;
  bool any_points = false, any_sections = false;
  for (const json& c : j.at("contours")) {
    if (c.contains("points")) {
      any_points = true;
      std::vector<cplx> pts;
      for (const json& p : c.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      point_contours.push_back(std::move(pts));
      if (c.contains("smoothness"))
        smooth = c.at("smoothness") == "quintic" ? geom::Smoothness::quintic : geom::Smoothness::cubic;
    } else if (c.contains("sections")) {
      any_sections = true;
      for (const json& s : c.at("sections")) {
        geom::RationalSection sec;
        std::vector<cplx> num, den;
        for (const json& v : s.at("num")) num.push_back(read_coeff(v));
        if (s.contains("den"))
          for (const json& v : s.at("den")) den.push_back(read_coeff(v));
        else
          den = {cplx(1.0)};
        sec.num = cheb::from_monomial(num);
        sec.den = cheb::from_monomial(den);
        sections.push_back(std::move(sec));
        contour_of.push_back(contour);
      }
    } else {
      throw std::invalid_argument("geometry contour needs points or sections");
    }
    ++contour;
  }
  if (any_points && any_sections)
    throw std::invalid_argument("geometry mixes points and sections contours");
  if (any_points) return geom::ingest_samples(point_contours, smooth);
  return geom::make_boundary(std::move(sections), std::move(contour_of));
}

geom::Boundary read_geometry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("geometry not found: " + path);
  json j;
  in >> j;
  return boundary_from_json(j);
}

solver::BoundaryData read_node_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("node table not found: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double s, v;
    if (ls >> s >> v) rows.emplace_back(s, v);
  }
  if (rows.size() < 2) throw std::runtime_error("node table too small: " + path);
  std::sort(rows.begin(), rows.end());
  return [rows](double s, cplx, cplx, int) {
    s = s - std::floor(s);
    auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(s, -1e300));
    size_t i1 = it - rows.begin();
    double s0, v0, s1, v1;
    if (i1 == 0 || i1 == rows.size()) { // wrap around
      s0 = rows.back().first;
      v0 = rows.back().second;
      s1 = rows.front().first + 1.0;
      v1 = rows.front().second;
      if (i1 == 0) s += 1.0;
    } else {
      std::tie(s0, v0) = rows[i1 - 1];
      std::tie(s1, v1) = rows[i1];
    }
    const double w = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
    return v0 + w * (v1 - v0);
  };
}

geom::Boundary gallery_boundary(const std::string& name, const json& p) {
  if (name == "ellipse") return gallery::ellipse(param(p, "rx", 1.0), param(p, "ry", 0.5));
  if (name == "trigpoly")
    return gallery::trigpoly(param(p, "gamma", 1.75), static_cast<int>(param(p, "nu", 2)));
  if (name == "lshape") return gallery::lshape();
  if (name == "circle")
    return gallery::circle(cplx(param(p, "x", 0.0), param(p, "y", 0.0)), param(p, "r", 1.0));
  if (name == "two-circles")
    return gallery::two_circles(param(p, "d_over_R", 0.1), param(p, "R", 1.0));
  if (name == "random-ellipses")
    return gallery::random_ellipses(static_cast<int>(param(p, "n", 10)),
                                    static_cast<std::uint64_t>(param(p, "seed", 0)),
                                    param(p, "r0", 1.0))
        .boundary;
  throw std::invalid_argument("unknown gallery geometry: " + name);
}

solver::BoundaryData gallery_data(const std::string& name, const json& p) {
  if (name == "poles")
    return gallery::poles_data(static_cast<int>(param(p, "n0", 6)), param(p, "R", 1.5));
  if (name == "monopole")
    return gallery::monopole(cplx(param(p, "x", 0.0), param(p, "y", 0.0)));
  if (name == "essential") return gallery::essential(param(p, "x0", 1.01));
  if (name == "uniform-flow") return gallery::uniform_flow();
  if (name == "plusminus") return gallery::plusminus();
  throw std::invalid_argument("unknown gallery data: " + name);
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  const std::string kind = j.value("kind", "interior-dirichlet");
  if (kind == "interior-dirichlet") cfg.kind = solver::Kind::InteriorDirichlet;
  else if (kind == "exterior-dirichlet") cfg.kind = solver::Kind::ExteriorDirichlet;
  else if (kind == "exterior-neumann") cfg.kind = solver::Kind::ExteriorNeumann;
  else throw std::invalid_argument("unknown kind: " + kind);
  cfg.geometry = j.at("geometry");
  cfg.data = j.at("data");
  cfg.n_poles = j.value("n_poles", 8);
  cfg.tol = j.value("tol", 1e-12);
  cfg.max_iter = j.value("max_iter", 100);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.method = j.value("method", "rational");
  cfg.nystrom_points = j.value("nystrom_points", 200);
  if (j.contains("comparison_n")) cfg.comparison_n = j.at("comparison_n").get<std::vector<int>>();
  if (j.contains("adaptive")) {
    const json& a = j.at("adaptive");
    cfg.adaptive.enabled = a.value("enabled", true);
    cfg.adaptive.window = a.value("window", 5);
    cfg.adaptive.epsilon = a.value("epsilon", 0.5e-2);
  }
  if (j.contains("cluster")) {
    const json& c = j.at("cluster");
    cluster::LargeOptions lo;
    lo.k = c.value("k", 10);
    lo.poles_per_curve = c.value("poles_per_curve", 3);
    lo.local_tol = c.value("tol", 1e-2);
    lo.local_max_iter = c.value("max_iter", 100);
    lo.seed = cfg.seed;
    cfg.cluster_opts = lo;
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    cfg.out_report = o.value("report", "");
    cfg.out_poles = o.value("poles", "");
    cfg.out_comparison = o.value("comparison", "");
    if (o.contains("field")) {
      const json& f = o.at("field");
      RunConfig::FieldGrid g;
      g.path = f.at("path").get<std::string>();
      g.x0 = f.at("x0").get<double>();
      g.x1 = f.at("x1").get<double>();
      g.y0 = f.at("y0").get<double>();
      g.y1 = f.at("y1").get<double>();
      g.nx = f.at("nx").get<int>();
      g.ny = f.at("ny").get<int>();
      cfg.field = g;
    }
  }
  return cfg;
}

void write_model_csv(const basis::PotentialModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "type,re,im,value_re,value_im\n";
  if (m.has_const) out << "const,0,0," << m.a0 << ",0\n";
  for (size_t n = 0; n < m.poles.size(); ++n)
    out << "pole," << m.poles[n].real() << ',' << m.poles[n].imag() << ','
        << m.residues[n].real() << ',' << m.residues[n].imag() << '\n';
  for (size_t j = 0; j < m.log_coeffs.size(); ++j)
    out << "log," << m.log_centers[j].real() << ',' << m.log_centers[j].imag() << ','
        << m.log_coeffs[j] << ",0\n";
  for (size_t j = 0; j < m.v_consts.size(); ++j)
    out << "v," << j << ",0," << m.v_consts[j] << ",0\n";
}

void write_field_csv(const solver::FieldValues& f, const RunConfig::FieldGrid& g,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "x,y,u,v,masked\n";
  int idx = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix, ++idx) {
      const double x = g.x0 + (g.x1 - g.x0) * (g.nx > 1 ? double(ix) / (g.nx - 1) : 0.5);
      const double y = g.y0 + (g.y1 - g.y0) * (g.ny > 1 ? double(iy) / (g.ny - 1) : 0.5);
      out << x << ',' << y << ',' << f.u[idx] << ',' << f.v[idx] << ',' << (f.masked[idx] ? 1 : 0)
          << '\n';
    }
  }
}

namespace {

json report_json(const solver::SolveReport& r) {
  json out;
  out["delta_e"] = r.delta_e;
  out["stop_reason"] = r.stop_reason;
  out["best_iteration"] = r.best_iteration;
  out["wall_seconds"] = r.wall_seconds;
  out["delta_e_absolute"] = r.delta_e_absolute;
  json iters = json::array();
  for (const auto& it : r.iterations) {
    iters.push_back({{"iteration", it.iteration},
                     {"delta_e", it.delta_e},
                     {"n_out", it.n_out},
                     {"n_in", it.n_in},
                     {"K", it.testing_points},
                     {"basis", std::string(1, it.basis)},
                     {"accepted", it.accepted}});
  }
  out["iterations"] = iters;
  return out;
}

} // namespace

int run(const RunConfig& cfg) {
  geom::Boundary b = cfg.geometry.contains("file")
                         ? read_geometry_file(cfg.geometry.at("file").get<std::string>())
                         : gallery_boundary(cfg.geometry.at("gallery").get<std::string>(),
                                            cfg.geometry.value("params", json::object()));
  solver::BoundaryData data =
      cfg.data.contains("file")
          ? read_node_table(cfg.data.at("file").get<std::string>())
          : gallery_data(cfg.data.at("gallery").get<std::string>(),
                         cfg.data.value("params", json::object()));

  json report;
  report["config"] = {{"n_poles", cfg.n_poles}, {"tol", cfg.tol}, {"max_iter", cfg.max_iter},
                      {"seed", cfg.seed},       {"method", cfg.method}};
  report["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();

  basis::PotentialModel model;
  if (cfg.cluster_opts) {
    cluster::LargeSolution ls = cluster::solve_large(cfg.kind, b, data, *cfg.cluster_opts);
    model = ls.model;
    report["cluster"] = {{"global_delta_e", ls.report.global_delta_e},
                         {"rows", ls.report.rows},
                         {"cols", ls.report.cols},
                         {"local_delta_e", ls.report.local_delta_e},
                         {"wall_seconds", ls.report.wall_seconds}};
  } else if (cfg.method == "rational" || cfg.method == "both") {
    solver::ProblemSpec spec;
    spec.kind = cfg.kind;
    spec.boundary = b;
    spec.data = data;
    spec.n_poles = cfg.n_poles;
    spec.tol = cfg.tol;
    spec.max_iter = cfg.max_iter;
    spec.adaptive = cfg.adaptive;
    spec.seed = cfg.seed;
    solver::Solution sol = solver::solve(spec);
    model = sol.model;
    report["rational"] = report_json(sol.report);
    report["rational"]["delta_e_max"] = solver::delta_e_max(sol.model, b, data);
  }

  if (cfg.method == "nystrom" || cfg.method == "both") {
    if (cfg.kind == solver::Kind::ExteriorNeumann)
      throw std::invalid_argument("nystrom baseline supports Dirichlet kinds only");
    nystrom::NystromSolution ns =
        cfg.kind == solver::Kind::InteriorDirichlet
            ? nystrom::interior_dirichlet(b, data, cfg.nystrom_points)
            : nystrom::exterior_dirichlet(b, data, cfg.nystrom_points);
    report["nystrom"] = {{"points", cfg.nystrom_points},
                         {"delta_e_max", nystrom::delta_e_max(ns, b, data)}};
  }

  if (cfg.method == "both" && !cfg.out_comparison.empty()) {
    // Fig. 8/9-style ladder: N poles vs 2N Nystrom points.
    std::vector<int> ladder = cfg.comparison_n;
    if (ladder.empty()) ladder = {cfg.n_poles};
    std::ofstream out(cfg.out_comparison);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_comparison);
    out << "basis_count,rational_delta_e_max,nystrom_delta_e_max\n";
    for (int n : ladder) {
      solver::ProblemSpec spec;
      spec.kind = cfg.kind;
      spec.boundary = b;
      spec.data = data;
      spec.n_poles = n;
      spec.tol = cfg.tol;
      spec.max_iter = cfg.max_iter;
      solver::Solution sol = solver::solve(spec);
      const double rmax = solver::delta_e_max(sol.model, b, data);
      double nmax = std::nan("");
      nystrom::NystromSolution ns =
          cfg.kind == solver::Kind::InteriorDirichlet
              ? nystrom::interior_dirichlet(b, data, 2 * n)
              : nystrom::exterior_dirichlet(b, data, 2 * n);
      nmax = nystrom::delta_e_max(ns, b, data);
      out << 2 * n << ',' << rmax << ',' << nmax << '\n';
    }
  }

  if (!cfg.out_poles.empty()) write_model_csv(model, cfg.out_poles);
  if (cfg.field) {
    std::vector<cplx> grid;
    grid.reserve(static_cast<size_t>(cfg.field->nx) * cfg.field->ny);
    for (int iy = 0; iy < cfg.field->ny; ++iy)
      for (int ix = 0; ix < cfg.field->nx; ++ix)
        grid.emplace_back(
            cfg.field->x0 + (cfg.field->x1 - cfg.field->x0) *
                                (cfg.field->nx > 1 ? double(ix) / (cfg.field->nx - 1) : 0.5),
            cfg.field->y0 + (cfg.field->y1 - cfg.field->y0) *
                                (cfg.field->ny > 1 ? double(iy) / (cfg.field->ny - 1) : 0.5));
    solver::FieldValues fv = solver::eval_field(model, cfg.kind, b, grid);
    write_field_csv(fv, *cfg.field, cfg.field->path);
  }

  if (!cfg.out_report.empty()) {
    std::ofstream out(cfg.out_report);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_report);
    out << report.dump(2) << '\n';
  }
  return 0;
}

} // namespace laprf::io
