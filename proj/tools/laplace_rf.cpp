// Batch front end: config-driven solves, gallery listing, quadrature
// self-check. See README for the config schema.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "laplacerf/detail/adaptive.hpp"
#include "laplacerf/gallery.hpp"
#include "laplacerf/quadrature.hpp"
#include "laplacerf/run_io.hpp"

namespace {

int quad_check(int n_sets, std::uint64_t seed) {
  using namespace laprf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < n_sets; ++trial) {
    // Conjugate-closed pole multiset with elliptical radius >= 1.05.
    const int pairs = 1 + static_cast<int>(uni(rng) * 5);
    std::vector<cplx> poles;
    for (int i = 0; i < pairs; ++i) {
      const double rho = 1.05 + 4.0 * uni(rng);
      const double phi = kPi * uni(rng);
      const cplx beta = std::exp(cplx(0, phi)) / rho;
      const cplx a = 0.5 * (beta + 1.0 / beta);
      poles.push_back(a);
      poles.push_back(std::conj(a));
    }
    const int n_inf = static_cast<int>(uni(rng) * 4);
    const quad::Rule1D rule = quad::rational_chebyshev_rule(poles, n_inf);

    // Random member of the exactness space, real on [-1,1].
    std::vector<cplx> coef(poles.size());
    for (auto& c : coef) c = cplx(2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0);
    std::vector<double> pcoef(2 * n_inf + 2);
    for (auto& c : pcoef) c = 2.0 * uni(rng) - 1.0;
    auto f = [&](double x) {
      cplx acc = 0.0;
      for (size_t i = 0; i < poles.size(); ++i) acc += coef[i] / (x - poles[i]);
      double v = acc.real();
      double xn = 1.0;
      for (double c : pcoef) {
        v += c * xn;
        xn *= x;
      }
      return v;
    };
    double got = 0.0;
    for (size_t k = 0; k < rule.x.size(); ++k) got += rule.w[k] * f(rule.x[k]);
    const double want = detail::integrate(
        [&](double th) { return f(std::cos(th)); }, 0.0, kPi, 1e-14);
    const double scale = std::max(1.0, std::abs(want));
    worst = std::max(worst, std::abs(got - want) / scale);
  }
  std::printf("quad-check: %d random rules, worst relative error %.3e\n", n_sets, worst);
  return worst <= 1e-12 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational-function solver for 2D Laplace boundary-value problems"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "solve a problem described by a JSON config");
  run_cmd->add_option("config", config_path, "config file")->required();

  bool list_flag = false;
  CLI::App* gal_cmd = app.add_subcommand("gallery", "built-in geometries and data");
  gal_cmd->add_flag("--list", list_flag, "list gallery entries");

  int qc_sets = 200;
  std::uint64_t qc_seed = 12345;
  CLI::App* qc_cmd = app.add_subcommand("quad-check", "quadrature exactness self-check");
  qc_cmd->add_option("--sets", qc_sets, "number of random pole sets");
  qc_cmd->add_option("--seed", qc_seed, "rng seed");

  std::string table_path = "prune_table.csv";
  CLI::App* pt_cmd = app.add_subcommand("prune-table", "dump the pruning table");
  pt_cmd->add_option("--out", table_path, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << R"({"error":"config not found","path":")" << config_path << "\"}\n";
        return 2;
      }
      nlohmann::json j;
      in >> j;
      return laprf::io::run(laprf::io::parse_config(j));
    }
    if (gal_cmd->parsed()) {
      for (const std::string& s : laprf::gallery::list()) std::cout << s << '\n';
      return 0;
    }
    if (qc_cmd->parsed()) return quad_check(qc_sets, qc_seed);
    if (pt_cmd->parsed()) {
      laprf::quad::PruneTable::builtin().dump_csv(table_path);
      std::cout << "wrote " << table_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump() << '\n';
    const std::string what = e.what();
    return what.find("not found") != std::string::npos ? 2 : 1;
  }
  return 0;
}
