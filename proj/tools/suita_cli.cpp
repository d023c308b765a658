// Command-line front end: deterministic JSON/CSV outputs for domain checks,
// harmonic measures, Green functions, capacities, periods, equality loci and
// Bergman kernel estimates.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "suita/suita.hpp"

namespace {

using nlohmann::json;
using namespace suita;

Complex parse_xy(const std::string& s, const char* flag) {
  std::istringstream in(s);
  double x, y;
  char comma;
  if (!(in >> x >> comma >> y) || comma != ',')
    throw ValidationError(std::string(flag) + " expects \"x,y\"");
  return {x, y};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file: " + out_path);
  out << text;
}

json xy_json(Complex z) { return json::array({z.real(), z.imag()}); }

WeightSpec resolve_weight(const std::string& weight_path, std::optional<int> k_flag) {
  if (!weight_path.empty()) return load_weight(weight_path, k_flag);
  return WeightSpec::trivial(k_flag.value_or(0));
}

// interior grid samples of the harmonic measures, masked like the locus grid
std::string measures_grid_csv(const PlanarDomain& domain, const HarmonicMeasureSet& measures,
                              int grid) {
  PeriodVector zeros{std::vector<double>(measures.count(), 0.0)};
  detail::GridEval ev = detail::evaluate_grid(domain, measures, zeros, 0, grid);
  std::ostringstream os;
  os << "x,y";
  for (int j = 1; j <= measures.count() + 1; ++j) os << ",u_" << j;
  os << "\n";
  for (int iy = 0; iy < grid; ++iy)
    for (int ix = 0; ix < grid; ++ix) {
      size_t idx = static_cast<size_t>(iy) * grid + ix;
      if (!std::isfinite(ev.field.values[idx])) continue;
      Complex z = ev.field.point(ix, iy);
      os << format_double(z.real()) << "," << format_double(z.imag());
      double sum = 0.0;
      for (int j = 0; j < measures.count(); ++j) {
        os << "," << format_double(ev.u[j][idx]);
        sum += ev.u[j][idx];
      }
      os << "," << format_double(1.0 - sum) << "\n";
    }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"computational potential theory on multiply connected planar domains"};
  app.require_subcommand(1);

  std::string domain_path, weight_path, out_path, at_str, pole_str, point_str, points_path;
  std::string grid_csv_path = "locus_grid.csv";
  int nodes = 256, grid = 0, degree = 8, kmax = 60, quad_nodes = 200000, grid_res = 256;
  int feas_grid = 96;
  std::optional<int> k_flag;
  int k_value = 0;
  double tol = 1e-4, target = 1e-4;
  bool sweep = false;

  auto add_domain = [&](CLI::App* cmd) {
    cmd->add_option("domain", domain_path, "domain spec (JSON)")->required();
    cmd->add_option("--out", out_path, "write output to this file instead of stdout");
  };

  CLI::App* c_check = app.add_subcommand("check", "validate a domain spec");
  add_domain(c_check);

  CLI::App* c_hm = app.add_subcommand("harmonic-measure", "harmonic measures u_1..u_n");
  add_domain(c_hm);
  c_hm->add_option("--nodes", nodes, "boundary nodes per curve");
  c_hm->add_option("--grid", grid, "emit CSV samples on an NxN interior grid");
  c_hm->add_option("--at", at_str, "evaluate at a single point x,y");

  CLI::App* c_green = app.add_subcommand("green", "Green function with a given pole");
  add_domain(c_green);
  c_green->add_option("--pole", pole_str, "pole x,y")->required();
  c_green->add_option("--nodes", nodes, "boundary nodes per curve");
  c_green->add_option("--grid", grid, "emit CSV samples on an NxN interior grid");
  c_green->add_option("--at", at_str, "evaluate at a single point x,y");

  CLI::App* c_cap = app.add_subcommand("capacity", "logarithmic capacity c_beta at points");
  add_domain(c_cap);
  c_cap->add_option("--points", points_path, "CSV file of x,y points")->required();
  c_cap->add_option("--nodes", nodes, "boundary nodes per curve");

  CLI::App* c_per = app.add_subcommand("periods", "cycle periods and characters");
  add_domain(c_per);
  c_per->add_option("--weight", weight_path, "weight spec (JSON)");
  c_per->add_option("--pole", pole_str, "Green pole x,y (enables green_periods)");
  c_per->add_option("--k", k_value, "derivative order override");
  c_per->add_option("--nodes", nodes, "boundary nodes per curve");

  CLI::App* c_locus = app.add_subcommand("locus", "equality locus extraction");
  add_domain(c_locus);
  c_locus->add_option("--k", k_value, "derivative order");
  c_locus->add_option("--weight", weight_path, "weight spec (JSON)");
  c_locus->add_option("--grid", grid_res, "grid resolution per axis");
  c_locus->add_option("--tol", tol, "membership tolerance");
  c_locus->add_option("--nodes", nodes, "boundary nodes per curve");
  c_locus->add_option("--grid-csv", grid_csv_path, "path for the residual-field CSV");

  CLI::App* c_berg = app.add_subcommand("bergman", "weighted Bergman kernel estimate");
  add_domain(c_berg);
  c_berg->add_option("--k", k_value, "derivative order");
  c_berg->add_option("--weight", weight_path, "weight spec (JSON)");
  c_berg->add_option("--point", point_str, "evaluation point x,y")->required();
  c_berg->add_option("--degree", degree, "basis degree M");
  c_berg->add_option("--quad-nodes", quad_nodes, "area quadrature budget");
  c_berg->add_option("--nodes", nodes, "boundary nodes per curve");
  c_berg->add_flag("--sweep", sweep, "report a degree convergence sweep");

  CLI::App* c_feas = app.add_subcommand("feasibility", "search for an equality point over k");
  add_domain(c_feas);
  c_feas->add_option("--kmax", kmax, "largest k to try");
  c_feas->add_option("--nodes", nodes, "boundary nodes per curve");
  c_feas->add_option("--grid", feas_grid, "scan grid resolution");
  c_feas->add_option("--target", target, "residual target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (CLI::App* cmd : {c_per, c_locus, c_berg})
    if (cmd->parsed() && cmd->count("--k") > 0) k_flag = k_value;

  if (c_check->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    json j{{"valid", true},
           {"connectivity", domain.connectivity()},
           {"holes", domain.connectivity() - 1}};
    emit(j.dump() + "\n", out_path);
    return 0;
  }

  if (c_hm->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    HarmonicMeasureSet measures = harmonic_measures(domain, nodes);
    if (!at_str.empty()) {
      Complex p = parse_xy(at_str, "--at");
      std::ostringstream os;
      os << format_double(p.real()) << "," << format_double(p.imag());
      for (double u : measures.evaluate_all(p)) os << "," << format_double(u);
      os << "\n";
      emit(os.str(), out_path);
    } else {
      if (grid <= 0) grid = 64;
      emit(measures_grid_csv(domain, measures, grid), out_path);
    }
    return 0;
  }

  if (c_green->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    GreenData g = green_function(domain, parse_xy(pole_str, "--pole"), nodes);
    if (!at_str.empty()) {
      emit(format_double(g.value(parse_xy(at_str, "--at"))) + "\n", out_path);
    } else {
      if (grid <= 0) grid = 64;
      HarmonicMeasureSet dummy(std::vector<HarmonicSolution>{g.regular_part()});
      PeriodVector zeros{std::vector<double>(1, 0.0)};
      detail::GridEval ev = detail::evaluate_grid(domain, dummy, zeros, 0, grid);
      std::ostringstream os;
      os << "x,y,G\n";
      for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
          size_t idx = static_cast<size_t>(iy) * grid + ix;
          if (!std::isfinite(ev.field.values[idx])) continue;
          Complex z = ev.field.point(ix, iy);
          if (std::abs(z - g.pole()) < 1e-12) continue;
          double G = std::log(std::abs(z - g.pole())) + ev.u[0][idx];
          os << format_double(z.real()) << "," << format_double(z.imag()) << ","
             << format_double(G) << "\n";
        }
      emit(os.str(), out_path);
    }
    return 0;
  }

  if (c_cap->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    std::vector<Complex> pts = parse_points_csv(read_file(points_path));
    std::ostringstream os;
    os << "x,y,c_beta\n";
    for (Complex p : pts) {
      GreenData g = green_function(domain, p, nodes);
      os << format_double(p.real()) << "," << format_double(p.imag()) << ","
         << format_double(g.capacity()) << "\n";
    }
    emit(os.str(), out_path);
    return 0;
  }

  if (c_per->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    WeightSpec w = resolve_weight(weight_path, k_flag);
    auto cycles = standard_cycles(domain);
    PeriodVector wp = weight_periods(w, domain, cycles);
    json j;
    j["weight_periods"] = json::array();
    for (double v : wp.values) j["weight_periods"].push_back(v);
    j["green_periods"] = nullptr;
    j["characters"] = json::array();
    if (!pole_str.empty()) {
      GreenData g = green_function(domain, parse_xy(pole_str, "--pole"), nodes);
      std::vector<double> gp = green_periods(g, cycles);
      j["green_periods"] = json::array();
      for (double v : gp) j["green_periods"].push_back(v);
      for (Complex c : green_characters(g, cycles))
        j["characters"].push_back({{"re", c.real()}, {"im", c.imag()}});
    } else {
      // characters of the weight's harmonic part along the cycles as oriented
      for (double v : wp.values) {
        Complex c = std::polar(1.0, kTwoPi * period_sign() * v);
        j["characters"].push_back({{"re", c.real()}, {"im", c.imag()}});
      }
    }
    emit(j.dump() + "\n", out_path);
    return 0;
  }

  if (c_locus->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    WeightSpec w = resolve_weight(weight_path, k_flag);
    LocusQuery q{domain, w, grid_res, tol, true, nodes};
    LocusReport rep = extract_locus(q);
    std::ostringstream csv;
    csv << "x,y,residual\n";
    for (int iy = 0; iy < rep.field.ny; ++iy)
      for (int ix = 0; ix < rep.field.nx; ++ix) {
        double r = rep.field.at(ix, iy);
        if (!std::isfinite(r)) continue;
        Complex z = rep.field.point(ix, iy);
        csv << format_double(z.real()) << "," << format_double(z.imag()) << ","
            << format_double(r) << "\n";
      }
    emit(csv.str(), grid_csv_path);
    json j;
    j["k"] = rep.k;
    j["periods"] = rep.periods;
    j["curves"] = json::array();
    for (const auto& c : rep.curves) {
      json jc{{"m", c.level}, {"points", json::array()}};
      for (Complex p : c.points) jc["points"].push_back(xy_json(p));
      j["curves"].push_back(std::move(jc));
    }
    j["points"] = json::array();
    for (const auto& p : rep.points)
      j["points"].push_back({{"m", p.levels}, {"z", xy_json(p.z)}, {"residual", p.residual}});
    j["unresolved"] = json::array();
    for (Complex p : rep.unresolved) j["unresolved"].push_back(xy_json(p));
    j["grid_residual_csv"] = grid_csv_path;
    emit(j.dump() + "\n", out_path);
    return 0;
  }

  if (c_berg->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    WeightSpec w = resolve_weight(weight_path, k_flag);
    Complex z0 = parse_xy(point_str, "--point");
    QuadConfig qc;
    qc.budget = quad_nodes;
    qc.green_nodes = nodes;
    qc.sweep = sweep;
    BergmanEstimate est = bergman_kernel_k(domain, w, z0, degree, qc);
    GreenData g = green_function(domain, z0, nodes);
    json j;
    j["B"] = est.kernel_value;
    j["E"] = est.energy;
    j["D"] = est.dimension;
    j["capacity"] = g.capacity();
    j["ratio"] = suita_ratio(w, g, est, z0);
    if (sweep) {
      j["convergence"] = json::array();
      for (auto [d, B] : est.convergence) j["convergence"].push_back({{"M", d}, {"B", B}});
    }
    emit(j.dump() + "\n", out_path);
    return 0;
  }

  if (c_feas->parsed()) {
    PlanarDomain domain = load_domain(domain_path);
    auto found = find_equality_point(domain, kmax, target, nodes, feas_grid);
    json j;
    j["found"] = found.has_value();
    if (found) {
      j["k"] = found->k;
      j["z"] = xy_json(found->z);
      j["residual"] = found->residual;
    }
    emit(j.dump() + "\n", out_path);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const suita::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const suita::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
