#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using bipolar::ParseError;
using bipolar::Vec3;

Vec3 parse_vec(const std::string &s, const char *flag) {
  std::stringstream ss(s);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw ParseError(std::string(flag) + ": '" + s + "' is not a comma triple of numbers");
    }
  }
  if (v.size() != 3)
    throw ParseError(std::string(flag) + ": expected x,y,z, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

bipolar::cli::Grid parse_grid(const std::string &s, bool log) {
  std::stringstream ss(s);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || n.empty())
    throw ParseError("--r-grid: expected start:stop:count, got '" + s + "'");
  try {
    return {std::stod(a), std::stod(b), std::stoi(n), log};
  } catch (const std::exception &) {
    throw ParseError("--r-grid: expected start:stop:count, got '" + s + "'");
  }
}

} // namespace

int main(int argc, char **argv) {
  using namespace bipolar::cli;
  CLI::App app{"Bipolar expansion, mean square radii and overlap energies"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string b = "0,0,0", a = "0,0,0", R = "0,0,1", dir = "0,0,1", grid = "0.1:10:50";
  std::string format = "csv", system = "hp";
  bool log_grid = false;

  auto common = [&](CLI::App *s) {
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", cfg.out, "output file (default: standard output)");
  };

  auto *msr = app.add_subcommand("msr", "mean square radii table (l, m, n, re, im)");
  msr->add_option("--rho", cfg.rho, "density spec file or text")->required();
  msr->add_option("--lmax", cfg.l_max);
  msr->add_option("--nmax", cfg.n_max);
  common(msr);

  auto *expand = app.add_subcommand("expand", "bipolar expansion of 1/|b - a - R|");
  expand->add_option("--form", cfg.form, "1, 2, 3, 4 or all");
  expand->add_option("--b", b, "x,y,z");
  expand->add_option("--a", a, "x,y,z");
  expand->add_option("--R", R, "x,y,z");
  expand->add_option("--lmax", cfg.l_max);
  common(expand);

  auto *energy = app.add_subcommand("energy", "interaction energy of two densities");
  energy->add_option("--rho1", cfg.rho1, "density at the origin")->required();
  energy->add_option("--rho2", cfg.rho2, "density at R")->required();
  energy->add_option("--R", R, "x,y,z");
  energy->add_option("--method", cfg.method, "direct, fourier, multipole, overlap or all")
      ->check(CLI::IsMember({"direct", "fourier", "multipole", "overlap", "all"}));
  energy->add_option("--lmax", cfg.l_max);
  energy->add_option("--unit-scale", cfg.unit_scale, "multiplier applied to output energies");
  common(energy);

  auto *sweep = app.add_subcommand("sweep", "energy over a grid of separations");
  sweep->add_option("--rho1", cfg.rho1)->required();
  sweep->add_option("--rho2", cfg.rho2)->required();
  sweep->add_option("--direction", dir, "separation axis x,y,z");
  sweep->add_option("--r-grid", grid, "start:stop:count");
  sweep->add_flag("--log", log_grid, "geometric grid");
  sweep->add_option("--method", cfg.method, "direct, fourier, multipole or overlap")
      ->check(CLI::IsMember({"direct", "fourier", "multipole", "overlap", "all"}));
  sweep->add_option("--lmax", cfg.l_max);
  sweep->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  sweep->add_option("--unit-scale", cfg.unit_scale);
  common(sweep);

  auto *pert = app.add_subcommand("perturb", "first-order H-H / H-p energy, closed vs numeric");
  pert->add_option("--system", system, "hh or hp")->check(CLI::IsMember({"hh", "hp"}));
  pert->add_option("--r-grid", grid, "start:stop:count");
  pert->add_flag("--log", log_grid, "geometric grid");
  pert->add_option("--a0", cfg.a0, "Bohr radius");
  pert->add_option("--e", cfg.e, "unit charge");
  pert->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  pert->add_option("--unit-scale", cfg.unit_scale);
  common(pert);

  auto *ver = app.add_subcommand("verify", "run property suites");
  ver->add_option("--suite", cfg.suite, "specfun, charge, bipolar, energy, perturb or all")
      ->check(CLI::IsMember({"specfun", "charge", "bipolar", "energy", "perturb", "all"}));
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << error_record(2, "usage", e.what()) << "\n";
    return 2;
  }

  try {
    if (*msr)
      cfg.command = Command::msr;
    else if (*expand)
      cfg.command = Command::expand;
    else if (*energy)
      cfg.command = Command::energy;
    else if (*sweep)
      cfg.command = Command::sweep;
    else if (*pert)
      cfg.command = Command::perturb;
    else
      cfg.command = Command::verify;
    cfg.b = parse_vec(b, "--b");
    cfg.a = parse_vec(a, "--a");
    cfg.R = parse_vec(R, "--R");
    cfg.direction = parse_vec(dir, "--direction");
    cfg.grid = parse_grid(grid, log_grid);
    cfg.format = format == "json" ? Format::json : Format::csv;
    cfg.system = system == "hh" ? bipolar::perturb::SystemKind::hydrogen_hydrogen
                                : bipolar::perturb::SystemKind::hydrogen_proton;
  } catch (const ParseError &e) {
    std::cerr << error_record(2, "parse", e.what()) << "\n";
    return 2;
  }
  return run_guarded(cfg, std::cout, std::cerr);
}
