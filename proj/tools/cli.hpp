#pragma once

// Command core of the `bipolar` tool: a RunConfig fully determines one run,
// run() emits its table as CSV or JSON and returns the exit status.

#include "bipolar/bipolar.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace bipolar::cli {

enum class Command { msr, expand, energy, sweep, perturb, verify };
enum class Format { csv, json };

inline std::string to_string(Command c) {
  static const char *names[] = {"msr", "expand", "energy", "sweep", "perturb", "verify"};
  return names[static_cast<int>(c)];
}

/// start:stop:count, linear unless log.
struct Grid {
  double start = 0.1;
  double stop = 10.0;
  int count = 50;
  bool log = false;

  std::vector<double> points() const {
    if (count < 1)
      throw ParseError("grid count must be >= 1");
    if (log && !(start > 0.0 && stop > 0.0))
      throw ParseError("logarithmic grid needs positive end points");
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(log ? start * std::pow(stop / start, t) : start + (stop - start) * t);
    }
    return out;
  }
};

struct RunConfig {
  Command command = Command::verify;
  // Density specs: a path to a spec file, or the spec text itself.
  std::string rho;  // msr
  std::string rho1; // energy, sweep
  std::string rho2;
  Vec3 b = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Vec3 R = Vec3(0, 0, 1);
  Vec3 direction = Vec3(0, 0, 1); // sweep axis
  int l_max = 6;
  int n_max = 0;
  std::string form = "all";   // 1..4 | all
  std::string method = "all"; // direct | fourier | multipole | overlap | all
  perturb::SystemKind system = perturb::SystemKind::hydrogen_proton;
  double a0 = 1.0;
  double e = 1.0;
  Grid grid;
  double unit_scale = 1.0; // applied to energy columns on output
  Format format = Format::csv;
  std::string out; // empty: standard output
  std::string suite = "all";
  int threads = 1;
};

using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// ------------------------------------------------------------------ output

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const Cell &c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string &s) const {
      if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
      std::string q = "\"";
      for (char ch : s)
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

inline void write_csv(const Table &t, std::ostream &os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
}

inline nlohmann::ordered_json json_value(const Cell &c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string &s) const { return s; }
  };
  return std::visit(V{}, c);
}

/// {"command": ..., "columns": [...], "rows": [{column: value, ...}, ...]}
inline void write_json(const Table &t, Command cmd, std::ostream &os) {
  nlohmann::ordered_json doc;
  doc["command"] = to_string(cmd);
  doc["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto &row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      r[t.columns[i]] = json_value(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << "\n";
}

/// One-line error record for standard error.
inline std::string error_record(int status, const std::string &type, const std::string &message) {
  nlohmann::ordered_json j;
  j["error"] = {{"status", status}, {"type", type}, {"message", message}};
  return j.dump();
}

// ---------------------------------------------------------------- commands

/// A spec argument naming an existing file is read from it; anything else
/// is parsed as spec text.
inline charge::DensityModel resolve_spec(const std::string &arg, const char *flag) {
  if (arg.empty())
    throw ParseError(std::string("missing density spec ") + flag);
  std::error_code ec;
  if (arg.find_first_of("{}:\n") == std::string::npos || std::filesystem::is_regular_file(arg, ec))
    return load_density_spec(arg);
  return parse_density_spec(arg);
}

inline Table run_msr(const RunConfig &c) {
  const auto model = resolve_spec(c.rho, "--rho");
  if (c.l_max < 0 || c.n_max < 0)
    throw ParseError("--lmax and --nmax must be non-negative");
  Table t{{"l", "m", "n", "re", "im"}, {}};
  for (int l = 0; l <= c.l_max; ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = 0; n <= c.n_max; ++n) {
        const complex v = charge::msr_spherical(model, l, m, n);
        t.rows.push_back({(long long)l, (long long)m, (long long)n, v.real(), v.imag()});
      }
  return t;
}

inline Table run_expand(const RunConfig &c) {
  using namespace expansion;
  const BipolarGeometry g{c.b, c.a, c.R};
  const Truncation tr{c.l_max, 0};
  std::vector<int> forms;
  if (c.form == "all")
    forms = {1, 2, 3, 4};
  else if (c.form.size() == 1 && c.form[0] >= '1' && c.form[0] <= '4')
    forms = {c.form[0] - '0'};
  else
    throw ParseError("--form must be 1, 2, 3, 4 or all");
  const double direct = inverse_distance_direct(g);
  Table t{{"form", "value", "direct", "rel_diff", "imag_residue", "nonoverlap"}, {}};
  for (int f : forms) {
    const ExpansionValue v = f == 1   ? eval_form1(g, tr)
                             : f == 2 ? eval_form2(g, tr)
                             : f == 3 ? eval_form3(g, tr)
                                      : eval_form4(g, tr);
    t.rows.push_back({(long long)f, v.value, direct, std::abs(v.value - direct) / std::abs(direct),
                      v.imag_residue, v.nonoverlap});
  }
  return t;
}

inline energy::EnergyResult energy_by(const std::string &method, const energy::TwoBodySystem &s,
                                      int l_max) {
  if (method == "direct")
    return energy::energy_direct(s);
  if (method == "fourier")
    return energy::energy_fourier(s);
  if (method == "multipole")
    return energy::energy_multipole(s, {l_max, 0});
  if (method == "overlap")
    return energy::overlap_correction(s, {l_max, 0});
  throw ParseError("unknown method '" + method + "'");
}

inline Table run_energy(const RunConfig &c) {
  const energy::TwoBodySystem s{resolve_spec(c.rho1, "--rho1"), resolve_spec(c.rho2, "--rho2"), c.R};
  std::vector<std::string> methods;
  if (c.method == "all") {
    methods = {"direct", "fourier"};
    // The long-range series has no value at R = 0.
    if (c.R.norm() > 0.0)
      methods.insert(methods.end(), {"multipole", "overlap"});
  } else {
    methods = {c.method};
  }
  Table t{{"method", "value", "error_estimate", "l_max"}, {}};
  for (const auto &m : methods) {
    const auto r = energy_by(m, s, c.l_max);
    t.rows.push_back({m, c.unit_scale * r.value, c.unit_scale * r.error_estimate,
                      r.truncation ? Cell((long long)r.truncation->l_max) : Cell()});
  }
  return t;
}

/// Evaluates f(i) for i < n on up to `threads` workers; results by index.
template <typename F> std::vector<double> parallel_map(int n, int threads, F &&f) {
  std::vector<double> out(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto work = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      try {
        out[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int w = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int k = 1; k < w; ++k)
    pool.emplace_back(work, k, w);
  work(0, w);
  for (auto &th : pool)
    th.join();
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

inline Table run_sweep(const RunConfig &c) {
  const auto rho1 = resolve_spec(c.rho1, "--rho1");
  const auto rho2 = resolve_spec(c.rho2, "--rho2");
  if (!(c.direction.norm() > 0.0))
    throw ParseError("--direction must be non-zero");
  const Vec3 axis = c.direction.normalized();
  const std::string method = c.method == "all" ? "fourier" : c.method;
  const auto Rs = c.grid.points();
  const auto values = parallel_map(static_cast<int>(Rs.size()), c.threads, [&](int i) {
    return energy_by(method, {rho1, rho2, Rs[static_cast<std::size_t>(i)] * axis}, c.l_max).value;
  });
  Table t{{"index", "R", "value", "method"}, {}};
  for (std::size_t i = 0; i < Rs.size(); ++i)
    t.rows.push_back({(long long)i, Rs[i], c.unit_scale * values[i], method});
  return t;
}

inline Table run_perturb(const RunConfig &c) {
  const perturb::PerturbSystem sys{c.system, c.a0, c.e};
  const auto Rs = c.grid.points();
  const auto numeric = parallel_map(static_cast<int>(Rs.size()), c.threads, [&](int i) {
    return perturb::e1_numeric(sys, Rs[static_cast<std::size_t>(i)]);
  });
  Table t{{"R", "closed", "numeric", "abs_diff"}, {}};
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    const double closed = perturb::e1_closed(sys, Rs[i]);
    t.rows.push_back({Rs[i], c.unit_scale * closed, c.unit_scale * numeric[i],
                      c.unit_scale * std::abs(closed - numeric[i])});
  }
  return t;
}

inline Table run_verify(const RunConfig &c, bool &all_passed) {
  const auto checks = verify::run_suite(c.suite);
  Table t{{"suite", "check", "measured", "tolerance", "status"}, {}};
  all_passed = true;
  for (const auto &k : checks) {
    t.rows.push_back({k.suite, k.name, k.measured, k.tolerance, std::string(k.passed ? "PASS" : "FAIL")});
    all_passed = all_passed && k.passed;
  }
  return t;
}

/// Executes the run and writes its table. Library errors propagate.
inline int run(const RunConfig &c, std::ostream &os) {
  Table t;
  int status = 0;
  switch (c.command) {
  case Command::msr:
    t = run_msr(c);
    break;
  case Command::expand:
    t = run_expand(c);
    break;
  case Command::energy:
    t = run_energy(c);
    break;
  case Command::sweep:
    t = run_sweep(c);
    break;
  case Command::perturb:
    t = run_perturb(c);
    break;
  case Command::verify: {
    bool ok = false;
    t = run_verify(c, ok);
    status = ok ? 0 : 1;
    break;
  }
  }
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file)
      throw ParseError("cannot open output file '" + c.out + "'");
  }
  std::ostream &dst = c.out.empty() ? os : file;
  if (c.format == Format::csv)
    write_csv(t, dst);
  else
    write_json(t, c.command, dst);
  return status;
}

/// run() with errors mapped to exit status 2 (input) or 1 (numeric) and a
/// single error line on `err`.
inline int run_guarded(const RunConfig &c, std::ostream &os, std::ostream &err) {
  auto fail = [&](int status, const char *type, const std::exception &e) {
    err << error_record(status, type, e.what()) << "\n";
    return status;
  };
  try {
    return run(c, os);
  } catch (const ParseError &e) {
    return fail(2, "parse", e);
  } catch (const DomainError &e) {
    return fail(2, "domain", e);
  } catch (const SingularityError &e) {
    return fail(2, "singularity", e);
  } catch (const UnsupportedEvaluation &e) {
    return fail(2, "unsupported", e);
  } catch (const NumericError &e) {
    return fail(1, "numeric", e);
  } catch (const std::exception &e) {
    return fail(1, "internal", e);
  }
}

} // namespace bipolar::cli
