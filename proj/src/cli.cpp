#include "rabi/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rabi/acceptance.hpp"
#include "rabi/analytic.hpp"
#include "rabi/errors.hpp"
#include "rabi/exceptional.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"

namespace rabi::cli {

namespace {

using nlohmann::ordered_json;

struct BadArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a command needs, in physical units as given on the command line.
struct RunConfig {
  std::string command;
  RabiParams physical{1.0, 0.2, 0.8, 0.1};
  double e_min = -1.5;
  double e_max = 1.5;
  bool window_given = false;
  int grid = 2000;
  int n_max = 4;
  std::optional<double> tol;
  std::string axis = "g";
  std::string range;
  std::string format = "csv";
  std::string out_path;
  std::string markers_path;
  std::uint64_t seed = AcceptanceOptions{}.seed;
  int n1 = 1;
  int n2 = 2;
  double w_excl = 1e-3;
  int levels = 10;
  int k = 10;
  std::vector<int> only;
};

// Values after the one-time conversion to reduced units.
struct Reduced {
  RabiParams p;
  double e_min = 0.0;
  double e_max = 0.0;
  double w_excl = 0.0;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream s;
  s << std::setprecision(15) << x;
  return s.str();
}

AxisRange parse_range(const std::string& text, double omega) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw BadArgument("--range must look like a:b:steps");
  AxisRange r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used) / omega;
    if (used != parts[0].size()) throw BadArgument("");
    r.hi = std::stod(parts[1], &used) / omega;
    if (used != parts[1].size()) throw BadArgument("");
    r.steps = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw BadArgument("");
  } catch (const std::logic_error&) {
    throw BadArgument("--range must look like a:b:steps");
  }
  if (r.steps < 2) throw BadArgument("--range needs at least 2 steps");
  if (!(r.lo < r.hi)) throw BadArgument("--range needs a < b");
  return r;
}

SweepAxis axis_of(const RunConfig& c) { return c.axis == "g" ? SweepAxis::G : SweepAxis::Epsilon; }

Reduced reduce(const RunConfig& c) {
  try {
    c.physical.validate();
  } catch (const std::invalid_argument& ex) {
    throw BadArgument(ex.what());
  }
  if (c.tol && !(*c.tol > 0.0)) throw BadArgument("--tol must be positive");
  if (!(c.w_excl > 0.0)) throw BadArgument("--w-excl must be positive");
  Reduced r;
  r.p = c.physical.reduced();
  r.e_min = c.e_min / c.physical.omega;
  r.e_max = c.e_max / c.physical.omega;
  r.w_excl = c.w_excl / c.physical.omega;
  return r;
}

// Rows plus metadata, rendered as `#`-headed CSV or as JSON.
class Table {
 public:
  Table(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void footer(const std::string& section, std::vector<std::pair<std::string, std::string>> kv) {
    footers_.emplace_back(section, std::move(kv));
  }

  [[nodiscard]] std::string csv() const {
    std::ostringstream s;
    s << "# rabi " << command_ << '\n';
    for (const auto& [k, v] : meta_) s << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) s << (i ? "," : "") << columns_[i];
    s << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
      s << '\n';
    }
    for (const auto& [section, kv] : footers_) {
      s << "# " << section;
      for (const auto& [k, v] : kv) s << ' ' << k << '=' << v;
      s << '\n';
    }
    return s.str();
  }

  [[nodiscard]] std::string json() const {
    ordered_json j;
    j["command"] = command_;
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : meta_) m[k] = v;
    j["metadata"] = m;
    j["columns"] = columns_;
    ordered_json rows = ordered_json::array();
    for (const auto& r : rows_) {
      ordered_json o;
      for (std::size_t i = 0; i < r.size() && i < columns_.size(); ++i) o[columns_[i]] = r[i];
      rows.push_back(o);
    }
    j["rows"] = rows;
    ordered_json notes = ordered_json::array();
    for (const auto& [section, kv] : footers_) {
      ordered_json o;
      o["section"] = section;
      for (const auto& [k, v] : kv) o[k] = v;
      notes.push_back(o);
    }
    j["annotations"] = notes;
    return j.dump(2) + "\n";
  }

  [[nodiscard]] std::string render(const std::string& format) const {
    return format == "json" ? json() : csv();
  }

 private:
  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> footers_;
};

void describe_params(Table& t, const RunConfig& c, const Reduced& r) {
  t.meta("units", "reduced (energies, couplings and biases divided by omega)");
  t.meta("input", "omega=" + num(c.physical.omega) + " g=" + num(c.physical.g) +
                      " delta=" + num(c.physical.delta) + " epsilon=" + num(c.physical.epsilon));
  t.meta("reduced", "g=" + num(r.p.g) + " delta=" + num(r.p.delta) + " epsilon=" + num(r.p.epsilon));
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoFailure("failed writing " + path);
}

std::string side_path(const RunConfig& c) {
  if (!c.markers_path.empty()) return c.markers_path;
  if (c.out_path.empty()) return {};
  const auto dot = c.out_path.find_last_of('.');
  const auto slash = c.out_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? c.out_path.substr(0, dot) : c.out_path;
  return stem + ".markers." + c.format;
}

std::string kind_label(const SpectrumPoint& pt) {
  if (pt.provenance == Provenance::OracleOnly || pt.provenance == Provenance::OracleAssisted) {
    return std::string(to_string(pt.provenance));
  }
  return std::string(to_string(pt.kind));
}

std::string n_label(const SpectrumPoint& pt) {
  return pt.kind == LevelKind::Exceptional ? std::to_string(pt.n) : "";
}

std::string branch_label(const SpectrumPoint& pt) {
  return pt.kind == LevelKind::Exceptional ? std::string(to_string(pt.branch)) : "";
}

int cmd_wronskian_scan(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  if (c.grid < 2) throw BadArgument("--grid must be >= 2");
  Table t("wronskian-scan", {"E_over_omega", "W_plus", "W_minus", "reliable"});
  describe_params(t, c, r);
  t.meta("window", "e_min=" + num(r.e_min) + " e_max=" + num(r.e_max) + " grid=" +
                       std::to_string(c.grid) + " z=0");
  if (r.e_min < r.e_max) {
    if (r.p.g == 0.0) throw BadArgument("the Wronskian needs g != 0; use the oracle command");
    for (int i = 0; i < c.grid; ++i) {
      const double e = r.e_min + (r.e_max - r.e_min) * i / (c.grid - 1);
      const WronskianSample s = wronskian(Energy{e}, r.p);
      t.row({num(e), num(s.w_plus), num(s.w_minus), s.reliable ? "1" : "0"});
    }
    RegularSearchOptions search;
    search.exclusion_half_width = r.w_excl;
    for (const auto& z :
         find_regular_spectrum(r.p, r.e_min, r.e_max, std::max(100, c.grid), 1e-12, search)) {
      t.footer("zero", {{"E_over_omega", num(z.energy.value)}, {"residual", num(z.residual)}});
    }
    const double tol = c.tol.value_or(kExceptionalTol);
    for (int n = 1; n <= c.n_max; ++n) {
      for (const Branch b : {Branch::Plus, Branch::Minus}) {
        const double e = candidate_energy(n, b, r.p).value;
        if (e < r.e_min || e > r.e_max) continue;
        const double res = constraint_residual(n, b, r.p);
        t.footer("exceptional_candidate", {{"E_over_omega", num(e)},
                                           {"N", std::to_string(n)},
                                           {"branch", std::string(to_string(b))},
                                           {"constraint_residual", num(res)},
                                           {"exceptional", res <= tol ? "yes" : "no"}});
      }
    }
  }
  write_text(c.out_path, t.render(c.format), out);
  return kOk;
}

AssembleOptions assemble_options(const RunConfig& c, const Reduced& r) {
  AssembleOptions a;
  a.grid_n = std::max(100, c.grid);
  a.exclusion_half_width = r.w_excl;
  if (c.tol) a.truncation_tol = *c.tol;
  return a;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  Table t("spectrum", {"level_index", "E_over_omega", "kind", "N", "branch", "degeneracy",
                       "provenance", "residual", "oracle_delta", "flagged"});
  describe_params(t, c, r);
  t.meta("window", "e_min=" + num(r.e_min) + " e_max=" + num(r.e_max) + " n_max=" +
                       std::to_string(c.n_max) + " grid=" + std::to_string(c.grid));
  if (r.e_min < r.e_max) {
    int level = 0;
    for (const auto& pt : assemble(r.p, r.e_min, r.e_max, c.n_max, assemble_options(c, r))) {
      t.row({std::to_string(level), num(pt.energy.value), kind_label(pt), n_label(pt),
             branch_label(pt), std::to_string(pt.degeneracy), std::string(to_string(pt.provenance)),
             num(pt.residual), num(pt.oracle_delta), pt.flagged ? "1" : "0"});
      level += pt.degeneracy;
    }
  }
  write_text(c.out_path, t.render(c.format), out);
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  if (c.range.empty()) throw BadArgument("sweep needs --range a:b:steps");
  const AxisRange range = parse_range(c.range, c.physical.omega);
  if (c.levels < 1) throw BadArgument("--levels must be >= 1");
  if (c.n_max < 1 || c.n_max > 10) throw BadArgument("--n-max must be in [1, 10]");

  SweepOptions opts;
  opts.assemble = assemble_options(c, r);
  opts.n_max = c.n_max;
  opts.levels = c.levels;
  if (c.window_given) {
    if (!(r.e_min < r.e_max)) throw BadArgument("--e-min must be below --e-max");
    opts.window = std::make_pair(r.e_min, r.e_max);
  }
  const SweepResult res = sweep(r.p, axis_of(c), range, opts);

  Table t("sweep", {"axis_value", "level_index", "E_over_omega", "kind", "N", "branch",
                    "degeneracy"});
  describe_params(t, c, r);
  t.meta("sweep", "axis=" + c.axis + " range=" + num(range.lo) + ":" + num(range.hi) + ":" +
                      std::to_string(range.steps) + " n_max=" + std::to_string(c.n_max) +
                      (c.window_given ? " window=" + num(r.e_min) + ":" + num(r.e_max)
                                      : " levels=" + std::to_string(c.levels)));
  for (std::size_t i = 0; i < res.axis_values.size(); ++i) {
    int level = 0;
    for (const auto& pt : res.levels[i]) {
      t.row({num(res.axis_values[i]), std::to_string(level), num(pt.energy.value), kind_label(pt),
             n_label(pt), branch_label(pt), std::to_string(pt.degeneracy)});
      level += pt.degeneracy;
    }
  }
  for (const auto& f : res.failures) {
    t.footer("failure", {{"axis_value", num(f.axis_value)}, {"message", f.message}});
  }

  Table m("sweep-markers", {"axis_value", "E_over_omega", "N", "branch", "degeneracy",
                            "constraint_residual", "oracle_delta"});
  describe_params(m, c, r);
  for (const auto& mk : res.markers) {
    m.row({num(mk.point.axis_value), num(mk.point.energy.value), std::to_string(mk.point.n),
           std::string(to_string(mk.point.branch)), std::to_string(mk.degeneracy),
           num(mk.point.constraint_residual), num(mk.point.oracle_delta)});
  }
  const std::string markers = side_path(c);
  if (!markers.empty()) t.meta("markers", markers);
  write_text(c.out_path, t.render(c.format), out);
  if (!markers.empty()) write_text(markers, m.render(c.format), out);
  return kOk;
}

int cmd_exceptional(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  if (c.n_max < 1 || c.n_max > 10) throw BadArgument("--n-max must be in [1, 10]");
  const double tol = c.tol.value_or(kExceptionalTol);
  if (c.range.empty()) {
    Table t("exceptional", {"N", "branch", "E_over_omega", "constraint_residual", "exceptional"});
    describe_params(t, c, r);
    for (int n = 1; n <= c.n_max; ++n) {
      for (const Branch b : {Branch::Plus, Branch::Minus}) {
        const double res = constraint_residual(n, b, r.p);
        t.row({std::to_string(n), std::string(to_string(b)),
               num(candidate_energy(n, b, r.p).value), num(res), res <= tol ? "yes" : "no"});
      }
    }
    write_text(c.out_path, t.render(c.format), out);
    return kOk;
  }
  const AxisRange range = parse_range(c.range, c.physical.omega);
  if (range.steps < 200) throw BadArgument("exceptional scans need at least 200 steps");
  Table t("exceptional", {"axis_value", "N", "branch", "E_over_omega", "constraint_residual",
                          "oracle_delta", "verified"});
  describe_params(t, c, r);
  t.meta("scan", "axis=" + c.axis + " range=" + num(range.lo) + ":" + num(range.hi) + ":" +
                     std::to_string(range.steps) + " n_max=" + std::to_string(c.n_max) +
                     " tol=" + num(tol));
  for (const auto& pt : scan_exceptional(r.p, axis_of(c), range, c.n_max, tol)) {
    t.row({num(pt.axis_value), std::to_string(pt.n), std::string(to_string(pt.branch)),
           num(pt.energy.value), num(pt.constraint_residual), num(pt.oracle_delta),
           pt.verified ? "1" : "0"});
  }
  write_text(c.out_path, t.render(c.format), out);
  return kOk;
}

int cmd_crossings(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  if (!(c.n1 >= 1 && c.n2 > c.n1)) throw BadArgument("need --n2 > --n1 >= 1");
  const CrossingPoint cp = find_crossings(r.p.delta, c.n1, c.n2, c.tol.value_or(kExceptionalTol));
  Table t("crossings", {"N1", "N2", "epsilon_star", "g_star", "delta_relation", "E_over_omega",
                        "plus_residual", "minus_residual", "status"});
  describe_params(t, c, r);
  t.meta("note", "epsilon_star and g_star in reduced units; g and epsilon inputs are ignored");
  t.row({std::to_string(cp.n1), std::to_string(cp.n2), num(cp.epsilon_star), num(cp.g_star),
         num(cp.delta_relation), num(cp.energy.value), num(cp.plus_residual),
         num(cp.minus_residual), std::string(to_string(cp.status))});
  write_text(c.out_path, t.render(c.format), out);
  return kOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const Reduced r = reduce(c);
  if (c.k < 1) throw BadArgument("--k must be >= 1");
  const OracleResult res = eigen(r.p, c.k, c.tol.value_or(1e-10));
  Table t("oracle", {"index", "E_over_omega"});
  describe_params(t, c, r);
  t.meta("oracle", "k=" + std::to_string(c.k) + " cutoff_used=" + std::to_string(res.cutoff_used) +
                       " converged_count=" + std::to_string(res.converged_count));
  for (int i = 0; i < c.k; ++i) t.row({std::to_string(i), num(res.eigenvalues[i])});
  write_text(c.out_path, t.render(c.format), out);
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  AcceptanceOptions opts;
  opts.seed = c.seed;
  opts.tol_override = c.tol;
  opts.only = c.only;
  const auto results = run_acceptance(opts);

  std::string text;
  if (c.format == "json") {
    ordered_json j;
    j["seed"] = c.seed;
    j["tol_override"] = c.tol ? ordered_json(*c.tol) : ordered_json(nullptr);
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
      arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    j["criteria"] = arr;
    j["all_passed"] = all_passed(results);
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    write_report(results, s);
    text = s.str();
  }
  write_text(c.out_path, text, out);
  for (const auto& r : results) {
    err << "criterion " << r.id << ": " << std::fixed << std::setprecision(2) << r.seconds
        << " s\n";
  }
  if (all_passed(results)) return kOk;
  for (const auto& r : results) {
    if (!r.passed) err << "failed criterion " << r.id << " (" << r.name << ")\n";
  }
  return kVerifyFailed;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--g", c.physical.g, "coupling strength g");
  sub->add_option("--delta", c.physical.delta, "tunneling Delta");
  sub->add_option("--epsilon", c.physical.epsilon, "bias epsilon");
  sub->add_option("--omega", c.physical.omega, "oscillator frequency");
  sub->add_option("--tol", c.tol, "tolerance; for verify, replaces every criterion threshold");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out_path, "output file (default stdout)");
  sub->add_option("--seed", c.seed, "seed for randomized checks");
}

void add_window(CLI::App* sub, RunConfig& c) {
  sub->add_option("--e-min", c.e_min, "lower energy bound (physical units)");
  sub->add_option("--e-max", c.e_max, "upper energy bound (physical units)");
  sub->add_option("--grid", c.grid, "energy grid points");
  sub->add_option("--n-max", c.n_max, "largest exceptional index N");
  sub->add_option("--w-excl", c.w_excl, "exclusion half-width around candidate energies");
}

void add_axis(CLI::App* sub, RunConfig& c) {
  sub->add_option("--axis", c.axis, "sweep axis")->check(CLI::IsMember({"g", "epsilon"}));
  sub->add_option("--range", c.range, "sweep range a:b:steps (physical units)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spectrum of the biased quantum Rabi model"};
  app.name("rabi");
  app.require_subcommand(1);

  auto* scan = app.add_subcommand("wronskian-scan", "W+ and W- over an energy grid");
  add_common(scan, c);
  add_window(scan, c);

  auto* spectrum = app.add_subcommand("spectrum", "regular and exceptional levels in a window");
  add_common(spectrum, c);
  add_window(spectrum, c);

  auto* sw = app.add_subcommand("sweep", "spectrum along g or epsilon");
  add_common(sw, c);
  add_window(sw, c);
  add_axis(sw, c);
  sw->add_option("--levels", c.levels, "levels per axis value when no window is given");
  sw->add_option("--markers", c.markers_path, "side file for exceptional markers");

  auto* exc = app.add_subcommand("exceptional", "exceptional points at a point or along an axis");
  add_common(exc, c);
  exc->add_option("--n-max", c.n_max, "largest exceptional index N");
  add_axis(exc, c);

  auto* cross = app.add_subcommand("crossings", "Plus(N1) / Minus(N2) level crossing");
  add_common(cross, c);
  cross->add_option("--n1", c.n1, "Plus-branch index");
  cross->add_option("--n2", c.n2, "Minus-branch index");

  auto* orc = app.add_subcommand("oracle", "lowest eigenvalues by Fock-basis diagonalization");
  add_common(orc, c);
  orc->add_option("--k", c.k, "number of eigenvalues");

  auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(ver, c);
  ver->add_option("--only", c.only, "criterion ids to run");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }
  for (auto* sub : {scan, spectrum, sw}) {
    if (*sub && (sub->count("--e-min") > 0 || sub->count("--e-max") > 0)) c.window_given = true;
  }

  try {
    if (*scan) return cmd_wronskian_scan(c, out);
    if (*spectrum) return cmd_spectrum(c, out);
    if (*sw) return cmd_sweep(c, out);
    if (*exc) return cmd_exceptional(c, out);
    if (*cross) return cmd_crossings(c, out);
    if (*orc) return cmd_oracle(c, out);
    if (*ver) return cmd_verify(c, out, err);
  } catch (const IoFailure& e) {
    err << "rabi: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "rabi: " << e.what() << '\n';
    return kBadArguments;
  } catch (const Error& e) {
    err << "rabi: " << e.what() << '\n';
    return kBadArguments;
  }
  return kBadArguments;
}

}  // namespace rabi::cli
