#include "bilayer/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "bilayer/errors.hpp"
#include "bilayer/observables.hpp"
#include "bilayer/oracle.hpp"

namespace bilayer::cli {
namespace {

using nlohmann::json;

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  double lo = 0.0, hi = 0.0;
  char comma = 0;
  if (!(in >> lo >> comma >> hi) || comma != ',' || !(in >> std::ws).eof())
    throw InvalidConfig(what + " must be \"lo,hi\", got \"" + text + "\"");
  return {lo, hi};
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw InvalidConfig(what + " must be a comma-separated list of integers");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidConfig(what + " must not be empty");
  return out;
}

Branch branch_from_string(const std::string& s) {
  if (s == "electron") return Branch::Electron;
  if (s == "hole") return Branch::Hole;
  throw InvalidConfig("branch must be electron or hole, got \"" + s + "\"");
}

void check_choice(const std::string& v, std::initializer_list<const char*> allowed,
                  const std::string& what) {
  for (const char* a : allowed)
    if (v == a) return;
  throw InvalidConfig(what + " has unsupported value \"" + v + "\"");
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InvalidConfig("config key \"" + key + "\" has the wrong type");
  }
}

std::pair<double, double> get_pair(const json& j, const std::string& key) {
  if (j.is_string()) return parse_pair(j.get<std::string>(), key);
  const auto v = get_as<std::vector<double>>(j, key);
  if (v.size() != 2) throw InvalidConfig("config key \"" + key + "\" needs two numbers");
  return {v[0], v[1]};
}

std::string units_label(const RunConfig& cfg) {
  return cfg.units == "physical" ? "physical" : "natural";
}

double energy_out(const RunConfig& cfg, double e) {
  return cfg.units == "physical" ? to_physical_units(e, *cfg.length_scale) : e;
}

// Writes to cfg.out or the default stream; opened lazily per path.
class Sink {
 public:
  explicit Sink(std::ostream& fallback) : fallback_(fallback) {}

  std::ostream& open(const std::string& path) {
    if (path.empty()) return fallback_;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw IoError("cannot open output file " + path);
    return *file_;
  }

  void close(const std::string& path) {
    if (!file_) return;
    file_->close();
    if (!*file_) throw IoError("failed writing output file " + path);
    file_.reset();
  }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

void write_case_meta(std::ostream& os, const std::string& verb, const RunConfig& cfg,
                     const CaseDefinition& c) {
  const auto& p = c.params;
  os << "# verb: " << verb << "\n";
  os << "# case: " << to_string(p.kind) << "\n";
  os << "# omega: " << format_number(p.omega) << "\n";
  os << "# alpha: " << format_number(p.alpha) << "\n";
  os << "# D: " << format_number(p.D) << "\n";
  os << "# k: " << format_number(p.k) << "\n";
  os << "# B0: " << format_number(p.B0) << "\n";
  os << "# kappa: " << format_number(c.kappa) << "\n";
  os << "# epsilon1: " << format_number(c.epsilon1) << "\n";
  os << "# units: " << units_label(cfg) << "\n";
  if (cfg.units == "physical") os << "# length_scale_m: " << format_number(*cfg.length_scale) << "\n";
}

json case_meta_json(const std::string& verb, const RunConfig& cfg, const CaseDefinition& c) {
  const auto& p = c.params;
  json m = {{"verb", verb},
            {"case", to_string(p.kind)},
            {"omega", p.omega},
            {"alpha", p.alpha},
            {"D", p.D},
            {"k", p.k},
            {"B0", p.B0},
            {"kappa", c.kappa},
            {"epsilon1", c.epsilon1},
            {"units", units_label(cfg)}};
  if (cfg.units == "physical") m["length_scale_m"] = *cfg.length_scale;
  return m;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ',';
    s += p;
  }
  return s;
}

GridPolicy grid_policy(const RunConfig& cfg) {
  GridPolicy p;
  if (cfg.window) {
    p.lo = cfg.window->first;
    p.hi = cfg.window->second;
  }
  p.n = cfg.grid_n;
  p.delta = cfg.delta;
  return p;
}

CaseDefinition require_case(const RunConfig& cfg) {
  if (!cfg.kind) throw InvalidConfig("--case is required");
  CaseParams p = cfg.params;
  p.kind = *cfg.kind;
  return make_case(p);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto c = require_case(cfg);
  auto s = spectrum(c, cfg.n_max);
  Sink sink(out);
  auto& os = sink.open(cfg.out);
  if (cfg.format == "json") {
    for (auto& l : s.levels) {
      l.energy = energy_out(cfg, l.energy);
      l.aux_level_0 = energy_out(cfg, l.aux_level_0);
      if (l.aux_level_2) l.aux_level_2 = energy_out(cfg, *l.aux_level_2);
    }
    json j = {{"meta", case_meta_json("spectrum", cfg, c)}, {"spectrum", spectrum_to_json(s)}};
    j["meta"]["nmax"] = cfg.n_max;
    os << j.dump(2) << "\n";
  } else {
    write_case_meta(os, "spectrum", cfg, c);
    os << "# nmax: " << cfg.n_max << "\n";
    os << "n,E_electron,E_hole,multiplicity,aux_E0,aux_E2\n";
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
      const auto& l = s.levels[i];
      const std::string aux2 = l.aux_level_2 ? format_number(energy_out(cfg, *l.aux_level_2)) : "";
      if (l.index == 0) {
        os << join({"0", format_number(0.0), format_number(0.0), std::to_string(l.multiplicity),
                    format_number(energy_out(cfg, l.aux_level_0)), aux2})
           << "\n";
        continue;
      }
      const auto& hole = s.levels.at(++i);
      os << join({std::to_string(l.index), format_number(energy_out(cfg, l.energy)),
                  format_number(energy_out(cfg, hole.energy)), std::to_string(l.multiplicity),
                  format_number(energy_out(cfg, l.aux_level_0)), aux2})
         << "\n";
    }
  }
  sink.close(cfg.out);
  return kOk;
}

struct Profile {
  int level;
  int component;  // ground only
  DensityProfile rho;
  CurrentProfile j;
};

int cmd_densities(const RunConfig& cfg, std::ostream& out) {
  const auto c = require_case(cfg);
  const bool physical = cfg.units == "physical";
  const double L = physical ? *cfg.length_scale : 1.0;
  std::vector<Profile> profiles;
  for (int m : cfg.levels) {
    const auto grid = level_grid(c, m, grid_policy(cfg));
    const auto j = current_density(c, m, grid, cfg.branch);
    if (m == 0) {
      for (int comp : {0, 1}) profiles.push_back({m, comp, probability_density(c, m, grid, comp), j});
    } else {
      profiles.push_back({m, -1, probability_density(c, m, grid), j});
    }
  }
  const auto x_out = [&](double x) { return x * L; };
  const auto rho_out = [&](double r) { return r / L; };
  const auto j_out = [&](double v) { return physical ? current_to_physical_units(v, L) : v; };

  Sink sink(out);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& p : profiles) {
      json xs = json::array(), rs = json::array(), jx = json::array(), jy = json::array();
      for (int i = 0; i < p.rho.grid.n; ++i) {
        xs.push_back(x_out(p.rho.grid.x(i)));
        rs.push_back(rho_out(p.rho.rho[i]));
        jx.push_back(j_out(p.j.jx[i]));
        jy.push_back(j_out(p.j.jy[i]));
      }
      json e = {{"level", p.level}, {"x", xs}, {"rho", rs}, {"J_x", jx}, {"J_y", jy}};
      if (p.level == 0)
        e["component"] = p.component;
      else
        e["branch"] = to_string(p.j.branch);
      arr.push_back(e);
    }
    json j = {{"meta", case_meta_json("densities", cfg, c)}, {"profiles", arr}};
    auto& os = sink.open(cfg.out);
    os << j.dump(2) << "\n";
    sink.close(cfg.out);
    return kOk;
  }

  for (const auto& p : profiles) {
    std::string path;
    if (!cfg.out.empty()) {
      path = cfg.out + "_m" + std::to_string(p.level);
      if (p.level == 0) path += "_j" + std::to_string(p.component);
      path += ".csv";
    }
    auto& os = sink.open(path);
    write_case_meta(os, "densities", cfg, c);
    os << "# level: " << p.level << "\n";
    if (p.level == 0)
      os << "# component: " << p.component << "\n";
    else
      os << "# branch: " << to_string(p.j.branch) << "\n";
    os << "# grid: " << format_number(x_out(p.rho.grid.lo)) << "," << format_number(x_out(p.rho.grid.hi))
       << "," << p.rho.grid.n << "\n";
    os << "x,rho,J_x,J_y\n";
    for (int i = 0; i < p.rho.grid.n; ++i)
      os << join({format_number(x_out(p.rho.grid.x(i))), format_number(rho_out(p.rho.rho[i])),
                  format_number(j_out(p.j.jx[i])), format_number(j_out(p.j.jy[i]))})
         << "\n";
    sink.close(path);
    if (!path.empty()) out << path << "\n";
  }
  return kOk;
}

int cmd_envelope(const RunConfig& cfg, std::ostream& out) {
  const auto c = require_case(cfg);
  const auto env = envelope(c);
  std::vector<TouchReport> touches;
  for (int n : touch_levels(c, cfg.n_max)) touches.push_back(envelope_touch_check(c, n));

  const double k_lo = c.params.kind == CaseKind::ExpDecay ? -0.5 * c.params.alpha : 0.0;
  double k_hi = k_lo;
  for (const auto& t : touches) k_hi = std::max(k_hi, t.k_boundary);
  if (cfg.samples < 2) throw DomainViolation("samples must be at least 2");
  std::vector<double> ks;
  for (int i = 0; i < cfg.samples; ++i) ks.push_back(k_lo + (k_hi - k_lo) * i / (cfg.samples - 1));

  Sink sink(out);
  auto& os = sink.open(cfg.out);
  if (cfg.format == "json") {
    json t = json::array();
    for (const auto& r : touches)
      t.push_back({{"n", r.level},
                   {"k_boundary", r.k_boundary},
                   {"kappa_boundary", r.kappa_boundary},
                   {"energy", energy_out(cfg, r.energy)},
                   {"envelope", energy_out(cfg, r.envelope)},
                   {"residual", r.residual}});
    json v = json::array();
    for (double k : ks)
      v.push_back({{"k", k}, {"envelope", energy_out(cfg, env(k))}, {"group_velocity", env.group_velocity(k)}});
    json j = {{"meta", case_meta_json("envelope", cfg, c)},
              {"a", env.a},
              {"b", env.b},
              {"c", env.c},
              {"effective_mass_22", env.effective_mass_22()},
              {"touch", t},
              {"group_velocity", v}};
    j["meta"]["group_velocity_units"] = "v_F^2 hbar / gamma_1";
    j["meta"]["effective_mass_units"] = "m*";
    os << j.dump(2) << "\n";
  } else {
    write_case_meta(os, "envelope", cfg, c);
    os << "# a: " << format_number(env.a) << "\n";
    os << "# b: " << format_number(env.b) << "\n";
    os << "# c: " << format_number(env.c) << "\n";
    os << "# effective_mass_22_m_star: " << format_number(env.effective_mass_22()) << "\n";
    os << "# group_velocity_units: v_F^2 hbar / gamma_1\n";
    os << "n,k_boundary,kappa_boundary,energy,envelope,residual\n";
    for (const auto& r : touches)
      os << join({std::to_string(r.level), format_number(r.k_boundary), format_number(r.kappa_boundary),
                  format_number(energy_out(cfg, r.energy)), format_number(energy_out(cfg, r.envelope)),
                  format_number(r.residual)})
         << "\n";
    os << "\nk,envelope,group_velocity\n";
    for (double k : ks)
      os << join({format_number(k), format_number(energy_out(cfg, env(k))),
                  format_number(env.group_velocity(k))})
         << "\n";
  }
  sink.close(cfg.out);
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto c = require_case(cfg);
  const auto report = oracle::cross_validate(c, cfg.n_max, grid_policy(cfg));
  Sink sink(out);
  auto& os = sink.open(cfg.out);
  if (cfg.format == "json") {
    json j = {{"meta", case_meta_json("validate", cfg, c)}, {"report", oracle::to_json(report)}};
    j["meta"]["units"] = "natural";
    os << j.dump(2) << "\n";
  } else {
    RunConfig natural = cfg;
    natural.units = "natural";
    write_case_meta(os, "validate", natural, c);
    const auto& g = report.grid;
    os << "# grid: " << format_number(g.lo) << "," << format_number(g.hi) << "," << g.n << "\n";
    if (g.delta) os << "# delta: " << format_number(*g.delta) << "\n";
    os << "# extrapolated: " << (g.extrapolated ? "true" : "false") << "\n";
    os << "# passed: " << (report.passed ? "true" : "false") << "\n";
    os << "branch,n,closed_form,oracle,rel_error,tolerance,delta_sensitivity,overlap_defect,l2_distance,passed\n";
    for (const auto& l : report.levels)
      os << join({std::to_string(l.branch), std::to_string(l.n), format_number(l.closed_form),
                  format_number(l.oracle), format_number(l.rel_error), format_number(l.tolerance),
                  l.delta_sensitivity ? format_number(*l.delta_sensitivity) : "",
                  format_number(l.overlap_defect), format_number(l.l2_distance),
                  l.passed ? "true" : "false"})
         << "\n";
    os << "\nn,oracle_h0_n_plus_2,oracle_h2_n,rel_diff,passed\n";
    for (const auto& d : report.deletion)
      os << join({std::to_string(d.n), format_number(d.oracle_h0), format_number(d.oracle_h2),
                  format_number(d.rel_diff), d.passed ? "true" : "false"})
         << "\n";
  }
  sink.close(cfg.out);
  return report.passed ? kOk : kValidationFailed;
}

int cmd_bands(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.lattice_a > 0.0)) throw NonPositiveParameter("lattice constant must be positive");
  const auto kp = k_point(cfg.lattice_a);
  const double w = 0.1 / cfg.lattice_a;
  const auto kx = cfg.kx_range.value_or(std::pair{kp[0] - w, kp[0] + w});
  const auto ky = cfg.ky_range.value_or(std::pair{kp[1] - w, kp[1] + w});
  if (cfg.samples < 1) throw DomainViolation("samples must be at least 1");
  if (cfg.samples == 1 && (kx.first != kx.second || ky.first != ky.second))
    throw DomainViolation("a single sample needs degenerate k ranges");
  const auto axis = [&](std::pair<double, double> r, int i) {
    return cfg.samples == 1 ? r.first : r.first + (r.second - r.first) * i / (cfg.samples - 1);
  };

  Sink sink(out);
  auto& os = sink.open(cfg.out);
  if (cfg.format == "json") {
    json pts = json::array();
    for (int i = 0; i < cfg.samples; ++i)
      for (int j = 0; j < cfg.samples; ++j) {
        const double x = axis(kx, i), y = axis(ky, j);
        const auto b = tight_binding_bands(x, y, cfg.lattice_a);
        pts.push_back({{"kx", x}, {"ky", y}, {"E", {b[0], b[1], b[2], b[3]}}});
      }
    json j = {{"meta",
               {{"verb", "bands"},
                {"lattice_a", cfg.lattice_a},
                {"gamma0_eV", kGamma0},
                {"gamma1_eV", kGamma1},
                {"units", "eV"}}},
              {"points", pts}};
    os << j.dump(2) << "\n";
  } else {
    os << "# verb: bands\n";
    os << "# lattice_a: " << format_number(cfg.lattice_a) << "\n";
    os << "# gamma0_eV: " << format_number(kGamma0) << "\n";
    os << "# gamma1_eV: " << format_number(kGamma1) << "\n";
    os << "# units: eV, k in 1/length of lattice_a\n";
    os << "kx,ky,E1,E2,E3,E4\n";
    for (int i = 0; i < cfg.samples; ++i)
      for (int j = 0; j < cfg.samples; ++j) {
        const double x = axis(kx, i), y = axis(ky, j);
        const auto b = tight_binding_bands(x, y, cfg.lattice_a);
        os << join({format_number(x), format_number(y), format_number(b[0]), format_number(b[1]),
                    format_number(b[2]), format_number(b[3])})
           << "\n";
      }
  }
  sink.close(cfg.out);
  return kOk;
}

struct Flags {
  std::string config, case_name, window, format, units, out, levels, branch, kx_range, ky_range;
  double omega = 0, alpha = 0, D = 0, k = 0, B0 = 0, delta = 0, length_scale = 0, lattice_a = 0;
  int nmax = 0, grid_n = 0, samples = 0;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }
};

void add_flags(CLI::App* sub, Flags& f) {
  auto& o = f.opts;
  o["config"] = sub->add_option("--config", f.config, "Flat JSON config; flags override it");
  o["case"] = sub->add_option("--case", f.case_name,
                              "constant | hyperbolic-well | trig-singular | exp-decay | "
                              "hyperbolic-singular | singular");
  o["omega"] = sub->add_option("--omega", f.omega, "Constant-field strength");
  o["alpha"] = sub->add_option("--alpha", f.alpha, "Inverse length scale");
  o["D"] = sub->add_option("--D", f.D, "Field amplitude parameter");
  o["k"] = sub->add_option("--k", f.k, "Wave number along y");
  o["B0"] = sub->add_option("--B0", f.B0, "Field scale, echoed in metadata only");
  o["nmax"] = sub->add_option("--nmax", f.nmax, "Highest aux level index");
  o["window"] = sub->add_option("--window", f.window, "Grid window \"lo,hi\"");
  o["grid_n"] = sub->add_option("--grid-n", f.grid_n, "Grid points");
  o["delta"] = sub->add_option("--delta", f.delta, "Offset from singular walls");
  o["format"] = sub->add_option("--format", f.format, "csv | json");
  o["units"] = sub->add_option("--units", f.units, "natural | physical");
  o["length_scale"] = sub->add_option("--length-scale", f.length_scale, "Length unit in meters");
  o["out"] = sub->add_option("--out", f.out, "Output path (densities: file prefix)");
  o["levels"] = sub->add_option("--levels", f.levels, "Bilayer levels \"0,1,2\"");
  o["branch"] = sub->add_option("--branch", f.branch, "electron | hole");
  o["kx_range"] = sub->add_option("--kx-range", f.kx_range, "kx window \"lo,hi\"");
  o["ky_range"] = sub->add_option("--ky-range", f.ky_range, "ky window \"lo,hi\"");
  o["samples"] = sub->add_option("--samples", f.samples, "Samples per axis");
  o["lattice_a"] = sub->add_option("--lattice-a", f.lattice_a, "Lattice constant");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.given("config") ? load_config(f.config) : RunConfig{};
  json overrides = json::object();
  if (f.given("case")) overrides["case"] = f.case_name;
  if (f.given("omega")) overrides["omega"] = f.omega;
  if (f.given("alpha")) overrides["alpha"] = f.alpha;
  if (f.given("D")) overrides["D"] = f.D;
  if (f.given("k")) overrides["k"] = f.k;
  if (f.given("B0")) overrides["B0"] = f.B0;
  if (f.given("nmax")) overrides["nmax"] = f.nmax;
  if (f.given("window")) overrides["window"] = f.window;
  if (f.given("grid_n")) overrides["grid_n"] = f.grid_n;
  if (f.given("delta")) overrides["delta"] = f.delta;
  if (f.given("format")) overrides["format"] = f.format;
  if (f.given("units")) overrides["units"] = f.units;
  if (f.given("length_scale")) overrides["length_scale"] = f.length_scale;
  if (f.given("out")) overrides["out"] = f.out;
  if (f.given("levels")) overrides["levels"] = parse_int_list(f.levels, "--levels");
  if (f.given("branch")) overrides["branch"] = f.branch;
  if (f.given("kx_range")) overrides["kx_range"] = f.kx_range;
  if (f.given("ky_range")) overrides["ky_range"] = f.ky_range;
  if (f.given("samples")) overrides["samples"] = f.samples;
  if (f.given("lattice_a")) overrides["lattice_a"] = f.lattice_a;
  apply_config(cfg, overrides);
  if (cfg.units == "physical" && !cfg.length_scale)
    throw InvalidConfig("physical units need --length-scale");
  return cfg;
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void apply_config(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw InvalidConfig("config must be a flat JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "case") {
      try {
        cfg.kind = case_kind_from_string(get_as<std::string>(v, key));
      } catch (const InvalidConfig&) {
        throw;
      } catch (const Error& e) {
        throw InvalidConfig(e.what());
      }
    } else if (key == "omega") {
      cfg.params.omega = get_as<double>(v, key);
    } else if (key == "alpha") {
      cfg.params.alpha = get_as<double>(v, key);
    } else if (key == "D") {
      cfg.params.D = get_as<double>(v, key);
    } else if (key == "k") {
      cfg.params.k = get_as<double>(v, key);
    } else if (key == "B0") {
      cfg.params.B0 = get_as<double>(v, key);
    } else if (key == "nmax") {
      cfg.n_max = get_as<int>(v, key);
    } else if (key == "window") {
      cfg.window = get_pair(v, key);
    } else if (key == "grid_n") {
      cfg.grid_n = get_as<int>(v, key);
    } else if (key == "delta") {
      cfg.delta = get_as<double>(v, key);
    } else if (key == "format") {
      cfg.format = get_as<std::string>(v, key);
      check_choice(cfg.format, {"csv", "json"}, "format");
    } else if (key == "units") {
      cfg.units = get_as<std::string>(v, key);
      check_choice(cfg.units, {"natural", "physical"}, "units");
    } else if (key == "length_scale") {
      cfg.length_scale = get_as<double>(v, key);
    } else if (key == "out") {
      cfg.out = get_as<std::string>(v, key);
    } else if (key == "levels") {
      cfg.levels = get_as<std::vector<int>>(v, key);
      if (cfg.levels.empty()) throw InvalidConfig("levels must not be empty");
    } else if (key == "branch") {
      cfg.branch = branch_from_string(get_as<std::string>(v, key));
    } else if (key == "kx_range") {
      cfg.kx_range = get_pair(v, key);
    } else if (key == "ky_range") {
      cfg.ky_range = get_pair(v, key);
    } else if (key == "samples") {
      cfg.samples = get_as<int>(v, key);
    } else if (key == "lattice_a") {
      cfg.lattice_a = get_as<double>(v, key);
    } else {
      throw InvalidConfig("unknown config key \"" + key + "\"");
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidConfig("config file " + path + " is not valid JSON: " + e.what());
  }
  RunConfig cfg;
  apply_config(cfg, j);
  return cfg;
}

json spectrum_to_json(const SpectrumResult& s) {
  const auto& c = s.case_def;
  const auto bound = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json levels = json::array();
  for (const auto& l : s.levels)
    levels.push_back({{"index", l.index},
                      {"energy", l.energy},
                      {"multiplicity", l.multiplicity},
                      {"branch", to_string(l.branch)},
                      {"aux_level_0", l.aux_level_0},
                      {"aux_level_2", l.aux_level_2 ? json(*l.aux_level_2) : json(nullptr)}});
  return {{"case_definition",
           {{"case", to_string(c.params.kind)},
            {"omega", c.params.omega},
            {"alpha", c.params.alpha},
            {"D", c.params.D},
            {"k", c.params.k},
            {"B0", c.params.B0},
            {"kappa", c.kappa},
            {"epsilon1", c.epsilon1},
            {"epsilon2", c.epsilon2},
            {"domain",
             {{"lo", bound(c.domain.lo)},
              {"hi", bound(c.domain.hi)},
              {"singular_lo", c.domain.singular_lo},
              {"singular_hi", c.domain.singular_hi}}}}},
          {"levels", levels}};
}

SpectrumResult spectrum_from_json(const json& j) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& cd = j.at("case_definition");
  SpectrumResult s;
  auto& c = s.case_def;
  c.params.kind = case_kind_from_string(cd.at("case").get<std::string>());
  c.params.omega = cd.at("omega").get<double>();
  c.params.alpha = cd.at("alpha").get<double>();
  c.params.D = cd.at("D").get<double>();
  c.params.k = cd.at("k").get<double>();
  c.params.B0 = cd.at("B0").get<double>();
  c.kappa = cd.at("kappa").get<double>();
  c.epsilon1 = cd.at("epsilon1").get<double>();
  c.epsilon2 = cd.at("epsilon2").get<double>();
  const auto& d = cd.at("domain");
  c.domain.lo = d.at("lo").is_null() ? -inf : d.at("lo").get<double>();
  c.domain.hi = d.at("hi").is_null() ? inf : d.at("hi").get<double>();
  c.domain.singular_lo = d.at("singular_lo").get<bool>();
  c.domain.singular_hi = d.at("singular_hi").get<bool>();
  for (const auto& l : j.at("levels")) {
    SpectrumLevel lv;
    lv.index = l.at("index").get<int>();
    lv.energy = l.at("energy").get<double>();
    lv.multiplicity = l.at("multiplicity").get<int>();
    lv.branch = branch_from_string(l.at("branch").get<std::string>());
    lv.aux_level_0 = l.at("aux_level_0").get<double>();
    if (!l.at("aux_level_2").is_null()) lv.aux_level_2 = l.at("aux_level_2").get<double>();
    s.levels.push_back(lv);
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilayer graphene spectra, densities and oracle checks in magnetic field profiles"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::function<int(const RunConfig&, std::ostream&)>>> verbs = {
      {"spectrum", cmd_spectrum},   {"densities", cmd_densities}, {"envelope", cmd_envelope},
      {"validate", cmd_validate},   {"bands", cmd_bands}};
  const std::map<std::string, std::string> blurbs = {
      {"spectrum", "Bilayer levels and auxiliary energies"},
      {"densities", "Probability and current density profiles"},
      {"envelope", "Enveloping quadratic and endpoint residuals"},
      {"validate", "Finite-difference oracle report"},
      {"bands", "Four-band tight-binding dispersion"}};
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : verbs) {
    subs[name] = app.add_subcommand(name, blurbs.at(name));
    add_flags(subs[name], flags[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << one_line(e.what()) << "\n";
    return kDomainError;
  }

  try {
    for (const auto& [name, fn] : verbs)
      if (subs[name]->parsed()) return fn(resolve(flags[name]), out);
  } catch (const IoError& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << one_line(e.what()) << "\n";
    return kDomainError;
  }
  return kDomainError;
}

}  // namespace bilayer::cli
