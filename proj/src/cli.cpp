#include "nqd/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nqd/band_structure.hpp"
#include "nqd/bulk_crystal.hpp"
#include "nqd/constants.hpp"
#include "nqd/errors.hpp"
#include "nqd/kernel_solver.hpp"
#include "nqd/output.hpp"
#include "nqd/screening.hpp"
#include "nqd/transitions.hpp"

namespace nqd {

namespace fs = std::filesystem;
using nlohmann::json;

std::string default_data_dir() { return NQD_DEFAULT_DATA_DIR; }

namespace {

struct RunConfig {
  std::string material = "LiH";
  std::string composition;
  std::string nuclide_table = default_data_dir() + "/nuclides.csv";
  std::string dataset = default_data_dir() + "/screening_sample.ndjson";
  std::string format = "auto";  // json for bulk, csv otherwise
  std::string output = "-";
  int threads = 0;

  double radius_nm = 30.0;
  std::vector<double> radii_nm{40.0};
  double thickness_nm = 0.0;
  double bands_radius_nm = 0.0;
  double bands_thickness_nm = 0.0;
  int grid_div = 0;  // 0 = 10 for spheres and wires, slab_grid_div for films
  int max_states = 12;
  int kpoints = 32;
  int g_cutoff = 3;
  std::vector<double> fields_kv_cm{1.0};
  double voltage_v = 1.0;
  double t_span_us = 0.0;
  double dt_us = 0.0;
  int state = 0;
};

const std::map<std::string, std::string>& material_aliases() {
  static const std::map<std::string, std::string> m{
      {"LiH", "LiH"},     {"MgH2", "MgH2"}, {"MgH₂", "MgH2"}, {"LiBH4", "LiBH4"},
      {"LiBH₄", "LiBH4"}, {"NaH", "NaH"}, {"CaH2", "CaH2"},  {"CaH₂", "CaH2"}};
  return m;
}

int grid_div(const RunConfig& cfg, std::optional<double> slab_thickness = std::nullopt) {
  if (cfg.grid_div > 0) return cfg.grid_div;
  return slab_thickness ? slab_grid_div(*slab_thickness) : 10;
}

CrystalComposition resolve_material(const RunConfig& cfg) {
  if (!cfg.composition.empty()) return load_composition(cfg.composition);
  const auto it = material_aliases().find(cfg.material);
  if (it == material_aliases().end()) {
    std::string known;
    for (const auto& [k, v] : material_aliases())
      if (k == v) known += (known.empty() ? "" : ", ") + k;
    throw InvalidArgument("--material: unknown material '" + cfg.material + "' (known: " + known +
                          "; use --composition for a file)");
  }
  return load_composition(fs::path(default_data_dir()) / "materials" / (it->second + ".json"));
}

// TOML rendering of the options that were resolved for this run.
std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

std::string toml_value(const std::vector<std::string>& values, bool list) {
  auto one = [](const std::string& v) {
    if (v == "true" || v == "false" || is_number(v)) return v;
    return quote(v);
  };
  if (!list) return values.empty() ? "\"\"" : one(values.front());
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + one(values[i]);
  return s + "]";
}

std::vector<std::string> split_default(std::string d) {
  if (!d.empty() && d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(d);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void emit_options(std::ostringstream& out, const CLI::App& app) {
  for (const CLI::Option* opt : app.get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    const bool list = opt->get_expected_max() > 1;
    std::vector<std::string> values =
        opt->count() > 0 ? opt->results() : split_default(opt->get_default_str());
    out << name << "=" << toml_value(values, list) << "\n";
  }
}

std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::ostringstream out;
  emit_options(out, app);
  out << "[" << sub.get_name() << "]\n";
  emit_options(out, sub);
  return out.str();
}

void emit(const RunConfig& cfg, const RunMetadata& meta, const Table& table, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (cfg.output != "-") {
    file.open(cfg.output, std::ios::binary);
    if (!file) throw InvalidArgument("--output: cannot write " + cfg.output);
    os = &file;
  }
  if (cfg.format == "json") {
    write_json(*os, meta, table);
  } else {
    write_csv(*os, meta, table);
  }
}

Table levels_table(const std::vector<BoundState>& states, const Grid& grid,
                   const CrystalComposition& comp, const NuclideTable& table) {
  Table t;
  t.columns = {"label", "degeneracy", "kappa_nm_inv", "e_b_ueV", "lifetime_ms"};
  for (const auto& s : states)
    t.add({s.label, static_cast<long long>(s.degeneracy), s.kappa, s.e_b,
           finite_lifetime(s, grid, comp, table)});
  if (states.empty()) t.empty_reason = "no bound state";
  return t;
}

Table run_bulk(const RunConfig& cfg, const NuclideTable& table, json& payload) {
  const CrystalComposition comp = resolve_material(cfg);
  const CoherentSums sums = composition_sums(comp, table);
  Table t;
  t.columns = {"quantity", "value", "unit"};
  payload = {{"material", comp.name}, {"sum_re_fm", sums.re_fm}, {"sum_im_fm", sums.im_fm}};
  t.add({std::string("sum_re"), sums.re_fm, std::string("fm")});
  t.add({std::string("sum_im"), sums.im_fm, std::string("fm")});
  if (sums.re_fm >= 0.0) {
    t.empty_reason = "no bound state: sum Re[b] >= 0";
    payload["empty"] = t.empty_reason;
    return t;
  }
  const double omega = comp.cell_volume_nm3();
  const double e_b = bulk_binding_energy(sums.re_fm, omega);
  const double kappa = std::sqrt(e_b / constants::hbar2_over_2mn);
  const double t_star = sums.im_fm > 0.0 ? 1.0 / bulk_absorption_rate(sums.im_fm, omega)
                                        : std::numeric_limits<double>::infinity();
  const double ebt = e_b * t_star;
  payload["kappa_star_nm_inv"] = kappa;
  payload["e_b_star_ueV"] = e_b;
  payload["t_star_ms"] = std::isfinite(t_star) ? json(t_star) : json("inf");
  payload["ebt_bound_ueV_ms"] = std::isfinite(ebt) ? json(ebt) : json("inf");
  t.add({std::string("kappa_star"), kappa, std::string("1/nm")});
  t.add({std::string("e_b_star"), e_b, std::string("ueV")});
  t.add({std::string("t_star"), t_star, std::string("ms")});
  t.add({std::string("ebt_bound"), ebt, std::string("ueV ms")});
  if (comp.mass_density_kg_m3) {
    const double gain = mass_gain_percent(comp, table);
    payload["mass_gain_percent"] = gain;
    t.add({std::string("mass_gain"), gain, std::string("percent")});
  }
  return t;
}

Table run_levels(const RunConfig& cfg, const NuclideTable& table, Shape shape) {
  const CrystalComposition comp = resolve_material(cfg);
  GeometrySpec spec;
  switch (shape) {
    case Shape::sphere: spec = GeometrySpec::sphere(cfg.radius_nm, grid_div(cfg)); break;
    case Shape::cylinder: spec = GeometrySpec::cylinder(cfg.radius_nm, grid_div(cfg)); break;
    case Shape::slab: spec = GeometrySpec::slab(cfg.thickness_nm, grid_div(cfg, cfg.thickness_nm)); break;
  }
  const Grid grid = build_grid(spec);
  const Coupling coupling = Coupling::from_composition(comp, table, grid);
  const auto states = solve_bound_states(grid, coupling, cfg.max_states);
  return levels_table(states, grid, comp, table);
}

Table run_bands(const RunConfig& cfg, const NuclideTable& table) {
  const CrystalComposition comp = resolve_material(cfg);
  Table t;
  t.columns = {"k_nm_inv", "subband", "energy_ueV"};
  const bool film = cfg.bands_thickness_nm > 0.0;
  const bool wire = cfg.bands_radius_nm > 0.0 && !film;
  if (wire || film) {
    const GeometrySpec spec = film ? GeometrySpec::slab(cfg.bands_thickness_nm, grid_div(cfg, cfg.bands_thickness_nm))
                                   : GeometrySpec::cylinder(cfg.bands_radius_nm, grid_div(cfg));
    const auto ks = default_k_samples(spec, cfg.kpoints);
    for (const auto& p : subband_dispersion(spec, comp, table, ks, cfg.max_states))
      t.add({p.k, static_cast<long long>(p.subband_index), p.energy});
  } else {
    const CubicCell cell = rocksalt_cell(comp);
    const BulkProperties bp = bulk_properties(comp, table);
    for (int i = 0; i < cfg.kpoints; ++i) {
      const double k = 2.0 * bp.kappa_star * i / std::max(cfg.kpoints - 1, 1);
      const auto e = planewave_bulk_band(cell, table, Vec3(k, 0, 0), cfg.g_cutoff);
      t.add({k, 0LL, e.front()});
    }
  }
  if (t.rows.empty()) t.empty_reason = "no bound sub-band";
  return t;
}

Table run_rabi(const RunConfig& cfg, const NuclideTable& table) {
  const CrystalComposition comp = resolve_material(cfg);
  if (!comp.mass_density_kg_m3) throw MissingDensity("--material: composition has no mass density");
  DriveConfig drive;
  drive.surface_voltage_V = cfg.voltage_v;
  drive.mass_density_kg_m3 = *comp.mass_density_kg_m3;
  Table t;
  if (cfg.t_span_us > 0.0) {
    // Time series of the first radius and field.
    drive.field_kV_cm = Vec3(0, 0, cfg.fields_kv_cm.front());
    const SphereRabi r = sphere_rabi(comp, table, cfg.radii_nm.front(), grid_div(cfg), drive);
    const double gamma = 1.0 / (r.lifetime_ms * 1e-3);
    const double w = r.rabi_rad_s;
    const double dt = cfg.dt_us > 0.0 ? cfg.dt_us * 1e-6 : 2.0 * constants::pi / (100.0 * w);
    t.columns = {"t_us", "n_s", "n_p"};
    for (const auto& s : simulate_two_level(w, 0.0, gamma, cfg.t_span_us * 1e-6, dt))
      t.add({s.t_us, s.n_s, s.n_p});
    return t;
  }
  t.columns = {"R_nm", "E0_kV_cm", "rabi_MHz"};
  for (double R : cfg.radii_nm) {
    drive.field_kV_cm = Vec3(0, 0, 1.0);
    SphereRabi base;
    try {
      base = sphere_rabi(comp, table, R, grid_div(cfg), drive);
    } catch (const NoBoundState&) {
      continue;
    }
    // Omega is linear in E0, so one solve per radius serves every field.
    for (double E0 : cfg.fields_kv_cm)
      t.add({R, E0, base.rabi_rad_s * E0 / (2.0 * constants::pi) * 1e-6});
  }
  if (t.rows.empty()) t.empty_reason = "no 1s -> 1p pair at any radius";
  return t;
}

Table run_screen(const RunConfig& cfg, const NuclideTable& table, std::ostream& err) {
  const auto records = ingest_records(fs::path(cfg.dataset));
  const ScreenReport rep = screen_materials(records, table);
  Table t;
  t.columns = {"id", "formula", "e_b_star_ueV", "t_star_ms", "pareto"};
  for (const auto& r : rep.results) t.add({r.id, r.formula, r.e_b_star, r.t_star, r.pareto});
  if (t.rows.empty()) t.empty_reason = "no record passed the screening rules";

  Table issues;
  issues.columns = {"id", "reason"};
  for (const auto& e : rep.excluded) issues.add({e.id, e.reason});
  if (cfg.output != "-") {
    std::ofstream side(cfg.output + ".errors.csv", std::ios::binary);
    if (!side) throw InvalidArgument("--output: cannot write the errors sidecar");
    side << "id,reason\n";
    for (const auto& row : issues.rows) side << format_cell(row[0]) << "," << format_cell(row[1]) << "\n";
  } else {
    for (const auto& e : rep.excluded) err << "excluded " << e.id << ": " << e.reason << "\n";
  }
  return t;
}

Table run_wf(const RunConfig& cfg, const NuclideTable& table) {
  const CrystalComposition comp = resolve_material(cfg);
  const Grid grid = build_grid(GeometrySpec::sphere(cfg.radius_nm, grid_div(cfg)));
  const Coupling coupling = Coupling::from_composition(comp, table, grid);
  const auto states = solve_bound_states(grid, coupling, cfg.max_states);
  Table t;
  t.columns = {"x", "y", "z", "re", "im"};
  if (cfg.state < 0 || cfg.state >= static_cast<int>(states.size())) {
    t.empty_reason = "no bound state with index " + std::to_string(cfg.state);
    return t;
  }
  const auto sites = dipole_box_sites(grid);
  const Eigen::VectorXcd f = lattice_field(states[std::size_t(cfg.state)], grid, coupling, sites);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Vec3 r = grid.lattice_point(sites[i]);
    const auto v = f[static_cast<Eigen::Index>(i)];
    t.add({r.x(), r.y(), r.z(), v.real(), v.imag()});
  }
  return t;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Weakly bound neutron states in hydride nanostructures"};
  app.name("nqd");
  app.set_config("--config", "", "Read flags from a TOML file (the resolved-config block of any output)");
  app.add_option("--nuclide-table", cfg.nuclide_table, "Nuclide scattering-length CSV")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "Output file, - for stdout")->configurable(false);
  app.add_option("--threads", cfg.threads, "Worker threads, 0 = runtime default; results do not depend on it")
      ->check(CLI::NonNegativeNumber)
      ->configurable(false);
  app.require_subcommand(1);
  app.fallthrough();

  auto material = [&](CLI::App* sub) {
    sub->add_option("--material", cfg.material, "Built-in material alias (LiH, MgH2, LiBH4, NaH, CaH2)")
        ->capture_default_str();
    sub->add_option("--composition", cfg.composition, "Composition JSON file, overrides --material")
        ->capture_default_str();
  };
  auto grid_flags = [&](CLI::App* sub) {
    sub->add_option("--grid-div", cfg.grid_div,
                    "Grid divisions per radius or thickness, a0 = size / grid-div; 0 = 10, or a0 <= 2 nm for films")
        ->check(CLI::Range(0, 100000) & !CLI::Range(1, 3))
        ->capture_default_str();
    sub->add_option("--max-states", cfg.max_states, "Maximum number of levels reported")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* bulk = app.add_subcommand("bulk", "Infinite-crystal E_b* (ueV), T* (ms), Eb.T bound (ueV ms), mass gain (%)");
  material(bulk);

  auto* dot = app.add_subcommand("dot", "Levels of a spherical nanocrystal");
  material(dot);
  dot->add_option("--radius-nm", cfg.radius_nm, "Sphere radius, nm")->check(CLI::PositiveNumber)->capture_default_str();
  grid_flags(dot);

  auto* wire = app.add_subcommand("wire", "Gamma-point sub-band minima of a cylindrical nanowire");
  material(wire);
  wire->add_option("--radius-nm", cfg.radius_nm, "Wire radius, nm")->check(CLI::PositiveNumber)->capture_default_str();
  grid_flags(wire);

  auto* film = app.add_subcommand("film", "Gamma-point sub-band minima of a thin film");
  material(film);
  film->add_option("--thickness-nm", cfg.thickness_nm, "Film thickness, nm")->required()->check(CLI::PositiveNumber);
  grid_flags(film);

  auto* bands = app.add_subcommand("bands", "Sub-band dispersion of a wire (--radius-nm) or film (--thickness-nm); plane-wave bulk band when neither is given");
  material(bands);
  bands->add_option("--radius-nm", cfg.bands_radius_nm, "Wire radius, nm, 0 = none")->check(CLI::NonNegativeNumber)->capture_default_str();
  bands->add_option("--thickness-nm", cfg.bands_thickness_nm, "Film thickness, nm, 0 = none")->check(CLI::NonNegativeNumber)->capture_default_str();
  bands->add_option("--kpoints", cfg.kpoints, "Number of k samples from 0 to the zone edge pi/a0 (1/nm)")->check(CLI::Range(2, 100000))->capture_default_str();
  bands->add_option("--g-cutoff", cfg.g_cutoff, "Plane-wave shells for the bulk band")->check(CLI::NonNegativeNumber)->capture_default_str();
  grid_flags(bands);

  auto* rabi = app.add_subcommand("rabi", "1s -> 1p Rabi frequency (MHz) map over radius (nm) and field (kV/cm), or a time series");
  material(rabi);
  rabi->add_option("--radius-nm", cfg.radii_nm, "Sphere radii, nm")->check(CLI::PositiveNumber)->capture_default_str();
  rabi->add_option("--field-kv-cm", cfg.fields_kv_cm, "Microwave field amplitudes, kV/cm")->check(CLI::NonNegativeNumber)->capture_default_str();
  rabi->add_option("--voltage-v", cfg.voltage_v, "Surface voltage, V")->check(CLI::NonNegativeNumber)->capture_default_str();
  rabi->add_option("--t-span-us", cfg.t_span_us, "Emit a resonant time series of this length, us")->check(CLI::NonNegativeNumber)->capture_default_str();
  rabi->add_option("--dt-us", cfg.dt_us, "Time step, us, 0 = 1/100 of a Rabi period")->check(CLI::NonNegativeNumber)->capture_default_str();
  rabi->add_option("--grid-div", cfg.grid_div, "Grid divisions per radius, 0 = 10")->check(CLI::Range(0, 1000) & !CLI::Range(1, 3))->capture_default_str();

  auto* screen = app.add_subcommand("screen", "Bulk screening of an NDJSON crystal dataset with Pareto flags (E_b* ueV, T* ms)");
  screen->add_option("--dataset", cfg.dataset, "NDJSON dataset")->capture_default_str();

  auto* wf = app.add_subcommand("wf", "Wavefunction of a sphere level on the lattice of the 3R box (x, y, z in nm; psi in nm^-3/2)");
  material(wf);
  wf->add_option("--radius-nm", cfg.radius_nm, "Sphere radius, nm")->check(CLI::PositiveNumber)->capture_default_str();
  wf->add_option("--state", cfg.state, "Level index, 0 = deepest")->check(CLI::NonNegativeNumber)->capture_default_str();
  grid_flags(wf);

  for (CLI::App* sub : {bulk, dot, wire, film, bands, rabi, screen, wf}) sub->configurable();
  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name(),
                      CLI::AppFormatMode::All);
      return 0;
    }
    err << "nqd: " << e.what() << "\n";
    return 2;
  }
  const CLI::App* sub = app.get_subcommands().front();

#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

  RunMetadata meta{sub->get_name(), resolved_config(app, *sub)};
  try {
    const NuclideTable table = NuclideTable::load(cfg.nuclide_table);
    Table t;
    const std::string name = sub->get_name();
    if (name == "bulk") {
      json payload;
      t = run_bulk(cfg, table, payload);
      if (cfg.format != "csv") {
        std::ofstream file;
        std::ostream* os = &out;
        if (cfg.output != "-") {
          file.open(cfg.output, std::ios::binary);
          if (!file) throw InvalidArgument("--output: cannot write " + cfg.output);
          os = &file;
        }
        write_json(*os, meta, payload);
        return 0;
      }
    } else if (name == "dot") {
      t = run_levels(cfg, table, Shape::sphere);
    } else if (name == "wire") {
      t = run_levels(cfg, table, Shape::cylinder);
    } else if (name == "film") {
      t = run_levels(cfg, table, Shape::slab);
    } else if (name == "bands") {
      t = run_bands(cfg, table);
    } else if (name == "rabi") {
      t = run_rabi(cfg, table);
    } else if (name == "screen") {
      t = run_screen(cfg, table, err);
    } else if (name == "wf") {
      t = run_wf(cfg, table);
    }
    emit(cfg, meta, t, out);
    return 0;
  } catch (const NoBoundState& e) {
    Table t;
    t.columns = {"result"};
    t.empty_reason = std::string("no bound state: ") + e.what();
    emit(cfg, meta, t, out);
    return 0;
  } catch (const SchemaViolation& e) {
    err << "nqd: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "nqd: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "nqd: numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "nqd: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nqd
