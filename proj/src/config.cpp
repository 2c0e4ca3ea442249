#include "phasespace/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "phasespace/csv.hpp"
#include "phasespace/suite.hpp"

namespace phasespace {

using nlohmann::json;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Free: return "free";
    case ScenarioKind::Electric: return "electric";
    case ScenarioKind::Magnetic: return "magnetic";
    case ScenarioKind::GaugeCheck: return "gauge-check";
    case ScenarioKind::PropertySuite: return "property-suite";
  }
  return "unknown";
}

std::vector<Formalism> RunConfig::formalisms() const {
  switch (formalism) {
    case FormalismChoice::Wigner: return {Formalism::Wigner};
    case FormalismChoice::SegalBargmann: return {Formalism::SegalBargmann};
    case FormalismChoice::Both: break;
  }
  return {Formalism::Wigner, Formalism::SegalBargmann};
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, "field '" + field + "' " + why);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(field, "must be finite");
  return x;
}

std::size_t count(const json& v, const std::string& field) {
  const double x = number(v, field);
  if (x < 0.0 || x != std::floor(x) || x > 1e12) invalid(field, "must be a non-negative integer");
  return static_cast<std::size_t>(x);
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "must be a string");
  return v.get<std::string>();
}

ScenarioKind kind_from(const std::string& name, const std::string& field) {
  for (ScenarioKind k : {ScenarioKind::Free, ScenarioKind::Electric, ScenarioKind::Magnetic, ScenarioKind::GaugeCheck,
                         ScenarioKind::PropertySuite})
    if (name == to_string(k)) return k;
  invalid(field, "has unknown value '" + name + "'");
}

enum Scope : unsigned { kFree = 1, kElectric = 2, kMagnetic = 4, kGauge = 8, kSuite = 16, kAll = 31 };

unsigned scope_of(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Free: return kFree;
    case ScenarioKind::Electric: return kElectric;
    case ScenarioKind::Magnetic: return kMagnetic;
    case ScenarioKind::GaugeCheck: return kGauge;
    case ScenarioKind::PropertySuite: return kSuite;
  }
  return 0;
}

struct FieldRule {
  const char* name;
  unsigned scope;
  std::function<void(RunConfig&, const json&)> apply;
};

// Fields shared by several kinds go to the scenario that the kind (or the
// gauge check's base) runs.
bool targets_magnetic(const RunConfig& c) {
  return c.kind == ScenarioKind::Magnetic || (c.kind == ScenarioKind::GaugeCheck && c.gauge.base == ScenarioKind::Magnetic);
}

const std::vector<FieldRule>& rules() {
  static const std::vector<FieldRule> table = {
      {"hbar", kAll, [](RunConfig& c, const json& v) { c.consts.hbar = number(v, "hbar"); }},
      {"mass", kAll, [](RunConfig& c, const json& v) { c.consts.mass = number(v, "mass"); }},
      {"charge", kAll, [](RunConfig& c, const json& v) { c.consts.charge = number(v, "charge"); }},
      {"omega", kAll, [](RunConfig& c, const json& v) { c.consts.omega = number(v, "omega"); }},
      {"formalism", kFree | kElectric | kMagnetic,
       [](RunConfig& c, const json& v) {
         const std::string f = text(v, "formalism");
         if (f == "wigner") c.formalism = FormalismChoice::Wigner;
         else if (f == "segal-bargmann") c.formalism = FormalismChoice::SegalBargmann;
         else if (f == "both") c.formalism = FormalismChoice::Both;
         else invalid("formalism", "must be wigner, segal-bargmann or both");
       }},
      {"out", kAll, [](RunConfig& c, const json& v) { c.out_dir = text(v, "out"); }},
      {"stride", kFree | kElectric | kMagnetic, [](RunConfig& c, const json& v) { c.sampling.frame_stride = count(v, "stride"); }},
      {"samples_per_tau", kElectric | kMagnetic | kGauge,
       [](RunConfig& c, const json& v) { c.sampling.samples_per_tau = count(v, "samples_per_tau"); }},
      {"run_past_tau", kElectric | kMagnetic | kGauge,
       [](RunConfig& c, const json& v) { c.sampling.run_past_tau = number(v, "run_past_tau"); }},
      {"dphi", kElectric | kGauge,
       [](RunConfig& c, const json& v) {
         c.electric.phi_1 = number(v, "dphi");
         c.electric.phi_2 = 0.0;
       }},
      {"phi_1", kElectric | kGauge, [](RunConfig& c, const json& v) { c.electric.phi_1 = number(v, "phi_1"); }},
      {"phi_2", kElectric | kGauge, [](RunConfig& c, const json& v) { c.electric.phi_2 = number(v, "phi_2"); }},
      {"energy", kElectric | kGauge, [](RunConfig& c, const json& v) { c.electric.energy = number(v, "energy"); }},
      {"tau", kElectric | kMagnetic | kGauge,
       [](RunConfig& c, const json& v) { (targets_magnetic(c) ? c.magnetic.tau : c.electric.tau) = number(v, "tau"); }},
      {"packet_center", kElectric | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         (c.kind == ScenarioKind::Free ? c.free.packet_center : c.electric.packet_center) = number(v, "packet_center");
       }},
      {"packet_width", kElectric | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         (c.kind == ScenarioKind::Free ? c.free.packet_width : c.electric.packet_width) = number(v, "packet_width");
       }},
      {"box_half_width", kElectric | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         (c.kind == ScenarioKind::Free ? c.free.box_half_width : c.electric.box_half_width) = number(v, "box_half_width");
       }},
      {"grid_points", kElectric | kMagnetic | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         const std::size_t n = count(v, "grid_points");
         if (c.kind == ScenarioKind::Free) c.free.grid_points = n;
         else if (targets_magnetic(c)) c.magnetic.grid_points = n;
         else c.electric.grid_points = n;
       }},
      {"sb_truncation", kElectric | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         (c.kind == ScenarioKind::Free ? c.free.sb_truncation : c.electric.sb_truncation) = count(v, "sb_truncation");
       }},
      {"momentum", kMagnetic | kFree | kGauge,
       [](RunConfig& c, const json& v) {
         (c.kind == ScenarioKind::Free ? c.free.momentum : c.magnetic.momentum) = number(v, "momentum");
       }},
      {"solenoid_radius", kMagnetic | kGauge,
       [](RunConfig& c, const json& v) { c.magnetic.solenoid_radius = number(v, "solenoid_radius"); }},
      {"ring_radius", kMagnetic | kGauge, [](RunConfig& c, const json& v) { c.magnetic.ring_radius = number(v, "ring_radius"); }},
      {"field", kMagnetic | kGauge, [](RunConfig& c, const json& v) { c.magnetic.field = number(v, "field"); }},
      {"t_final", kFree, [](RunConfig& c, const json& v) { c.free.t_final = number(v, "t_final"); }},
      {"samples", kFree, [](RunConfig& c, const json& v) { c.free.samples = count(v, "samples"); }},
      {"gauge_count", kGauge, [](RunConfig& c, const json& v) { c.gauge.count = count(v, "gauge_count"); }},
      {"seed", kGauge | kSuite,
       [](RunConfig& c, const json& v) { c.gauge.seed = static_cast<std::uint64_t>(count(v, "seed")); }},
  };
  return table;
}

std::size_t line_of(const std::string& s, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(byte, s.size()); ++i)
    if (s[i] == '\n') ++line;
  return line;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
}

// Constructors throw their own codes; configuration errors are reported as validation.
template <class F>
void validated(const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IncommensurateMomentum || e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, what + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text_in) {
  const json doc = parse_json(text_in);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "line 1: configuration must be a JSON object");
  if (!doc.contains("scenario")) invalid("scenario", "is required");

  RunConfig c;
  c.kind = kind_from(text(doc.at("scenario"), "scenario"), "scenario");
  if (doc.contains("base")) {
    if (c.kind != ScenarioKind::GaugeCheck) invalid("base", "only applies to the gauge-check scenario");
    c.gauge.base = kind_from(text(doc.at("base"), "base"), "base");
    if (c.gauge.base != ScenarioKind::Electric && c.gauge.base != ScenarioKind::Magnetic)
      invalid("base", "must be electric or magnetic");
  }
  if (c.kind == ScenarioKind::GaugeCheck) {
    c.electric = ElectricScenario::destructive();
    c.magnetic = MagneticScenario::destructive();
    c.sampling = {4, 0.5, 0};
  }

  const unsigned scope = scope_of(c.kind);
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario" || key == "base") continue;
    const FieldRule* rule = nullptr;
    for (const auto& r : rules())
      if (key == r.name) rule = &r;
    if (rule == nullptr) invalid(key, "is not a known configuration field");
    if ((rule->scope & scope) == 0) invalid(key, "does not apply to the " + to_string(c.kind) + " scenario");
    rule->apply(c, value);
  }
  if (doc.contains("dphi") && (doc.contains("phi_1") || doc.contains("phi_2")))
    invalid("dphi", "cannot be combined with phi_1 or phi_2");
  if (c.kind == ScenarioKind::Electric) {
    if (!doc.contains("tau")) invalid("tau", "is required for the electric scenario");
    if (!doc.contains("dphi") && !doc.contains("phi_1")) invalid("dphi", "is required for the electric scenario");
  }
  if (c.kind == ScenarioKind::Magnetic) {
    if (!doc.contains("tau")) invalid("tau", "is required for the magnetic scenario");
    if (!doc.contains("field")) invalid("field", "is required for the magnetic scenario");
  }

  validated("constants", [&] { c.consts.validate(); });
  c.electric.consts = c.magnetic.consts = c.consts;
  if (c.sampling.samples_per_tau == 0) invalid("samples_per_tau", "must be positive");
  if (!(c.sampling.run_past_tau >= 0.0)) invalid("run_past_tau", "must be non-negative");
  if (c.kind == ScenarioKind::Electric || (c.kind == ScenarioKind::GaugeCheck && !targets_magnetic(c)))
    validated("electric scenario", [&] { c.electric.validate(); });
  if (targets_magnetic(c)) validated("magnetic scenario", [&] {
      c.magnetic.validate();
      c.magnetic.mode_index();
    });
  if (c.kind == ScenarioKind::Free) {
    const FreeScenario& f = c.free;
    if (!(f.packet_width > 0.0)) invalid("packet_width", "must be positive");
    if (!(f.box_half_width > 0.0)) invalid("box_half_width", "must be positive");
    if (f.grid_points < 8 || f.grid_points % 2 != 0) invalid("grid_points", "must be even and at least 8");
    if (!(f.t_final >= 0.0)) invalid("t_final", "must be non-negative");
    if (f.samples == 0) invalid("samples", "must be positive");
    if (f.sb_truncation < 2 * kGuardBand) invalid("sb_truncation", "is too small");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IncommensurateMomentum:
    case ErrorCode::NotPeriodic:
    case ErrorCode::GridMismatch:
      return kExitValidation;
    default: return kExitNumerical;
  }
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
  json summary;
  bool checks_passed = true;
};

std::string suffix(Formalism f) { return to_string(f); }

// Files of one formalism; the first formalism also owns the unsuffixed names.
void add_series(Output& out, const ScenarioResult& r, bool primary) {
  const std::string tag = primary ? "" : "_" + suffix(r.formalism);
  out.files.emplace_back("timeseries" + tag + ".csv", csv::timeseries(r));
  for (const Frame& f : r.frames) out.files.emplace_back("frame" + tag + "_" + std::to_string(f.index) + ".csv", csv::frame(f));
}

json phase_entry(const ScenarioResult& r) {
  return {{"extracted_phase", r.extracted_phase},
          {"closed_form_phase", r.closed_form_phase},
          {"deviation", std::abs(wrap_phase(r.extracted_phase - r.closed_form_phase))},
          {"prob_at_tau", r.probability_at_tau}};
}

template <class Simulate>
Output run_interference(const RunConfig& c, Simulate&& simulate, const std::function<void(json&, const ScenarioResult&)>& extra) {
  Output out;
  out.summary["scenario"] = to_string(c.kind);
  std::vector<ScenarioResult> results;
  for (Formalism f : c.formalisms()) {
    results.push_back(simulate(f));
    json entry = phase_entry(results.back());
    extra(entry, results.back());
    out.summary["formalisms"][to_string(f)] = entry;
    add_series(out, results.back(), results.size() == 1);
  }
  for (const char* key : {"extracted_phase", "closed_form_phase", "deviation", "prob_at_tau"})
    out.summary[key] = out.summary["formalisms"][to_string(results.front().formalism)][key];
  if (results.size() == 2)
    out.summary["pairwise_phase_deviation"] = std::abs(wrap_phase(results[0].extracted_phase - results[1].extracted_phase));
  return out;
}

Output run_electric(const RunConfig& c) {
  const ElectricScenario& s = c.electric;
  Output out = run_interference(
      c, [&](Formalism f) { return simulate_electric_ab(s, f, c.sampling); },
      [&](json& entry, const ScenarioResult& r) {
        double gap = 0.0;
        for (std::size_t k = 0; k < r.times.size(); ++k)
          gap = std::max(gap, std::abs(r.probability[k] - electric_ab_closed_form(s, r.times[k])));
        entry["closed_form_prob_at_tau"] = electric_ab_closed_form(s, s.tau);
        entry["max_prob_deviation"] = gap;
      });
  out.summary["delta_phi"] = s.delta_phi();
  return out;
}

Output run_magnetic(const RunConfig& c) {
  const MagneticScenario& s = c.magnetic;
  Output out = run_interference(
      c, [&](Formalism f) { return simulate_magnetic_ring(s, f, c.sampling); }, [](json&, const ScenarioResult&) {});
  out.summary["vector_potential"] = s.vector_potential();
  out.summary["mode_index"] = s.mode_index();
  return out;
}

// Closed-form Wigner function of the freely evolved Gaussian packet.
double free_wigner(const FreeScenario& f, const PhysicalConstants& k, double q, double p, double t) {
  const double x = q - p * t / k.mass - f.packet_center, y = p - f.momentum;
  const double w = f.packet_width;
  return std::exp(-x * x / (w * w) - w * w * y * y / (k.hbar * k.hbar)) / (kPi * k.hbar);
}

Output run_free(const RunConfig& c) {
  const FreeScenario& f = c.free;
  const PhaseGrid grid = PhaseGrid::line(-f.box_half_width, f.box_half_width, f.grid_points, c.consts.hbar);
  const WaveFunction psi0 = make_gaussian_packet(grid, f.packet_center, f.momentum, f.packet_width, c.consts);
  const HamiltonianSpec h = HamiltonianSpec::free_particle(c.consts.mass);
  std::vector<double> times(f.samples + 1);
  for (std::size_t k = 0; k <= f.samples; ++k) times[k] = f.t_final * static_cast<double>(k) / static_cast<double>(f.samples);

  Output out;
  out.summary["scenario"] = "free";
  bool primary = true;
  for (Formalism form : c.formalisms()) {
    ScenarioResult r;
    r.formalism = form;
    json entry;
    if (form == Formalism::Wigner) {
      const WignerField w0 = wigner_from_position(psi0);
      const CrossWignerField as_field{w0.grid, std::vector<cplx>(w0.values.begin(), w0.values.end())};
      const double bound = stability_bound(as_field, h, h);
      const EvolutionOptions opts{std::isfinite(bound) ? 0.5 * bound : 1.0, true};
      double shear = 0.0, trace = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        const WignerField w = evolve_wigner(w0, h, times[k], opts);
        for (std::size_t j = 0; j < grid.n_q(); ++j)
          for (std::size_t i = 0; i < grid.n_p(); ++i)
            shear = std::max(shear, std::abs(w.at(j, i) - free_wigner(f, c.consts, grid.q(j), grid.p(i), times[k])));
        trace = std::max(trace, std::abs(w.integral() - 1.0));
        r.times.push_back(times[k]);
        r.probability.push_back(w.integral());
        // A diagonal Wigner function carries no global phase.
        r.phase.push_back(0.0);
        if (c.sampling.frame_stride > 0 && k % c.sampling.frame_stride == 0)
          r.frames.push_back({k, times[k], grid.q_axis(), marginal_position(w), std::vector<double>(grid.n_q(), 0.0)});
      }
      entry = {{"shear_error", shear}, {"trace_error", trace}};
    } else {
      const SbScaling units{c.consts.hbar, c.consts.mass, c.consts.hbar / (c.consts.mass * f.packet_width * f.packet_width)};
      const SBFunction phi0 = sb_transform(psi0, units, f.sb_truncation);
      const SbPropagator prop(sb_hamiltonian(h, units, f.sb_truncation));
      double norm = 0.0, drift = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        const SBFunction phi = prop.advance(phi0, times[k]);
        phi.require_admitted();
        const WaveFunction psi = sb_inverse(phi, grid, units);
        const double classical = f.packet_center + f.momentum * times[k] / c.consts.mass;
        norm = std::max(norm, std::abs(phi.norm_squared() - 1.0));
        drift = std::max(drift, std::abs(expectation_position(psi) - classical));
        r.times.push_back(times[k]);
        r.probability.push_back(phi.norm_squared());
        r.phase.push_back(std::arg(sb_inner(phi0, phi)));
        if (c.sampling.frame_stride > 0 && k % c.sampling.frame_stride == 0) {
          Frame fr{k, times[k], grid.q_axis(), {}, {}};
          for (const cplx& v : psi.values) {
            fr.density.push_back(std::norm(v));
            fr.phase.push_back(std::arg(v));
          }
          r.frames.push_back(std::move(fr));
        }
      }
      entry = {{"norm_error", norm}, {"mean_position_error", drift}};
    }
    out.summary["formalisms"][to_string(form)] = entry;
    add_series(out, r, primary);
    primary = false;
  }
  return out;
}

double bumpy_potential(double x) { return 0.4 + 0.3 * std::sin(0.5 * x) + 0.1 * std::cos(0.8 * x); }

GaugeFunction random_gauge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c1 = u(rng), k = 0.8 * u(rng), w = 2.0 * u(rng), c2 = 0.3 * u(rng), c3 = u(rng);
  GaugeFunction g;
  g.value = [=](double x, double t) { return c1 * std::sin(k * x + w * t) + c2 * x * t + c3 * t * t; };
  g.d_x = [=](double x, double t) { return c1 * k * std::cos(k * x + w * t) + c2 * t; };
  g.d_t = [=](double x, double t) { return c1 * w * std::cos(k * x + w * t) + c2 * x + 2.0 * c3 * t; };
  return g;
}

// Ring gauge functions must wind a whole number of times: n x / R plus a
// periodic part.
GaugeFunction random_ring_gauge(std::mt19937_64& rng, double radius, double charge, double hbar) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> wind(-2, 2);
  const double slope = wind(rng) * hbar / (charge * radius), c1 = u(rng), w = 2.0 * u(rng);
  const int m = 1 + static_cast<int>(3.0 * std::abs(u(rng)));
  GaugeFunction g;
  g.value = [=](double x, double t) { return slope * x + c1 * std::sin(m * x / radius + w * t); };
  g.d_x = [=](double x, double t) { return slope + c1 * m / radius * std::cos(m * x / radius + w * t); };
  g.d_t = [=](double x, double t) { return c1 * w * std::cos(m * x / radius + w * t); };
  return g;
}

Output run_gauge_check(const RunConfig& c) {
  Output out;
  out.summary["scenario"] = "gauge-check";
  std::mt19937_64 rng(c.gauge.seed);
  double deviation = 0.0, residual = 0.0;
  const bool ring = c.gauge.base == ScenarioKind::Magnetic;
  for (std::size_t i = 0; i < c.gauge.count; ++i) {
    if (ring) {
      const GaugeFunction g = random_ring_gauge(rng, c.magnetic.ring_radius, c.consts.charge, c.consts.hbar);
      deviation = std::max(deviation, gauge_transform_check(c.magnetic, g, c.sampling));
    } else {
      const GaugeFunction g = random_gauge(rng);
      deviation = std::max(deviation, gauge_transform_check(c.electric, g, c.sampling));
      residual = std::max(residual, gauge_equation_residual(c.electric, g, 0.37 * c.electric.tau));
    }
  }

  const PhaseGrid line = PhaseGrid::line(-16.0, 16.0, 256, c.consts.hbar);
  GaugeWorldline w;
  w.x = {0.0, 1.0};
  w.t = {0.0, 0.0};
  w.vector_potential = bumpy_potential;
  w.scalar_potential = [](double) { return 0.0; };
  w.charge = c.consts.charge;
  const auto a = make_gaussian_packet(line, 0.5, 1.0, 1.0, c.consts);
  const auto b = make_gaussian_packet(line, -0.8, -0.5, 1.1, c.consts);
  const SbScaling units{c.consts.hbar, c.consts.mass, c.consts.omega};
  const json intertwining = {{"position", intertwining_residual(a, w)},
                             {"segal-bargmann", intertwining_residual(sb_transform(a, units), w, units)},
                             {"wigner", intertwining_residual(cross_wigner(a, b), w)}};

  const MagneticScenario& m = c.magnetic;
  GaugeWorldline loop;
  const std::size_t nodes = 257;
  for (std::size_t i = 0; i < nodes; ++i) loop.x.push_back(2.0 * kPi * m.ring_radius * static_cast<double>(i) / (nodes - 1));
  loop.t.assign(nodes, 0.0);
  loop.vector_potential = [&](double) { return m.vector_potential(); };
  loop.scalar_potential = [](double) { return 0.0; };
  loop.charge = c.consts.charge;
  const double flux_error =
      std::abs(gauge_phase(loop, c.consts.hbar) - c.consts.charge * kPi * m.solenoid_radius * m.solenoid_radius * m.field / c.consts.hbar);

  double worst_intertwining = 0.0;
  for (const auto& [k, v] : intertwining.items()) worst_intertwining = std::max(worst_intertwining, v.get<double>());
  out.summary["base"] = to_string(c.gauge.base);
  out.summary["gauge_count"] = c.gauge.count;
  out.summary["max_deviation"] = deviation;
  if (!ring) out.summary["equation_residual"] = residual;
  out.summary["intertwining"] = intertwining;
  out.summary["solenoid_flux_error"] = flux_error;
  out.checks_passed = deviation <= 1e-10 && residual <= 1e-6 && worst_intertwining <= 1e-8 && flux_error <= 1e-8;
  out.summary["passed"] = out.checks_passed;
  return out;
}

Output run_suite(const RunConfig& c) {
  Output out;
  out.summary["scenario"] = "property-suite";
  std::size_t passed = 0, failed = 0;
  json checks = json::array();
  for (const SuiteCheck& s : run_property_suite(c.gauge.seed)) {
    (s.passed ? passed : failed) += 1;
    checks.push_back({{"module", s.module}, {"name", s.name}, {"value", std::isfinite(s.value) ? json(s.value) : json(nullptr)},
                      {"tolerance", s.tolerance}, {"passed", s.passed}});
  }
  out.summary["passed"] = passed;
  out.summary["failed"] = failed;
  out.summary["checks"] = checks;
  out.checks_passed = failed == 0;
  return out;
}

Output compute(const RunConfig& c) {
  switch (c.kind) {
    case ScenarioKind::Free: return run_free(c);
    case ScenarioKind::Electric: return run_electric(c);
    case ScenarioKind::Magnetic: return run_magnetic(c);
    case ScenarioKind::GaugeCheck: return run_gauge_check(c);
    case ScenarioKind::PropertySuite: return run_suite(c);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scenario");
}

void write_outputs(const Output& o, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create output directory " + dir.string());
  for (const auto& [name, content] : o.files) csv::write_atomic(dir / name, content);
  csv::write_atomic(dir / "result.json", o.summary.dump(2) + "\n");
}

}  // namespace

RunReport run(const RunConfig& config, const std::filesystem::path& out) {
  RunReport report;
  try {
    const Output o = compute(config);
    write_outputs(o, out);
    report.summary = o.summary;
    report.exit_code = o.checks_passed ? kExitOk : kExitChecksFailed;
  } catch (const Error& e) {
    report.exit_code = exit_status(e.code());
    report.message = e.what();
  }
  return report;
}

RunReport sweep(const std::string& config_text, const std::string& field, const std::vector<double>& values,
                const std::filesystem::path& out) {
  RunReport report;
  try {
    if (values.empty()) invalid("values", "must list at least one value");
    if (field == "scenario" || field == "base") invalid(field, "cannot be swept");
    json doc = parse_json(config_text);
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "line 1: configuration must be a JSON object");
    std::vector<RunConfig> configs;
    for (double v : values) {
      doc[field] = v;
      configs.push_back(parse_config(doc.dump()));
    }
    std::string table = "value,formalism,prob_at_tau,extracted_phase,closed_form_phase,deviation\n";
    json runs = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const RunReport one = run(configs[i], out / (field + "_" + std::to_string(i)));
      if (one.exit_code != kExitOk) return one;
      runs.push_back({{"value", values[i]}, {"result", one.summary}});
      if (!one.summary.contains("formalisms")) continue;
      for (const auto& [name, entry] : one.summary["formalisms"].items()) {
        if (!entry.contains("extracted_phase")) continue;
        table += csv::number(values[i]) + "," + name + "," + csv::number(entry["prob_at_tau"].get<double>()) + "," +
                 csv::number(entry["extracted_phase"].get<double>()) + "," +
                 csv::number(entry["closed_form_phase"].get<double>()) + "," +
                 csv::number(entry["deviation"].get<double>()) + "\n";
      }
    }
    csv::write_atomic(out / "sweep.csv", table);
    report.summary = {{"field", field}, {"runs", runs}};
  } catch (const Error& e) {
    report.exit_code = exit_status(e.code());
    report.message = e.what();
  }
  return report;
}

}  // namespace phasespace
