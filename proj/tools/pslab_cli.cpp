#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "pslab/conformal.hpp"
#include "pslab/fixtures.hpp"
#include "pslab/io.hpp"
#include "pslab/typea.hpp"

using namespace pslab;
using io::json;
namespace fs = std::filesystem;

namespace {

struct ExperimentConfig {
  std::string fixture = "schottky2";
  int d = 0;  // 0 = fixture dimension
  std::string theta;  // empty = fixture default
  int L = 8;
  std::string psi;  // empty = fixture default
  double radius = 1.0;
  std::uint64_t seed = 1;
  std::string out = "pslab-out";
  // command specific knobs
  double s = 0;  // 0 = critical estimate + offset
  double s_offset = 0.05;
  double N = 3.0;
  double T = 4.0;
  double D = 1.0;
  double m = 0.0;
  double cutoff = 0;  // 0 = L/2 times the largest generator norm
  double scale = 1.0;
  int samples = 20;
  int directions = 9;
  std::string subgroup = "1";
  std::string placement = "base_orbit";

  json to_json() const {
    return {{"fixture", fixture}, {"d", d},           {"theta", theta},       {"L", L},
            {"psi", psi},         {"radius", radius}, {"seed", seed},         {"s", s},
            {"s_offset", s_offset}, {"N", N},         {"T", T},               {"D", D},
            {"m", m},             {"cutoff", cutoff}, {"scale", scale},       {"samples", samples},
            {"directions", directions}, {"subgroup", subgroup}, {"placement", placement}};
  }

  // Keys of the config file win over flags. The output directory is not part of the hash.
  void apply(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "fixture") fixture = v.get<std::string>();
      else if (k == "d") d = v.get<int>();
      else if (k == "theta") theta = v.is_string() ? v.get<std::string>() : join(v.get<std::vector<int>>());
      else if (k == "L") L = v.get<int>();
      else if (k == "psi") psi = v.is_string() ? v.get<std::string>() : join(v.get<std::vector<double>>());
      else if (k == "radius") radius = v.get<double>();
      else if (k == "seed") seed = v.get<std::uint64_t>();
      else if (k == "out") out = v.get<std::string>();
      else if (k == "s") s = v.get<double>();
      else if (k == "s_offset") s_offset = v.get<double>();
      else if (k == "N") N = v.get<double>();
      else if (k == "T") T = v.get<double>();
      else if (k == "D") D = v.get<double>();
      else if (k == "m") m = v.get<double>();
      else if (k == "cutoff") cutoff = v.get<double>();
      else if (k == "scale") scale = v.get<double>();
      else if (k == "samples") samples = v.get<int>();
      else if (k == "directions") directions = v.get<int>();
      else if (k == "subgroup") subgroup = v.get<std::string>();
      else if (k == "placement") placement = v.get<std::string>();
      else throw Error(ErrorKind::io, "unknown config key '" + k + "'");
    }
  }

  template <class T>
  static std::string join(const std::vector<T>& v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
    return ss.str();
  }
};

struct Context {
  ExperimentConfig cfg;
  Fixture fx;
  ThetaSet theta;
  LinearForm psi;
};

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(io::parse_double(item));
  return out;
}

// Words like "1,-2,1" separated by ';'.
std::vector<Word> parse_words(const std::string& text) {
  std::vector<Word> out;
  std::stringstream ss(text);
  std::string w;
  while (std::getline(ss, w, ';')) {
    Word word;
    for (double x : parse_numbers(w)) word.push_back(static_cast<int>(x));
    out.push_back(word);
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  if (c.L < 0 || c.L > 40) throw Error(ErrorKind::precondition, "L must lie in [0, 40]");
  if (!(c.radius > 0)) throw Error(ErrorKind::precondition, "radius must be positive");
  if (!(c.N > 0)) throw Error(ErrorKind::precondition, "N must be positive");
  if (!(c.scale > 0)) throw Error(ErrorKind::precondition, "scale must be positive");
  if (c.samples < 1 || c.directions < 1) throw Error(ErrorKind::precondition, "samples and directions must be positive");
  if (c.placement != "attractor" && c.placement != "base_orbit")
    throw Error(ErrorKind::precondition, "placement is attractor or base_orbit");
}

Context make_context(const ExperimentConfig& cfg, bool needs_fixture) {
  validate(cfg);
  Context ctx;
  ctx.cfg = cfg;
  if (!needs_fixture) return ctx;
  ctx.fx = load_fixture(cfg.fixture);
  int d = ctx.fx.gens.d();
  if (cfg.d != 0 && cfg.d != d)
    throw Error(ErrorKind::signature, "--d " + std::to_string(cfg.d) + " differs from the fixture dimension " +
                                          std::to_string(d));
  ctx.theta = cfg.theta.empty() ? ctx.fx.theta : ThetaSet::parse(d, cfg.theta);
  if (!cfg.psi.empty()) {
    auto c = parse_numbers(cfg.psi);
    ctx.psi = LinearForm(ctx.theta, Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size())));
  } else if (ctx.theta == ctx.fx.theta) {
    ctx.psi = ctx.fx.psi;
  } else {
    ctx.psi = rho_form(d, ctx.theta);
  }
  if (cfg.scale != 1.0) ctx.psi = ctx.psi.scaled(cfg.scale);
  return ctx;
}

struct Output {
  std::string name;
  std::string content;
};

void emit(const Context& ctx, const std::string& command, const std::vector<Output>& files) {
  fs::create_directories(ctx.cfg.out);
  for (const auto& f : files) io::write_text((fs::path(ctx.cfg.out) / f.name).string(), f.content);
  json manifest = io::run_manifest(command, ctx.cfg.to_json(), ctx.cfg.seed);
  json names = json::array();
  for (const auto& f : files) names.push_back(f.name);
  manifest["files"] = names;
  io::write_text((fs::path(ctx.cfg.out) / (command + ".manifest.json")).string(), manifest.dump(2) + "\n");
  for (const auto& f : files) std::cout << (fs::path(ctx.cfg.out) / f.name).string() << "\n";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> cartan_header(const std::string& prefix, int d) {
  std::vector<std::string> h;
  for (int i = 1; i <= d; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

double exponent_s(const Context& ctx, const OrbitBall& ball) {
  if (ctx.cfg.s > 0) return ctx.cfg.s;
  return critical_exponent(ball, ctx.psi).value + ctx.cfg.s_offset;
}

PattersonOptions patterson_options(const Context& ctx) {
  PattersonOptions po;
  po.placement = ctx.cfg.placement == "attractor" ? AtomPlacement::attractor : AtomPlacement::base_orbit;
  po.seed = ctx.cfg.seed;
  return po;
}

json estimate_json(const ExponentEstimate& e) {
  return {{"value", e.value},       {"ci_low", e.ci_low},       {"ci_high", e.ci_high},
          {"t_low", e.t_low},       {"t_high", e.t_high},       {"length_low", e.length_low},
          {"length_high", e.length_high}, {"points", e.points}, {"polynomial", e.polynomial}};
}

// ---- subcommands

std::vector<Output> cmd_enumerate(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  io::CsvTable t({"length", "count"});
  for (int n = 0; n <= ball.max_length(); ++n)
    t.add_row({std::to_string(n), std::to_string(ball.length_end(n) - ball.length_begin(n))});
  json j = {{"schema_version", io::kSchemaVersion}, {"fixture", ctx.fx.name}, {"d", ball.d()},
            {"L", ball.max_length()}, {"elements", ball.size()}, {"partial", ball.partial()}};
  return {{"enumerate.csv", t.str()}, {"enumerate.json", dump(j)}};
}

std::vector<Output> cmd_cartan_spectrum(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  const int d = ball.d();
  auto header = std::vector<std::string>{"word", "length"};
  for (auto& h : cartan_header("mu", d)) header.push_back(h);
  for (auto& h : cartan_header("mu_theta", d)) header.push_back(h);
  header.push_back("psi");
  io::CsvTable t(header);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    std::vector<std::string> row{ball.word_string(i), std::to_string(ball.length(i))};
    for (int k = 0; k < d; ++k) row.push_back(io::format_double(ball.mu(i)[k]));
    CartanVector mt = ball.mu_theta(i, ctx.theta);
    for (int k = 0; k < d; ++k) row.push_back(io::format_double(mt[k]));
    row.push_back(io::format_double(ctx.psi(mt)));
    t.add_row(std::move(row));
  }
  return {{"cartan_spectrum.csv", t.str()}};
}

LimitConeEstimate cone_of(const Context& ctx, const OrbitBall& ball) {
  double cutoff = ctx.cfg.cutoff;
  if (cutoff <= 0) {
    double top = 0;
    for (int k = 0; k < ctx.fx.gens.rank(); ++k) top = std::max(top, cartan_projection(ctx.fx.gens.gen(k)).norm());
    cutoff = 0.5 * ball.max_length() * top;
  }
  return limit_cone(ball, ctx.theta, cutoff);
}

std::vector<Output> cmd_limit_cone(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  LimitConeEstimate c = cone_of(ctx, ball);
  json rays = json::array();
  for (const Vec& r : c.extreme_rays) rays.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  json j = {{"schema_version", io::kSchemaVersion}, {"theta", c.theta.indices()},
            {"extreme_rays", rays},                  {"samples", c.sample_directions.size()},
            {"bounded_distance", c.bounded_distance}, {"hausdorff_slack", c.hausdorff_slack},
            {"angular_width", c.angular_width},      {"dimension", c.dimension},
            {"exact_hull", c.exact_hull}};
  return {{"limit_cone.json", dump(j)}};
}

std::vector<Output> cmd_poincare(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  ExponentEstimate e = critical_exponent(ball, ctx.psi);
  io::CsvTable t({"s", "partial_sum"});
  double hi = std::max(2.0 * e.value, 1.0);
  for (int k = 0; k <= ctx.cfg.samples; ++k) {
    double s = hi * k / ctx.cfg.samples;
    t.add_row({io::format_double(s), io::format_double(poincare_partial_sum(ball, ctx.psi, s))});
  }
  return {{"poincare.csv", t.str()}};
}

std::vector<Output> cmd_exponent(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  ExponentOptions eo;
  eo.seed = ctx.cfg.seed;
  ExponentEstimate e = critical_exponent(ball, ctx.psi, eo);
  double bis = critical_exponent_bisection(ball, ctx.psi, eo);
  io::CsvTable t({"value", "ci_low", "ci_high", "t_low", "t_high", "points", "polynomial", "bisection"});
  t.add_row({io::format_double(e.value), io::format_double(e.ci_low), io::format_double(e.ci_high),
             io::format_double(e.t_low), io::format_double(e.t_high), std::to_string(e.points),
             e.polynomial ? "1" : "0", io::format_double(bis)});
  return {{"exponent.csv", t.str()}};
}

std::vector<Output> cmd_indicator(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  auto dirs = cone_directions(cone_of(ctx, ball), ctx.cfg.directions);
  IndicatorOptions o;
  o.exponent.seed = ctx.cfg.seed;
  IndicatorGrid g = growth_indicator(ball, ctx.theta, dirs, o);
  TangencyReport tr = tangency_check(ball, ctx.psi, g, o.exponent);
  json j = {{"schema_version", io::kSchemaVersion}, {"delta", estimate_json(tr.delta)}, {"tangency_pass", tr.pass},
            {"violations", tr.violations},          {"margin", tr.margin},               {"contact_index", tr.contact_index},
            {"contact_ratio", tr.contact_ratio}};
  return {{"indicator.csv", io::indicator_csv(g).str()}, {"tangency.json", dump(j)}};
}

std::vector<Output> cmd_shadows(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  Rng rng(ctx.cfg.seed);
  PartialFlag xi = PartialFlag::random(ctx.theta, rng);
  json rows = json::array();
  io::CsvTable t({"gamma_word", "radius", "d_min", "member"});
  for (std::size_t i = ball.length_begin(ball.max_length()); i < ball.length_end(ball.max_length()); ++i) {
    ShadowSpec spec(GroupElement::identity(ball.d()), ball.element(i), ctx.cfg.radius, ctx.theta);
    ShadowResult r = shadow_contains(xi, spec);
    rows.push_back(io::shadow_report_json(ball.word_string(i), ctx.cfg.radius, r));
    t.add_row({ball.word_string(i), io::format_double(ctx.cfg.radius), io::format_double(r.d_min), r.member ? "1" : "0"});
  }
  return {{"shadows.csv", t.str()}, {"shadows.json", dump({{"schema_version", io::kSchemaVersion}, {"shadows", rows}})}};
}

std::vector<Output> cmd_multiplicity(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  MultiplicityOptions mo;
  mo.seed = ctx.cfg.seed;
  MultiplicityReport r = shadow_multiplicity(ball, ctx.cfg.radius, ctx.psi, ctx.cfg.T, ctx.cfg.D, mo);
  json j = {{"schema_version", io::kSchemaVersion}, {"T", ctx.cfg.T}, {"D", ctx.cfg.D}, {"radius", ctx.cfg.radius},
            {"max_count", r.max_count}, {"window_size", r.window_size}, {"flags_tested", r.flags_tested},
            {"witness_words", r.witness_words}};
  return {{"multiplicity.json", dump(j)}};
}

std::vector<Output> cmd_patterson(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  AtomicMeasure nu = patterson_measure(ball, ctx.psi, exponent_s(ctx, ball), patterson_options(ctx));
  json j = io::measure_json(nu, &ball);
  j["warning"] = nu.warning();
  return {{"patterson.json", dump(j)}};
}

std::vector<Output> cmd_shadow_lemma(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  AtomicMeasure nu = patterson_measure(ball, ctx.psi, exponent_s(ctx, ball), patterson_options(ctx));
  ShadowLemmaReport r = shadow_lemma_check(nu, ball, ctx.cfg.radius);
  io::CsvTable t({"gamma_word", "mass", "ratio"});
  for (std::size_t k = 0; k < r.elements.size(); ++k)
    t.add_row({ball.word_string(r.elements[k]), io::format_double(r.mass[k]), io::format_double(r.ratio[k])});
  json j = {{"schema_version", io::kSchemaVersion}, {"s", nu.s()},       {"tier", r.tier},
            {"min_ratio", r.min_ratio},             {"max_ratio", r.max_ratio}, {"band", r.band},
            {"empty_shadows", r.empty_shadows},     {"pass", r.pass}};
  return {{"shadow_lemma.csv", t.str()}, {"shadow_lemma.json", dump(j)}};
}

std::vector<Output> cmd_conical_mass(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  AtomicMeasure nu = patterson_measure(ball, ctx.psi, exponent_s(ctx, ball), patterson_options(ctx));
  ConicalMassReport r = conical_mass_estimate(nu, ball, ctx.cfg.N);
  io::CsvTable t({"window_low", "fraction"});
  for (std::size_t k = 0; k < r.trend_low.size(); ++k)
    t.add_row({std::to_string(r.trend_low[k]), io::format_double(r.trend_fraction[k])});
  json j = {{"schema_version", io::kSchemaVersion}, {"s", nu.s()},       {"N", ctx.cfg.N},
            {"fraction", r.fraction},               {"window_low", r.window_low}, {"window_high", r.window_high},
            {"atoms_inside", r.atoms_inside},       {"tests", r.tests}};
  return {{"conical_mass.csv", t.str()}, {"conical_mass.json", dump(j)}};
}

std::vector<Output> cmd_bms(const Context& ctx) {
  Rng rng(ctx.cfg.seed);
  const ThetaSet& th = ctx.psi.theta();
  io::CsvTable t({"sample", "exponent", "levi_spread"});
  for (int k = 0; k < ctx.cfg.samples; ++k) {
    PartialFlag xi = PartialFlag::random(th, rng);
    PartialFlag eta = PartialFlag::random(th.iota(), rng);
    GroupElement g = transverse_pair_element(xi, eta);
    double base = bms_exponent_of(g, ctx.psi);
    double spread = 0;
    for (int q = 0; q < 5; ++q)
      spread = std::max(spread, std::abs(bms_exponent_of(g * random_levi(th, rng), ctx.psi) - base));
    t.add_row({std::to_string(k), io::format_double(base), io::format_double(spread)});
  }
  return {{"bms.csv", t.str()}};
}

std::vector<Output> cmd_hopf_properness(const Context& ctx) {
  OrbitBall ball = enumerate_ball(ctx.fx.gens, ctx.cfg.L);
  const GroupElement& a = ctx.fx.gens.gen(0);
  HopfPoint x(attractor_flag(a, ctx.theta), attractor_flag(a.inverse(), ctx.theta.iota()), CartanVector::zero(ball.d()));
  PropernessReport r = properness_probe(ball, x, ctx.psi, ctx.cfg.m);
  io::CsvTable t({"length", "min_abs_phi", "count"});
  for (std::size_t k = 0; k < r.lengths.size(); ++k)
    t.add_row({std::to_string(r.lengths[k]), io::format_double(r.minima[k]), std::to_string(r.counts[k])});
  json j = {{"schema_version", io::kSchemaVersion}, {"m", ctx.cfg.m}, {"passed", r.passed},
            {"increasing_top_half", r.increasing_top_half}};
  return {{"hopf_properness.csv", t.str()}, {"hopf_properness.json", dump(j)}};
}

std::vector<Output> cmd_typea_bounds(const Context& ctx) {
  if (ctx.cfg.d < 2 || ctx.cfg.d > 8) throw Error(ErrorKind::precondition, "typea-bounds needs --d in [2, 8]");
  const int d = ctx.cfg.d;
  io::CsvTable t({"d", "i", "quint", "hitchin", "hitchin_brute_gap"});
  for (int i = 1; i < d; ++i) {
    QuintBound q = quint_alpha_bound_detail(d, i);
    HitchinBound h = hitchin_bound_detail(d, i);
    t.add_row({std::to_string(d), std::to_string(i), io::format_double(q.value), io::format_double(h.value),
               io::format_double(h.gap)});
  }
  return {{"typea_bounds.csv", t.str()}};
}

std::vector<Output> cmd_entropy_drop(const Context& ctx) {
  ExponentOptions eo;
  eo.seed = ctx.cfg.seed;
  EntropyDropReport r = entropy_drop_experiment(ctx.fx.gens, parse_words(ctx.cfg.subgroup), ctx.psi, ctx.cfg.L, eo);
  json j = {{"schema_version", io::kSchemaVersion}, {"group", estimate_json(r.group)},
            {"subgroup", estimate_json(r.subgroup)}, {"gap", r.gap}, {"gap_beyond_ci", r.gap_beyond_ci}};
  return {{"entropy_drop.json", dump(j)}};
}

struct Command {
  const char* name;
  const char* help;
  std::vector<Output> (*run)(const Context&);
  bool needs_fixture;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> c = {
      {"enumerate", "enumerate the orbit ball and count elements by length", cmd_enumerate, true},
      {"cartan-spectrum", "Cartan projections of every ball element", cmd_cartan_spectrum, true},
      {"limit-cone", "limit cone estimate in a_theta", cmd_limit_cone, true},
      {"poincare", "partial Poincare sums on a grid of s", cmd_poincare, true},
      {"exponent", "critical exponent estimate with bootstrap interval", cmd_exponent, true},
      {"indicator", "growth indicator grid and tangency check", cmd_indicator, true},
      {"shadows", "membership of a random flag in the top-length shadows", cmd_shadows, true},
      {"multiplicity", "shadow multiplicity over the window [T, T+D]", cmd_multiplicity, true},
      {"patterson", "atomic Patterson measure", cmd_patterson, true},
      {"shadow-lemma", "shadow lemma ratios on the mid-length tier", cmd_shadow_lemma, true},
      {"conical-mass", "mass of the N-shadow union over the top window", cmd_conical_mass, true},
      {"bms", "BMS exponent on random transverse pairs and its Levi spread", cmd_bms, true},
      {"hopf-properness", "bucketed minima of the Busemann translation", cmd_hopf_properness, true},
      {"typea-bounds", "type A constants for --d", cmd_typea_bounds, false},
      {"entropy-drop", "exponent of a subgroup against the whole group", cmd_entropy_drop, true},
  };
  return c;
}

void print_error(const std::string& kind, const std::string& message) {
  json j = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on discrete subgroups of SL(d, R)"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string config_path;
  app.add_option("--fixture", cfg.fixture, "builtin fixture name or fixture file");
  app.add_option("--d", cfg.d, "dimension");
  app.add_option("--theta", cfg.theta, "simple roots, e.g. 1,2");
  app.add_option("--L", cfg.L, "word length");
  app.add_option("--psi", cfg.psi, "form coefficients c1,c2,...");
  app.add_option("--radius", cfg.radius, "shadow radius");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--config", config_path, "JSON config; its keys override flags");
  app.add_option("--s", cfg.s, "exponent for measures (0 = estimate + offset)");
  app.add_option("--N", cfg.N, "shadow radius for conical mass");
  app.add_option("--T", cfg.T, "multiplicity window start");
  app.add_option("--D", cfg.D, "multiplicity window width");
  app.add_option("--m", cfg.m, "general position margin filter");
  app.add_option("--scale", cfg.scale, "multiply the form by this factor");
  app.add_option("--placement", cfg.placement, "atom placement: attractor or base_orbit");
  app.add_option("--subgroup", cfg.subgroup, "subgroup generators as words, e.g. '1;2,1'");
  app.add_option("--samples", cfg.samples, "sample count");
  app.add_option("--directions", cfg.directions, "indicator grid size");
  app.fallthrough();

  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands()) subs.emplace_back(app.add_subcommand(c.name, c.help), &c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (!config_path.empty()) cfg.apply(json::parse(io::read_text(config_path)));
    for (auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      Context ctx = make_context(cfg, cmd->needs_fixture);
      emit(ctx, cmd->name, cmd->run(ctx));
    }
  } catch (const Error& e) {
    print_error(kind_name(e.kind()), e.what());
    return 1;
  } catch (const json::exception& e) {
    print_error("io", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
