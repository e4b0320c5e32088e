#include "crossroads/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace crossroads {

using nlohmann::json;

namespace {

std::string join_offenses(const std::vector<std::string>& offenses) {
  std::ostringstream os;
  os << "invalid configuration (" << offenses.size() << " problem" << (offenses.size() == 1 ? "" : "s")
     << ")";
  for (const auto& o : offenses) os << "\n  - " << o;
  return os.str();
}

InteractionParams test1_params() {
  InteractionParams p;
  p.eta = PairTable::symmetric(1.0, 35.0);
  p.cap = PairTable::symmetric(15.0, 50.0);
  p.radius = PairTable::symmetric(10.0, 20.0);
  p.gamma = 1.0;
  return p;
}

InteractionParams test2_params() {
  InteractionParams p;
  p.eta = PairTable::symmetric(7.0, 27.0);
  p.cap = PairTable::symmetric(20.0, 40.0);
  p.radius = PairTable::symmetric(5.0, 10.0);
  p.gamma = 1.0;
  return p;
}

constexpr Rect kJunctionNeighbourhood{{80.0, 120.0}, {80.0, 120.0}};

// Collects problems while walking a JSON object; every accessor records the
// key as known so leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& offenses)
      : obj_(obj), path_(std::move(path)), offenses_(offenses) {
    if (!obj_.is_object()) offense(path_.empty() ? "top level must be an object" : path_ + " must be an object");
  }

  bool ok() const noexcept { return obj_.is_object(); }
  bool has(const std::string& key) {
    known_.insert(key);
    return ok() && obj_.contains(key);
  }
  const json* get(const std::string& key, bool required) {
    if (has(key)) return &obj_.at(key);
    if (required && ok()) offense("missing required field " + name(key));
    return nullptr;
  }

  double number(const std::string& key, bool required, double fallback) {
    const json* v = get(key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      offense(name(key) + " must be a number");
      return fallback;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) offense(name(key) + " must be finite");
    return d;
  }

  std::uint64_t unsigned_integer(const std::string& key, bool required, std::uint64_t fallback) {
    const json* v = get(key, required);
    if (!v) return fallback;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      offense(name(key) + " must be a non-negative integer");
      return fallback;
    }
    return v->get<std::uint64_t>();
  }

  std::string string(const std::string& key, bool required, std::string fallback) {
    const json* v = get(key, required);
    if (!v) return fallback;
    if (!v->is_string()) {
      offense(name(key) + " must be a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  Interval interval_value(const json& v, const std::string& label, Interval fallback) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      offense(label + " must be a [lo, hi] pair of numbers");
      return fallback;
    }
    return Interval{v[0].get<double>(), v[1].get<double>()};
  }

  Interval interval(const std::string& key, bool required, Interval fallback) {
    const json* v = get(key, required);
    return v ? interval_value(*v, name(key), fallback) : fallback;
  }

  PairTable table(const std::string& key, bool required, PairTable fallback) {
    const json* v = get(key, required);
    if (!v) return fallback;
    const bool shape = v->is_array() && v->size() == 2 && (*v)[0].is_array() && (*v)[1].is_array() &&
                       (*v)[0].size() == 2 && (*v)[1].size() == 2;
    if (!shape) {
      offense(name(key) + " must be a 2x2 array of numbers");
      return fallback;
    }
    PairTable t;
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        if (!(*v)[i][k].is_number()) {
          offense(name(key) + " must be a 2x2 array of numbers");
          return fallback;
        }
        t.v[i][k] = (*v)[i][k].get<double>();
      }
    }
    return t;
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void offense(std::string what) { offenses_.push_back(std::move(what)); }

  void reject_unknown() {
    if (!ok()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!known_.contains(key)) offense("unknown key " + name(key));
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& offenses_;
  std::set<std::string> known_;
};

void check_positive(double v, const std::string& label, std::vector<std::string>& offenses) {
  if (!(v > 0.0) || !std::isfinite(v)) offenses.push_back(label + " must be positive, got " + json(v).dump());
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> offenses)
    : std::runtime_error(join_offenses(offenses)), offenses_(std::move(offenses)) {}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names{"test1-macro", "test1-multiscale", "test2-mixed",
                                              "test2-micro", "test2-macro"};
  return names;
}

ScenarioConfig builtin_scenario(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  c.domain = reference_domain();
  if (name == "test1-macro" || name == "test1-multiscale") {
    c.cells = 100;
    c.params = test1_params();
    c.theta = ThetaField::constant(name == "test1-macro" ? 0.0 : 0.7);
  } else if (name == "test2-mixed" || name == "test2-micro" || name == "test2-macro") {
    c.cells = 200;
    c.params = test2_params();
    if (name == "test2-mixed") {
      c.theta = ThetaField::indicator(kJunctionNeighbourhood);
    } else {
      c.theta = ThetaField::constant(name == "test2-micro" ? 1.0 : 0.0);
    }
  } else {
    std::string known;
    for (const auto& n : builtin_scenario_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError({"unknown scenario '" + std::string(name) + "' (known: " + known + ")"});
  }
  c.dt_max = 0.05;
  c.injection_period = 0.9;
  c.t_max = 60.0;
  c.totals = planned_totals(c.t_max, c.injection_period);
  return c;
}

void validate(const ScenarioConfig& c) {
  std::vector<std::string> bad;
  for (Population p : kPopulations) {
    const RoadSpec& road = c.domain.road(p);
    const std::string r = "road" + std::to_string(label_of(p));
    check_positive(road.length, r + " length", bad);
    check_positive(road.width(), r + " width", bad);
    check_positive(road.desired_velocity.norm(), r + " desired speed", bad);
    if (dot(road.desired_velocity, road.longitudinal_unit()) != road.desired_velocity.norm()) {
      bad.push_back(r + " desired velocity must point along the road");
    }
  }
  if (c.domain.junction.empty()) bad.push_back("roads do not intersect");
  if (c.cells < 2) bad.push_back("cells must be at least 2");
  for (Population p : kPopulations) {
    for (Population q : kPopulations) {
      const std::string at = "[" + std::to_string(label_of(p)) + "][" + std::to_string(label_of(q)) + "]";
      if (!(c.params.eta(p, q) >= 0.0) || !std::isfinite(c.params.eta(p, q))) {
        bad.push_back("interaction.eta" + at + " must be non-negative");
      }
      check_positive(c.params.cap(p, q), "interaction.cap" + at, bad);
      check_positive(c.params.radius(p, q), "interaction.radius" + at, bad);
    }
  }
  check_positive(c.params.gamma, "interaction.gamma", bad);
  if (const auto* k = std::get_if<ThetaField::Constant>(&c.theta.repr())) {
    if (!(k->value >= 0.0 && k->value <= 1.0)) bad.push_back("theta.value must lie in [0, 1]");
  } else if (std::get<ThetaField::Indicator>(c.theta.repr()).region.empty()) {
    bad.push_back("theta.region must be non-empty");
  }
  for (Population q : kPopulations) check_positive(c.totals(q), "totals", bad);
  if (c.quadrature.transverse_cells < 1) bad.push_back("quadrature.transverse_cells must be at least 1");
  check_positive(c.quadrature.longitudinal_divisor, "quadrature.longitudinal_divisor", bad);
  if (c.quadrature.refine_levels < 0 || c.quadrature.refine_levels > 20) {
    bad.push_back("quadrature.refine_levels must lie in [0, 20]");
  }
  if (c.quadrature.edge_refine_levels < 0 || c.quadrature.edge_refine_levels > 20) {
    bad.push_back("quadrature.edge_refine_levels must lie in [0, 20]");
  }
  check_positive(c.dt_max, "dt_max", bad);
  check_positive(c.injection_period, "injection_period", bad);
  if (!(c.t_max >= 0.0) || !std::isfinite(c.t_max)) bad.push_back("t_max must be non-negative");
  check_positive(c.snapshot_every, "snapshot_every", bad);
  check_positive(c.probe_every, "probe_every", bad);
  for (std::size_t i = 0; i < c.probes.size(); ++i) {
    const auto& pr = c.probes[i];
    const double len = c.domain.road(pr.road).length;
    if (!(pr.position >= 0.0 && pr.position <= len)) {
      bad.push_back("probes[" + std::to_string(i) + "].position must lie on the road");
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

json to_json(const ScenarioConfig& c) {
  auto table = [](const PairTable& t) {
    return json::array({json::array({t.v[0][0], t.v[0][1]}), json::array({t.v[1][0], t.v[1][1]})});
  };
  auto interval = [](Interval i) { return json::array({i.lo, i.hi}); };

  json theta;
  if (const auto* k = std::get_if<ThetaField::Constant>(&c.theta.repr())) {
    theta = {{"kind", "constant"}, {"value", k->value}};
  } else {
    const Rect& r = std::get<ThetaField::Indicator>(c.theta.repr()).region;
    theta = {{"kind", "indicator"}, {"region", json::array({interval(r.x1), interval(r.x2)})}};
  }
  json probes = json::array();
  for (const auto& p : c.probes) probes.push_back({{"road", label_of(p.road)}, {"position", p.position}});

  return json{
      {"name", c.name},
      {"domain",
       {{"length", c.domain.road1.length},
        {"road1_band", interval(c.domain.road1.band)},
        {"road2_band", interval(c.domain.road2.band)},
        {"desired_speed",
         json::array({c.domain.road1.desired_velocity.norm(), c.domain.road2.desired_velocity.norm()})}}},
      {"cells", c.cells},
      {"interaction",
       {{"eta", table(c.params.eta)},
        {"cap", table(c.params.cap)},
        {"radius", table(c.params.radius)},
        {"gamma", c.params.gamma}}},
      {"theta", theta},
      {"totals", json::array({c.totals.cars[0], c.totals.cars[1]})},
      {"quadrature",
       {{"transverse_cells", c.quadrature.transverse_cells},
        {"longitudinal_divisor", c.quadrature.longitudinal_divisor},
        {"refine_levels", c.quadrature.refine_levels},
        {"edge_refine_levels", c.quadrature.edge_refine_levels}}},
      {"dt_max", c.dt_max},
      {"injection_period", c.injection_period},
      {"t_max", c.t_max},
      {"seed", c.seed},
      {"snapshot_every", c.snapshot_every},
      {"probe_every", c.probe_every},
      {"probes", probes},
  };
}

ScenarioConfig config_from_json(const json& j) {
  std::vector<std::string> bad;
  ScenarioConfig c;
  Reader top(j, "", bad);
  if (!top.ok()) throw ConfigError(std::move(bad));

  c.name = top.string("name", false, "custom");

  double length = 200.0;
  Interval band1{95.0, 105.0}, band2{95.0, 105.0};
  double speed1 = 10.0, speed2 = 10.0;
  if (const json* d = top.get("domain", false)) {
    Reader dom(*d, "domain", bad);
    if (dom.ok()) {
      length = dom.number("length", false, length);
      band1 = dom.interval("road1_band", false, band1);
      band2 = dom.interval("road2_band", false, band2);
      if (const json* s = dom.get("desired_speed", false)) {
        if (s->is_array() && s->size() == 2 && (*s)[0].is_number() && (*s)[1].is_number()) {
          speed1 = (*s)[0].get<double>();
          speed2 = (*s)[1].get<double>();
        } else {
          bad.push_back("domain.desired_speed must be a pair of numbers");
        }
      }
      dom.reject_unknown();
    }
  }
  try {
    c.domain = make_domain(length, band1, band2, speed1, speed2);
  } catch (const std::invalid_argument& e) {
    bad.push_back(std::string("domain: ") + e.what());
  }

  const std::uint64_t cells = top.unsigned_integer("cells", true, 100);
  c.cells = static_cast<std::size_t>(cells);

  if (const json* in = top.get("interaction", true)) {
    Reader r(*in, "interaction", bad);
    if (r.ok()) {
      c.params.eta = r.table("eta", true, {});
      c.params.cap = r.table("cap", true, {});
      c.params.radius = r.table("radius", true, {});
      c.params.gamma = r.number("gamma", false, 1.0);
      r.reject_unknown();
    }
  }

  if (const json* th = top.get("theta", true)) {
    Reader r(*th, "theta", bad);
    if (r.ok()) {
      const std::string kind = r.string("kind", true, "");
      if (kind == "constant") {
        const double v = r.number("value", true, 0.0);
        if (v >= 0.0 && v <= 1.0) {
          c.theta = ThetaField::constant(v);
        } else {
          bad.push_back("theta.value must lie in [0, 1], got " + json(v).dump());
        }
      } else if (kind == "indicator") {
        const json* reg = r.get("region", true);
        if (reg) {
          if (reg->is_array() && reg->size() == 2) {
            const Rect rect{r.interval_value((*reg)[0], "theta.region[0]", Interval{}),
                            r.interval_value((*reg)[1], "theta.region[1]", Interval{})};
            c.theta = ThetaField::indicator(rect);
          } else {
            bad.push_back("theta.region must be [[x1lo, x1hi], [x2lo, x2hi]]");
          }
        }
      } else if (!kind.empty()) {
        bad.push_back("theta.kind must be 'constant' or 'indicator', got '" + kind + "'");
      }
      r.reject_unknown();
    }
  }

  if (const json* q = top.get("quadrature", false)) {
    Reader r(*q, "quadrature", bad);
    if (r.ok()) {
      c.quadrature.transverse_cells =
          static_cast<int>(r.unsigned_integer("transverse_cells", false, 5));
      c.quadrature.longitudinal_divisor = r.number("longitudinal_divisor", false, 10.0);
      c.quadrature.refine_levels = static_cast<int>(r.unsigned_integer("refine_levels", false, 6));
      c.quadrature.edge_refine_levels =
          static_cast<int>(r.unsigned_integer("edge_refine_levels", false, 2));
      r.reject_unknown();
    }
  }

  c.dt_max = top.number("dt_max", false, 0.05);
  c.injection_period = top.number("injection_period", false, 0.9);
  c.t_max = top.number("t_max", false, 60.0);
  c.seed = top.unsigned_integer("seed", false, 1);
  c.snapshot_every = top.number("snapshot_every", false, 1.0);
  c.probe_every = top.number("probe_every", false, 0.1);

  if (const json* t = top.get("totals", false)) {
    if (t->is_array() && t->size() == 2 && (*t)[0].is_number() && (*t)[1].is_number()) {
      c.totals = PopulationTotals{{(*t)[0].get<double>(), (*t)[1].get<double>()}};
    } else {
      bad.push_back("totals must be a pair of numbers");
    }
  } else if (c.injection_period > 0.0) {
    c.totals = planned_totals(c.t_max, c.injection_period);
  }

  if (const json* ps = top.get("probes", false)) {
    if (!ps->is_array()) {
      bad.push_back("probes must be an array");
    } else {
      c.probes.clear();
      for (std::size_t i = 0; i < ps->size(); ++i) {
        Reader r((*ps)[i], "probes[" + std::to_string(i) + "]", bad);
        if (!r.ok()) continue;
        const auto road = r.unsigned_integer("road", true, 2);
        const double pos = r.number("position", true, 0.0);
        r.reject_unknown();
        if (road == 1 || road == 2) {
          c.probes.push_back(Probe{population_from_label(static_cast<int>(road)), pos});
        } else {
          bad.push_back("probes[" + std::to_string(i) + "].road must be 1 or 2");
        }
      }
    }
  }

  top.reject_unknown();
  try {
    validate(c);
  } catch (const ConfigError& e) {
    bad.insert(bad.end(), e.offenses().begin(), e.offenses().end());
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return c;
}

ScenarioConfig parse_config(const std::string& name_or_path) {
  for (const auto& n : builtin_scenario_names()) {
    if (n == name_or_path) return builtin_scenario(n);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError({"'" + name_or_path + "' is neither a built-in scenario nor a readable file"});
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({name_or_path + ": " + e.what()});
  }
  return config_from_json(j);
}

}  // namespace crossroads
