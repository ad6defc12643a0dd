#include "wsn/model.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace wsn {

namespace {

struct Layout {
  std::string_view prefix;
  std::string_view labels;
  bool sink_head;  // the 'j' slot may hold a sink
};

Layout kind_layout(VarKind k) {
  switch (k) {
    case VarKind::kX: return {"x", "ijtg", false};
    case VarKind::kY: return {"y", "it", false};
    case VarKind::kZ: return {"z", "lijtg", true};
    case VarKind::kW: return {"w", "it", false};
    case VarKind::kR: return {"r", "itg", false};
    case VarKind::kH: return {"h", "jtg", false};
    case VarKind::kE: return {"e", "i", false};
  }
  return {"?", "", false};
}

Layout family_layout(Family f) {
  switch (f) {
    case Family::C2: return {"C2", "jtg", false};
    case Family::C3: return {"C3", "ijtg", false};
    case Family::C4: return {"C4", "itg", false};
    case Family::C5: return {"C5", "ljtg", false};
    case Family::C6: return {"C6", "ltg", false};
    case Family::C7: return {"C7", "lijtg", true};
    case Family::C8: return {"C8", "lijtg", true};
    case Family::C9: return {"C9", "i", false};
    case Family::C10: return {"C10", "i", false};
    case Family::C11: return {"C11", "i", false};
    case Family::C12: return {"C12", "it", false};
    case Family::C13: return {"C13", "", false};
    case Family::kRoute: return {"ROUTE", "ltg", false};
  }
  return {"?", "", false};
}

constexpr VarKind kAllKinds[] = {VarKind::kX, VarKind::kY, VarKind::kZ, VarKind::kW,
                                 VarKind::kR, VarKind::kH, VarKind::kE};
constexpr Family kNameableFamilies[] = {Family::C2,  Family::C3,  Family::C4,  Family::C5,
                                        Family::C6,  Family::C7,  Family::C8,  Family::C9,
                                        Family::C10, Family::C11, Family::C12, Family::kRoute};

std::string encode(const Layout& layout, const std::array<int, 5>& idx) {
  std::string out(layout.prefix);
  for (std::size_t k = 0; k < layout.labels.size(); ++k) {
    const int v = idx[k];
    out += '_';
    if (layout.labels[k] == 'j' && layout.sink_head && is_sink_node(v)) {
      out += 'm';
      out += std::to_string(sink_of(v));
    } else {
      out += layout.labels[k];
      out += std::to_string(v);
    }
  }
  return out;
}

std::optional<std::array<int, 5>> decode(const Layout& layout, std::string_view name) {
  if (name.substr(0, layout.prefix.size()) != layout.prefix) return std::nullopt;
  std::string_view rest = name.substr(layout.prefix.size());
  std::array<int, 5> idx{};
  for (std::size_t k = 0; k < layout.labels.size(); ++k) {
    if (rest.size() < 3 || rest[0] != '_') return std::nullopt;
    const char label = rest[1];
    const bool sink = layout.sink_head && layout.labels[k] == 'j' && label == 'm';
    if (label != layout.labels[k] && !sink) return std::nullopt;
    std::size_t end = 2;
    while (end < rest.size() && rest[end] != '_') ++end;
    const std::string_view digits = rest.substr(2, end - 2);
    if (digits.empty() || digits.front() == '-' || digits.front() == '+') return std::nullopt;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    idx[k] = sink ? sink_node(v) : v;
    rest = rest.substr(end);
  }
  if (!rest.empty()) return std::nullopt;
  return idx;
}

}  // namespace

std::size_t VarRefHash::operator()(const VarRef& v) const noexcept {
  std::size_t h = static_cast<std::size_t>(v.kind);
  for (int x : v.idx) h = h * 1000003u ^ static_cast<std::size_t>(static_cast<unsigned>(x));
  return h;
}

std::string var_name(const VarRef& v) { return encode(kind_layout(v.kind), v.idx); }

std::optional<VarRef> parse_var_name(std::string_view name) {
  for (VarKind k : kAllKinds) {
    if (auto idx = decode(kind_layout(k), name)) return VarRef{k, *idx};
  }
  return std::nullopt;
}

std::string_view family_name(Family f) { return family_layout(f).prefix; }

std::string tag_name(const ConstraintTag& tag) {
  if (tag.family == Family::C13) throw std::invalid_argument("C13 tags have no row name");
  return encode(family_layout(tag.family), tag.idx);
}

std::optional<ConstraintTag> parse_tag_name(std::string_view name) {
  // Longest prefixes first so C10 is not read as C1 followed by junk.
  for (auto it = std::rbegin(kNameableFamilies); it != std::rend(kNameableFamilies); ++it) {
    if (auto idx = decode(family_layout(*it), name)) return ConstraintTag{*it, *idx};
  }
  return std::nullopt;
}

std::string_view sense_symbol(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "?";
}

int IlpModel::add_variable(const VarRef& ref, double lower, double upper, bool integer) {
  const int col = static_cast<int>(variables_.size());
  if (!index_.emplace(ref, col).second) {
    throw std::invalid_argument("duplicate variable " + var_name(ref));
  }
  variables_.push_back({ref, lower, upper, integer});
  return col;
}

std::optional<int> IlpModel::find(const VarRef& ref) const {
  const auto it = index_.find(ref);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int IlpModel::column(const VarRef& ref) const {
  const auto it = index_.find(ref);
  if (it == index_.end()) throw std::out_of_range("no variable " + var_name(ref));
  return it->second;
}

std::vector<Term> IlpModel::canonical(std::vector<Term> terms) const {
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(variables_.size())) {
      throw std::out_of_range("term refers to undeclared column " + std::to_string(t.var));
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const Term& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

void IlpModel::add_constraint(std::vector<Term> terms, Sense sense, double rhs, ConstraintTag tag) {
  constraints_.push_back({canonical(std::move(terms)), sense, rhs, tag});
}

void IlpModel::set_objective(std::vector<Term> terms) { objective_ = canonical(std::move(terms)); }

int IlpModel::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
    return v.integer && v.lower == 0.0 && v.upper == 1.0;
  }));
}

IlpModel build_model(const Instance& in, const ArcSets& arcs, const ModelOptions& options) {
  validate_instance(in);
  const Topology topo = build_topology(in, arcs);
  const int S = in.num_sensors();
  const int D = in.num_demand_points();
  const int T = in.periods;
  const int G = in.num_phenomena();
  const DeviceProfile& dev = in.device;
  const auto& route = topo.route_arcs;

  IlpModel model;

  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (const CoverArc& a : arcs.coverage[g]) {
        if (in.demand_points[a.demand_point].demands_phenomenon(g)) {
          model.add_binary(VarRef::x(a.sensor, a.demand_point, t, g));
        }
      }
    }
  }
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) model.add_binary(VarRef::y(i, t));
  }
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l : topo.sources[g]) {
        for (const RouteArc& a : route) {
          if (a.to != l) model.add_binary(VarRef::z(l, a.from, a.to, t, g));
        }
      }
    }
  }
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) model.add_binary(VarRef::w(i, t));
  }
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) model.add_binary(VarRef::r(i, t, g));
    }
  }
  for (int j = 0; j < D; ++j) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        if (in.demand_points[j].demands_phenomenon(g)) model.add_binary(VarRef::h(j, t, g));
      }
    }
  }
  for (int i = 0; i < S; ++i) {
    model.add_variable(VarRef::e(i), 0.0, dev.battery_capacity, false);
  }

  auto col = [&](const VarRef& v) { return model.column(v); };
  auto zcol = [&](int l, const RouteArc& a, int t, int g) {
    return col(VarRef::z(l, a.from, a.to, t, g));
  };

  // C2: cover each demanded (j,t,g) or pay the penalty.
  for (int j = 0; j < D; ++j) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        if (!in.demand_points[j].demands_phenomenon(g)) continue;
        std::vector<Term> terms;
        for (int i : topo.coverers[static_cast<std::size_t>(j) * G + g]) {
          terms.push_back({col(VarRef::x(i, j, t, g)), 1.0});
        }
        terms.push_back({col(VarRef::h(j, t, g)), 1.0});
        model.add_constraint(std::move(terms), Sense::kGe, 1.0, {Family::C2, {j, t, g}});
      }
    }
  }
  // C3: covering implies sensing.
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (const CoverArc& a : arcs.coverage[g]) {
        if (!in.demand_points[a.demand_point].demands_phenomenon(g)) continue;
        model.add_constraint({{col(VarRef::x(a.sensor, a.demand_point, t, g)), 1.0},
                              {col(VarRef::r(a.sensor, t, g)), -1.0}},
                             Sense::kLe, 0.0, {Family::C3, {a.sensor, a.demand_point, t, g}});
      }
    }
  }
  // C4: sensing implies active.
  for (int i = 0; i < S; ++i) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        model.add_constraint({{col(VarRef::r(i, t, g)), 1.0}, {col(VarRef::y(i, t)), -1.0}},
                             Sense::kLe, 0.0, {Family::C4, {i, t, g}});
      }
    }
  }
  // C5: conservation of commodity (l,t,g) at every other sensor; sinks absorb.
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l : topo.sources[g]) {
        for (int j = 0; j < S; ++j) {
          if (j == l) continue;
          std::vector<Term> terms;
          for (int a : topo.in_arcs[j]) terms.push_back({zcol(l, route[a], t, g), 1.0});
          for (int a : topo.out_arcs[j]) {
            if (route[a].to != l) terms.push_back({zcol(l, route[a], t, g), -1.0});
          }
          if (terms.empty()) continue;
          model.add_constraint(std::move(terms), Sense::kEq, 0.0, {Family::C5, {l, j, t, g}});
        }
      }
    }
  }
  // C6: a sensing sensor emits exactly one unit of its own commodity.
  for (int l = 0; l < S; ++l) {
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        std::vector<Term> terms;
        if (topo.is_source[g][l]) {
          for (int a : topo.out_arcs[l]) terms.push_back({zcol(l, route[a], t, g), 1.0});
        }
        terms.push_back({col(VarRef::r(l, t, g)), -1.0});
        model.add_constraint(std::move(terms), Sense::kEq, 0.0, {Family::C6, {l, t, g}});
      }
    }
  }
  // C7 / C8: both sensor endpoints of a used arc are active.
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int l : topo.sources[g]) {
        for (const RouteArc& a : route) {
          if (a.to == l) continue;
          const int z = zcol(l, a, t, g);
          const std::array<int, 5> idx{l, a.from, a.to, t, g};
          model.add_constraint({{z, 1.0}, {col(VarRef::y(a.from, t)), -1.0}}, Sense::kLe, 0.0,
                               {Family::C7, idx});
          if (!is_sink_node(a.to)) {
            model.add_constraint({{z, 1.0}, {col(VarRef::y(a.to, t)), -1.0}}, Sense::kLe, 0.0,
                                 {Family::C8, idx});
          }
        }
      }
    }
  }
  // C9: energy drawn by each sensor over the horizon.
  const double fixed = options.fixed_energy_multiplier(G);
  for (int i = 0; i < S; ++i) {
    std::vector<Term> terms;
    for (int t = 0; t < T; ++t) {
      terms.push_back({col(VarRef::y(i, t)), fixed * dev.maintenance_energy});
      terms.push_back({col(VarRef::w(i, t)), fixed * dev.activation_energy});
    }
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        for (int l : topo.sources[g]) {
          for (int a : topo.in_arcs[i]) {
            if (i != l) terms.push_back({zcol(l, route[a], t, g), topo.receive[g]});
          }
          for (int a : topo.out_arcs[i]) {
            if (route[a].to != l) terms.push_back({zcol(l, route[a], t, g), topo.arc_transmit(a, g)});
          }
        }
      }
    }
    terms.push_back({col(VarRef::e(i)), -1.0});
    model.add_constraint(std::move(terms), Sense::kLe, 0.0, {Family::C9, {i}});
  }
  // C11 / C12: w marks an off -> on transition.
  for (int i = 0; i < S; ++i) {
    model.add_constraint({{col(VarRef::w(i, 0)), 1.0}, {col(VarRef::y(i, 0)), -1.0}}, Sense::kGe,
                         0.0, {Family::C11, {i}});
    for (int t = 1; t < T; ++t) {
      model.add_constraint({{col(VarRef::w(i, t)), 1.0},
                            {col(VarRef::y(i, t)), -1.0},
                            {col(VarRef::y(i, t - 1)), 1.0}},
                           Sense::kGe, 0.0, {Family::C12, {i, t}});
    }
  }

  std::vector<Term> objective;
  for (int i = 0; i < S; ++i) objective.push_back({col(VarRef::e(i)), 1.0});
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      for (int j = 0; j < D; ++j) {
        if (in.demand_points[j].demands_phenomenon(g)) {
          objective.push_back({col(VarRef::h(j, t, g)), in.uncovered_penalty(j, g)});
        }
      }
      for (int i = 0; i < S; ++i) {
        objective.push_back({col(VarRef::r(i, t, g)), in.activation_penalty(i, g)});
      }
    }
  }
  model.set_objective(std::move(objective));
  return model;
}

ModelStats model_stats(const IlpModel& model) {
  ModelStats stats;
  for (VarKind k : kAllKinds) stats.variables[std::string(kind_layout(k).prefix)] = 0;
  for (const Variable& v : model.variables()) {
    ++stats.variables[std::string(kind_layout(v.ref.kind).prefix)];
    ++stats.total_variables;
    if (v.integer) ++stats.total_binaries;
  }
  for (const LinearConstraint& c : model.constraints()) {
    ++stats.constraints[std::string(family_name(c.tag.family))];
    ++stats.total_constraints;
  }
  return stats;
}

}  // namespace wsn
