#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wsn/arcs.hpp"
#include "wsn/instance.hpp"

namespace wsn {

enum class VarKind : std::uint8_t { kX, kY, kZ, kW, kR, kH, kE };

// One decision variable. Index layout per kind:
//   x:(i,j,t,g)  y:(i,t)  z:(l,i,j,t,g)  w:(i,t)  r:(i,t,g)  h:(j,t,g)  e:(i)
// The head j of a z arc is a routing node, so it may be sink_node(m).
struct VarRef {
  VarKind kind = VarKind::kE;
  std::array<int, 5> idx{};

  static VarRef x(int i, int j, int t, int g) { return {VarKind::kX, {i, j, t, g, 0}}; }
  static VarRef y(int i, int t) { return {VarKind::kY, {i, t, 0, 0, 0}}; }
  static VarRef z(int l, int i, int j, int t, int g) { return {VarKind::kZ, {l, i, j, t, g}}; }
  static VarRef w(int i, int t) { return {VarKind::kW, {i, t, 0, 0, 0}}; }
  static VarRef r(int i, int t, int g) { return {VarKind::kR, {i, t, g, 0, 0}}; }
  static VarRef h(int j, int t, int g) { return {VarKind::kH, {j, t, g, 0, 0}}; }
  static VarRef e(int i) { return {VarKind::kE, {i, 0, 0, 0, 0}}; }

  bool binary() const { return kind != VarKind::kE; }

  friend bool operator==(const VarRef&, const VarRef&) = default;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

struct VarRefHash {
  std::size_t operator()(const VarRef& v) const noexcept;
};

// e.g. x_i3_j17_t0_g1, z_l0_i2_m0_t1_g0 (head is sink 0).
std::string var_name(const VarRef& v);
std::optional<VarRef> parse_var_name(std::string_view name);

// Constraint families. C10, C13 and kRoute only occur in validator reports:
// C10 is realized as bounds on e, C13 covers integrality and domain, and
// kRoute is the path-to-sink check.
enum class Family : std::uint8_t { C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12, C13, kRoute };

std::string_view family_name(Family f);

// Index tuples per family:
//   C2:(j,t,g) C3:(i,j,t,g) C4:(i,t,g) C5:(l,j,t,g) C6:(l,t,g)
//   C7/C8:(l,i,j,t,g) C9/C10/C11:(i) C12:(i,t) C13: the variable's indices
//   kRoute:(l,t,g)
struct ConstraintTag {
  Family family = Family::C2;
  std::array<int, 5> idx{};
  friend bool operator==(const ConstraintTag&, const ConstraintTag&) = default;
  friend auto operator<=>(const ConstraintTag&, const ConstraintTag&) = default;
};

// e.g. C2_j3_t0_g1. C13 tags are not nameable.
std::string tag_name(const ConstraintTag& tag);
std::optional<ConstraintTag> parse_tag_name(std::string_view name);

enum class Sense : std::uint8_t { kLe, kGe, kEq };
std::string_view sense_symbol(Sense s);

struct Term {
  int var = 0;
  double coef = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  ConstraintTag tag;
  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct Variable {
  VarRef ref;
  double lower = 0.0;
  double upper = 1.0;
  bool integer = true;
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Minimization model over indexed variables. Terms refer to variables by
// column; each term list is kept canonical: sorted by column, duplicates
// merged, zero coefficients dropped.
class IlpModel {
 public:
  int add_variable(const VarRef& ref, double lower, double upper, bool integer);
  int add_binary(const VarRef& ref) { return add_variable(ref, 0.0, 1.0, true); }
  std::optional<int> find(const VarRef& ref) const;
  int column(const VarRef& ref) const;  // throws std::out_of_range

  void add_constraint(std::vector<Term> terms, Sense sense, double rhs, ConstraintTag tag);
  void set_objective(std::vector<Term> terms);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  int num_binaries() const;

  friend bool operator==(const IlpModel& a, const IlpModel& b) {
    return a.variables_ == b.variables_ && a.constraints_ == b.constraints_ &&
           a.objective_ == b.objective_;
  }

 private:
  std::vector<Term> canonical(std::vector<Term> terms) const;

  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<Term> objective_;
  std::unordered_map<VarRef, int, VarRefHash> index_;
};

// How the fixed per-period energy EM*y + EA*w enters the battery row. The
// default counts it once per sensor and period; kPerPhenomenon repeats it for
// every phenomenon, as when the phenomenon sum encloses the whole row.
enum class FixedEnergyAccounting : std::uint8_t { kPerSensor, kPerPhenomenon };

struct ModelOptions {
  FixedEnergyAccounting fixed_energy = FixedEnergyAccounting::kPerSensor;
  double fixed_energy_multiplier(int num_phenomena) const {
    return fixed_energy == FixedEnergyAccounting::kPerPhenomenon ? num_phenomena : 1.0;
  }
};

// Throws std::invalid_argument when `arcs` does not belong to `instance`.
IlpModel build_model(const Instance& instance, const ArcSets& arcs, const ModelOptions& options = {});

struct ModelStats {
  std::map<std::string, long long> variables;    // keyed by kind letter
  std::map<std::string, long long> constraints;  // keyed by family name
  long long total_variables = 0;
  long long total_binaries = 0;
  long long total_constraints = 0;
};

ModelStats model_stats(const IlpModel& model);

}  // namespace wsn
