#include "vqcount/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "vqcount/errors.hpp"

namespace vqcount {

namespace {

constexpr double kEnergyTolerance = 1e-9;

double spin(std::uint64_t bits, std::uint32_t var) { return ((bits >> var) & 1U) ? 1.0 : -1.0; }

IsingModel build_with(const Formula& f, const FieldConvention& convention) {
  IsingModel model;
  model.n_vars = f.n_vars();
  model.free_vars = f.free_vars();

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> couplings;
  for (const Clause& c : f.clauses()) {
    for (auto [a, b] : {std::pair{c[0], c[1]}, std::pair{c[0], c[2]}, std::pair{c[1], c[2]}}) {
      if (a > b) std::swap(a, b);
      couplings[{a, b}] += -1.0;
    }
  }

  std::vector<double> fields(f.n_vars(), 0.0);
  double clause_solution_energy = -1.0;
  if (f.semantics() == Semantics::ExactlyOne) {
    for (const Clause& c : f.clauses()) {
      for (auto v : c) fields[v] += convention.sign * convention.weight;
    }
    // One-hot pattern: pair sum -1, spin sum -1.
    clause_solution_energy = -1.0 + convention.sign * convention.weight;
  }
  model.solution_energy = clause_solution_energy * static_cast<double>(f.n_clauses());

  const std::uint64_t pins = f.pinned_mask();
  const std::uint64_t values = f.pinned_values();
  auto pinned = [&](std::uint32_t v) { return ((pins >> v) & 1U) != 0; };

  for (const auto& [pair, j] : couplings) {
    const auto [a, b] = pair;
    if (!pinned(a) && !pinned(b)) {
      model.couplings.push_back({a, b, j});
    } else if (pinned(a) && pinned(b)) {
      model.offset += -j * spin(values, a) * spin(values, b);
    } else if (pinned(a)) {
      fields[b] += j * spin(values, a);
    } else {
      fields[a] += j * spin(values, b);
    }
  }
  for (std::uint32_t v = 0; v < f.n_vars(); ++v) {
    if (fields[v] == 0.0) continue;
    if (pinned(v)) {
      model.offset += -fields[v] * spin(values, v);
    } else {
      model.fields.push_back({v, fields[v]});
    }
  }
  return model;
}

struct Enumeration {
  std::vector<std::uint32_t> ground;
  std::vector<std::uint32_t> solutions;
  double min_energy = 0.0;
};

Enumeration enumerate_both(const Formula& f, const IsingModel& model) {
  const EnergyVector ev = energy_vector(model);
  Enumeration out;
  out.min_energy = *std::min_element(ev.values.begin(), ev.values.end());
  for (std::uint32_t c = 0; c < ev.size(); ++c) {
    if (std::abs(ev.values[c] - out.min_energy) < kEnergyTolerance) out.ground.push_back(c);
    if (f.satisfied_by(f.expand(c))) out.solutions.push_back(c);
  }
  return out;
}

std::vector<Formula> calibration_suite(Semantics s) {
  std::vector<Formula> suite;
  suite.emplace_back(3, std::vector<Clause>{{0, 1, 2}}, s);
  suite.emplace_back(5, std::vector<Clause>{{0, 1, 2}, {2, 3, 4}}, s);
  // K4 with a clause per vertex and a variable per edge.
  suite.emplace_back(6, std::vector<Clause>{{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}}, s);
  return suite;
}

bool convention_works(const Formula& f, const FieldConvention& conv) {
  const auto e = enumerate_both(f, build_with(f, conv));
  return e.solutions.empty() || e.ground == e.solutions;
}

}  // namespace

std::string FieldConvention::describe() const {
  std::ostringstream out;
  out << "h_i = " << (sign > 0 ? "+" : "-") << weight << " per clause occurrence";
  return out.str();
}

double IsingModel::energy_of(std::uint64_t bits) const {
  double e = offset;
  for (const auto& c : couplings) e -= c.value * spin(bits, c.i) * spin(bits, c.j);
  for (const auto& h : fields) e -= h.value * spin(bits, h.var);
  return e;
}

std::size_t EnergyVector::qubits() const {
  return static_cast<std::size_t>(std::countr_zero(values.size()));
}

std::vector<FieldConvention> candidate_conventions() {
  return {{+1, 1.0}, {-1, 1.0}, {+1, 0.5}, {-1, 0.5}};
}

const FieldConvention& field_convention(Semantics s) {
  static const FieldConvention nae{+1, 0.0};
  static const FieldConvention one_in_three = [] {
    const auto suite = calibration_suite(Semantics::ExactlyOne);
    for (const auto& conv : candidate_conventions()) {
      if (std::all_of(suite.begin(), suite.end(),
                      [&](const Formula& f) { return convention_works(f, conv); })) {
        return conv;
      }
    }
    throw MappingError("no field convention maps 1-in-3 ground states onto solutions");
  }();
  return s == Semantics::NotAllEqual ? nae : one_in_three;
}

IsingModel build_ising(const Formula& f) { return build_with(f, field_convention(f.semantics())); }

IsingModel build_ising(const Formula& f, const FieldConvention& convention) {
  return build_with(f, convention);
}

EnergyVector energy_vector(const IsingModel& model, std::size_t cap) {
  const std::size_t k = model.qubits();
  if (k > cap) {
    throw ResourceError("energy vector over " + std::to_string(k) + " free qubits exceeds cap " +
                        std::to_string(cap));
  }
  std::vector<std::uint32_t> qubit_of(model.n_vars, 0);
  for (std::uint32_t q = 0; q < k; ++q) qubit_of[model.free_vars[q]] = q;

  const std::size_t dim = std::size_t{1} << k;
  EnergyVector ev;
  ev.solution_energy = model.solution_energy;
  ev.values.assign(dim, model.offset);
  double* v = ev.values.data();
  for (const auto& c : model.couplings) {
    const unsigned qi = qubit_of[c.i];
    const unsigned qj = qubit_of[c.j];
    for (std::size_t x = 0; x < dim; ++x) {
      const bool anti = ((x >> qi) ^ (x >> qj)) & 1U;
      v[x] += anti ? c.value : -c.value;
    }
  }
  for (const auto& h : model.fields) {
    const unsigned q = qubit_of[h.var];
    for (std::size_t x = 0; x < dim; ++x) {
      v[x] += ((x >> q) & 1U) ? -h.value : h.value;
    }
  }
  return ev;
}

EnergyVector two_level(const EnergyVector& energies) {
  EnergyVector out;
  out.solution_energy = 0.0;
  out.values.resize(energies.size());
  for (std::size_t x = 0; x < energies.size(); ++x) {
    out.values[x] =
        std::abs(energies.values[x] - energies.solution_energy) < kEnergyTolerance ? 0.0 : 1.0;
  }
  return out;
}

std::vector<std::uint32_t> solution_indices(const EnergyVector& energies) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < energies.size(); ++x) {
    if (std::abs(energies.values[x] - energies.solution_energy) < kEnergyTolerance) out.push_back(x);
  }
  return out;
}

MappingReport validate_mapping(const Formula& f) {
  if (f.n_vars() > 16) throw ResourceError("validate_mapping enumerates at most 16 variables");

  auto report_for = [&](const FieldConvention& conv) {
    const IsingModel model = build_with(f, conv);
    const auto e = enumerate_both(f, model);
    MappingReport r;
    r.convention = conv;
    r.satisfiable = !e.solutions.empty();
    r.ground_equals_solutions = r.satisfiable && e.ground == e.solutions;
    r.n_solutions = e.solutions.size();
    r.n_ground = e.ground.size();
    r.min_energy = e.min_energy;
    r.solution_energy = model.solution_energy;
    return r;
  };

  const FieldConvention& calibrated = field_convention(f.semantics());
  MappingReport report = report_for(calibrated);
  if (!report.satisfiable) {
    report.note = "unsatisfiable: solution set empty, ground energy above the solution energy";
    return report;
  }
  if (report.ground_equals_solutions) return report;
  if (f.semantics() == Semantics::ExactlyOne) {
    for (const auto& conv : candidate_conventions()) {
      if (conv == calibrated) continue;
      MappingReport alt = report_for(conv);
      if (alt.ground_equals_solutions) {
        alt.note = "calibrated convention failed on this formula; " + conv.describe() + " works";
        return alt;
      }
    }
  }
  throw MappingError("ground space of the Ising model differs from the solution set");
}

}  // namespace vqcount
