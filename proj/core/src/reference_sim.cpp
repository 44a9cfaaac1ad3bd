#include "vqcount/reference_sim.hpp"

#include <array>
#include <cmath>

#include "vqcount/errors.hpp"

namespace vqcount {

namespace {

using Gate = std::array<Amplitude, 4>;  // row-major 2x2

void apply_gate(std::vector<Amplitude>& amps, unsigned qubit, const Gate& g) {
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (x & bit) continue;
    const Amplitude a0 = amps[x];
    const Amplitude a1 = amps[x | bit];
    amps[x] = g[0] * a0 + g[1] * a1;
    amps[x | bit] = g[2] * a0 + g[3] * a1;
  }
}

// exp(i * theta * s_a * s_b)
void apply_zz(std::vector<Amplitude>& amps, unsigned a, unsigned b, double theta) {
  const Amplitude same = std::polar(1.0, theta);
  const Amplitude diff = std::polar(1.0, -theta);
  for (std::size_t x = 0; x < amps.size(); ++x) {
    amps[x] *= (((x >> a) ^ (x >> b)) & 1U) ? diff : same;
  }
}

// exp(i * theta * s_a)
void apply_z(std::vector<Amplitude>& amps, unsigned a, double theta) {
  const Amplitude up = std::polar(1.0, theta);
  const Amplitude down = std::polar(1.0, -theta);
  for (std::size_t x = 0; x < amps.size(); ++x) amps[x] *= ((x >> a) & 1U) ? up : down;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Gate kHadamard{Amplitude{kInvSqrt2}, Amplitude{kInvSqrt2}, Amplitude{kInvSqrt2},
                     Amplitude{-kInvSqrt2}};
const Gate kPauliX{Amplitude{0.0}, Amplitude{1.0}, Amplitude{1.0}, Amplitude{0.0}};

}  // namespace

StateVector reference_simulate(const Formula& f, Mixer mixer, const std::vector<double>& betas,
                               const std::vector<double>& gammas) {
  const std::size_t n = f.n_vars();
  if (n > 16) throw ResourceError("reference simulator is limited to 16 qubits");
  if (betas.size() != gammas.size()) throw InputError("betas and gammas differ in length");

  const IsingModel model = build_ising(f.without_pins());

  // U_S: Hadamard on free qubits, X^bit on pinned ones. Self-inverse.
  auto prepare = [&](std::vector<Amplitude>& amps) {
    for (unsigned q = 0; q < n; ++q) {
      if (auto bit = f.pinned_bit(q)) {
        if (*bit) apply_gate(amps, q, kPauliX);
      } else {
        apply_gate(amps, q, kHadamard);
      }
    }
  };

  StateVector psi;
  psi.amps.assign(std::size_t{1} << n, Amplitude{0.0});
  psi.amps[0] = 1.0;
  prepare(psi.amps);

  for (std::size_t layer = 0; layer < betas.size(); ++layer) {
    const double gamma = gammas[layer];
    // exp(-i gamma H) with H = -sum J s s - sum h s
    for (const auto& c : model.couplings) apply_zz(psi.amps, c.i, c.j, gamma * c.value);
    for (const auto& h : model.fields) apply_z(psi.amps, h.var, gamma * h.value);

    const double beta = betas[layer];
    if (mixer == Mixer::X) {
      const Amplitude c{std::cos(beta)};
      const Amplitude s{0.0, -std::sin(beta)};
      const Gate rx{c, s, s, c};
      for (unsigned q = 0; q < n; ++q) {
        if (!f.is_pinned(q)) apply_gate(psi.amps, q, rx);
      }
    } else {
      prepare(psi.amps);
      psi.amps[0] *= std::polar(1.0, -beta);
      prepare(psi.amps);
    }
  }
  return psi;
}

StateVector slice_pinned(const Formula& f, const StateVector& full) {
  const std::size_t k = f.n_vars() - f.n_pinned();
  StateVector out;
  out.amps.resize(std::size_t{1} << k);
  for (std::uint64_t c = 0; c < out.amps.size(); ++c) out.amps[c] = full.amps.at(f.expand(c));
  return out;
}

}  // namespace vqcount
