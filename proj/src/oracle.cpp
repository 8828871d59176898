#include "borel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "borel/independent.hpp"
#include "borel/latent.hpp"
#include "borel/markov.hpp"
#include "borel/summation.hpp"

namespace borel {
namespace {

constexpr Index kMaskBits = 32;

std::uint32_t bit(Index n) { return std::uint32_t{1} << static_cast<unsigned>(n - 1); }

void require_horizon(Index h, Index cap, const char* family) {
  if (h < 1) throw HorizonExceeded("oracle horizon must be >= 1");
  if (h > cap || h > kMaskBits)
    throw HorizonExceeded(std::string("oracle horizon ") + std::to_string(h) + " exceeds cap " +
                          std::to_string(std::min(cap, kMaskBits)) + " for " + family);
}

std::vector<Atom> enumerate_independent(const IndependentModel& m, Index h) {
  std::vector<double> p(static_cast<std::size_t>(h));
  for (Index n = 1; n <= h; ++n) p[static_cast<std::size_t>(n - 1)] = m.p(n);
  const std::uint32_t count = std::uint32_t{1} << static_cast<unsigned>(h);
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    for (Index n = 1; n <= h; ++n) {
      const double q = p[static_cast<std::size_t>(n - 1)];
      prob *= (mask & bit(n)) ? q : 1.0 - q;
    }
    atoms.push_back({mask, prob});
  }
  return atoms;
}

std::vector<Atom> enumerate_markov(const MarkovModel& m, Index h, std::uint64_t max_paths) {
  const int s = m.num_states();
  double paths = std::pow(static_cast<double>(s), static_cast<double>(h));
  if (paths > static_cast<double>(max_paths))
    throw HorizonExceeded("markov oracle: S^H = " + std::to_string(paths) + " paths exceeds cap");
  const auto& p = m.transition();
  const auto& init = m.initial();
  std::unordered_map<std::uint32_t, double> by_mask;

  // Depth-first over state paths x_1..x_h.
  struct Frame {
    Index t;
    int state;
    double prob;
    std::uint32_t mask;
  };
  std::vector<Frame> stack;
  for (int x = 0; x < s; ++x)
    if (init(x) > 0) stack.push_back({1, x, init(x), 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (m.events().contains(f.t, f.state)) f.mask |= bit(f.t);
    if (f.t == h) {
      by_mask[f.mask] += f.prob;
      continue;
    }
    for (int y = 0; y < s; ++y)
      if (p(f.state, y) > 0) stack.push_back({f.t + 1, y, f.prob * p(f.state, y), f.mask});
  }
  std::vector<Atom> atoms;
  atoms.reserve(by_mask.size());
  for (const auto& [mask, prob] : by_mask) atoms.push_back({mask, prob});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.mask < b.mask; });
  return atoms;
}

std::vector<Atom> enumerate_latent(const LatentUniformModel& m, Index h) {
  struct Cell {
    std::uint32_t mask;
    double length;
  };
  std::vector<std::vector<Cell>> per_latent;
  for (int l = 0; l < m.num_latents(); ++l) {
    std::vector<Index> members;
    std::vector<double> cuts{0.0, 1.0};
    for (Index n = 1; n <= h; ++n)
      if (m.latent_of(n) == l) {
        members.push_back(n);
        cuts.push_back(m.threshold(n));
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Cell> cells;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      // U in (lo, hi]: U <= a holds iff hi <= a, as a is itself a cut.
      std::uint32_t mask = 0;
      for (Index n : members)
        if (hi <= m.threshold(n)) mask |= bit(n);
      cells.push_back({mask, hi - lo});
    }
    per_latent.push_back(std::move(cells));
  }
  std::vector<Atom> atoms{{0, 1.0}};
  for (const auto& cells : per_latent) {
    std::vector<Atom> next;
    next.reserve(atoms.size() * cells.size());
    for (const auto& a : atoms)
      for (const auto& c : cells) next.push_back({a.mask | c.mask, a.prob * c.length});
    atoms = std::move(next);
  }
  return atoms;
}

}  // namespace

TruncatedOutcomeSpace TruncatedOutcomeSpace::build(const EventSequenceModel& model, Index horizon,
                                                   const OracleLimits& limits) {
  TruncatedOutcomeSpace space;
  space.horizon_ = horizon;
  if (const auto* ind = dynamic_cast<const IndependentModel*>(&model)) {
    require_horizon(horizon, limits.max_horizon, "independent models");
    space.atoms_ = enumerate_independent(*ind, horizon);
  } else if (const auto* mk = dynamic_cast<const MarkovModel*>(&model)) {
    require_horizon(horizon, kMaskBits, "markov models");
    space.atoms_ = enumerate_markov(*mk, horizon, limits.max_markov_paths);
  } else if (const auto* lat = dynamic_cast<const LatentUniformModel*>(&model)) {
    require_horizon(horizon, limits.max_horizon, "latent-uniform models");
    space.atoms_ = enumerate_latent(*lat, horizon);
  } else {
    throw std::invalid_argument("oracle: unsupported model family");
  }
  return space;
}

double TruncatedOutcomeSpace::total_mass() const {
  CompensatedSum s;
  for (const auto& a : atoms_) s += a.prob;
  return s.value();
}

TruncatedOutcomeSpace TruncatedOutcomeSpace::with_atoms(std::vector<Atom> atoms) const {
  TruncatedOutcomeSpace out = *this;
  out.atoms_ = std::move(atoms);
  return out;
}

bool atom_matches(const Atom& atom, Index start, std::span<const Slot> slots) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const bool on = (atom.mask & bit(start + static_cast<Index>(i))) != 0;
    if (on != (slots[i] == Slot::Event)) return false;
  }
  return true;
}

double oracle_cylinder(const TruncatedOutcomeSpace& space, Index start, std::span<const Slot> slots) {
  if (start < 1 || start + static_cast<Index>(slots.size()) - 1 > space.horizon())
    throw HorizonExceeded("window does not fit inside the oracle horizon");
  CompensatedSum s;
  for (const auto& a : space.atoms())
    if (atom_matches(a, start, slots)) s += a.prob;
  return s.value();
}

double oracle_window_prob(const TruncatedOutcomeSpace& space, const WindowPattern& w) {
  w.validate();
  const auto slots = w.slots();
  return oracle_cylinder(space, w.start, slots);
}

double oracle_union_prob(const TruncatedOutcomeSpace& space, Index n, Index t) {
  if (t < 0 || n < 1 || n + t > space.horizon())
    throw HorizonExceeded("union range does not fit inside the oracle horizon");
  std::uint32_t range = 0;
  for (Index j = n; j <= n + t; ++j) range |= bit(j);
  CompensatedSum s;
  for (const auto& a : space.atoms())
    if (a.mask & range) s += a.prob;
  return s.value();
}

std::vector<std::size_t> window_atoms(const TruncatedOutcomeSpace& space, const WindowPattern& w) {
  w.validate();
  if (w.last() > space.horizon()) throw HorizonExceeded("window does not fit inside the oracle horizon");
  const auto slots = w.slots();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < space.atoms().size(); ++i)
    if (atom_matches(space.atoms()[i], w.start, slots)) out.push_back(i);
  return out;
}

}  // namespace borel
