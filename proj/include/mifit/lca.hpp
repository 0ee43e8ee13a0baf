#pragma once

// Shift-invariant spaces on a finite abelian group G = Z_{N_1} x ... x Z_{N_d}.
//
// The dual group is identified with G through the pairing
//   (x, gamma) = exp(2 pi i sum_t x_t gamma_t / N_t).
// G carries counting measure and the dual carries weight 1/|G| per point, so
// the DFT is an isometry. For a subgroup H the fiberization
//   T f(omega) = ( f^(omega + delta) )_{delta in H*},  omega in Omega,
// maps L^2(G) isometrically onto L^2(Omega, l^2(H*)) and turns H-invariant
// spaces into MI spaces. Elements are addressed by their lexicographic index
// (first coordinate most significant); every "sorted" list below is sorted by
// that index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mifit/deco_solver.hpp"
#include "mifit/errors.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"
#include "mifit/mi_solver.hpp"

namespace mifit {

using GroupElement = std::vector<long>;

class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<long> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw InvalidInput("FiniteAbelianGroup: at least one factor required");
    size_ = 1;
    lcm_ = 1;
    for (long n : orders_) {
      if (n < 1) throw InvalidInput("FiniteAbelianGroup: factor orders must be positive");
      size_ *= static_cast<std::size_t>(n);
      lcm_ = std::lcm(lcm_, n);
    }
  }

  const std::vector<long>& orders() const noexcept { return orders_; }
  std::size_t rank() const noexcept { return orders_.size(); }
  std::size_t size() const noexcept { return size_; }

  std::size_t index(const GroupElement& x) const {
    if (x.size() != orders_.size()) throw InvalidInput("FiniteAbelianGroup: element has the wrong arity");
    std::size_t idx = 0;
    for (std::size_t t = 0; t < orders_.size(); ++t) {
      if (x[t] < 0 || x[t] >= orders_[t]) throw InvalidInput("FiniteAbelianGroup: coordinate out of range");
      idx = idx * static_cast<std::size_t>(orders_[t]) + static_cast<std::size_t>(x[t]);
    }
    return idx;
  }

  GroupElement element(std::size_t idx) const {
    GroupElement x(orders_.size());
    for (std::size_t t = orders_.size(); t-- > 0;) {
      x[t] = static_cast<long>(idx % static_cast<std::size_t>(orders_[t]));
      idx /= static_cast<std::size_t>(orders_[t]);
    }
    return x;
  }

  std::size_t add(std::size_t a, std::size_t b) const {
    const GroupElement x = element(a), y = element(b);
    GroupElement z(x.size());
    for (std::size_t t = 0; t < z.size(); ++t) z[t] = (x[t] + y[t]) % orders_[t];
    return index(z);
  }

  std::size_t negate(std::size_t a) const {
    GroupElement x = element(a);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = (orders_[t] - x[t]) % orders_[t];
    return index(x);
  }

  std::size_t subtract(std::size_t a, std::size_t b) const { return add(a, negate(b)); }

  /// sum_t x_t gamma_t / N_t reduced mod 1, as a numerator over lcm(N_t).
  long pairing_numerator(std::size_t x, std::size_t gamma) const {
    const GroupElement a = element(x), g = element(gamma);
    long num = 0;
    for (std::size_t t = 0; t < a.size(); ++t) num = (num + (a[t] * g[t] % orders_[t]) * (lcm_ / orders_[t])) % lcm_;
    return num;
  }

  long pairing_denominator() const noexcept { return lcm_; }

  /// (x, gamma)
  Complex character(std::size_t x, std::size_t gamma) const {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(pairing_numerator(x, gamma)) /
                         static_cast<double>(lcm_);
    return {std::cos(angle), std::sin(angle)};
  }

  std::string to_string(std::size_t idx) const {
    const GroupElement x = element(idx);
    std::string s = "(";
    for (std::size_t t = 0; t < x.size(); ++t) s += (t ? "," : "") + std::to_string(x[t]);
    return s + ")";
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.orders_ == b.orders_; }

 private:
  std::vector<long> orders_;
  std::size_t size_ = 1;
  long lcm_ = 1;
};

/// A subgroup H of G, stored as the sorted list of its element indices.
class Lattice {
 public:
  Lattice(FiniteAbelianGroup group, std::vector<std::size_t> elements)
      : group_(std::move(group)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    for (std::size_t e : elements_) {
      if (e >= group_.size()) throw InvalidInput("Lattice: element index out of range");
    }
    if (elements_.empty() || elements_.front() != 0) throw InvalidInput("Lattice: subgroup must contain the identity");
    const std::set<std::size_t> members(elements_.begin(), elements_.end());
    for (std::size_t a : elements_) {
      if (!members.count(group_.negate(a))) throw InvalidInput("Lattice: not closed under negation");
      for (std::size_t b : elements_) {
        if (!members.count(group_.add(a, b))) throw InvalidInput("Lattice: not closed under addition");
      }
    }
    if (group_.size() % elements_.size() != 0) throw InvalidInput("Lattice: index is not an integer");
  }

  static Lattice generated_by(const FiniteAbelianGroup& g, const std::vector<std::size_t>& generators) {
    std::set<std::size_t> members{0};
    std::vector<std::size_t> frontier{0};
    for (std::size_t gen : generators) {
      if (gen >= g.size()) throw InvalidInput("Lattice: generator index out of range");
    }
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (std::size_t a : frontier)
        for (std::size_t gen : generators) {
          const std::size_t b = g.add(a, gen);
          if (members.insert(b).second) next.push_back(b);
        }
      frontier = std::move(next);
    }
    return Lattice(g, {members.begin(), members.end()});
  }

  static Lattice whole(const FiniteAbelianGroup& g) {
    std::vector<std::size_t> all(g.size());
    std::iota(all.begin(), all.end(), 0);
    return Lattice(g, std::move(all));
  }

  static Lattice trivial(const FiniteAbelianGroup& g) { return Lattice(g, {0}); }

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  const std::vector<std::size_t>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t index_in_group() const noexcept { return group_.size() / elements_.size(); }

  bool contains(std::size_t idx) const { return std::binary_search(elements_.begin(), elements_.end(), idx); }

  bool contains(const Lattice& other) const {
    return std::all_of(other.elements_.begin(), other.elements_.end(), [&](std::size_t e) { return contains(e); });
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.group_ == b.group_ && a.elements_ == b.elements_;
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<std::size_t> elements_;
};

/// Every subgroup of g, ordered by (size, element list).
inline std::vector<Lattice> all_subgroups(const FiniteAbelianGroup& g) {
  std::set<std::vector<std::size_t>> found;
  for (std::size_t a = 0; a < g.size(); ++a) found.insert(Lattice::generated_by(g, {a}).elements());
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::vector<std::size_t>> current(found.begin(), found.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        std::vector<std::size_t> gens = current[i];
        gens.insert(gens.end(), current[j].begin(), current[j].end());
        if (found.insert(Lattice::generated_by(g, gens).elements()).second) grew = true;
      }
  }
  std::vector<Lattice> out;
  for (const auto& e : found) out.emplace_back(g, e);
  std::stable_sort(out.begin(), out.end(), [](const Lattice& a, const Lattice& b) { return a.size() < b.size(); });
  return out;
}

/// A complex function on G (or on its dual), indexed like the group.
class Signal {
 public:
  Signal(FiniteAbelianGroup group, std::vector<Complex> values) : group_(std::move(group)), values_(std::move(values)) {
    if (values_.size() != group_.size()) throw DimensionMismatch("Signal: one value per group element required");
  }

  static Signal zero(const FiniteAbelianGroup& g) { return Signal(g, std::vector<Complex>(g.size())); }

  static Signal delta(const FiniteAbelianGroup& g, std::size_t at) {
    Signal s = zero(g);
    s.values_.at(at) = 1.0;
    return s;
  }

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  friend Signal operator-(const Signal& a, const Signal& b) {
    if (!(a.group_ == b.group_)) throw DimensionMismatch("Signal difference: groups differ");
    Signal c = a;
    for (std::size_t i = 0; i < c.values_.size(); ++i) c.values_[i] -= b.values_[i];
    return c;
  }

 private:
  FiniteAbelianGroup group_;
  std::vector<Complex> values_;
};

inline double norm_squared(const Signal& f) { return norm_squared(std::span<const Complex>(f.values())); }

inline Complex inner_product(const Signal& f, const Signal& g) {
  if (!(f.group() == g.group())) throw DimensionMismatch("inner_product: groups differ");
  return dot(f.values(), g.values());
}

/// f^(gamma) = sum_x f(x) conj((x, gamma))
inline Signal dft(const Signal& f) {
  const auto& g = f.group();
  Signal out = Signal::zero(g);
  for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
    Complex s{};
    for (std::size_t x = 0; x < g.size(); ++x) s += f[x] * std::conj(g.character(x, gamma));
    out[gamma] = s;
  }
  return out;
}

/// f(x) = (1/|G|) sum_gamma f^(gamma) (x, gamma)
inline Signal inverse_dft(const Signal& fhat) {
  const auto& g = fhat.group();
  Signal out = Signal::zero(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    Complex s{};
    for (std::size_t gamma = 0; gamma < g.size(); ++gamma) s += fhat[gamma] * g.character(x, gamma);
    out[x] = scale * s;
  }
  return out;
}

/// (T_x f)(y) = f(y - x)
inline Signal translate(const Signal& f, std::size_t x) {
  const auto& g = f.group();
  Signal out = Signal::zero(g);
  for (std::size_t y = 0; y < g.size(); ++y) out[y] = f[g.subtract(y, x)];
  return out;
}

/// K* = { gamma : (x, gamma) = 1 for all x in K }, sorted.
inline std::vector<std::size_t> annihilator(const FiniteAbelianGroup& g, const Lattice& k) {
  if (!(k.group() == g)) throw InvalidInput("annihilator: lattice belongs to a different group");
  std::vector<std::size_t> out;
  for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
    const bool trivial = std::all_of(k.elements().begin(), k.elements().end(),
                                     [&](std::size_t x) { return g.pairing_numerator(x, gamma) == 0; });
    if (trivial) out.push_back(gamma);
  }
  return out;
}

struct FiberizationData {
  FiniteAbelianGroup group;
  std::vector<std::size_t> annihilator;  // H*, sorted; fiber coordinates follow this order
  std::vector<std::size_t> section;      // Omega, sorted coset representatives of G^/H*
  double weight = 0.0;                   // 1/|G| per section point
  GridPtr grid;

  std::size_t fiber_dim() const noexcept { return annihilator.size(); }
  /// Dual element omega + delta for section slot w and coordinate k.
  std::size_t dual_point(std::size_t w, std::size_t k) const { return group.add(section[w], annihilator[k]); }
};

/// Omega = lexicographically smallest representative of each coset of H*.
inline FiberizationData section(const FiniteAbelianGroup& g, const Lattice& h) {
  std::vector<std::size_t> hstar = annihilator(g, h);
  std::vector<char> covered(g.size(), 0);
  std::vector<std::size_t> omega;
  for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
    if (covered[gamma]) continue;
    omega.push_back(gamma);
    for (std::size_t d : hstar) {
      const std::size_t p = g.add(gamma, d);
      if (covered[p]) throw NumericalFailure("section: cosets overlap");
      covered[p] = 1;
    }
  }
  if (hstar.size() * omega.size() != g.size() || omega.size() != h.size()) {
    throw InvalidInput("section: annihilator and section sizes are inconsistent");
  }
  const double weight = 1.0 / static_cast<double>(g.size());
  std::vector<std::string> ids;
  for (std::size_t w : omega) ids.push_back(g.to_string(w));
  GridPtr grid = make_grid(std::move(ids), std::vector<double>(omega.size(), weight));
  return FiberizationData{g, std::move(hstar), std::move(omega), weight, std::move(grid)};
}

inline VectorField fiberize(const Signal& f, const FiberizationData& fd) {
  if (!(f.group() == fd.group)) throw DimensionMismatch("fiberize: signal lives on a different group");
  const Signal fhat = dft(f);
  std::vector<CVector> values(fd.section.size(), CVector(fd.fiber_dim()));
  for (std::size_t w = 0; w < fd.section.size(); ++w)
    for (std::size_t k = 0; k < fd.fiber_dim(); ++k) values[w][k] = fhat[fd.dual_point(w, k)];
  return VectorField(fd.grid, fd.fiber_dim(), std::move(values));
}

inline Signal defiberize(const VectorField& field, const FiberizationData& fd) {
  if (!same_grid(field.grid(), fd.grid) || field.dim() != fd.fiber_dim()) {
    throw DimensionMismatch("defiberize: field does not match the fiberization layout");
  }
  Signal fhat = Signal::zero(fd.group);
  for (std::size_t w = 0; w < fd.section.size(); ++w)
    for (std::size_t k = 0; k < fd.fiber_dim(); ++k) fhat[fd.dual_point(w, k)] = field[w][k];
  return inverse_dft(fhat);
}

namespace detail {

inline void require_group(std::span<const Signal> data, const FiniteAbelianGroup& g, const char* what) {
  for (const auto& f : data) {
    if (!(f.group() == g)) throw DimensionMismatch(std::string(what) + ": signal lives on a different group");
  }
}

inline std::vector<VectorField> fiberize_all(std::span<const Signal> data, const FiberizationData& fd) {
  std::vector<VectorField> out;
  out.reserve(data.size());
  for (const auto& f : data) out.push_back(fiberize(f, fd));
  return out;
}

}  // namespace detail

/// P_V f for the H-invariant space V whose fiberized range is `range`.
inline Signal project_shift_invariant(const RangeBasis& range, const FiberizationData& fd, const Signal& f) {
  return defiberize(project_fiberwise(range, fiberize(f, fd)), fd);
}

/// Range function of S_H(generators) in the fiber domain.
inline RangeBasis shift_invariant_range(std::span<const Signal> generators, const FiberizationData& fd) {
  detail::require_group(generators, fd.group, "shift_invariant_range");
  const std::vector<VectorField> fields = detail::fiberize_all(generators, fd);
  return RangeBasis::spanned_by(fd.grid, fd.fiber_dim(), fields);
}

/// phi = sqrt(|H*|) T^{-1} Phi. With counting measure on G the section has
/// measure |H|/|G| instead of 1, so the H-translates of T^{-1} Phi alone
/// would be a tight frame with bound |H|/|G|; the factor makes it Parseval.
inline Signal time_domain_generator(const VectorField& phi, const FiberizationData& fd) {
  Signal s = defiberize(phi, fd);
  const double c = std::sqrt(static_cast<double>(fd.fiber_dim()));
  for (std::size_t x = 0; x < s.size(); ++x) s[x] *= c;
  return s;
}

struct SIResult {
  FiberizationData fibers;
  MISolution mi;
  std::vector<Signal> generators;  // time_domain_generator(Phi_s)
  double error = 0.0;

  const RangeBasis& range() const noexcept { return mi.range; }
};

inline SIResult solve_si(std::span<const Signal> data, const Lattice& h, std::size_t length,
                         double epsilon = kDefaultEpsilon) {
  if (data.empty()) throw InvalidInput("solve_si: empty data");
  const FiniteAbelianGroup& g = h.group();
  detail::require_group(data, g, "solve_si");
  FiberizationData fd = section(g, h);
  const std::vector<VectorField> fields = detail::fiberize_all(data, fd);
  MISolution mi = solve_problem1(fields, length, epsilon);
  std::vector<Signal> gens;
  for (const auto& phi : mi.generators) gens.push_back(time_domain_generator(phi, fd));
  const double err = mi.error;
  return SIResult{std::move(fd), std::move(mi), std::move(gens), err};
}

/// Coordinate blocks of l^2(H*) induced by a larger subgroup Gamma.
struct ExtraInvarianceLayout {
  std::vector<std::size_t> gamma_annihilator;     // Gamma*, sorted
  std::vector<std::size_t> coset_section;         // N: representatives of H*/Gamma*
  std::vector<std::vector<std::size_t>> blocks;   // positions in sorted H* of Gamma* + sigma
  std::vector<std::vector<std::size_t>> spectral_partition;  // B_sigma = Omega + sigma + Gamma*, sorted
};

inline ExtraInvarianceLayout extra_invariance_layout(const FiberizationData& fd, const Lattice& gamma) {
  const FiniteAbelianGroup& g = fd.group;
  if (!(gamma.group() == g)) throw InvalidInput("extra_invariance_layout: Gamma belongs to a different group");
  ExtraInvarianceLayout out;
  out.gamma_annihilator = annihilator(g, gamma);
  for (std::size_t e : out.gamma_annihilator) {
    if (!std::binary_search(fd.annihilator.begin(), fd.annihilator.end(), e)) {
      throw InvalidInput("extra_invariance_layout: Gamma does not contain H");
    }
  }
  std::vector<char> covered(g.size(), 0);
  for (std::size_t pos = 0; pos < fd.annihilator.size(); ++pos) {
    const std::size_t sigma = fd.annihilator[pos];
    if (covered[sigma]) continue;
    out.coset_section.push_back(sigma);
    std::vector<std::size_t> block;
    std::set<std::size_t> bset;
    for (std::size_t c : out.gamma_annihilator) {
      const std::size_t e = g.add(sigma, c);
      covered[e] = 1;
      const auto it = std::lower_bound(fd.annihilator.begin(), fd.annihilator.end(), e);
      block.push_back(static_cast<std::size_t>(it - fd.annihilator.begin()));
      for (std::size_t w : fd.section) bset.insert(g.add(w, e));
    }
    std::sort(block.begin(), block.end());
    out.blocks.push_back(std::move(block));
    out.spectral_partition.emplace_back(bset.begin(), bset.end());
  }
  return out;
}

struct SIExtraResult {
  FiberizationData fibers;
  ExtraInvarianceLayout layout;
  DecomposedSolution mi;
  std::vector<Signal> generators;
  double error = 0.0;

  const RangeBasis& range() const noexcept { return mi.solution.range; }
};

inline SIExtraResult solve_si_extra(std::span<const Signal> data, const Lattice& h, const Lattice& gamma,
                                    std::size_t length, double epsilon = kDefaultEpsilon) {
  if (data.empty()) throw InvalidInput("solve_si_extra: empty data");
  if (!(h.group() == gamma.group())) throw InvalidInput("solve_si_extra: H and Gamma live in different groups");
  if (!gamma.contains(h)) throw InvalidInput("solve_si_extra: Gamma must contain H");
  const FiniteAbelianGroup& g = h.group();
  detail::require_group(data, g, "solve_si_extra");
  FiberizationData fd = section(g, h);
  ExtraInvarianceLayout layout = extra_invariance_layout(fd, gamma);
  const Decomposition d(fd.fiber_dim(), layout.blocks);
  const std::vector<VectorField> fields = detail::fiberize_all(data, fd);
  DecomposedSolution mi = solve_problem2(fields, d, length, epsilon);
  std::vector<Signal> gens;
  for (const auto& phi : mi.solution.generators) gens.push_back(time_domain_generator(phi, fd));
  const double err = mi.solution.error;
  return SIExtraResult{std::move(fd), std::move(layout), std::move(mi), std::move(gens), err};
}

/// max over test signals g in V* of |sum_{h,s} |<g, T_h phi_s>|^2 - |g|^2|,
/// relative to max(1, |g|^2). Zero when the H-translates of the generators
/// form a Parseval frame of V*.
inline double translate_parseval_deviation(std::span<const Signal> generators, const Lattice& h,
                                           std::span<const Signal> test_signals) {
  double worst = 0.0;
  for (const auto& g : test_signals) {
    double energy = 0.0;
    for (const auto& phi : generators)
      for (std::size_t x : h.elements()) energy += std::norm(inner_product(g, translate(phi, x)));
    const double ng = norm_squared(g);
    worst = std::max(worst, std::abs(energy - ng) / std::max(1.0, ng));
  }
  return worst;
}

inline constexpr double kWienerTolerance = 1e-10;

/// E = { gamma : |phi^(gamma)| <= tol * max modulus, for every generator }.
inline std::vector<std::size_t> wiener_set(const FiniteAbelianGroup& g, std::span<const Signal> generators,
                                           double tol = kWienerTolerance) {
  detail::require_group(generators, g, "wiener_set");
  std::vector<Signal> spectra;
  double maxmod = 0.0;
  for (const auto& phi : generators) {
    spectra.push_back(dft(phi));
    for (const auto& z : spectra.back().values()) maxmod = std::max(maxmod, std::abs(z));
  }
  std::vector<std::size_t> e;
  for (std::size_t gamma = 0; gamma < g.size(); ++gamma) {
    const bool vanishes = std::all_of(spectra.begin(), spectra.end(),
                                      [&](const Signal& s) { return std::abs(s[gamma]) <= tol * maxmod; });
    if (vanishes) e.push_back(gamma);
  }
  return e;
}

inline std::vector<std::size_t> wiener_set(std::span<const Signal> generators, double tol = kWienerTolerance) {
  if (generators.empty()) throw InvalidInput("wiener_set: the group is unknown without generators");
  return wiener_set(generators.front().group(), generators, tol);
}

inline constexpr double kMembershipTolerance = 1e-9;

/// Whether S_H(generators) is invariant under every translation of G.
inline bool is_translation_invariant(std::span<const Signal> generators, const Lattice& h,
                                     double tol = kMembershipTolerance) {
  if (generators.empty()) return true;
  const FiniteAbelianGroup& g = h.group();
  detail::require_group(generators, g, "is_translation_invariant");
  const FiberizationData fd = section(g, h);
  const RangeBasis range = shift_invariant_range(generators, fd);
  for (std::size_t x = 0; x < g.size(); ++x)
    for (const auto& phi : generators)
      if (!contains(range, fiberize(translate(phi, x), fd), tol)) return false;
  return true;
}

/// Whether T S_H(generators) is decomposable for the coordinate lines
/// span{delta_k}, k in H*.
inline bool totally_decomposable_check(std::span<const Signal> generators, const Lattice& h,
                                       double tol = kMembershipTolerance) {
  if (generators.empty()) return true;
  const FiniteAbelianGroup& g = h.group();
  detail::require_group(generators, g, "totally_decomposable_check");
  const FiberizationData fd = section(g, h);
  const RangeBasis range = shift_invariant_range(generators, fd);
  return decomposable_check(range, Decomposition::singletons(fd.fiber_dim()), tol);
}

}  // namespace mifit
