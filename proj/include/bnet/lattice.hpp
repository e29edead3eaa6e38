#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnet/rng.hpp"

// Branching-coalescing arrow fields on the even sublattice of Z^2,
// together with the exactly-coupled dual field on the odd sublattice.
//
// A forward site (x,t), x+t even, carries a left arrow to (x-1,t+1)
// and/or a right arrow to (x+1,t+1): mask Both with probability eps,
// LeftOnly and RightOnly each with probability (1-eps)/2, independently
// per site. The dual site (x,t+1) carries arrows down to (x+-1,t), and
// its mask mirrors the forward mask at (x,t): dual-left exists iff
// forward-right exists, dual-right iff forward-left. This is the unique
// single-arrow coupling in which forward and dual arrow segments of the
// same unit cell do not cross; at a Both site both diagonal pairs cross,
// which is what makes branching sites the crossing sites.

namespace bnet::lattice {

enum class Mask : std::uint8_t { LeftOnly = 0, RightOnly = 1, Both = 2 };

inline Mask mirror(Mask m) {
  switch (m) {
    case Mask::LeftOnly: return Mask::RightOnly;
    case Mask::RightOnly: return Mask::LeftOnly;
    default: return Mask::Both;
  }
}

inline bool has_left(Mask m) { return m != Mask::RightOnly; }
inline bool has_right(Mask m) { return m != Mask::LeftOnly; }

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline bool is_forward_site(long long x, long long t) {
  return ((x + t) & 1LL) == 0;
}
inline bool is_dual_site(long long x, long long t) {
  return ((x + t) & 1LL) != 0;
}

struct LatticeConfig {
  double epsilon = 0.5;
  long long x_lo = 0, x_hi = 0;  // spatial window, x_hi - x_lo even
  long long t_lo = 0, t_hi = 0;  // time window
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("LatticeConfig: epsilon must be in (0,1]");
    if (!(x_lo < x_hi)) throw std::invalid_argument("LatticeConfig: x_lo < x_hi");
    if (((x_hi - x_lo) & 1LL) != 0)
      throw std::invalid_argument("LatticeConfig: x_hi - x_lo must be even");
    if (!(t_lo < t_hi)) throw std::invalid_argument("LatticeConfig: t_lo < t_hi");
  }

  long long width() const { return x_hi - x_lo + 1; }
  long long height() const { return t_hi - t_lo + 1; }
  // forward sites per time slice after parity folding
  long long row_slots() const { return (x_hi - x_lo) / 2 + 1; }
  long long slot_count() const { return row_slots() * height(); }
};

// Mask of site (x,t) as a pure function of (seed, x, t).
inline Mask mask_from_key(double epsilon, std::uint64_t seed, long long x,
                          long long t) {
  const double u = rng::to_unit(rng::site_hash(seed, x, t));
  if (u < epsilon) return Mask::Both;
  if (u < 0.5 * (1.0 + epsilon)) return Mask::LeftOnly;
  return Mask::RightOnly;
}

// Windowed arrow field, 2 bits per forward site in a flat row-major
// array with parity folding. The dual mask is derived on the fly.
class ArrowField {
 public:
  static constexpr long long kMaxSlots = 1LL << 31;

  static ArrowField sample(const LatticeConfig& config) {
    ArrowField f(config);
    for (long long t = config.t_lo; t <= config.t_hi; ++t) {
      const long long x0 = f.row_x0(t);
      for (long long x = x0; x <= config.x_hi; x += 2) {
        f.set(x, t, mask_from_key(config.epsilon, config.seed, x, t));
      }
    }
    return f;
  }

  // Fixture constructor: explicit masks at given sites, `fill` elsewhere.
  static ArrowField from_masks(const LatticeConfig& config,
                               const std::map<std::pair<long long, long long>, Mask>& masks,
                               Mask fill = Mask::LeftOnly) {
    ArrowField f(config);
    for (long long t = config.t_lo; t <= config.t_hi; ++t) {
      for (long long x = f.row_x0(t); x <= config.x_hi; x += 2) {
        auto it = masks.find({x, t});
        f.set(x, t, it == masks.end() ? fill : it->second);
      }
    }
    return f;
  }

  const LatticeConfig& config() const { return config_; }

  bool in_window(long long x, long long t) const {
    return x >= config_.x_lo && x <= config_.x_hi && t >= config_.t_lo &&
           t <= config_.t_hi && is_forward_site(x, t);
  }

  // dual site (x,t) is addressable when its forward partner (x,t-1) is
  bool dual_in_window(long long x, long long t) const {
    return is_dual_site(x, t) && in_window(x, t - 1);
  }

  Mask mask(long long x, long long t) const {
    if (!is_forward_site(x, t)) throw ParityError("mask: not a forward site");
    if (!in_window(x, t)) throw std::out_of_range("mask: site outside window");
    return get(x, t);
  }

  Mask dual_mask(long long x, long long t) const {
    if (!is_dual_site(x, t)) throw ParityError("dual_mask: not a dual site");
    return mirror(mask(x, t - 1));
  }

  bool arrow_left(long long x, long long t) const { return has_left(mask(x, t)); }
  bool arrow_right(long long x, long long t) const { return has_right(mask(x, t)); }
  bool dual_arrow_left(long long x, long long t) const { return has_left(dual_mask(x, t)); }
  bool dual_arrow_right(long long x, long long t) const { return has_right(dual_mask(x, t)); }

  // Debug dump: header then one line per time slice, L/R/B per site.
  void dump(std::ostream& os) const {
    os << "epsilon=" << config_.epsilon << " window=" << config_.x_lo << ","
       << config_.x_hi << "," << config_.t_lo << "," << config_.t_hi
       << " seed=" << config_.seed << "\n";
    for (long long t = config_.t_lo; t <= config_.t_hi; ++t) {
      std::string line;
      for (long long x = row_x0(t); x <= config_.x_hi; x += 2) {
        switch (get(x, t)) {
          case Mask::LeftOnly: line += 'L'; break;
          case Mask::RightOnly: line += 'R'; break;
          case Mask::Both: line += 'B'; break;
        }
      }
      os << line << "\n";
    }
  }

  long long row_x0(long long t) const {
    return is_forward_site(config_.x_lo, t) ? config_.x_lo : config_.x_lo + 1;
  }

 private:
  explicit ArrowField(const LatticeConfig& config) : config_(config) {
    config_.validate();
    const long long slots = config_.slot_count();
    if (slots > kMaxSlots)
      throw CapacityError("ArrowField: window exceeds addressable capacity");
    bits_.assign(static_cast<std::size_t>((slots + 3) / 4), 0);
  }

  std::size_t slot(long long x, long long t) const {
    const long long row = t - config_.t_lo;
    const long long col = (x - row_x0(t)) / 2;
    return static_cast<std::size_t>(row * config_.row_slots() + col);
  }

  void set(long long x, long long t, Mask m) {
    const std::size_t s = slot(x, t);
    const std::size_t byte = s >> 2;
    const unsigned shift = 2U * (s & 3U);
    bits_[byte] = static_cast<std::uint8_t>(
        (bits_[byte] & ~(0x3U << shift)) |
        (static_cast<unsigned>(m) << shift));
  }

  Mask get(long long x, long long t) const {
    const std::size_t s = slot(x, t);
    return static_cast<Mask>((bits_[s >> 2] >> (2U * (s & 3U))) & 0x3U);
  }

  LatticeConfig config_;
  std::vector<std::uint8_t> bits_;
};

// Unmaterialized field sharing the law of ArrowField::sample; used for
// long thin simulations where storing the window would be wasteful.
class LazyField {
 public:
  LazyField(double epsilon, std::uint64_t seed) : epsilon_(epsilon), seed_(seed) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("LazyField: epsilon must be in (0,1]");
  }

  Mask mask(long long x, long long t) const {
    if (!is_forward_site(x, t)) throw ParityError("mask: not a forward site");
    return mask_from_key(epsilon_, seed_, x, t);
  }
  Mask dual_mask(long long x, long long t) const {
    if (!is_dual_site(x, t)) throw ParityError("dual_mask: not a dual site");
    return mirror(mask(x, t - 1));
  }
  bool arrow_left(long long x, long long t) const { return has_left(mask(x, t)); }
  bool arrow_right(long long x, long long t) const { return has_right(mask(x, t)); }

 private:
  double epsilon_;
  std::uint64_t seed_;
};

// Conditional law of one forward right-most step next to a dual
// left-most path.
struct TransitionKernel {
  double p_right_off_contact;      // (1+eps)/2
  double p_cross_at_left_contact;  // 2 eps / (1+eps)
  double p_right_at_right_contact; // 1
};

inline TransitionKernel transition_kernel_check(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("transition_kernel_check: epsilon in [0,1]");
  return {0.5 * (1.0 + epsilon), 2.0 * epsilon / (1.0 + epsilon), 1.0};
}

}  // namespace bnet::lattice
