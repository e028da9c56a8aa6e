#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "escort/types.hpp"

namespace escort {

using Symbol = std::int64_t;

inline constexpr std::size_t kUnboundedDepth = std::numeric_limits<std::size_t>::max();

/// Integer sequence s_0 s_1 s_2 ... recording the strip of every forward iterate.
///
/// Either eventually periodic (preperiod followed by a repeated period) or a
/// finite prefix of an aperiodic sequence. Finite prefixes carry their depth;
/// reading past it throws ErrorKind::InsufficientDepth.
class ExternalAddress {
 public:
  ExternalAddress() = default;

  static ExternalAddress periodic(std::vector<Symbol> preperiod, std::vector<Symbol> period);
  static ExternalAddress prefix(std::vector<Symbol> entries);

  /// Parses "pre:[a,b,...];per:[c,...]" or "seq:[a,b,c,...]".
  static ExternalAddress parse(std::string_view literal);
  std::string to_string() const;

  Symbol entry(std::size_t n) const;
  Symbol operator[](std::size_t n) const { return entry(n); }

  std::size_t depth() const;
  bool has_period() const { return !period_.empty(); }
  const std::vector<Symbol>& preperiod() const { return preperiod_; }
  const std::vector<Symbol>& period() const { return period_; }

  /// First `count` entries; count must not exceed depth().
  std::vector<Symbol> head(std::size_t count) const;

  friend bool operator==(const ExternalAddress&, const ExternalAddress&) = default;

 private:
  std::vector<Symbol> preperiod_;  // for prefixes: all known entries
  std::vector<Symbol> period_;
};

ExternalAddress shift(const ExternalAddress& a, std::size_t k);

struct Overlap {
  bool found = false;
  std::size_t k = 0;
  std::size_t l = 0;
};

/// Searches k, l <= max_shift with shift(a,k) == shift(b,l) on `window`
/// consecutive entries (all entries, for two periodic addresses). Pairs are
/// tried in order of k + l, larger k first. Pairs lacking `window` known
/// entries are skipped.
Overlap overlaps(const ExternalAddress& a, const ExternalAddress& b, std::size_t max_shift,
                 std::size_t window = 16);

struct Periodicity {
  bool found = false;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  bool periodic() const { return found && preperiod == 0; }
};

/// Explicit periods are reduced to the minimal (preperiod, period) and
/// reported directly. Finite prefixes are tested for every preperiod <= max_pre
/// and period <= max_period against all known entries; requires
/// depth >= max_pre + 2 * max_period.
Periodicity is_preperiodic(const ExternalAddress& a, std::size_t max_pre, std::size_t max_period);

/// Operational t_s: 0 for bounded addresses, otherwise the smallest t >= 0
/// (bisection to 1e-9) with |s_n| <= F^n(t) for all n < depth.
Real minimal_potential(const ExternalAddress& a, int degree, std::size_t depth);

/// True when the address is periodic or its known entries show no growth:
/// the largest |s_n| in the second half of the prefix does not exceed the
/// largest in the first half.
bool looks_bounded(const ExternalAddress& a, std::size_t depth);

}  // namespace escort
