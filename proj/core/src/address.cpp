#include "escort/address.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "escort/error.hpp"
#include "escort/potential.hpp"
#include "literal.hpp"

namespace escort {

namespace {

std::vector<Symbol> parse_symbols(std::string_view list) {
  std::vector<Symbol> out;
  for (auto item : detail::split_list(list)) out.push_back(detail::parse_int<Symbol>(item));
  return out;
}

std::string print_symbols(const std::vector<Symbol>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

ExternalAddress ExternalAddress::periodic(std::vector<Symbol> preperiod, std::vector<Symbol> period) {
  if (period.empty()) throw Error(ErrorKind::InvalidArgument, "periodic address needs a nonempty period");
  ExternalAddress a;
  a.preperiod_ = std::move(preperiod);
  a.period_ = std::move(period);
  return a;
}

ExternalAddress ExternalAddress::prefix(std::vector<Symbol> entries) {
  if (entries.empty()) throw Error(ErrorKind::InvalidArgument, "address prefix needs depth >= 1");
  ExternalAddress a;
  a.preperiod_ = std::move(entries);
  return a;
}

ExternalAddress ExternalAddress::parse(std::string_view literal) {
  auto s = detail::trim(literal);
  if (s.starts_with("seq:")) return prefix(parse_symbols(s.substr(4)));
  if (s.starts_with("pre:")) {
    auto semi = s.find(';');
    if (semi == std::string_view::npos) throw Error(ErrorKind::Parse, "expected ';per:[...]'");
    auto rest = detail::trim(s.substr(semi + 1));
    if (!rest.starts_with("per:")) throw Error(ErrorKind::Parse, "expected 'per:' after preperiod");
    auto pre = parse_symbols(s.substr(4, semi - 4));
    auto per = parse_symbols(rest.substr(4));
    if (per.empty()) {
      if (pre.empty()) throw Error(ErrorKind::Parse, "empty address literal");
      return prefix(std::move(pre));
    }
    return periodic(std::move(pre), std::move(per));
  }
  throw Error(ErrorKind::Parse, "unknown address literal '" + std::string(s) + "'");
}

std::string ExternalAddress::to_string() const {
  if (period_.empty()) return "seq:" + print_symbols(preperiod_);
  return "pre:" + print_symbols(preperiod_) + ";per:" + print_symbols(period_);
}

std::size_t ExternalAddress::depth() const {
  return period_.empty() ? preperiod_.size() : kUnboundedDepth;
}

Symbol ExternalAddress::entry(std::size_t n) const {
  if (n < preperiod_.size()) return preperiod_[n];
  if (period_.empty())
    throw Error(ErrorKind::InsufficientDepth,
                "entry " + std::to_string(n) + " beyond depth " + std::to_string(preperiod_.size()));
  return period_[(n - preperiod_.size()) % period_.size()];
}

std::vector<Symbol> ExternalAddress::head(std::size_t count) const {
  std::vector<Symbol> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back(entry(n));
  return out;
}

ExternalAddress shift(const ExternalAddress& a, std::size_t k) {
  if (!a.has_period()) {
    if (k >= a.depth())
      throw Error(ErrorKind::InsufficientDepth,
                  "shift by " + std::to_string(k) + " leaves no entries of depth " + std::to_string(a.depth()));
    return ExternalAddress::prefix({a.preperiod().begin() + static_cast<std::ptrdiff_t>(k), a.preperiod().end()});
  }
  const auto& pre = a.preperiod();
  if (k <= pre.size())
    return ExternalAddress::periodic({pre.begin() + static_cast<std::ptrdiff_t>(k), pre.end()}, a.period());
  std::vector<Symbol> per = a.period();
  std::rotate(per.begin(), per.begin() + static_cast<std::ptrdiff_t>((k - pre.size()) % per.size()), per.end());
  return ExternalAddress::periodic({}, std::move(per));
}

Overlap overlaps(const ExternalAddress& a, const ExternalAddress& b, std::size_t max_shift,
                 std::size_t window) {
  if (a.has_period() && b.has_period()) {
    // Two eventually periodic sequences agree forever once they agree past both
    // preperiods for a common multiple of the periods.
    const std::size_t lcm = std::lcm(a.period().size(), b.period().size());
    window = std::max(window, a.preperiod().size() + b.preperiod().size() + lcm);
  }
  for (std::size_t total = 0; total <= 2 * max_shift; ++total) {
    for (std::size_t k = std::min(total, max_shift) + 1; k-- > 0;) {
      const std::size_t l = total - k;
      if (l > max_shift) break;
      if (k + window > a.depth() || l + window > b.depth()) continue;
      bool equal = true;
      for (std::size_t n = 0; n < window && equal; ++n) equal = a.entry(k + n) == b.entry(l + n);
      if (equal) return {true, k, l};
    }
  }
  return {};
}

Periodicity is_preperiodic(const ExternalAddress& a, std::size_t max_pre, std::size_t max_period) {
  if (a.has_period()) {
    std::vector<Symbol> per = a.period();
    // Minimal period: smallest divisor q of |per| with per invariant under rotation by q.
    for (std::size_t q = 1; q <= per.size(); ++q) {
      if (per.size() % q) continue;
      bool ok = true;
      for (std::size_t i = 0; i < per.size() && ok; ++i) ok = per[i] == per[(i + q) % per.size()];
      if (ok) {
        per.resize(q);
        break;
      }
    }
    std::vector<Symbol> pre = a.preperiod();
    while (!pre.empty() && pre.back() == per.back()) {
      pre.pop_back();
      std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
    }
    return {true, pre.size(), per.size()};
  }
  if (a.depth() < max_pre + 2 * max_period)
    throw Error(ErrorKind::InsufficientDepth,
                "periodicity test needs depth >= " + std::to_string(max_pre + 2 * max_period));
  for (std::size_t pre = 0; pre <= max_pre; ++pre) {
    for (std::size_t q = 1; q <= max_period; ++q) {
      bool ok = true;
      for (std::size_t n = pre; n + q < a.depth() && ok; ++n) ok = a.entry(n) == a.entry(n + q);
      if (ok) return {true, pre, q};
    }
  }
  return {};
}

bool looks_bounded(const ExternalAddress& a, std::size_t depth) {
  if (a.has_period()) return true;
  depth = std::min(depth, a.depth());
  const std::size_t half = (depth + 1) / 2;
  Symbol first = 0, second = 0;
  for (std::size_t n = 0; n < depth; ++n) {
    Symbol m = a.entry(n) < 0 ? -a.entry(n) : a.entry(n);
    (n < half ? first : second) = std::max(n < half ? first : second, m);
  }
  return second <= first;
}

namespace {

// |s_n| <= F^n(t) for all n < depth. F^n(t) increases with n for t > 0, so the
// scan stops once the orbit passes the largest entry.
bool dominates(const ExternalAddress& a, int degree, std::size_t depth, Real t, Real largest) {
  Real v = t;
  for (std::size_t n = 0; n < depth; ++n) {
    const Real s = std::fabs(static_cast<Real>(a.entry(n)));
    if (s > v) return false;
    if (v > largest) return true;
    v = growth(v, degree);
  }
  return true;
}

}  // namespace

Real minimal_potential(const ExternalAddress& a, int degree, std::size_t depth) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (looks_bounded(a, depth)) return 0;
  depth = std::min(depth, a.depth());
  Real largest = 0;
  for (std::size_t n = 0; n < depth; ++n) largest = std::max(largest, std::fabs(static_cast<Real>(a.entry(n))));
  Real lo = 0, hi = 1;
  while (!dominates(a, degree, depth, hi, largest)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1e-10L) {
    const Real mid = (lo + hi) / 2;
    (dominates(a, degree, depth, mid, largest) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace escort
