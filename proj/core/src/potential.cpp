#include "escort/potential.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "escort/error.hpp"
#include "literal.hpp"

namespace escort {

namespace {

// Below ~1e-8 the d = 1 climb to the window needs ~2/t steps.
constexpr long kMaxNormalizeSteps = 200'000'000;

Real window_top(int degree) { return growth(1, degree); }

}  // namespace

PotentialRep PotentialRep::from_raw(Real value, int degree) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (!(value >= 0) || std::isinf(value))
    throw Error(ErrorKind::InvalidArgument, "potential must be finite and nonnegative");
  PotentialRep rep;
  rep.degree_ = degree;
  if (value == 0) return rep;
  rep.zero_ = false;
  rep.level_ = 0;
  const Real top = window_top(degree);
  long steps = 0;
  while (value >= top) {
    value = growth_inverse(value, degree);
    ++rep.level_;
    if (value < 1) value = 1;
  }
  while (value < 1) {
    value = growth(value, degree);
    --rep.level_;
    if (value >= top) value = std::nextafter(top, Real(0));
    if (++steps > kMaxNormalizeSteps)
      throw Error(ErrorKind::OutOfRange, "potential too close to 0 for leveled form");
  }
  rep.base_ = value;
  return rep;
}

PotentialRep PotentialRep::from_level(int level, Real base, int degree) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (!(base >= 1) || !(base < window_top(degree)))
    throw Error(ErrorKind::InvalidArgument, "base outside the canonical window [1, F(1))");
  PotentialRep rep;
  rep.degree_ = degree;
  rep.zero_ = false;
  rep.level_ = level;
  rep.base_ = base;
  return rep;
}

PotentialRep PotentialRep::parse(std::string_view literal, int degree) {
  auto s = detail::trim(literal);
  if (s.starts_with("raw:")) return from_raw(detail::parse_real(s.substr(4)), degree);
  if (s.starts_with("lvl:")) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos)
      throw Error(ErrorKind::Parse, "expected 'lvl:<int>,base:<float>'");
    auto rest = detail::trim(s.substr(comma + 1));
    if (!rest.starts_with("base:")) throw Error(ErrorKind::Parse, "expected 'base:' after level");
    int level = detail::parse_int<int>(s.substr(4, comma - 4));
    return from_level(level, detail::parse_real(rest.substr(5)), degree);
  }
  throw Error(ErrorKind::Parse, "unknown potential literal '" + std::string(s) + "'");
}

std::string PotentialRep::to_string() const {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  if (zero_) {
    os << "raw:0";
  } else {
    os << "lvl:" << level_ << ",base:" << base_;
  }
  return os.str();
}

bool PotentialRep::raw_representable() const {
  if (zero_ || level_ <= 0) return true;
  const Real limit = representable_limit(degree_);
  Real v = base_;
  for (int i = 0; i < level_; ++i) {
    if (v > limit) return false;
    v = growth(v, degree_);
  }
  return v <= limit;
}

Real PotentialRep::raw() const {
  if (!raw_representable())
    throw Error(ErrorKind::OutOfRange, "potential " + to_string() + " exceeds the numeric range");
  return extended_value();
}

Real PotentialRep::extended_value() const {
  if (zero_) return 0;
  Real v = base_;
  if (level_ >= 0) {
    for (int i = 0; i < level_ && std::isfinite(v); ++i) v = growth(v, degree_);
  } else {
    for (int i = 0; i < -level_; ++i) v = growth_inverse(v, degree_);
  }
  return v;
}

bool PotentialRep::same_as(const PotentialRep& other, Real tol) const {
  if (zero_ || other.zero_) return zero_ == other.zero_;
  return level_ == other.level_ && std::fabs(base_ - other.base_) <= tol;
}

std::strong_ordering PotentialRep::operator<=>(const PotentialRep& other) const {
  if (zero_ || other.zero_) return !zero_ <=> !other.zero_;
  if (level_ != other.level_) return level_ <=> other.level_;
  if (base_ < other.base_) return std::strong_ordering::less;
  if (base_ > other.base_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

PotentialRep grow(const PotentialRep& t, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "grow needs n >= 0");
  if (t.is_zero()) return t;
  return PotentialRep::from_level(t.level() + n, t.base(), t.degree());
}

PotentialRep shrink(const PotentialRep& t) {
  if (t.is_zero()) throw Error(ErrorKind::InvalidArgument, "shrink of a nonpositive potential");
  return PotentialRep::from_level(t.level() - 1, t.base(), t.degree());
}

PotentialGrid::PotentialGrid(std::vector<Real> potentials) {
  std::sort(potentials.begin(), potentials.end());
  for (Real t : potentials) {
    if (!potentials_.empty() && t - potentials_.back() <= 1e-12L * std::max<Real>(1, t)) continue;
    potentials_.push_back(t);
  }
  for (std::size_t i = 0; i + 1 < potentials_.size(); ++i)
    midpoints_.push_back((potentials_[i] + potentials_[i + 1]) / 2);
}

std::optional<std::size_t> PotentialGrid::midpoint_index(Real rho) const {
  for (std::size_t i = 0; i < midpoints_.size(); ++i)
    if (std::fabs(midpoints_[i] - rho) <= 1e-12L * std::max<Real>(1, rho)) return i;
  return std::nullopt;
}

}  // namespace escort
