#include "escort/spider.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "escort/error.hpp"
#include "escort/rays.hpp"
#include "literal.hpp"

namespace escort {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kDegenerate = 1e-12L;

Real segment_distance(Complex a, Complex b, Complex q) {
  const Complex ab = b - a;
  const Real len2 = std::norm(ab);
  if (len2 == 0) return std::abs(q - a);
  const Real s = std::clamp<Real>(((q - a) * std::conj(ab)).real() / len2, 0, 1);
  return std::abs(a + s * ab - q);
}

Real tail_distance(Complex start, Complex q) {
  if (q.real() <= start.real()) return std::abs(q - start);
  return std::fabs(q.imag() - start.imag());
}

struct Crossing {
  Real along;
  int letter;
};

// Crossings of segment a -> b with the downward vertical ray below each point.
void segment_crossings(Complex a, Complex b, const std::vector<LabeledPoint>& points, Real offset,
                       std::vector<Crossing>& out) {
  for (const auto& p : points) {
    const Real x = p.position.real();
    const bool left_a = a.real() < x;
    const bool left_b = b.real() < x;
    if (left_a == left_b) continue;
    const Real s = (x - a.real()) / (b.real() - a.real());
    const Real y = a.imag() + s * (b.imag() - a.imag());
    if (y < p.position.imag()) out.push_back({offset + s, left_a ? p.label : -p.label});
  }
}

// Vertical order of two far rays in one strip: -1 when a is below b, 0 when the
// known entries do not decide.
int far_order(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 1; k < n; ++k)
    if (a[k] != b[k]) return a[k] < b[k] ? -1 : 1;
  return 0;
}

bool far_in_strip(const std::vector<Symbol>& ray, Complex start, const LabeledPoint& p) {
  return !ray.empty() && !p.address.empty() && p.address[0] == ray[0] && p.position.real() > start.real();
}

// Horizontal ray to the right of `start`; `ray` is the address it stands for, if any.
void tail_crossings(Complex start, const std::vector<LabeledPoint>& points, Real offset,
                    const std::vector<Symbol>& ray, std::vector<Crossing>& out) {
  for (const auto& p : points) {
    if (!(start.real() < p.position.real())) continue;
    bool below = start.imag() < p.position.imag();
    if (far_in_strip(ray, start, p)) {
      const int order = far_order(ray, p.address);
      if (order == 0) throw Error(ErrorKind::DegenerateCrossing, "leg and point share every known address entry");
      below = order < 0;
    }
    if (below) out.push_back({offset + (p.position.real() - start.real()), p.label});
  }
}

std::vector<int> letters_of(std::vector<Crossing> c) {
  std::stable_sort(c.begin(), c.end(), [](const Crossing& x, const Crossing& y) { return x.along < y.along; });
  std::vector<int> out;
  for (const auto& x : c) out.push_back(x.letter);
  return out;
}

}  // namespace

FreeWord::FreeWord(std::vector<int> letters) {
  for (int x : letters) {
    if (x == 0) throw Error(ErrorKind::InvalidArgument, "free-group letters must be nonzero");
    if (!letters_.empty() && letters_.back() == -x) {
      letters_.pop_back();
    } else {
      letters_.push_back(x);
    }
  }
}

FreeWord FreeWord::inverse() const {
  std::vector<int> out(letters_.rbegin(), letters_.rend());
  for (int& x : out) x = -x;
  return FreeWord(std::move(out));
}

FreeWord FreeWord::operator*(const FreeWord& other) const {
  std::vector<int> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return FreeWord(std::move(out));
}

std::string FreeWord::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < letters_.size(); ++i) os << (i ? "," : "") << (letters_[i] > 0 ? "+" : "") << letters_[i];
  os << ']';
  return os.str();
}

FreeWord FreeWord::parse(std::string_view text) {
  std::vector<int> out;
  for (auto item : detail::split_list(text)) {
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    out.push_back(detail::parse_int<int>(item));
  }
  return FreeWord(std::move(out));
}

int point_label(const PostSingularSet& ps, PointId id) {
  ps.at(id);
  return id.orbit * ps.stored_depth() + id.step + 1;
}

std::vector<Symbol> point_address(const PostSingularSet& ps, PointId id) {
  const auto a = shift(ps.address(id.orbit), static_cast<std::size_t>(id.step));
  return a.head(std::min<std::size_t>(a.depth(), 32));
}

std::vector<LabeledPoint> labeled_points(const PostSingularSet& ps, std::optional<PointId> skip) {
  std::vector<LabeledPoint> out;
  for (const auto& p : ps.points()) {
    if (skip && p.id == *skip) continue;
    const Complex z = p.position();
    if (!std::isfinite(z.real())) continue;
    out.push_back({point_label(ps, p.id), z, point_address(ps, p.id)});
  }
  return out;
}

Real leg_clearance(const Leg& leg, const std::vector<LabeledPoint>& points) {
  Real m = kInf;
  for (const auto& p : points) {
    for (std::size_t i = 0; i + 1 < leg.vertices.size(); ++i)
      m = std::min(m, segment_distance(leg.vertices[i], leg.vertices[i + 1], p.position));
    if (far_in_strip(leg.address, leg.vertices.back(), p)) {
      if (far_order(leg.address, p.address) == 0) m = 0;
    } else {
      m = std::min(m, tail_distance(leg.vertices.back(), p.position));
    }
  }
  return m;
}

std::vector<Leg> standard_spider(const ExpPolyMap& g, const PostSingularSet& ps, std::size_t samples) {
  const int d = ps.degree();
  const Real top = std::min(kFarPotential, representable_limit(d) / 2);
  std::vector<Leg> legs;
  for (const auto& p : ps.points()) {
    Leg leg;
    leg.foot = p.id;
    const Complex foot = p.position();
    if (!std::isfinite(foot.real())) continue;
    leg.vertices.push_back(foot);
    leg.address = point_address(ps, p.id);
    if (!p.symbolic() && p.potential.extended_value() < top) {
      const auto a = shift(ps.address(p.id.orbit), static_cast<std::size_t>(p.id.step));
      const auto tail = ray_polyline(g, a, p.potential, PotentialRep::from_raw(top, d), samples,
                                     std::min<std::size_t>(8, a.depth() - 1));
      for (std::size_t k = 1; k < tail.size(); ++k) leg.vertices.push_back(*tail[k].coordinate);
    }
    leg.clearance = leg_clearance(leg, labeled_points(ps, p.id));
    legs.push_back(std::move(leg));
  }
  return legs;
}

FreeWord leg_word(const std::vector<LabeledPoint>& points, const Leg& leg) {
  if (leg.vertices.empty()) throw Error(ErrorKind::InvalidArgument, "leg without vertices");
  if (leg_clearance(leg, points) < kDegenerate)
    throw Error(ErrorKind::DegenerateCrossing, "leg passes within 1e-12 of a marked point");
  std::vector<Crossing> along;
  for (std::size_t i = 0; i + 1 < leg.vertices.size(); ++i)
    segment_crossings(leg.vertices[i], leg.vertices[i + 1], points, static_cast<Real>(i), along);
  tail_crossings(leg.vertices.back(), points, static_cast<Real>(leg.vertices.size()), leg.address, along);
  // The straight reference ray from the foot is only the asymptote when the leg has no body.
  std::vector<Crossing> straight;
  tail_crossings(leg.vertices.front(), points, 0, leg.vertices.size() == 1 ? leg.address : std::vector<Symbol>{},
                 straight);
  return FreeWord(letters_of(along)) * FreeWord(letters_of(straight)).inverse();
}

std::vector<WordBound> word_length_bound_check(const std::vector<std::pair<PointId, FreeWord>>& words,
                                               const std::vector<int>& N, Real A, Real C) {
  if (!(A > 0) || !(C > 0)) throw Error(ErrorKind::InvalidArgument, "constants A and C must be positive");
  std::vector<WordBound> out;
  for (const auto& [id, w] : words) {
    WordBound wb;
    wb.foot = id;
    wb.length = w.length();
    const int Ni = N.at(static_cast<std::size_t>(id.orbit));
    const int j = id.step;
    if (j <= Ni) {
      wb.log_bound = (Ni + 1 - j) * std::log(A) + 4 * (std::lgamma(Real(Ni + 2)) - std::lgamma(Real(j + 1))) + std::log(C);
    } else {
      wb.log_bound = std::log(C);
    }
    wb.pass = wb.length == 0 || std::log(static_cast<Real>(wb.length)) < wb.log_bound;
    out.push_back(wb);
  }
  return out;
}

}  // namespace escort
