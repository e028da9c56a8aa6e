#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "escort/expoly.hpp"
#include "escort/marked.hpp"
#include "escort/types.hpp"

namespace escort {

/// Reduced word in the free group on positive integer labels; -k is the inverse of k.
class FreeWord {
 public:
  FreeWord() = default;
  /// Freely reduces the letters.
  explicit FreeWord(std::vector<int> letters);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  FreeWord inverse() const;
  FreeWord operator*(const FreeWord& other) const;
  bool operator==(const FreeWord&) const = default;

  /// "[+3,-7,+3]".
  std::string to_string() const;
  static FreeWord parse(std::string_view text);

 private:
  std::vector<int> letters_;
};

/// Marked point with its free-group label.
struct LabeledPoint {
  int label = 0;
  Complex position;
  std::vector<Symbol> address;  // known entries of the point's ray, empty if none
};

/// Polyline from the foot, continued by a horizontal ray to the right of the
/// last vertex.
///
/// With an address the tail stands for the far end of that ray: points further
/// right in the same strip sit above or below it by the order of the entries
/// after the first, since the numeric gap underflows there.
struct Leg {
  PointId foot;
  std::vector<Complex> vertices;
  /// Distance from the leg to the other marked points.
  Real clearance = 0;
  std::vector<Symbol> address;
};

/// Potential beyond which legs follow their asymptote instead of the traced ray.
inline constexpr Real kFarPotential = 20;

/// Label of a marked point in words: 1 + its position in ps.points().
int point_label(const PostSingularSet& ps, PointId id);

/// Known entries (at most 32) of the address of the ray through a_ij.
std::vector<Symbol> point_address(const PostSingularSet& ps, PointId id);

/// Every marked point except `skip` with its label and position.
std::vector<LabeledPoint> labeled_points(const PostSingularSet& ps, std::optional<PointId> skip = std::nullopt);

/// Legs along the ray tails of the numeric points, sampled up to
/// min(kFarPotential, half the numeric limit); feet beyond that get a single vertex.
std::vector<Leg> standard_spider(const ExpPolyMap& g, const PostSingularSet& ps, std::size_t samples = 12);

/// Minimal distance from the leg (tail included) to the points.
Real leg_clearance(const Leg& leg, const std::vector<LabeledPoint>& points);

/// Signed crossings of the leg with the downward vertical rays below the
/// points, times the inverse of the crossings of the horizontal ray from the
/// foot, reduced. Left-to-right crossings count positive. Throws
/// ErrorKind::DegenerateCrossing when the leg passes within 1e-12 of a point.
FreeWord leg_word(const std::vector<LabeledPoint>& points, const Leg& leg);

struct WordBound {
  PointId foot;
  std::size_t length = 0;
  Real log_bound = 0;  // log of A^{N_i+1-j} ((N_i+1)!/j!)^4 C, or log C past N_i
  bool pass = false;
};

/// |W_ij| < A^{N_i+1-j} ((N_i+1)!/j!)^4 C for j <= N_i and |W_ij| < C beyond.
std::vector<WordBound> word_length_bound_check(const std::vector<std::pair<PointId, FreeWord>>& words,
                                               const std::vector<int>& N, Real A = 2, Real C = 16);

}  // namespace escort
