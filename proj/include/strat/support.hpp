#ifndef STRAT_SUPPORT_HPP
#define STRAT_SUPPORT_HPP

#include <memory>
#include <vector>

#include "strat/arith.hpp"

namespace strat {

// Subsets of Z closed under the boolean combinations we need: finite sets,
// residue classes c + mZ, half-lines, complement, union, intersection.
// Membership is exact, and membership on a half-line is decidable because
// every such set is eventually periodic in both directions.
class SupportSet {
 public:
  static SupportSet all();
  static SupportSet none();
  static SupportSet residue(i64 c, i64 m);  // c + mZ, m >= 1
  static SupportSet at_least(i64 a);        // { x : x >= a }
  static SupportSet less_than(i64 a);       // { x : x < a }
  static SupportSet finite(std::vector<i64> xs);

  SupportSet complement() const;
  SupportSet unite(const SupportSet& o) const;
  SupportSet intersect(const SupportSet& o) const;
  SupportSet minus(const SupportSet& o) const { return intersect(o.complement()); }

  bool contains(i64 x) const;

  // Does the set meet { x : x >= bound } (resp. { x : x <= bound })?
  bool intersects_geq(i64 bound) const;
  bool intersects_leq(i64 bound) const;

  struct Node;  // implementation detail, defined in support.cpp

 private:
  std::shared_ptr<const Node> root_;
  explicit SupportSet(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
};

}  // namespace strat

#endif
