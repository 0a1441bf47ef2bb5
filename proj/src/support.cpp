#include "strat/support.hpp"

#include <algorithm>
#include <numeric>

namespace strat {

struct SupportSet::Node {
  enum Kind { kAll, kNone, kResidue, kHalfGeq, kHalfLt, kFinite, kNot, kAnd, kOr } kind;
  i64 c = 0, m = 1;  // residue / half-line parameter
  std::vector<i64> xs;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = SupportSet::Node;

std::shared_ptr<const Node> make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool contains_node(const Node& n, i64 x) {
  switch (n.kind) {
    case Node::kAll: return true;
    case Node::kNone: return false;
    case Node::kResidue: return fp::norm(x - n.c, n.m) == 0;
    case Node::kHalfGeq: return x >= n.c;
    case Node::kHalfLt: return x < n.c;
    case Node::kFinite: return std::binary_search(n.xs.begin(), n.xs.end(), x);
    case Node::kNot: return !contains_node(*n.a, x);
    case Node::kAnd: return contains_node(*n.a, x) && contains_node(*n.b, x);
    case Node::kOr: return contains_node(*n.a, x) || contains_node(*n.b, x);
  }
  return false;
}

// Period after which membership is periodic far from the origin.
i64 period_node(const Node& n) {
  switch (n.kind) {
    case Node::kResidue: return n.m;
    case Node::kNot: return period_node(*n.a);
    case Node::kAnd:
    case Node::kOr: return std::lcm(period_node(*n.a), period_node(*n.b));
    default: return 1;
  }
}

// Beyond this magnitude, membership depends only on x mod period.
i64 threshold_node(const Node& n) {
  switch (n.kind) {
    case Node::kHalfGeq:
    case Node::kHalfLt: return std::max<i64>(1, n.c < 0 ? -n.c : n.c) + 1;
    case Node::kFinite: {
      i64 t = 1;
      for (i64 x : n.xs) t = std::max(t, (x < 0 ? -x : x) + 1);
      return t;
    }
    case Node::kNot: return threshold_node(*n.a);
    case Node::kAnd:
    case Node::kOr: return std::max(threshold_node(*n.a), threshold_node(*n.b));
    default: return 1;
  }
}

}  // namespace

SupportSet SupportSet::all() { return SupportSet(make({Node::kAll})); }
SupportSet SupportSet::none() { return SupportSet(make({Node::kNone})); }

SupportSet SupportSet::residue(i64 c, i64 m) {
  if (m < 1) fail(Errc::validation, "residue class with modulus < 1");
  Node n{Node::kResidue};
  n.c = fp::norm(c, m);
  n.m = m;
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::at_least(i64 a) {
  Node n{Node::kHalfGeq};
  n.c = a;
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::less_than(i64 a) {
  Node n{Node::kHalfLt};
  n.c = a;
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::finite(std::vector<i64> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Node n{Node::kFinite};
  n.xs = std::move(xs);
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::complement() const {
  Node n{Node::kNot};
  n.a = root_;
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::unite(const SupportSet& o) const {
  Node n{Node::kOr};
  n.a = root_;
  n.b = o.root_;
  return SupportSet(make(std::move(n)));
}

SupportSet SupportSet::intersect(const SupportSet& o) const {
  Node n{Node::kAnd};
  n.a = root_;
  n.b = o.root_;
  return SupportSet(make(std::move(n)));
}

bool SupportSet::contains(i64 x) const { return contains_node(*root_, x); }

bool SupportSet::intersects_geq(i64 bound) const {
  i64 t = std::max(bound, threshold_node(*root_));
  for (i64 x = bound; x < t; ++x)
    if (contains(x)) return true;
  i64 per = period_node(*root_);
  for (i64 x = t; x < t + per; ++x)
    if (contains(x)) return true;
  return false;
}

bool SupportSet::intersects_leq(i64 bound) const {
  i64 t = std::min(bound, -threshold_node(*root_));
  for (i64 x = bound; x > t; --x)
    if (contains(x)) return true;
  i64 per = period_node(*root_);
  for (i64 x = t; x > t - per; --x)
    if (contains(x)) return true;
  return false;
}

}  // namespace strat
