#ifndef STRAT_RANK1_HPP
#define STRAT_RANK1_HPP

#include "strat/tower.hpp"

namespace strat {

// Class of a rank-1 tower in Z_p/Z, represented by the exact rational
// normal form in [0, 1).
struct Rank1Class {
  PExp alpha;
};

// O(alpha): the monomial tower (t^{digit(alpha,n) p^n})_{n<depth}.
Tower make_oalpha(const PExp& alpha, i64 p, i64 depth, RingTag ring = RingTag::gm,
                  i64 prec = Series::kExact);

// Exact class value of a rank-1 tower before reduction mod Z: the sum
// sum_{n<N} a_n p^n plus the twist tail contribution.
PExp classify_rank1_value(const Tower& t);

// Class in Z_p/Z.  Over discinf the inclusion flips the sign (the local
// coordinate at infinity is t^{-1}).
Rank1Class classify_rank1(const Tower& t);

// Per-diagonal-entry class values for D/B towers.
std::vector<PExp> diagonal_class_values(const Tower& t);

Rank1Class flip_side(const Rank1Class& c);

// Gauge witness from a rank-1 tower to the canonical monomial tower of its
// class (requires the twist in [0,1) normal form; see canonical_diagonal in
// special.hpp for the matrix version).
}  // namespace strat

#endif
