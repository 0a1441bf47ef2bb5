#ifndef STRAT_SPECIAL_HPP
#define STRAT_SPECIAL_HPP

#include "strat/rank1.hpp"
#include "strat/unipotent.hpp"

namespace strat {

// Gauge a triangular tower so that every diagonal entry is the exact digit
// monomial of its rank-1 class.  Requires the twists in [0,1) normal form
// (otherwise the digit streams of the data and of the class targets differ
// at infinitely many levels and no finite witness exists).
struct CanonResult {
  Tower tower;
  GaugeWitness witness;  // tower == gauge_apply(input, witness)
};
CanonResult canonical_diagonal(const Tower& t, const RunConfig& cfg);

// Entry (i,j) of a canonical triangular tower as a twisted G_a class.
//
// Dividing by the column diagonal, x_n = b_n t^{-d_j(n) p^n}, turns the
// gauge action into a twisted system whose multiplier is the raw digit
// difference d_i(n) - d_j(n).  That sequence is congruent to the digits of
// tau = class(twist_i - twist_j) only up to carries, and the triviality
// criteria are sound only for genuine digit multipliers, so the class is
// rebased by the bounded carry sequence u_n (X_n = x_n t^{u_n p^n}) that
// makes the multiplier exactly digit(tau, n).
struct EntryData {
  UnipClass cls;       // rebased class X, exact data
  MultiplierSeq beta;  // digits of cls.twist
  std::vector<i64> u;  // u_0 .. u_{K-1}
  i64 u_tail = 0;
  PExp col_twist;      // twist of the column (for mapping back)
  i64 row = 0, col = 0;

  i64 u_at(i64 n) const { return n < (i64)u.size() ? u[n] : u_tail; }
  // Matrix entry at level n from a class level: b_n = X_n t^{(d_j(n)-u_n) p^n}.
  Series tower_entry(const Series& x, i64 n, i64 p) const;
  // Unipotent gauge entry from a machinery witness series: f_n = -W_n t^{-u_n p^n}.
  Series gauge_entry(const Series& w, i64 n, i64 p) const;
};
EntryData extract_entry(const Tower& t, i64 i, i64 j);

struct SplitResult {
  bool split = false;
  GaugeWitness witness;   // when split: diagonal == gauge_apply(input, witness)
  Tower diagonal;
  std::pair<i64, i64> entry{-1, -1};  // offending entry when not split
  UnipClass certificate;              // its normalized class
  std::map<i64, i64> offending;       // tail terms violating the criterion
};
SplitResult is_diagonal_split(const Tower& t, const RunConfig& cfg);

struct SpecialReport {
  bool special = false;
  std::string reason;
};
// side: the disc at which regular-singularity is tested (discinf for "at
// infinity", disc0 for "at zero").  The tower must live over gm.
SpecialReport is_special(const Tower& t, RingTag side, const RunConfig& cfg);

// Local-to-global lift: given a triangular tower over disc0, produce a gm
// tower whose disc0 restriction is gauge-equivalent to the input (witness
// emitted) and which splits diagonally at discinf.
struct LiftResult {
  Tower lifted;  // over gm
  GaugeWitness witness;  // restrict(lifted) == gauge_apply(input, witness) (to precision)
};
LiftResult lift_triangular(const Tower& local, const RunConfig& cfg);

// Reinterpret a verified disc0 witness between restrictions of two gm towers
// as an exact gm witness.  Every entry must be a Laurent polynomial within
// the precision window (no mass at the boundary); the result is re-verified
// exactly over gm.
GaugeWitness transfer_local_witness(const Tower& a, const Tower& b, const GaugeWitness& w,
                                    const RunConfig& cfg);

// Glue a triangular tower prescribed at 0 with one prescribed at infinity
// (equal diagonal classes) into a gm tower restricting to both.
struct GlueTowers {
  Tower glued;  // over gm
  GaugeWitness witness0;    // restrict(glued, disc0) == gauge_apply(a, witness0)
  GaugeWitness witnessinf;  // restrict(glued, discinf) == gauge_apply(b, witnessinf)
};
GlueTowers glue_triangular(const Tower& a, const Tower& b, const RunConfig& cfg);

}  // namespace strat

#endif
