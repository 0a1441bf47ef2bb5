#ifndef STRAT_TOWER_HPP
#define STRAT_TOWER_HPP

#include <map>
#include <utility>
#include <vector>

#include "strat/matrix.hpp"

namespace strat {

enum class Group { GL, B, U, D };

const char* group_name(Group g);
Group group_from_name(const std::string& s);

struct RunConfig {
  i64 max_depth = 32;   // stabilization bound for digit recursions
  i64 precision = 40;   // default disc precision
  i64 window = 4;       // oracle search window
  i64 terms = 3;        // oracle per-entry term bound
  i64 depth = 8;        // default construction depth
};

// Frobenius-descent cocycle tower (sigma_n)_{n<N} together with a tail
// convention that pins down the levels n >= N:
//
//   sigma_n = diag(t^{digit(twist_i, n) p^n}) + sum_k  c_k t^{e_k p^n} E_{i_k j_k}
//
// The diagonal part is the standard diagonal-twist tail; the optional
// off-diagonal self-similar terms (entry_tails) encode infinite unipotent
// parts such as Artin-Schreier towers, which no finite-depth tower with a
// purely diagonal tail can represent (the truncated limit of any finite
// system is trivial).
struct TailTerm {
  i64 c;  // coefficient in F_p
  i64 e;  // exponent multiplier: the term is c * t^{e p^n}
};

struct Tower {
  i64 p = 2;
  RingTag ring = RingTag::gm;
  Group group = Group::GL;
  i64 rank = 1;
  i64 depth = 0;
  i64 prec = Series::kExact;  // for disc rings
  std::vector<Mat> levels;    // depth matrices, levels[n] = sigma_n
  std::vector<PExp> twist;    // rank entries
  std::map<std::pair<i64, i64>, std::vector<TailTerm>> entry_tails;

  // sigma_n with the tail convention applied for n >= depth.
  Mat sigma(i64 n) const;

  bool has_entry_tails() const { return !entry_tails.empty(); }

  void validate() const;
};

// Gauge witness (psi_n)_{n<=M}; psi_n = identity for n > M.  Orientation:
// applying psi to T produces sigma'_n = psi_n sigma_n psi_{n+1}^{-1}.
struct GaugeWitness {
  i64 p = 2;
  RingTag ring = RingTag::gm;
  Group group = Group::GL;
  i64 rank = 1;
  i64 prec = Series::kExact;
  std::vector<Mat> psis;

  Mat psi(i64 n) const;
  i64 size() const { return (i64)psis.size(); }

  static GaugeWitness identity_like(const Tower& t);
  GaugeWitness inverse() const;
  // Composition: (a.compose(b))_n = a_n * b_n, i.e. "apply b, then a".
  GaugeWitness compose(const GaugeWitness& o) const;
};

Tower gauge_apply(const Tower& t, const GaugeWitness& w);
bool verify_witness(const Tower& t, const Tower& t2, const GaugeWitness& w, i64 window = Series::kExact);

// Conjugation by the diagonal digit monomials of gamma at each level:
// entry (i,j) of sigma_n is multiplied by t^{(digit(gamma_j,n)-digit(gamma_i,n)) p^n}.
Tower twist_transition(const Tower& t, const std::vector<PExp>& gamma);

Tower tensor(const Tower& a, const Tower& b);
Tower direct_sum(const Tower& a, const Tower& b);
Tower dual(const Tower& a);

// Reinterpret a gm tower over a disc at precision P.
Tower restrict_tower(const Tower& t, RingTag side, i64 prec);

// Exhaustive gauge search over a window (gm towers only): enumerates psi_0
// within the window/term bounds, propagates psi_{n+1} = sigma'_n^{-1} psi_n
// sigma_n, and accepts when the propagated witness stabilizes past both
// depths.  Returns the witness if found.
std::optional<GaugeWitness> oracle_equivalent(const Tower& a, const Tower& b, const RunConfig& cfg);

}  // namespace strat

#endif
