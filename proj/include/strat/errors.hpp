#ifndef STRAT_ERRORS_HPP
#define STRAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace strat {

// Error categories.  The numeric values double as CLI exit codes and as
// C-API status codes, so keep them stable.
enum class Errc : int {
  ok = 0,
  usage = 1,
  parse = 2,       // malformed input
  depth = 3,       // precision or depth exhausted before an answer stabilized
  validation = 4,  // structurally well-formed input violating an invariant
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace strat

#endif
