#pragma once

#include "sclab/config.hpp"
#include "sclab/text.hpp"

namespace sclab::test {

// Two variables, three values each (nine stores), short fuel: big enough
// for interesting programs, small enough to exhaust everywhere.
inline Universe tiny_universe() {
  Universe u;
  u.vars = {{"h", Level::High}, {"l", Level::Low}};
  u.vmax = 2;
  u.fuel = 8;
  u.term_depth = 3;
  u.ctx_depth = 2;
  u.literal_pool = {0, 1, 2};
  u.validate();
  return u;
}

inline Store mk_store(const Universe& u, uint16_t h, uint16_t l) {
  Store s(u.var_count());
  s.set(u.var_index("h"), h);
  s.set(u.var_index("l"), l);
  return s;
}

inline TermPtr src(const Universe& u, const std::string& text) {
  return parse_term(text, Lang::Source, u);
}
inline TermPtr tgt(const Universe& u, const std::string& text) {
  return parse_term(text, Lang::Target, u);
}

} // namespace sclab::test
