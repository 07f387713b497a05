#include "sclab/hyperprop.hpp"

#include <algorithm>

#include "sclab/enumerate.hpp"
#include "sclab/text.hpp"

namespace sclab {

bool low_eq(const Store& a, const Store& b, const Universe& u) {
  if (a.size() != u.var_count() || b.size() != u.var_count())
    throw std::invalid_argument("low_eq: stores from a different universe");
  for (std::size_t i = 0; i < u.var_count(); ++i) {
    if (u.is_high(i)) continue;
    if (a.get(i) != b.get(i)) return false;
  }
  return true;
}

bool low_eq(const Trace& a, const Trace& b, const Universe& u) {
  if (a.term != b.term) return false;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto skip_h = [](const Trace& t, std::size_t& k) {
    while (k < t.elems.size() && t.elems[k].kind == Trace::Elem::Kind::H) ++k;
  };
  while (true) {
    skip_h(a, i);
    skip_h(b, j);
    const bool ea = i >= a.elems.size();
    const bool eb = j >= b.elems.size();
    if (ea || eb) return ea && eb;
    const auto& x = a.elems[i++];
    const auto& y = b.elems[j++];
    if (x.kind != y.kind) return false;
    if (x.kind == Trace::Elem::Kind::State && !low_eq(x.store, y.store, u)) return false;
  }
}

ExplicitSet ExplicitSet::from_behaviors(const std::vector<Behavior>& bs) {
  ExplicitSet s;
  for (const auto& b : bs) s.encoded.push_back(encode_behavior(b));
  std::sort(s.encoded.begin(), s.encoded.end());
  s.encoded.erase(std::unique(s.encoded.begin(), s.encoded.end()), s.encoded.end());
  return s;
}

void ExplicitSet::insert(const Behavior& b) {
  std::string enc = encode_behavior(b);
  const auto it = std::lower_bound(encoded.begin(), encoded.end(), enc);
  if (it == encoded.end() || *it != enc) encoded.insert(it, std::move(enc));
}

bool ExplicitSet::contains(const Behavior& b) const {
  return std::binary_search(encoded.begin(), encoded.end(), encode_behavior(b));
}

std::string Hyperproperty::name() const {
  switch (kind) {
    case Kind::NI: return "ni";
    case Kind::Top: return "top";
    case Kind::NeverEvent: return never == Event::H ? "never:H" : "never:!";
    case Kind::Explicit: return "explicit";
  }
  return "?";
}

namespace {

// Canonical low-observation key of a trace: the H-erased sequence projected
// to low variables. Two traces are low-equivalent iff their keys match.
std::string low_key(const Trace& t, const Universe& u) {
  std::string out;
  for (const auto& el : t.elems) {
    switch (el.kind) {
      case Trace::Elem::Kind::H: break;
      case Trace::Elem::Kind::Bang: out.push_back('!'); break;
      case Trace::Elem::Kind::State:
        out.push_back('s');
        for (std::size_t i = 0; i < u.var_count(); ++i) {
          if (u.is_high(i)) continue;
          const uint16_t v = el.store.get(i);
          out.push_back(static_cast<char>(v & 0xff));
          out.push_back(static_cast<char>(v >> 8));
        }
        break;
    }
  }
  out.push_back(t.term == Terminator::Tick ? 'k' : 'x');
  return out;
}

std::string low_initial_key(const Trace& t, const Universe& u) {
  std::string out;
  const Store& s = t.initial();
  for (std::size_t i = 0; i < u.var_count(); ++i) {
    if (u.is_high(i)) continue;
    const uint16_t v = s.get(i);
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
  }
  return out;
}

} // namespace

std::optional<std::pair<std::size_t, std::size_t>> ni_violation(const Behavior& b,
                                                                const Universe& u) {
  // Group traces by the low projection of their initial store; within a
  // group every trace must be low-equivalent, so it suffices to compare
  // each against the group's first member.
  std::vector<std::pair<std::string, std::size_t>> groups;  // initial key -> first index
  for (std::size_t i = 0; i < b.traces.size(); ++i) {
    const std::string key = low_initial_key(b.traces[i], u);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.emplace_back(key, i);
      continue;
    }
    if (low_key(b.traces[it->second], u) != low_key(b.traces[i], u)) {
      return std::make_pair(it->second, i);
    }
  }
  return std::nullopt;
}

bool sat(const Behavior& b, const Hyperproperty& h, const Universe& u) {
  switch (h.kind) {
    case Hyperproperty::Kind::Top: return true;
    case Hyperproperty::Kind::NI: return !ni_violation(b, u).has_value();
    case Hyperproperty::Kind::NeverEvent:
      return std::none_of(b.traces.begin(), b.traces.end(),
                          [&](const Trace& t) { return t.has_event(h.never); });
    case Hyperproperty::Kind::Explicit: return h.members && h.members->contains(b);
  }
  return false;
}

namespace {

void add_ni_witness(Witness& w, const Behavior& b, std::pair<std::size_t, std::size_t> pair,
                    const Universe& u) {
  w.add("store1", render_store(b.traces[pair.first].initial(), u));
  w.add("store2", render_store(b.traces[pair.second].initial(), u));
  w.add("trace1", render_trace(b.traces[pair.first], u));
  w.add("trace2", render_trace(b.traces[pair.second], u));
}

} // namespace

Verdict robust_sat(Lang lang, const TermPtr& p, const Hyperproperty& h, const Universe& u) {
  validate_term(p, lang, u);
  const StoreSpace space(u);
  Verdict v;
  for (const Ctx& c : enumerate_ctxs(u, lang)) {
    const Behavior b = beh(lang, c, p, space);
    v.fuel_limited = v.fuel_limited || b.fuel_limited();
    if (sat(b, h, u)) continue;
    v.holds = false;
    Witness w;
    w.add("context", render_ctx(c));
    w.add("program", render_term(p));
    if (h.kind == Hyperproperty::Kind::NI) {
      if (auto pair = ni_violation(b, u)) add_ni_witness(w, b, *pair, u);
    }
    v.witness = std::move(w);
    return v;
  }
  return v;
}

Verdict ctx_equiv(Lang lang, const TermPtr& p1, const TermPtr& p2, const Universe& u) {
  validate_term(p1, lang, u);
  validate_term(p2, lang, u);
  const StoreSpace space(u);
  Verdict v;
  for (const Ctx& c : enumerate_ctxs(u, lang)) {
    const Behavior b1 = beh(lang, c, p1, space);
    const Behavior b2 = beh(lang, c, p2, space);
    v.fuel_limited = v.fuel_limited || b1.fuel_limited() || b2.fuel_limited();
    if (b1 == b2) continue;
    v.holds = false;
    Witness w;
    w.add("context", render_ctx(c));
    w.add("program1", render_term(p1));
    w.add("program2", render_term(p2));
    for (std::size_t i = 0; i < b1.traces.size(); ++i) {
      if (b1.traces[i] == b2.traces[i]) continue;
      w.add("store", render_store(space.at(i), u));
      w.add("trace1", render_trace(b1.traces[i], u));
      w.add("trace2", render_trace(b2.traces[i], u));
      break;
    }
    v.witness = std::move(w);
    return v;
  }
  return v;
}

} // namespace sclab
