#include "sclab/trace.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "sclab/enumerate.hpp"
#include "sclab/parallel.hpp"

namespace sclab {

bool Trace::operator<(const Trace& o) const {
  const std::size_t n = std::min(elems.size(), o.elems.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Elem& a = elems[i];
    const Elem& b = o.elems[i];
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind == Elem::Kind::State && !(a.store == b.store)) return a.store < b.store;
  }
  if (elems.size() != o.elems.size()) return elems.size() < o.elems.size();
  return term < o.term;
}

bool Trace::has_event(Event e) const {
  Elem::Kind wanted;
  switch (e) {
    case Event::H: wanted = Elem::Kind::H; break;
    case Event::Bang: wanted = Elem::Kind::Bang; break;
    case Event::Silent: return false;
  }
  return std::any_of(elems.begin(), elems.end(),
                     [&](const Elem& el) { return el.kind == wanted; });
}

bool Behavior::fuel_limited() const {
  return std::any_of(traces.begin(), traces.end(),
                     [](const Trace& t) { return t.fuel_limited(); });
}

Trace run(Lang lang, const Store& s0, const TermPtr& p, uint32_t fuel, const Universe& u,
          std::vector<std::string>* rules) {
  Trace t;
  t.elems.push_back({Trace::Elem::Kind::State, s0});
  Store s = s0;
  TermPtr cur = p;
  for (uint32_t i = 0; i < fuel; ++i) {
    const StepOutcome out = step(lang, s, cur, u);
    if (rules) rules->push_back(out.rule);
    if (out.event == Event::H) t.elems.push_back({Trace::Elem::Kind::H, {}});
    if (out.event == Event::Bang) t.elems.push_back({Trace::Elem::Kind::Bang, {}});
    t.elems.push_back({Trace::Elem::Kind::State, out.store});
    if (out.terminated()) {
      t.term = Terminator::Tick;
      return t;
    }
    s = out.store;
    cur = out.residual;
  }
  t.term = Terminator::Timeout;
  return t;
}

namespace {

// One-step rows for every store, tabulated once per distinct residual term.
// Walking these tables reproduces run() exactly (same step function) while
// visiting each (term, store) pair once instead of once per initial store.
struct StepRow {
  Store after;
  Event event = Event::Silent;
  TermPtr next;  // null when the step terminated
};

class StepTables {
public:
  StepTables(Lang lang, const StoreSpace& space) : lang_(lang), space_(space) {}

  // Returns nullptr when the reachable residual set is unexpectedly large;
  // callers then fall back to the direct runner.
  const std::vector<StepRow>* get(const TermPtr& t) {
    const auto it = tables_.find(t);
    if (it != tables_.end()) return &it->second;
    if (tables_.size() >= 16384) return nullptr;
    std::vector<StepRow> rows(space_.count());
    const Universe& u = space_.universe();
    for (std::size_t i = 0; i < space_.count(); ++i) {
      const StepOutcome out = step(lang_, space_.at(i), t, u);
      rows[i] = StepRow{out.store, out.event, out.residual};
    }
    return &tables_.emplace(t, std::move(rows)).first->second;
  }

  // Lookup without insertion, safe to call concurrently once discovery is
  // complete.
  const std::vector<StepRow>& at(const TermPtr& t) const { return tables_.find(t)->second; }

private:
  Lang lang_;
  const StoreSpace& space_;
  std::unordered_map<TermPtr, std::vector<StepRow>, TermPtrHash, TermPtrEq> tables_;
};

} // namespace

Behavior beh(Lang lang, const Ctx& c, const TermPtr& p, const StoreSpace& space) {
  if (c.lang != lang) throw std::invalid_argument("context language mismatch");
  const TermPtr whole = plug(c, p);
  const Universe& u = space.universe();
  validate_term(whole, lang, u);

  // Discover the reachable residual tables up front; the walks then run in
  // parallel over read-only data.
  StepTables tables(lang, space);
  bool tabulated = true;
  {
    std::vector<TermPtr> worklist{whole};
    std::unordered_map<TermPtr, bool, TermPtrHash, TermPtrEq> seen;
    seen.emplace(whole, true);
    while (!worklist.empty() && tabulated) {
      const TermPtr cur = worklist.back();
      worklist.pop_back();
      const auto* rows = tables.get(cur);
      if (rows == nullptr) {
        tabulated = false;
        break;
      }
      for (const StepRow& row : *rows) {
        if (row.next && seen.emplace(row.next, true).second) worklist.push_back(row.next);
      }
    }
  }

  Behavior b;
  b.traces.resize(space.count());
  par::for_each_index(space.count(), [&](std::size_t i) {
    if (!tabulated) {
      b.traces[i] = run(lang, space.at(i), whole, u.fuel, u);
      return;
    }
    Trace t;
    t.elems.push_back({Trace::Elem::Kind::State, space.at(i)});
    const TermPtr* cur = &whole;
    std::size_t sidx = i;
    t.term = Terminator::Timeout;
    for (uint32_t fuel = 0; fuel < u.fuel; ++fuel) {
      const StepRow& row = tables.at(*cur)[sidx];
      if (row.event == Event::H) t.elems.push_back({Trace::Elem::Kind::H, {}});
      if (row.event == Event::Bang) t.elems.push_back({Trace::Elem::Kind::Bang, {}});
      t.elems.push_back({Trace::Elem::Kind::State, row.after});
      if (!row.next) {
        t.term = Terminator::Tick;
        break;
      }
      cur = &row.next;
      sidx = space.index_of(row.after);
    }
    b.traces[i] = std::move(t);
  });
  return b;
}

Trace erase_h(const Trace& t) {
  Trace out;
  out.term = t.term;
  for (const auto& el : t.elems) {
    if (el.kind != Trace::Elem::Kind::H) out.elems.push_back(el);
  }
  return out;
}

Behavior erase_h(const Behavior& b) {
  Behavior out;
  out.traces.reserve(b.traces.size());
  for (const auto& t : b.traces) out.traces.push_back(erase_h(t));
  return out;
}

std::vector<std::string> trace_tokens(const Trace& t, const Universe& u) {
  std::vector<std::string> tok;
  for (const auto& el : t.elems) {
    switch (el.kind) {
      case Trace::Elem::Kind::State: tok.push_back(render_store(el.store, u)); break;
      case Trace::Elem::Kind::H: tok.push_back("#H"); break;
      case Trace::Elem::Kind::Bang: tok.push_back("!"); break;
    }
  }
  tok.push_back(t.term == Terminator::Tick ? "OK" : "TIMEOUT");
  return tok;
}

std::string render_trace(const Trace& t, const Universe& u) {
  std::string out;
  for (const auto& tok : trace_tokens(t, u)) {
    if (!out.empty()) out += " ";
    out += tok;
  }
  return out;
}

Trace parse_trace(const std::string& text, const Universe& u) {
  std::istringstream in(text);
  std::string tok;
  Trace t;
  bool terminated = false;
  while (in >> tok) {
    if (terminated) throw ConfigError("trace: tokens after the terminator");
    if (tok == "#H") {
      t.elems.push_back({Trace::Elem::Kind::H, {}});
    } else if (tok == "!") {
      t.elems.push_back({Trace::Elem::Kind::Bang, {}});
    } else if (tok == "OK") {
      t.term = Terminator::Tick;
      terminated = true;
    } else if (tok == "TIMEOUT") {
      t.term = Terminator::Timeout;
      terminated = true;
    } else {
      t.elems.push_back({Trace::Elem::Kind::State, parse_store(tok, u)});
    }
  }
  if (!terminated) throw ConfigError("trace: missing OK/TIMEOUT terminator");
  if (t.elems.empty() || t.elems.front().kind != Trace::Elem::Kind::State)
    throw ConfigError("trace: must start with a state");
  return t;
}

std::string render_behavior(const Behavior& b, const Universe& u) {
  std::string out;
  for (const auto& t : b.traces) {
    out += render_trace(t, u);
    out += "\n";
  }
  return out;
}

std::string encode_trace(const Trace& t) {
  std::string out;
  out.reserve(t.elems.size() * 3 + 1);
  for (const auto& el : t.elems) {
    switch (el.kind) {
      case Trace::Elem::Kind::State:
        out.push_back('\x01');
        for (std::size_t i = 0; i < el.store.size(); ++i) {
          const uint16_t v = el.store.get(i);
          out.push_back(static_cast<char>(v & 0xff));
          out.push_back(static_cast<char>(v >> 8));
        }
        break;
      case Trace::Elem::Kind::H: out.push_back('\x02'); break;
      case Trace::Elem::Kind::Bang: out.push_back('\x03'); break;
    }
  }
  out.push_back(t.term == Terminator::Tick ? '\x04' : '\x05');
  return out;
}

std::string encode_behavior(const Behavior& b) {
  std::string out;
  for (const auto& t : b.traces) {
    const std::string enc = encode_trace(t);
    const uint32_t n = static_cast<uint32_t>(enc.size());
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((n >> shift) & 0xff));
    out += enc;
  }
  return out;
}

Digest digest_bytes(const std::string& bytes) {
  // 128-bit FNV-1a.
  unsigned __int128 h = (static_cast<unsigned __int128>(0x6c62272e07bb0142ull) << 64) |
                        0x62b821756295c58dull;
  const unsigned __int128 prime = (static_cast<unsigned __int128>(0x0000000001000000ull) << 64) |
                                  0x000000000000013bull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= prime;
  }
  return Digest{static_cast<uint64_t>(h >> 64), static_cast<uint64_t>(h)};
}

Digest behavior_digest(const Behavior& b) { return digest_bytes(encode_behavior(b)); }

std::string digest_hex(const Digest& d) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (int i = 15; i >= 0; --i) {
    const uint64_t part = i >= 8 ? d.hi : d.lo;
    const int shift = (i % 8) * 8;
    const uint8_t byte = static_cast<uint8_t>((part >> shift) & 0xff);
    out.push_back(hex[byte >> 4]);
    out.push_back(hex[byte & 0xf]);
  }
  return out;
}

TraceUniverse trace_universe(Lang lang, const Universe& u) {
  const StoreSpace space(u);
  const auto terms = enumerate_terms(u, lang);
  if (terms.size() * space.count() > u.enumeration_cap)
    throw CapExceeded("trace universe enumeration exceeds the configured cap");
  std::vector<std::vector<Trace>> per_term(terms.size());
  par::for_each_index(terms.size(), [&](std::size_t i) {
    per_term[i].reserve(space.count());
    for (std::size_t s = 0; s < space.count(); ++s) {
      per_term[i].push_back(run(lang, space.at(s), terms[i], u.fuel, u));
    }
  });
  TraceUniverse tu;
  tu.lang = lang;
  for (auto& group : per_term)
    for (auto& t : group) tu.abstract_traces.push_back(std::move(t));
  std::sort(tu.abstract_traces.begin(), tu.abstract_traces.end());
  tu.abstract_traces.erase(std::unique(tu.abstract_traces.begin(), tu.abstract_traces.end()),
                           tu.abstract_traces.end());
  tu.observable_traces = galois_alpha(tu.abstract_traces);
  return tu;
}

std::vector<Trace> galois_alpha(const std::vector<Trace>& traces) {
  std::vector<Trace> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(erase_h(t));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Trace> galois_gamma(const std::vector<Trace>& observable, const TraceUniverse& tu) {
  std::vector<Trace> sorted = observable;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Trace> out;
  for (const auto& t : tu.abstract_traces) {
    const Trace erased = erase_h(t);
    if (std::binary_search(sorted.begin(), sorted.end(), erased)) out.push_back(t);
  }
  return out;
}

} // namespace sclab
