#include "sclab/universe.hpp"

#include <algorithm>
#include <set>

namespace sclab {

void Universe::validate() const {
  if (vars.empty()) throw ConfigError("universe: vars must be nonempty");
  if (vars.size() > Store::kMaxVars)
    throw ConfigError("universe: at most " + std::to_string(Store::kMaxVars) +
                      " variables are supported");
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (v.name.empty()) throw ConfigError("universe: empty variable name");
    for (char c : v.name) {
      if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
            (std::isdigit(static_cast<unsigned char>(c)) && &c != &v.name[0])))
        throw ConfigError("universe: invalid variable name '" + v.name + "'");
    }
    if (!seen.insert(v.name).second)
      throw ConfigError("universe: duplicate variable '" + v.name + "'");
  }
  if (vmax < 1) throw ConfigError("universe: vmax must be >= 1");
  if (vmax > 65534) throw ConfigError("universe: vmax must be <= 65534");
  if (fuel < 1) throw ConfigError("universe: fuel must be >= 1");
  for (uint32_t lit : literal_pool) {
    if (lit > vmax)
      throw ConfigError("universe: literal " + std::to_string(lit) + " exceeds vmax");
  }
  if (store_count() > enumeration_cap)
    throw CapExceeded("universe: store space exceeds the enumeration cap");
}

std::size_t Universe::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  throw ConfigError("undeclared variable '" + name + "'");
}

bool Universe::has_var(const std::string& name) const {
  return std::any_of(vars.begin(), vars.end(),
                     [&](const Var& v) { return v.name == name; });
}

uint64_t Universe::store_count() const {
  uint64_t n = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const uint64_t base = static_cast<uint64_t>(vmax) + 1;
    if (n > (~uint64_t{0}) / base) return ~uint64_t{0};
    n *= base;
  }
  return n;
}

StoreSpace::StoreSpace(const Universe& u) : u_(&u), count_(u.store_count()) {
  u.validate();
  stores_.reserve(static_cast<std::size_t>(count_));
  const std::size_t n = u.var_count();
  Store s(n);
  while (true) {
    stores_.push_back(s);
    // Odometer increment, last variable fastest.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (s.get(i) < u.vmax) {
        s.set(i, static_cast<uint16_t>(s.get(i) + 1));
        break;
      }
      s.set(i, 0);
      if (i == 0) return;
    }
  }
}

std::size_t StoreSpace::index_of(const Store& s) const {
  const std::size_t n = u_->var_count();
  uint64_t idx = 0;
  const uint64_t base = static_cast<uint64_t>(u_->vmax) + 1;
  for (std::size_t i = 0; i < n; ++i) idx = idx * base + s.get(i);
  return static_cast<std::size_t>(idx);
}

std::string render_store(const Store& s, const Universe& u) {
  std::string out = "{";
  for (std::size_t i = 0; i < u.var_count(); ++i) {
    if (i) out += ",";
    out += u.vars[i].name;
    out += "=";
    out += std::to_string(s.get(i));
  }
  out += "}";
  return out;
}

Store parse_store(const std::string& text, const Universe& u) {
  // Accepts "h=1,l=0" with optional surrounding braces and whitespace.
  std::string body = text;
  auto strip = [](std::string& t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  };
  strip(body);
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') throw ConfigError("store: unbalanced braces in '" + text + "'");
    body = body.substr(1, body.size() - 2);
  }
  Store s(u.var_count());
  std::vector<bool> assigned(u.var_count(), false);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    strip(item);
    if (item.empty()) throw ConfigError("store: empty binding in '" + text + "'");
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("store: missing '=' in '" + item + "'");
    std::string name = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    strip(name);
    strip(val);
    const std::size_t idx = u.var_index(name);
    if (assigned[idx]) throw ConfigError("store: duplicate binding for '" + name + "'");
    unsigned long parsed = 0;
    try {
      std::size_t used = 0;
      parsed = std::stoul(val, &used);
      if (used != val.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("store: invalid value '" + val + "'");
    }
    if (parsed > u.vmax) throw ConfigError("store: value for '" + name + "' exceeds vmax");
    s.set(idx, static_cast<uint16_t>(parsed));
    assigned[idx] = true;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t i = 0; i < u.var_count(); ++i) {
    if (!assigned[i])
      throw ConfigError("store: missing binding for '" + u.vars[i].name + "'");
  }
  return s;
}

} // namespace sclab
