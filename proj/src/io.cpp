#include "hfvrp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <vector>

#include "hfvrp/eval.hpp"

namespace hfvrp {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct Token {
  std::string_view text;
  int line;
  int column;
};

// Splits text into lines of whitespace-separated tokens; '#' starts a comment.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) toks.push_back(Token{line.substr(i, j - i), line_no, static_cast<int>(i) + 1});
      i = j;
    }
    lines.push_back(std::move(toks));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double to_double(const Token& t) {
  double v = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  if (!t.text.empty() && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw ParseError(t.line, t.column, "malformed number '" + std::string(t.text) + "'");
  return v;
}

int to_int(const Token& t) {
  const double v = to_double(t);
  if (v != static_cast<double>(static_cast<long long>(v)) || v > 2e9 || v < -2e9)
    throw ParseError(t.line, t.column, "expected integer, got '" + std::string(t.text) + "'");
  return static_cast<int>(v);
}

// Flat token stream for the whitespace-delimited classic formats.
class Stream {
 public:
  explicit Stream(std::string_view text) {
    for (auto& l : tokenize(text))
      for (auto& t : l) toks_.push_back(t);
  }
  bool done() const { return i_ >= toks_.size(); }
  const Token& next() {
    if (done()) {
      const int line = toks_.empty() ? 1 : toks_.back().line;
      throw ParseError(line, 1, "unexpected end of input");
    }
    return toks_[i_++];
  }
  const Token& peek() {
    if (done()) return next();
    return toks_[i_];
  }
  double num() { return to_double(next()); }
  int integer() { return to_int(next()); }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

const std::map<std::string_view, bool AttributeSet::*>& attribute_names() {
  static const std::map<std::string_view, bool AttributeSet::*> m = {
      {"open", &AttributeSet::open_routes},
      {"multi_depot", &AttributeSet::multi_depot},
      {"backhaul_strict", &AttributeSet::backhaul_strict},
      {"backhaul_mixed", &AttributeSet::backhaul_mixed},
      {"site_dependency", &AttributeSet::site_dependency},
      {"split_delivery", &AttributeSet::split_delivery},
      {"time_windows", &AttributeSet::time_windows},
      {"route_duration", &AttributeSet::route_duration},
      {"asymmetric", &AttributeSet::asymmetric},
  };
  return m;
}

const char* role_name(Role r) {
  switch (r) {
    case Role::depot: return "depot";
    case Role::linehaul: return "linehaul";
    case Role::backhaul: return "backhaul";
  }
  return "linehaul";
}

bool is_section(std::string_view w) {
  return w == "NAME" || w == "ATTRIBUTES" || w == "DEPOTS" || w == "CUSTOMERS" ||
         w == "DURATION_LIMIT" || w == "DEPOT_LIMIT" || w == "VEHICLES" || w == "NODES" ||
         w == "MATRIX" || w == "COMPAT" || w == "END";
}

void expect_args(const std::vector<Token>& l, std::size_t n) {
  if (l.size() != n + 1)
    throw ParseError(l[0].line, l[0].column,
                     std::string(l[0].text) + " expects " + std::to_string(n) + " value(s)");
}

void check_semantics(const Instance& inst, int line) {
  auto fail = [&](const std::string& m) { throw ParseError(line, 1, m); };
  if (inst.attributes.backhaul_strict && inst.attributes.backhaul_mixed)
    fail("backhaul_strict and backhaul_mixed are exclusive");
  if (inst.depots.empty()) fail("instance has no depot");
  if (inst.fleet.empty()) fail("instance has no vehicle type");
  for (const auto& v : inst.fleet) {
    if (v.capacity <= 0) fail("vehicle capacity must be positive");
    if (v.fixed_cost < 0 || v.var_cost < 0) fail("vehicle costs must be non-negative");
    if (v.count != kUnlimited && v.count < 1) fail("vehicle count must be >= 1 or -1");
  }
  for (const auto& nd : inst.nodes) {
    if (nd.ready > nd.due) fail("node " + std::to_string(nd.id) + ": ready time after due time");
    if (nd.demand < 0 || nd.service < 0) fail("node " + std::to_string(nd.id) + ": negative value");
    if (nd.role == Role::depot && nd.demand != 0) fail("depot with non-zero demand");
    if (nd.role == Role::backhaul && !inst.attributes.backhauls())
      fail("backhaul node without a backhaul attribute");
  }
}

}  // namespace

Instance parse_canonical(std::string_view text) {
  Instance inst;
  const auto lines = tokenize(text);
  int depots = -1;
  int customers = -1;
  bool have_limit = false;
  std::size_t i = 0;
  std::map<int, std::vector<int>> compat;
  int last_line = 1;
  auto section_rows = [&](std::size_t& k) {
    std::vector<const std::vector<Token>*> rows;
    while (k < lines.size()) {
      const auto& l = lines[k];
      if (!l.empty() && is_section(l[0].text)) break;
      if (!l.empty()) rows.push_back(&l);
      ++k;
    }
    return rows;
  };
  while (i < lines.size()) {
    const auto& l = lines[i];
    if (l.empty()) {
      ++i;
      continue;
    }
    last_line = l[0].line;
    const std::string_view key = l[0].text;
    if (key == "NAME") {
      expect_args(l, 1);
      inst.name = std::string(l[1].text);
      ++i;
    } else if (key == "ATTRIBUTES") {
      for (std::size_t t = 1; t < l.size(); ++t) {
        if (l[t].text == "none") continue;
        auto it = attribute_names().find(l[t].text);
        if (it == attribute_names().end())
          throw ParseError(l[t].line, l[t].column, "unknown attribute '" + std::string(l[t].text) + "'");
        inst.attributes.*(it->second) = true;
      }
      ++i;
    } else if (key == "DEPOTS") {
      expect_args(l, 1);
      depots = to_int(l[1]);
      ++i;
    } else if (key == "CUSTOMERS") {
      expect_args(l, 1);
      customers = to_int(l[1]);
      ++i;
    } else if (key == "DURATION_LIMIT") {
      expect_args(l, 2);
      if (l[1].text != "none") inst.duration_limit = to_double(l[1]);
      if (l[2].text == "distance") {
        inst.limit_on = LimitOn::distance;
      } else if (l[2].text == "duration") {
        inst.limit_on = LimitOn::duration;
      } else {
        throw ParseError(l[2].line, l[2].column, "expected distance or duration");
      }
      have_limit = true;
      ++i;
    } else if (key == "DEPOT_LIMIT") {
      expect_args(l, 1);
      inst.depot_limit = l[1].text == "none" ? kUnlimited : to_int(l[1]);
      ++i;
    } else if (key == "VEHICLES") {
      ++i;
      for (const auto* row : section_rows(i)) {
        const auto& r = *row;
        if (r.size() != 5) throw ParseError(r[0].line, r[0].column, "vehicle row needs 5 fields");
        VehicleType v;
        v.id = to_int(r[0]);
        if (v.id != inst.num_types())
          throw ParseError(r[0].line, r[0].column, "vehicle ids must be consecutive from 0");
        v.capacity = to_int(r[1]);
        v.fixed_cost = to_double(r[2]);
        v.var_cost = to_double(r[3]);
        v.count = to_int(r[4]);
        inst.fleet.push_back(v);
      }
    } else if (key == "NODES") {
      ++i;
      for (const auto* row : section_rows(i)) {
        const auto& r = *row;
        if (r.size() != 8) throw ParseError(r[0].line, r[0].column, "node row needs 8 fields");
        Node nd;
        nd.id = to_int(r[0]);
        if (nd.id != inst.size())
          throw ParseError(r[0].line, r[0].column, "node ids must be consecutive from 0");
        nd.x = to_double(r[1]);
        nd.y = to_double(r[2]);
        nd.demand = to_int(r[3]);
        nd.ready = to_double(r[4]);
        nd.due = to_double(r[5]);
        nd.service = to_double(r[6]);
        if (r[7].text == "depot") {
          nd.role = Role::depot;
        } else if (r[7].text == "linehaul") {
          nd.role = Role::linehaul;
        } else if (r[7].text == "backhaul") {
          nd.role = Role::backhaul;
        } else {
          throw ParseError(r[7].line, r[7].column, "unknown role '" + std::string(r[7].text) + "'");
        }
        (nd.role == Role::depot ? inst.depots : inst.customers).push_back(nd.id);
        inst.nodes.push_back(nd);
      }
    } else if (key == "MATRIX") {
      ++i;
      for (const auto* row : section_rows(i))
        for (const auto& t : *row) inst.matrix.push_back(to_double(t));
    } else if (key == "COMPAT") {
      ++i;
      for (const auto* row : section_rows(i)) {
        const auto& r = *row;
        std::string_view head = r[0].text;
        if (head.empty() || head.back() != ':')
          throw ParseError(r[0].line, r[0].column, "expected '<customer-id>:'");
        Token id_tok{head.substr(0, head.size() - 1), r[0].line, r[0].column};
        auto& ks = compat[to_int(id_tok)];
        for (std::size_t t = 1; t < r.size(); ++t) ks.push_back(to_int(r[t]));
      }
    } else if (key == "END") {
      break;
    } else {
      throw ParseError(l[0].line, l[0].column, "unknown keyword '" + std::string(key) + "'");
    }
  }

  if (depots < 0 || customers < 0) throw ParseError(last_line, 1, "missing DEPOTS or CUSTOMERS");
  if (!have_limit) throw ParseError(last_line, 1, "missing DURATION_LIMIT");
  if (static_cast<int>(inst.depots.size()) != depots)
    throw ParseError(last_line, 1, "DEPOTS count does not match the depot nodes");
  if (static_cast<int>(inst.customers.size()) != customers)
    throw ParseError(last_line, 1, "CUSTOMERS count does not match the customer nodes");
  const std::size_t n = inst.nodes.size();
  if (!inst.matrix.empty() && inst.matrix.size() != n * n)
    throw ParseError(last_line, 1, "MATRIX must have " + std::to_string(n * n) + " entries");
  for (const auto& [c, ks] : compat) {
    if (c < 0 || c >= inst.size() || inst.is_depot(c))
      throw ParseError(last_line, 1, "COMPAT refers to unknown customer " + std::to_string(c));
    std::uint64_t mask = 0;
    for (int k : ks) {
      if (k < 0 || k >= inst.num_types())
        throw ParseError(last_line, 1, "COMPAT refers to unknown vehicle type " + std::to_string(k));
      mask |= std::uint64_t{1} << k;
    }
    inst.nodes[c].allowed = mask;
  }
  check_semantics(inst, last_line);
  inst.finalize();
  return inst;
}

std::string write_canonical(const Instance& inst) {
  std::ostringstream os;
  os << "NAME " << (inst.name.empty() ? "unnamed" : inst.name) << '\n';
  os << "ATTRIBUTES";
  bool any = false;
  for (const auto& [name, member] : attribute_names())
    if (inst.attributes.*member) {
      os << ' ' << name;
      any = true;
    }
  if (!any) os << " none";
  os << '\n';
  os << "DEPOTS " << inst.depots.size() << '\n';
  os << "CUSTOMERS " << inst.customers.size() << '\n';
  os << "DURATION_LIMIT " << (inst.duration_limit ? format_double(*inst.duration_limit) : "none")
     << ' ' << (inst.limit_on == LimitOn::distance ? "distance" : "duration") << '\n';
  if (inst.depot_limit != kUnlimited) os << "DEPOT_LIMIT " << inst.depot_limit << '\n';
  os << "VEHICLES\n";
  for (const auto& v : inst.fleet) {
    if (v.extra) continue;
    os << v.id << ' ' << v.capacity << ' ' << format_double(v.fixed_cost) << ' '
       << format_double(v.var_cost) << ' ' << v.count << '\n';
  }
  os << "NODES\n";
  for (const auto& nd : inst.nodes)
    os << nd.id << ' ' << format_double(nd.x) << ' ' << format_double(nd.y) << ' ' << nd.demand
       << ' ' << format_double(nd.ready) << ' ' << format_double(nd.due) << ' '
       << format_double(nd.service) << ' ' << role_name(nd.role) << '\n';
  if (!inst.matrix.empty()) {
    os << "MATRIX\n";
    const std::size_t n = inst.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << format_double(inst.matrix[i * n + j]);
      os << '\n';
    }
  }
  const std::uint64_t user_mask =
      inst.user_types >= 64 ? kAllTypes : ((std::uint64_t{1} << inst.user_types) - 1);
  bool header = false;
  for (int c : inst.customers) {
    const std::uint64_t m = inst.nodes[c].allowed & user_mask;
    if (m == user_mask) continue;
    if (!header) {
      os << "COMPAT\n";
      header = true;
    }
    os << c << ':';
    for (int k = 0; k < inst.user_types; ++k)
      if ((m >> k) & 1u) os << ' ' << k;
    os << '\n';
  }
  os << "END\n";
  return os.str();
}

std::optional<ClassicFormat> classic_format_from_string(std::string_view s) {
  if (s == "golden_taillard") return ClassicFormat::golden_taillard;
  if (s == "solomon_fsmtw") return ClassicFormat::solomon_fsmtw;
  if (s == "cordeau_md") return ClassicFormat::cordeau_md;
  return std::nullopt;
}

namespace {

struct FsmtwFleet {
  std::string_view cls;
  std::vector<int> capacity;
  std::vector<double> cost_a, cost_b, cost_c;
};

// Vehicle types per Solomon class for the fleet-size-and-mix TW benchmark.
const std::vector<FsmtwFleet>& fsmtw_fleets() {
  static const std::vector<FsmtwFleet> f = {
      {"C1", {100, 200, 300}, {300, 800, 1350}, {60, 160, 270}, {30, 80, 135}},
      {"C2", {400, 500, 600}, {1000, 1400, 2000}, {300, 420, 600}, {150, 210, 300}},
      {"R1", {30, 50, 80, 120, 200}, {50, 80, 140, 250, 500}, {10, 16, 28, 50, 100}, {5, 8, 14, 25, 50}},
      {"R2", {300, 400, 600, 1000}, {450, 700, 1200, 2500}, {90, 140, 240, 500}, {45, 70, 120, 250}},
      {"RC1", {40, 80, 150, 200}, {60, 150, 300, 450}, {12, 30, 60, 90}, {6, 15, 30, 45}},
      {"RC2", {100, 200, 300, 400, 500, 1000}, {150, 350, 550, 800, 1100, 2500},
       {30, 70, 110, 160, 220, 500}, {15, 35, 55, 80, 110, 250}},
  };
  return f;
}

Instance parse_golden(std::string_view text, const ClassicOptions& opt) {
  Stream in(text);
  Instance inst;
  inst.name = opt.name;
  const int n = in.integer();
  if (n < 1) throw ParseError(1, 1, "customer count must be positive");
  for (int i = 0; i <= n; ++i) {
    const Token& id_tok = in.peek();
    const int id = in.integer();
    if (id != i) throw ParseError(id_tok.line, id_tok.column, "node ids must run 0..n");
    Node nd;
    nd.id = i;
    nd.x = in.num();
    nd.y = in.num();
    nd.demand = in.integer();
    nd.role = i == 0 ? Role::depot : Role::linehaul;
    (i == 0 ? inst.depots : inst.customers).push_back(i);
    inst.nodes.push_back(nd);
  }
  const int k = in.integer();
  if (k < 1) throw ParseError(1, 1, "vehicle type count must be positive");
  for (int t = 0; t < k; ++t) {
    VehicleType v;
    v.id = t;
    v.capacity = in.integer();
    v.fixed_cost = in.num();
    v.var_cost = in.num();
    in.num();
    v.count = in.integer();
    inst.fleet.push_back(v);
  }
  check_semantics(inst, 1);
  inst.finalize();
  return inst;
}

Instance parse_solomon(std::string_view text, const ClassicOptions& opt) {
  Stream in(text);
  Instance inst;
  const Token& name_tok = in.next();
  inst.name = opt.name.empty() ? std::string(name_tok.text) : opt.name;
  while (!in.done() && in.peek().text != "CUSTOMER") in.next();
  if (in.done()) throw ParseError(name_tok.line, 1, "missing CUSTOMER section");
  in.next();
  while (!in.done()) {
    const auto t = in.peek().text;
    if (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0]))) break;
    in.next();
  }
  while (!in.done()) {
    Node nd;
    const Token& id_tok = in.peek();
    nd.id = in.integer();
    if (nd.id != inst.size()) throw ParseError(id_tok.line, id_tok.column, "node ids must be consecutive");
    nd.x = in.num();
    nd.y = in.num();
    nd.demand = in.integer();
    nd.ready = in.num();
    nd.due = in.num();
    nd.service = in.num();
    nd.role = nd.id == 0 ? Role::depot : Role::linehaul;
    (nd.id == 0 ? inst.depots : inst.customers).push_back(nd.id);
    inst.nodes.push_back(nd);
  }
  std::string cls;
  for (char c : std::string_view(name_tok.text)) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cls += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else {
      cls += c;
      break;
    }
  }
  const FsmtwFleet* fleet = nullptr;
  for (const auto& f : fsmtw_fleets())
    if (f.cls == cls) fleet = &f;
  if (!fleet) throw ParseError(name_tok.line, name_tok.column, "unknown vehicle block for class '" + cls + "'");
  const std::vector<double>* costs = nullptr;
  switch (std::toupper(static_cast<unsigned char>(opt.fleet))) {
    case 'A': costs = &fleet->cost_a; break;
    case 'B': costs = &fleet->cost_b; break;
    case 'C': costs = &fleet->cost_c; break;
    default: throw ParseError(name_tok.line, 1, std::string("unknown fleet letter '") + opt.fleet + "'");
  }
  for (std::size_t t = 0; t < fleet->capacity.size(); ++t) {
    VehicleType v;
    v.id = static_cast<int>(t);
    v.capacity = fleet->capacity[t];
    v.fixed_cost = (*costs)[t];
    v.var_cost = 1.0;
    v.count = kUnlimited;
    inst.fleet.push_back(v);
  }
  inst.attributes.time_windows = true;
  check_semantics(inst, 1);
  inst.finalize();
  return inst;
}

Instance parse_cordeau(std::string_view text, const ClassicOptions& opt) {
  Stream in(text);
  Instance inst;
  inst.name = opt.name;
  const Token& type_tok = in.peek();
  const int type = in.integer();
  if (type != 2) throw ParseError(type_tok.line, type_tok.column, "only problem type 2 (MDVRP) is supported");
  const int m = in.integer();
  const int n = in.integer();
  const int t = in.integer();
  if (m < 1 || n < 1 || t < 1) throw ParseError(type_tok.line, 1, "header counts must be positive");
  double limit = 0.0;
  int capacity = 0;
  for (int d = 0; d < t; ++d) {
    limit = in.num();
    capacity = in.integer();
  }
  std::vector<Node> customers;
  for (int i = 0; i < n + t; ++i) {
    in.integer();
    Node nd;
    nd.x = in.num();
    nd.y = in.num();
    nd.service = in.num();
    nd.demand = in.integer();
    in.integer();
    const Token& cnt_tok = in.peek();
    const int combos = in.integer();
    if (combos < 0) throw ParseError(cnt_tok.line, cnt_tok.column, "negative combination count");
    for (int c = 0; c < combos; ++c) in.integer();
    if (i < n) {
      nd.role = Role::linehaul;
      customers.push_back(nd);
    } else {
      nd.role = Role::depot;
      nd.id = i - n;
      nd.service = 0.0;
      inst.nodes.push_back(nd);
      inst.depots.push_back(nd.id);
    }
  }
  for (auto& nd : customers) {
    nd.id = inst.size();
    inst.customers.push_back(nd.id);
    inst.nodes.push_back(nd);
  }
  VehicleType v;
  v.capacity = capacity;
  v.fixed_cost = 0.0;
  v.var_cost = 1.0;
  v.count = m * t;
  inst.fleet.push_back(v);
  inst.depot_limit = m;
  inst.attributes.multi_depot = t > 1;
  if (limit > 0) {
    inst.duration_limit = limit;
    inst.limit_on = LimitOn::duration;
    inst.attributes.route_duration = true;
  }
  check_semantics(inst, 1);
  inst.finalize();
  return inst;
}

}  // namespace

Instance parse_classic(ClassicFormat format, std::string_view text, const ClassicOptions& opt) {
  switch (format) {
    case ClassicFormat::golden_taillard: return parse_golden(text, opt);
    case ClassicFormat::solomon_fsmtw: return parse_solomon(text, opt);
    case ClassicFormat::cordeau_md: return parse_cordeau(text, opt);
  }
  throw std::invalid_argument("unknown classic format");
}

namespace {

const std::vector<std::pair<std::string_view, Variant>>& variant_names() {
  static const std::vector<std::pair<std::string_view, Variant>> v = {
      {"FSMVRP-F", Variant::fsmvrp_f},       {"FSMVRP-V", Variant::fsmvrp_v},
      {"FSMVRP-FV", Variant::fsmvrp_fv},     {"HFFVRP-V", Variant::hffvrp_v},
      {"HFFVRP-FV", Variant::hffvrp_fv},     {"HFFOVRP-V", Variant::hffovrp_v},
      {"HFFOVRP-FV", Variant::hffovrp_fv},   {"HFFVRPSD", Variant::hffvrpsd},
      {"MDFSMVRP", Variant::mdfsmvrp},       {"HFFVRPB", Variant::hffvrpb},
      {"FSMVRPB", Variant::fsmvrpb},         {"SDepVRP", Variant::sdepvrp},
      {"SDepVRPTW", Variant::sdepvrptw},     {"FSMVRPTW-DUR", Variant::fsmvrptw_dur},
      {"FSMVRPTW-DIST", Variant::fsmvrptw_dist}, {"HFFVRPMBTW", Variant::hffvrpmbtw},
  };
  return v;
}

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<Variant> variant_from_string(std::string_view s) {
  for (const auto& [name, v] : variant_names())
    if (iequal(name, s)) return v;
  if (iequal(s, "hffvrp")) return Variant::hffvrp_fv;
  if (iequal(s, "fsmvrp")) return Variant::fsmvrp_fv;
  if (iequal(s, "hffovrp")) return Variant::hffovrp_fv;
  if (iequal(s, "fsmvrptw")) return Variant::fsmvrptw_dist;
  return std::nullopt;
}

const char* to_string(Variant v) {
  for (const auto& [name, var] : variant_names())
    if (var == v) return name.data();
  return "?";
}

void apply_variant(Instance& inst, Variant v) {
  auto unlimited = [&] {
    for (auto& t : inst.fleet) t.count = kUnlimited;
  };
  auto no_fixed = [&] {
    for (auto& t : inst.fleet) t.fixed_cost = 0.0;
  };
  auto unit_var = [&] {
    for (auto& t : inst.fleet) t.var_cost = 1.0;
  };
  switch (v) {
    case Variant::fsmvrp_f: unlimited(); unit_var(); break;
    case Variant::fsmvrp_v: unlimited(); no_fixed(); break;
    case Variant::fsmvrp_fv: unlimited(); break;
    case Variant::hffvrp_v: no_fixed(); break;
    case Variant::hffvrp_fv: break;
    case Variant::hffovrp_v: no_fixed(); inst.attributes.open_routes = true; break;
    case Variant::hffovrp_fv: inst.attributes.open_routes = true; break;
    case Variant::hffvrpsd: inst.attributes.split_delivery = true; break;
    case Variant::mdfsmvrp: unlimited(); inst.attributes.multi_depot = inst.depots.size() > 1; break;
    case Variant::hffvrpb: case Variant::fsmvrpb:
      if (!inst.attributes.backhauls()) inst.attributes.backhaul_strict = true;
      if (v == Variant::fsmvrpb) unlimited();
      break;
    case Variant::sdepvrp: inst.attributes.site_dependency = true; break;
    case Variant::sdepvrptw:
      inst.attributes.site_dependency = true;
      inst.attributes.time_windows = true;
      break;
    case Variant::fsmvrptw_dur: case Variant::fsmvrptw_dist:
      unlimited();
      inst.attributes.time_windows = true;
      break;
    case Variant::hffvrpmbtw:
      inst.attributes.backhaul_mixed = !inst.attributes.backhaul_strict;
      inst.attributes.time_windows = true;
      break;
  }
  inst.finalize();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Instance load_instance(const std::string& path, std::optional<ClassicFormat> format,
                       std::optional<Variant> variant, char fleet) {
  const std::string text = read_file(path);
  std::string stem = path;
  if (auto s = stem.find_last_of('/'); s != std::string::npos) stem = stem.substr(s + 1);
  if (auto d = stem.find_last_of('.'); d != std::string::npos) stem = stem.substr(0, d);
  Instance inst;
  if (format) {
    ClassicOptions opt;
    opt.name = stem;
    opt.fleet = fleet;
    if (*format == ClassicFormat::solomon_fsmtw) opt.name.clear();
    // c50_13hvrp.txt is registered as "13".
    std::smatch m;
    static const std::regex taillard(R"(c\d+_(\d+)[a-z]*)");
    if (*format == ClassicFormat::golden_taillard && std::regex_match(stem, m, taillard)) opt.name = m[1];
    inst = parse_classic(*format, text, opt);
  } else {
    inst = parse_canonical(text);
  }
  if (variant) apply_variant(inst, *variant);
  return inst;
}

std::string write_solution(const Instance& inst, const Solution& sol) {
  std::ostringstream os;
  os << "OBJ " << format_double(sol.objective) << '\n';
  for (const Route& r : sol.routes) {
    if (r.empty()) continue;
    os << "ROUTE " << r.depot << ' ' << r.vehicle << " :";
    for (const Visit& v : r.visits) {
      os << ' ' << v.customer;
      if (v.quantity != inst.nodes[v.customer].demand) os << ':' << v.quantity;
    }
    os << '\n';
  }
  return os.str();
}

Solution parse_solution(const Instance& inst, std::string_view text, double omega) {
  Solution sol;
  std::optional<double> obj;
  for (const auto& l : tokenize(text)) {
    if (l.empty()) continue;
    if (l[0].text == "OBJ") {
      expect_args(l, 1);
      obj = to_double(l[1]);
    } else if (l[0].text == "ROUTE") {
      if (l.size() < 4 || l[3].text != ":")
        throw ParseError(l[0].line, l[0].column, "expected ROUTE <depot> <type> : visits");
      Route r;
      r.depot = to_int(l[1]);
      r.vehicle = to_int(l[2]);
      for (std::size_t t = 4; t < l.size(); ++t) {
        std::string_view tok = l[t].text;
        Visit v;
        if (auto c = tok.find(':'); c != std::string_view::npos) {
          v.customer = to_int(Token{tok.substr(0, c), l[t].line, l[t].column});
          v.quantity = to_int(Token{tok.substr(c + 1), l[t].line, l[t].column + static_cast<int>(c) + 1});
        } else {
          v.customer = to_int(l[t]);
          if (v.customer < 0 || v.customer >= inst.size())
            throw StructuralError("unknown customer " + std::to_string(v.customer));
          v.quantity = inst.nodes[v.customer].demand;
        }
        r.visits.push_back(v);
      }
      sol.routes.push_back(std::move(r));
    } else {
      throw ParseError(l[0].line, l[0].column, "unknown keyword '" + std::string(l[0].text) + "'");
    }
  }
  for (const Route& r : sol.routes) {
    if (r.depot < 0 || r.depot >= inst.size() || !inst.is_depot(r.depot))
      throw StructuralError("unknown depot " + std::to_string(r.depot));
    if (r.vehicle < 0 || r.vehicle >= inst.num_types())
      throw StructuralError("unknown vehicle type " + std::to_string(r.vehicle));
    for (const Visit& v : r.visits)
      if (v.customer < 0 || v.customer >= inst.size() || inst.is_depot(v.customer))
        throw StructuralError("unknown customer " + std::to_string(v.customer));
  }
  refresh(inst, sol, omega);
  if (obj) sol.objective = *obj;
  return sol;
}

}  // namespace hfvrp
