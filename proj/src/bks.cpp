#include "hfvrp/bks.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "hfvrp/io.hpp"

namespace hfvrp {

extern const char* const kBuiltinBks;

namespace {

std::string normalize_variant(std::string_view v) {
  if (auto parsed = variant_from_string(v)) return to_string(*parsed);
  return std::string(v);
}

}  // namespace

BksRegistry BksRegistry::from_text(std::string_view tsv) {
  BksRegistry reg;
  std::istringstream in{std::string(tsv)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, '\t')) cols.push_back(c);
    if (cols.size() < 3) throw ParseError(line_no, 1, "BKS row needs name, variant, value");
    BksEntry e;
    e.name = cols[0];
    e.variant = normalize_variant(cols[1]);
    try {
      e.value = std::stod(cols[2]);
    } catch (const std::exception&) {
      throw ParseError(line_no, 1, "malformed BKS value '" + cols[2] + "'");
    }
    if (!(e.value > 0)) throw ParseError(line_no, 1, "BKS values must be positive");
    if (cols.size() > 3) e.source = cols[3];
    reg.entries_.push_back(std::move(e));
  }
  return reg;
}

BksRegistry BksRegistry::builtin() {
  static const BksRegistry reg = from_text(kBuiltinBks);
  return reg;
}

BksRegistry BksRegistry::load_default() {
  if (const char* p = std::getenv("HFVRP_BKS_PATH"); p && *p) return from_text(read_file(p));
  return builtin();
}

const BksEntry* BksRegistry::find(std::string_view name, std::string_view variant) const {
  const std::string v = normalize_variant(variant);
  for (const auto& e : entries_)
    if (e.name == name && e.variant == v) return &e;
  return nullptr;
}

std::optional<double> BksRegistry::lookup(std::string_view name, std::string_view variant) const {
  if (const BksEntry* e = find(name, variant)) return e->value;
  return std::nullopt;
}

std::optional<double> bks_lookup(std::string_view name, std::string_view variant) {
  return BksRegistry::load_default().lookup(name, variant);
}

}  // namespace hfvrp
