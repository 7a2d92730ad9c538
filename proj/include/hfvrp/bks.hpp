#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hfvrp {

struct BksEntry {
  std::string name;
  std::string variant;
  double value = 0.0;
  // Results table the value was transcribed from.
  std::string source;
};

class BksRegistry {
 public:
  // Tab-separated rows: name, variant, value, source; '#' lines ignored.
  static BksRegistry from_text(std::string_view tsv);
  static BksRegistry builtin();
  // HFVRP_BKS_PATH when set, else the built-in table.
  static BksRegistry load_default();

  const BksEntry* find(std::string_view name, std::string_view variant) const;
  std::optional<double> lookup(std::string_view name, std::string_view variant) const;
  const std::vector<BksEntry>& entries() const { return entries_; }

 private:
  std::vector<BksEntry> entries_;
};

std::optional<double> bks_lookup(std::string_view name, std::string_view variant);

}  // namespace hfvrp
