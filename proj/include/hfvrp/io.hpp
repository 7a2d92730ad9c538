#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hfvrp/model.hpp"

namespace hfvrp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Instance parse_canonical(std::string_view text);
std::string write_canonical(const Instance& inst);

enum class ClassicFormat { golden_taillard, solomon_fsmtw, cordeau_md };

std::optional<ClassicFormat> classic_format_from_string(std::string_view s);

struct ClassicOptions {
  std::string name;
  // Fleet block for solomon_fsmtw: 'A', 'B' or 'C'.
  char fleet = 'A';
};

Instance parse_classic(ClassicFormat format, std::string_view text, const ClassicOptions& opt = {});

// Variant tags from the benchmark catalog, e.g. "HFFOVRP-FV", "FSMVRP-F".
enum class Variant {
  fsmvrp_f,
  fsmvrp_v,
  fsmvrp_fv,
  hffvrp_v,
  hffvrp_fv,
  hffovrp_v,
  hffovrp_fv,
  hffvrpsd,
  mdfsmvrp,
  hffvrpb,
  fsmvrpb,
  sdepvrp,
  sdepvrptw,
  fsmvrptw_dur,
  fsmvrptw_dist,
  hffvrpmbtw,
};

std::optional<Variant> variant_from_string(std::string_view s);
const char* to_string(Variant v);

// Adjusts fleet counts, cost structure and attribute flags of an instance
// read from a file family that encodes several variants; re-finalizes.
void apply_variant(Instance& inst, Variant v);

std::string read_file(const std::string& path);

// Infers the format from the extension: .hfv / .txt with a canonical header
// or an explicit classic tag.
Instance load_instance(const std::string& path, std::optional<ClassicFormat> format,
                       std::optional<Variant> variant, char fleet = 'A');

// Solution file: "OBJ <value>" then "ROUTE <depot> <type> : id[:qty] ...".
std::string write_solution(const Instance& inst, const Solution& sol);
Solution parse_solution(const Instance& inst, std::string_view text, double omega);

std::string format_double(double v);

}  // namespace hfvrp
