#pragma once

#include <optional>

#include "hfvrp/model.hpp"
#include "hfvrp/rng.hpp"

namespace hfvrp {

enum class InsertionKind { nearest, modified_cheapest };

inline constexpr double kPromotion = 0.5;

// Cost of placing `customer` right after visit position - 1 of `partial`
// (position 0 is next to the depot). `anchor` is the last inserted node of
// the route, used by the nearest criterion. Returns kInf when the vehicle
// type cannot serve the customer.
double insertion_cost(InsertionKind kind, const Instance& inst, const Route& partial, int customer,
                      int position, int vehicle, int anchor);

// One initial solution; empty spare routes are appended per (depot, type)
// with remaining availability.
Solution build_initial(const Instance& inst, const SolverParams& params, Rng& rng,
                       std::optional<InsertionKind> kind = std::nullopt);

}  // namespace hfvrp
