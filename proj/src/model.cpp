#include "hfvrp/model.hpp"

#include <algorithm>
#include <cmath>

namespace hfvrp {

bool Instance::fixed_fleet() const {
  for (int k = 0; k < user_types; ++k)
    if (fleet[k].unlimited()) return false;
  return user_types > 0;
}

int Instance::max_capacity() const {
  int q = 0;
  for (int k = 0; k < user_types; ++k) q = std::max(q, fleet[k].capacity);
  return q;
}

void Instance::finalize() {
  fleet.erase(std::remove_if(fleet.begin(), fleet.end(),
                             [](const VehicleType& v) { return v.extra; }),
              fleet.end());
  user_types = num_types();
  if (user_types > kMaxTypes) throw std::invalid_argument("too many vehicle types");
  for (int k = 0; k < user_types; ++k) fleet[k].id = k;

  const std::size_t n = nodes.size();
  dist.assign(n * n, 0.0);
  if (!matrix.empty()) {
    if (matrix.size() != n * n) throw std::invalid_argument("matrix size mismatch");
    dist = matrix;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i * n + j] = std::hypot(nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
  }
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;

  double max_arc = 0.0;
  double sum_arc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      max_arc = std::max(max_arc, dist[i * n + j]);
      sum_arc += dist[i * n + j];
    }
  mean_arc = n > 1 ? sum_arc / static_cast<double>(n * (n - 1)) : 0.0;
  big_m = 1e7 * std::max(max_arc, 1.0);

  if (attributes.open_routes)
    for (std::size_t i = 0; i < n; ++i)
      for (int dpt : depots) dist[i * n + dpt] = 0.0;

  if (attributes.backhaul_strict)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Role a = nodes[i].role;
        const Role b = nodes[j].role;
        if ((a == Role::depot && b == Role::backhaul) ||
            (a == Role::backhaul && b == Role::linehaul))
          dist[i * n + j] = big_m;
      }

  total_demand = 0;
  for (int c : customers) total_demand += nodes[c].demand;

  bool any_unlimited = false;
  for (const auto& v : fleet) any_unlimited |= v.unlimited();
  if (!any_unlimited && !fleet.empty()) {
    bool any_fixed = false;
    for (const auto& v : fleet) any_fixed |= v.fixed_cost > 0.0;
    int m = 0;
    for (int k = 1; k < user_types; ++k) {
      const auto& a = fleet[k];
      const auto& b = fleet[m];
      const bool better = any_fixed ? (a.fixed_cost > b.fixed_cost ||
                                       (a.fixed_cost == b.fixed_cost && a.var_cost > b.var_cost))
                                    : a.var_cost > b.var_cost;
      if (better) m = k;
    }
    VehicleType x;
    x.id = user_types;
    x.capacity = std::max(total_demand, 1);
    x.fixed_cost = 10.0 * fleet[m].fixed_cost;
    x.var_cost = 100.0 * fleet[m].var_cost;
    x.count = kUnlimited;
    x.extra = true;
    fleet.push_back(x);
    for (auto& nd : nodes) nd.allowed |= std::uint64_t{1} << user_types;
  }
}

bool Instance::same_source(const Instance& o) const {
  auto user = [](const Instance& i) {
    std::vector<VehicleType> v;
    for (const auto& t : i.fleet)
      if (!t.extra) v.push_back(t);
    return v;
  };
  auto masked = [](const Instance& i) {
    const std::uint64_t m =
        i.user_types >= 64 ? kAllTypes : ((std::uint64_t{1} << i.user_types) - 1);
    std::vector<Node> v = i.nodes;
    for (auto& nd : v) nd.allowed &= m;
    return v;
  };
  return name == o.name && masked(*this) == masked(o) && depots == o.depots &&
         customers == o.customers && user(*this) == user(o) && attributes == o.attributes &&
         duration_limit == o.duration_limit && limit_on == o.limit_on &&
         depot_limit == o.depot_limit && matrix == o.matrix;
}

void SolverParams::check() const {
  if (ims < 1) throw std::invalid_argument("ims must be positive");
  if (iils && *iils < 0) throw std::invalid_argument("iils must be non-negative");
  if (!(tmax > 0)) throw std::invalid_argument("tmax must be positive");
  if (!(rgap > 0 && rgap < 1)) throw std::invalid_argument("rgap must lie in (0,1)");
  if (n_large < 1) throw std::invalid_argument("n_large must be positive");
  if (!(omega >= 0)) throw std::invalid_argument("omega must be non-negative");
  if (!(pool_gap >= 0)) throw std::invalid_argument("pool gap must be non-negative");
}

}  // namespace hfvrp
