#pragma once

#include <optional>
#include <vector>

#include "hfvrp/model.hpp"
#include "hfvrp/rng.hpp"

namespace hfvrp {

enum class PerturbKind { multiple_swap11, multiple_shift11, split, multiple_k_split, merge };

const char* to_string(PerturbKind k);

std::vector<PerturbKind> admissible_perturbations(const Instance& inst, const SolverParams& params);

struct MergePair {
  int donor = -1;
  int receiver = -1;
  // Receiver visits first when false; donor first when true.
  bool donor_first = false;
  bool reverse_donor = false;
  int vehicle = -1;
};

// Indices refer to `sol.routes`; empty routes are never chosen.
std::optional<MergePair> merge_candidates(const Instance& inst, const Solution& sol, Rng& rng);

// Applies one uniformly drawn admissible perturbation; `applied` receives
// the kind when the solution changed.
Solution perturb(const Instance& inst, const Solution& sol, Rng& rng, const SolverParams& params,
                 std::optional<PerturbKind>* applied = nullptr);

Solution apply_perturbation(PerturbKind kind, const Instance& inst, const Solution& sol, Rng& rng,
                            const SolverParams& params, bool* changed = nullptr);

}  // namespace hfvrp
