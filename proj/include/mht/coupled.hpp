#pragma once

#include "mht/darcy.hpp"
#include "mht/evolution.hpp"
#include "mht/scenario.hpp"

namespace mht {

// Flow state at one knot: the pressure solve on the permeability profile
// derived from the content u at that knot.
struct FlowState {
  double q = 0.0;
  Field p_star;
  bool clogged = false;
};

FlowState coupled_flow(const Scenario& sc, const Grid& g, const Field& u);

// Staggered transport-pressure loop: at each knot the saturation of the
// current content sets the permeability, the quasi-static pressure solve
// yields the flux, and one backward step advances the content with the
// transport operator reassembled at that flux. Beginning-of-step saturation
// only; no inner iteration. A clogged column (q = 0) continues as pure
// diffusion, or halts the run when there is no diffusion to fall back to.
// The trajectory carries q and p_star per knot.
Trajectory run_coupled(const Scenario& sc, const StationaryParams& params);

}  // namespace mht
