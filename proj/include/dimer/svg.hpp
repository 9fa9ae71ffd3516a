#ifndef DIMER_SVG_HPP
#define DIMER_SVG_HPP

#include <string>
#include <vector>

#include "dimer/board.hpp"
#include "dimer/lattice.hpp"

namespace dimer {

// Deterministic SVG: dominoes as rectangles, optional vertex height labels.
std::string render_tiling_svg(const lattice::TemperleyanRegion& region, const Tiling& tiling,
                              const std::vector<int>* heights = nullptr);

} // namespace dimer

#endif
