#pragma once

#include "fracocycle/structure.hpp"

#include <string>
#include <vector>

namespace fracocycle::presets {

using structure::CellularStructure;

/// A named structure, possibly a wedge of several components sharing one
/// vertex grid. Cochain values of a wedge are the sums over its components.
struct Preset {
    std::string name;
    std::vector<CellularStructure> components;
};

/// Unit-side equilateral triangle with the three corner maps of ratio 1/2.
CellularStructure gasket();
/// Unit square tiled by four quarter squares (space filling, no lacunae).
CellularStructure square4();
/// Right triangle (0,0),(2,0),(0,1) with four of the five ratio-1/sqrt(5)
/// substitution tiles; the middle tile of the lower half is left out.
CellularStructure pinwheel();
/// Gasket corner maps plus an inverted ratio-1/3 copy centred in the middle hole.
CellularStructure infinite_gasket();
/// Unit square with the eight ratio-1/3 maps that skip the middle cell.
CellularStructure carpet();

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for unknown names.
Preset load_preset(const std::string& name);

}  // namespace fracocycle::presets
