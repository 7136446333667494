#pragma once

#include "bgkit/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bgkit {

// Bundled setups as space documents with an embedded action:
//   z1, z2, f2             Cayley graphs with left translations
//   line:m, torus:m        Z on Z and Z^2 on Z^2 through m Z, (m Z)^2
//   glued_line:eps:hair    the glued line with hair-shifting translations
//   exemplebis             glued_line:1/10:1/2
//   cycle:n, figure_eight  graphs with their deck actions
//   tripod                 the tripod with legs 1, 2, 3
Json instance_document(const std::string& name);
std::vector<std::string> instance_names();

// Declared hyperbolicity constant of a bundled family, nullopt when the space
// is not hyperbolic. Used only to annotate reports; nothing is decided from it.
std::optional<Length> declared_delta(const std::string& name);

// The natural basepoint: identity, vertex 0, tip 0, tripod center or cover root.
Point default_center(const Space& space);

}  // namespace bgkit
