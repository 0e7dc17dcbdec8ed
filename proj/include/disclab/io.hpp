#ifndef DISCLAB_IO_HPP
#define DISCLAB_IO_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"
#include "disclab/measures.hpp"

#include <json.hpp>

#include <string>

namespace disclab {

// {"kind":"ball","radius":1.0,"dim":2}
// {"kind":"ellipsoid","matrix":[[2,0],[0,1]]}
// {"kind":"perturbed_ball","rho0":1.0,"modes":[{"freq":[3],"amp":0.03}]}
// Dimension is inferred from the matrix / frequency shape; balls take an
// optional "dim" (default 2).
ConvexBody body_from_json(const nlohmann::json& j);
ConvexBody load_body(const std::string& path);

// {"kind":"dirac"} | {"kind":"uniform"} | {"kind":"power","alpha":0.5} |
// {"kind":"bump"}
MeasureSpec measure_from_json(const nlohmann::json& j);
MeasureSpec load_measure(const std::string& path);

// temp file + rename; no partial outputs
void atomic_write(const std::string& path, const std::string& contents);

Vec parse_vector(const std::string& csv);  // "0.3,0.7"

}  // namespace disclab

#endif
