#pragma once

#include <string>

#include <json.hpp>

#include "pscomb/problem.hpp"

namespace pscomb {

/// Problem file schema (JSON):
///
///     {
///       "p": 2, "q": 1,
///       "domain": [[x0, y0, x1, y1], ...],
///       "h": 0.0078125,
///       "anisotropy": {"kind": "constant", "entries": [a11, a12, a22]},
///       "forcing": {"kind": "constant", "value": 1.0}
///     }
///
/// Anisotropy kinds: "constant" {entries}, "affine" {base, dx, dy},
/// "radial_bump" {base, amplitude, center, radius}, "grid_samples"
/// {origin, spacing, nx, ny, values: [[a11, a12, a22], ...] row-major}.
/// Forcing kinds: "constant" {value}, "affine" {value, gradient},
/// "radial_bump" {base, amplitude, center, radius}, "grid_samples"
/// {origin, spacing, nx, ny, values}.
/// Missing anisotropy/forcing default to the identity and 1.
ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

}  // namespace pscomb
