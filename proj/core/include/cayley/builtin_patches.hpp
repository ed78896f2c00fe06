#pragma once

// Named test patches.
//
//   affine            F(t) = offset + A t; A from "frame" (32 numbers, four
//                     columns) or the Cayley plane of angle acos("lambda")
//                     on the real axes, rotated by e^{i "phase" / 4}
//   complex-graph     (z1, z2, a z1^2 + b z1^3, c z1 z2), z1 = t1 + i t2
//   lagrangian-graph  x + i grad f, f = a |x|^4 / 4 + b x1 x2 x3 x4
//   product-torus     r_k e^{i phi_k}, phi_k = psi_k + warp sin psi_{k+1}
//   hamiltonian-torus sqrt(r_k^2 + 2 eps d_k S) e^{i psi_k},
//                     S = sin psi1 cos psi2 + sin(psi3 + psi4) / 2
//   complex-torus     the plane z3 = z4 = 0 over a periodic unit box
//   fs-real-slice     real points of the Fubini-Study chart
//   fs-complex-slice  z3 = z4 = 0 in the Fubini-Study chart

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cayley/patches.hpp"

namespace cayley {

using PatchParams = std::map<std::string, std::vector<double>>;

const std::vector<std::string>& builtin_patch_names();

// The chart a built-in patch lives in unless told otherwise.
std::string default_ambient(std::string_view name);

// Throws Error{invalid_argument} for unknown names, unknown or malformed
// parameters. A null chart selects default_ambient(name).
Patch builtin_patch(std::string_view name, const PatchParams& params = {},
                    std::shared_ptr<const KahlerChart> chart = nullptr, PatchGrid grid = {});

std::shared_ptr<const KahlerChart> chart_by_name(std::string_view name, ChartSteps steps = {});

}  // namespace cayley
