#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace erba {

// Scatter plot of a node set on [lo, hi]^d, d in {1, 2}: retained nodes as
// filled circles, removed nodes as hollow ones. Plain SVG 1.1, unit-square
// viewBox. 1-D sets are drawn on the horizontal midline.
void write_node_svg(const std::string& path, const Eigen::MatrixXd& nodes,
                    const std::vector<bool>& retained, double lo, double hi);

}  // namespace erba
