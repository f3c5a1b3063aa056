#include "erba/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace erba {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

}  // namespace

void write_node_svg(const std::string& path, const Eigen::MatrixXd& nodes,
                    const std::vector<bool>& retained, double lo, double hi) {
    if (nodes.cols() < 1 || nodes.cols() > 2)
        throw std::invalid_argument("write_node_svg: only 1-D and 2-D node sets");
    if (static_cast<Eigen::Index>(retained.size()) != nodes.rows())
        throw std::invalid_argument("write_node_svg: mask length mismatch");
    if (!(hi > lo)) throw std::invalid_argument("write_node_svg: degenerate box");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");

    const double span = hi - lo;
    const double inset = 0.03;
    const double scale = 1.0 - 2.0 * inset;
    auto map_x = [&](double x) { return inset + scale * (x - lo) / span; };
    auto map_y = [&](double y) { return inset + scale * (1.0 - (y - lo) / span); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "viewBox=\"0 0 1 1\" width=\"520\" height=\"520\">\n"
        << "  <rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n"
        << "  <rect x=\"" << fmt(inset) << "\" y=\"" << fmt(inset) << "\" width=\"" << fmt(scale)
        << "\" height=\"" << fmt(scale)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"0.002\"/>\n";

    const bool one_d = nodes.cols() == 1;
    // removed first so retained markers are drawn on top
    out << "  <g fill=\"none\" stroke=\"#999999\" stroke-width=\"0.0025\">\n";
    for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
        if (retained[static_cast<std::size_t>(i)]) continue;
        const double cx = map_x(nodes(i, 0));
        const double cy = one_d ? 0.5 : map_y(nodes(i, 1));
        out << "    <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"0.006\"/>\n";
    }
    out << "  </g>\n";

    out << "  <g fill=\"#1f6feb\">\n";
    for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
        if (!retained[static_cast<std::size_t>(i)]) continue;
        const double cx = map_x(nodes(i, 0));
        const double cy = one_d ? 0.5 : map_y(nodes(i, 1));
        out << "    <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"0.006\"/>\n";
    }
    out << "  </g>\n</svg>\n";

    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace erba
