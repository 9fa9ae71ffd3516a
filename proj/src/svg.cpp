#include "dimer/svg.hpp"

#include <algorithm>
#include <sstream>

#include "dimer/height.hpp"

namespace dimer {

std::string render_tiling_svg(const lattice::TemperleyanRegion& region, const Tiling& tiling,
                              const std::vector<int>* heights) {
    const int unit = 24;
    int minx = 0, miny = 0, maxx = 1, maxy = 1;
    if (!region.cells.empty()) {
        minx = region.cells.front().x;
        maxx = minx + 1;
        miny = maxy = region.cells.front().y;
        for (const Cell& c : region.cells) {
            minx = std::min(minx, c.x);
            maxx = std::max(maxx, c.x + 1);
            miny = std::min(miny, c.y);
            maxy = std::max(maxy, c.y + 1);
        }
    }
    const int w = (maxx - minx + 2) * unit, h = (maxy - miny + 2) * unit;
    auto px = [&](double x) { return int((x - minx + 1) * unit); };
    auto py = [&](double y) { return int((maxy - y + 1) * unit); }; // flip y

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    Tiling sorted = tiling;
    sorted.normalize();
    for (const Domino& d : sorted.dominoes) {
        const bool horizontal = d.orientation == Orientation::H;
        const int x = px(d.cell.x), y = py(d.cell.y + (horizontal ? 1 : 2));
        const int rw = horizontal ? 2 * unit : unit;
        const int rh = horizontal ? unit : 2 * unit;
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << rw << "\" height=\"" << rh
            << "\" rx=\"3\" fill=\"" << (horizontal ? "#7fb2e5" : "#e5a97f")
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    }
    if (heights != nullptr && !region.cells.empty()) {
        const height::HeightEngine engine(region);
        const auto& vs = engine.vertices();
        for (size_t i = 0; i < vs.size() && i < heights->size(); ++i) {
            out << "<text x=\"" << px(vs[i].x) << "\" y=\"" << py(vs[i].y) + 4
                << "\" font-size=\"9\" text-anchor=\"middle\" fill=\"#111111\">" << (*heights)[i]
                << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace dimer
