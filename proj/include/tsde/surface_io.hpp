// CSV surfaces and JSON-lines certificate records.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsde/grid.hpp"
#include "tsde/inequalities.hpp"

namespace tsde {

/// Writes rows "x,y,z,value" with 17-significant-digit formatting, which
/// round-trips IEEE doubles exactly.
void write_surface_csv(std::ostream& os, const GridFunction& g);

struct SurfaceRow {
    double x, y, z, value;
};

/// Reads a surface written by write_surface_csv. Throws std::runtime_error
/// on malformed input.
std::vector<SurfaceRow> read_surface_csv(std::istream& is);

/// One JSON object per line: kind, verdict, pass, premise_ok, margin, the
/// constants map, and the worst offender point when present.
std::string certificate_json_line(const Certificate& cert);

}  // namespace tsde
