#pragma once

#include <string>

namespace seqbayes {

// Regeneration of the quadratic-cost illustration data (classic penalty).
// Writes four CSV files into out_dir:
//   fig1_boundaries.csv  A* sweeps in a (b=c=1), b (a=c=1) and c (a=b=1)
//   fig2_value.csv       V(pi) curves over a and b grids
//   fig3_densities.csv   conditional stopping densities at pi = 0.625,
//                        a = 1/2, c = 1, b in {1.28, 1.31, 1.34, 1.37, 1.4}
//   fig3_errors.csv      type I/II error and power sweep over b in [1, sqrt(2)]
struct FigureOptions {
    int fig1_points = 40;          // per sweep
    int fig2_pi_points = 100;      // pi grid resolution (plus endpoints)
    double fig3_t_max = 12.0;
    int fig3_t_points = 200;
    int fig3_errors_points = 43;
};

void write_figure_csvs(const std::string& out_dir, const FigureOptions& opts = {});

// Locale-independent CSV number formatting ("%.17g").
std::string csv_number(double x);

}  // namespace seqbayes
