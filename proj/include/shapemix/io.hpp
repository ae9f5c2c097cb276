#pragma once

#include <string>

#include "shapemix/basis.hpp"
#include "shapemix/cubic_newton.hpp"
#include "shapemix/kw.hpp"

namespace shapemix {

// File formats (all numbers serialized with 17 significant digits):
//   samples  one decimal literal per line, '#' starts a comment;
//            with column >= 1, comma-separated rows and that column
//   weights  M lines "index,value", 1-based index
//   trace    CSV "k,f,L,fw_gap,subiters,step"
//   density  CSV "x,density"
//   kw cert  header "nu_min nu_max feasibility_margin gamma bound17
//            bound18 dual_distance_bound", then one nu entry per line

std::string format_double(double v);

Vec read_samples(const std::string& path, int column = 0,
                 bool normalize = false);
void write_samples(const std::string& path, const Vec& samples);

Vec read_weights(const std::string& path);
void write_weights(const std::string& path, const Vec& w);

void write_trace(const std::string& path, const SolveTrace& trace);

void write_density(const std::string& path, const Vec& grid, const Vec& density);

void write_kw_certificate(const std::string& path, const KWCertificate& cert);

}  // namespace shapemix
