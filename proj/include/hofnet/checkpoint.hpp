#pragma once

#include <iosfwd>
#include <string>

#include "hofnet/mlp.hpp"

namespace hofnet {

// Parameter block: magic "HOF1", u32 little-endian layer-size count, the
// layer sizes, an activation code (0 relu, 1 tanh), then the packed theta as
// f64 little-endian. Round-trips are bit-exact.
void write_params_block(std::ostream& os, const FlatParams& params);
FlatParams read_params_block(std::istream& is);

void save_params(const std::string& path, const FlatParams& params);
FlatParams load_params(const std::string& path);

// Low-level little-endian primitives shared by the checkpoint writers.
void write_u32(std::ostream& os, std::uint32_t v);
std::uint32_t read_u32(std::istream& is);
void write_f64(std::ostream& os, double v);
double read_f64(std::istream& is);

} // namespace hofnet
