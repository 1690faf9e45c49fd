#pragma once

#include <string>

#include "evopatch/nn/model.hpp"

namespace evopatch::nn {

// Binary model container (little-endian, see README for the byte layout):
//   magic "EVPM", u32 version = 1,
//   input shape h/w/c as i32,
//   u32 layer count, then per layer a u8 kind tag plus its fields,
//   then per layer u64 weight count + f32 data, u64 bias count + f32 data.
// Round-trips bitwise: save(load(save(m))) == save(m).
void save_model(const std::string& path, const Model<float>& model);
Model<float> load_model(const std::string& path);

} // namespace evopatch::nn
