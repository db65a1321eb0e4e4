// include/sfvoc/checkpoint.h

// Copyright 2026  sfvoc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SFVOC_CHECKPOINT_H_
#define SFVOC_CHECKPOINT_H_

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "sfvoc/tensor.h"

namespace sfvoc {

inline constexpr uint32_t kContainerVersion = 1;

// Self-describing binary container: JSON metadata plus named shaped arrays.
//
//   "SFVOCKPT" | u32 version | u64 meta_len | meta (JSON, UTF-8)
//   | u64 count | count x (u32 name_len | name | u32 ndim | i64 dims[ndim]
//   | f64 values) | u32 crc32 of all preceding bytes
//
// All integers and doubles are little-endian; doubles are stored bit for bit,
// so write -> read -> write reproduces the file exactly.
struct Container {
  nlohmann::json meta;
  std::map<std::string, Tensor> arrays;
};

void WriteContainer(const std::string &path, const Container &c);
Container ReadContainer(const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_CHECKPOINT_H_
