// include/sfvoc/runtime.h

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

#ifndef SFVOC_RUNTIME_H_
#define SFVOC_RUNTIME_H_

namespace sfvoc {

// Keeps large temporaries (im2col buffers, spectrograms) on the heap instead
// of mapping and unmapping fresh pages for each one.  Call once from main().
void TuneAllocator();

}  // namespace sfvoc

#endif  // SFVOC_RUNTIME_H_
