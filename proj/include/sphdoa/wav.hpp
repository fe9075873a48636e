// Copyright 2026 The sphdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// RIFF/WAVE I/O. Reads 16-bit PCM and 32-bit IEEE float (plain or
// WAVE_FORMAT_EXTENSIBLE); writes 32-bit float.

#include <string>

#include "sphdoa/tf_analysis.hpp"

namespace sphdoa {

MultichannelSignal read_wav(const std::string& path);
void write_wav(const std::string& path, const MultichannelSignal& sig);

}  // namespace sphdoa
