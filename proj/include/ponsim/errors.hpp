/*
 * Copyright 2026 The ponsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ponsim {

/// Malformed wire data (frame/cell/grant/message codecs).
struct CodecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid scenario or configuration; message carries the field path.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runtime protocol failure (ranging timeout, out-of-reach ONT, ...).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Optical plant misuse (wavelength outside every defined band, ...).
struct PhyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace ponsim
