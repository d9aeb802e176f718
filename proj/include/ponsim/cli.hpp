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

#include <iosfwd>

namespace ponsim {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes: 0 success, 1 I/O error, 2 validation error, 3 protocol
// failure at run time.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitProtocol = 3;

/// Full CLI entry point; out/err are injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace ponsim
