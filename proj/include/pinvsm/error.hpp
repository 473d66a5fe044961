/*
 * Copyright 2026 The pinvsm-sim Authors
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
#include <string_view>

namespace pinvsm {

/// Error categories raised by the simulator. Each maps onto a stable
/// symbolic name (ENOSPACE, EOOB, ...) and a process exit code.
enum class Errc {
  NoSpace,
  BadGranularity,
  OutOfBounds,
  Overflow,
  Parse,
  BadOperand,
  NoLine,
  EmptyKey,
  ArrayFull,
  NoCode,
  NoMethod,
  SelfEdge,
  Utf8,
  Ragged,
  Weights,
  Config,
  Usage,
  Io,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::NoSpace: return "ENOSPACE";
    case Errc::BadGranularity: return "EBADGRAN";
    case Errc::OutOfBounds: return "EOOB";
    case Errc::Overflow: return "EOVERFLOW";
    case Errc::Parse: return "EPARSE";
    case Errc::BadOperand: return "EBADOPD";
    case Errc::NoLine: return "ENOLINE";
    case Errc::EmptyKey: return "EEMPTYKEY";
    case Errc::ArrayFull: return "EARRAYFULL";
    case Errc::NoCode: return "ENOCODE";
    case Errc::NoMethod: return "ENOMETHOD";
    case Errc::SelfEdge: return "ESELFEDGE";
    case Errc::Utf8: return "EUTF8";
    case Errc::Ragged: return "ERAGGED";
    case Errc::Weights: return "EWEIGHTS";
    case Errc::Config: return "ECONFIG";
    case Errc::Usage: return "EUSAGE";
    case Errc::Io: return "EIO";
  }
  return "EUNKNOWN";
}

/// Exit code contract: 0 success, 1 domain error, 2 usage/config, 3 I/O.
constexpr int exit_code_for(Errc c) noexcept {
  switch (c) {
    case Errc::Config:
    case Errc::Usage:
    case Errc::Weights:
      return 2;
    case Errc::Io:
      return 3;
    default:
      return 1;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pinvsm
