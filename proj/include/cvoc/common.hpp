// Copyright 2026 The cvoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVOC_COMMON_HPP_
#define CVOC_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cvoc {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be opened or does not exist.
class FileError : public Error {
 public:
  explicit FileError(const std::string& msg) : Error(msg) {}
};

// File exists but its contents are not in the expected format.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// File ends before the declared payload is complete.
class TruncatedError : public Error {
 public:
  explicit TruncatedError(const std::string& msg) : Error(msg) {}
};

// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

}  // namespace cvoc

#endif  // CVOC_COMMON_HPP_
