// Copyright 2026 the wigdil authors
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

#ifndef WIGDIL_ERRORS_HPP
#define WIGDIL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wigdil {

// Two error families, matching the CLI exit-code contract: configuration /
// parse problems exit with 2, physics and numerics problems with 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class PhysicsError : public std::runtime_error {
 public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct UnknownBathType : ConfigError {
  using ConfigError::ConfigError;
};

struct UnphysicalInit : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct NonPositiveDeterminant : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct DimensionMismatch : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct SingularReference : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct BadPartition : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct BadIndex : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct EmptyBand : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct ToleranceFailure : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct VanishingG : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct VanishingGdot : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct VanishingGamma : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct InsufficientData : PhysicsError {
  using PhysicsError::PhysicsError;
};

}  // namespace wigdil

#endif  // WIGDIL_ERRORS_HPP
