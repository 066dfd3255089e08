// Copyright 2026 The hocforge Authors
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

#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace hocforge {

/// Base of every error raised by the library. Each failure mode named by an
/// operation contract has its own subclass so callers can catch precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOCFORGE_DECLARE_ERROR(Name)       \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

HOCFORGE_DECLARE_ERROR(InvalidArgument);
HOCFORGE_DECLARE_ERROR(DegenerateTransform);
HOCFORGE_DECLARE_ERROR(OutOfBounds);
HOCFORGE_DECLARE_ERROR(DegenerateInstance);
HOCFORGE_DECLARE_ERROR(EmptyScene);
HOCFORGE_DECLARE_ERROR(ShapeMismatch);
HOCFORGE_DECLARE_ERROR(NumericalFailure);
HOCFORGE_DECLARE_ERROR(ProtocolError);
HOCFORGE_DECLARE_ERROR(Timeout);
HOCFORGE_DECLARE_ERROR(NoForeground);
HOCFORGE_DECLARE_ERROR(DegenerateConfig);
HOCFORGE_DECLARE_ERROR(ConfigError);
HOCFORGE_DECLARE_ERROR(IoError);

#undef HOCFORGE_DECLARE_ERROR

/// Raised by bayes_opt when the objective returns a non-finite value.
class ObjectiveError : public Error {
 public:
  ObjectiveError(const std::string& what, std::array<double, 4> point)
      : Error(what), point_(point) {}

  /// Offending point, in native units.
  const std::array<double, 4>& point() const noexcept { return point_; }

 private:
  std::array<double, 4> point_;
};

}  // namespace hocforge
