// Copyright 2026 The wmsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace wmsim {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class NotNormalized : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

class NotHermitian : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

class NonUnitary : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// Post-selected state orthogonal to the pre-selected one; the weak value is
/// undefined.
class OrthogonalPostselection : public Error {
  public:
    using Error::Error;
};

class GridTooCoarse : public Error {
  public:
    using Error::Error;
};

class GridTooSmall : public Error {
  public:
    using Error::Error;
};

class WrongSpace : public Error {
  public:
    using Error::Error;
};

class AliasingRisk : public Error {
  public:
    using Error::Error;
};

class ShiftTooLarge : public Error {
  public:
    using Error::Error;
};

class EmptyImage : public Error {
  public:
    using Error::Error;
};

class NoSignChange : public Error {
  public:
    using Error::Error;
};

class NoInteriorExtremum : public Error {
  public:
    using Error::Error;
};

class FormatError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// An engine failure during a sweep, annotated with the coupling strength at
/// which it happened.
class SweepError : public Error {
  public:
    SweepError(double delta_mm, const std::string &what)
        : Error("at delta = " + std::to_string(delta_mm) + " mm: " + what),
          delta_mm_(delta_mm) {}

    [[nodiscard]] double delta_mm() const noexcept { return delta_mm_; }

  private:
    double delta_mm_;
};

} // namespace wmsim
