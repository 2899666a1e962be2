// Copyright 2026 The pqnet Authors
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

#include <stdexcept>
#include <string>

namespace pqnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad index, shape, probability).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Amplitude encoding was asked to encode a row with zero norm.
class EncodingError : public Error {
  public:
    using Error::Error;
};

/// A persisted file (dataset, checkpoint, IDX) is malformed.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// A generator family could not produce an in-manifold sample.
class GenerationError : public Error {
  public:
    using Error::Error;
};

/// Training diverged (non-finite loss or gradient).
class TrainingError : public Error {
  public:
    using Error::Error;
};

} // namespace pqnet
