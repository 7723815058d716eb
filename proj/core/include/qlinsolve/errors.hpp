// Copyright 2026 The qlinsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qlinsolve {

// Base of every error the library raises on purpose. Argument-shape problems
// (bad index, wrong length) are reported with the standard exception types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// A requested block or row of A^-1 cannot live inside an orthogonal matrix.
class InfeasibleEmbedding : public Error {
 public:
  using Error::Error;
};

class GramSchmidtDegenerate : public Error {
 public:
  using Error::Error;
};

// ||b||_2 > 1: b cannot be stored as probability amplitudes.
class NormTooLarge : public Error {
 public:
  using Error::Error;
};

// Multi-start search exhausted without meeting the residual target. Inconclusive:
// it does not prove that no solution exists.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qlinsolve
