// Copyright 2026 The parityq developers
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace parityq {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented size guard was exceeded (e.g. statevector width, decoder
/// table size, distance enumeration).
class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& msg) : Error(msg) {}
};

/// Malformed input: bad circuit text, bad JSON, out-of-range indices,
/// dimension mismatches.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A precondition of an operation was violated by the caller.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Protocol steps were requested in an order that is not sound (e.g. removing
/// a qubit whose connecting stabilizer is still actively measured, or an
/// angle/backend combination the backend cannot represent).
class ProtocolViolation : public Error {
 public:
  explicit ProtocolViolation(const std::string& msg) : Error(msg) {}
};

/// Seeded label derivation found the seed set contradicts the stabilizers.
/// `offending_stabilizers` lists indices of stabilizers that cannot be
/// satisfied.
class InconsistentSeeds : public Error {
 public:
  InconsistentSeeds(const std::string& msg, std::vector<uint32_t> offending)
      : Error(msg), offending_stabilizers(std::move(offending)) {}
  std::vector<uint32_t> offending_stabilizers;
};

/// Seeded label derivation cannot pin down every qubit's label.
/// `undetermined_qubits` lists the qubits whose labels remain free.
class UnderdeterminedLabels : public Error {
 public:
  UnderdeterminedLabels(const std::string& msg, std::vector<uint32_t> qubits)
      : Error(msg), undetermined_qubits(std::move(qubits)) {}
  std::vector<uint32_t> undetermined_qubits;
};

/// A randomized generator was asked for something that cannot exist
/// (e.g. parity qubits under a stabilizer-weight cap too small to ever
/// introduce one).
class InfeasibleSpec : public Error {
 public:
  explicit InfeasibleSpec(const std::string& msg) : Error(msg) {}
};

/// A forced measurement outcome contradicts a deterministic outcome.
class ForcedOutcomeContradiction : public Error {
 public:
  explicit ForcedOutcomeContradiction(const std::string& msg) : Error(msg) {}
};

}  // namespace parityq
