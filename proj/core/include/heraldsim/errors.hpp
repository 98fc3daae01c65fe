// Copyright 2026 The heraldsim Authors
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

namespace heraldsim {

/// Postselection on a level whose population is numerically zero.
class HeraldImpossible : public std::runtime_error {
 public:
  HeraldImpossible(const std::string& what, double probability)
      : std::runtime_error(what), probability_(probability) {}
  double probability() const noexcept { return probability_; }

 private:
  double probability_;
};

/// The time integrator could not reach the requested tolerance.
class IntegratorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters sit on a pole of a closed-form expression or make a linear
/// system singular.
class DegenerateParameters : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration. `field` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field = {})
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace heraldsim
