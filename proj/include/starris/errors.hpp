// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The starris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef STARRIS_ERRORS_HPP
#define STARRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starris
{

// Invalid configuration value; field() names the offending key (dotted path)
class config_error : public std::invalid_argument
{
public:
    config_error(std::string field, const std::string &what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

// Series or quadrature did not reach the requested tolerance
class convergence_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Power targets that no feasible allocation can meet
class infeasible_error : public std::runtime_error
{
public:
    infeasible_error(std::string binding, const std::string &what)
        : std::runtime_error(binding + ": " + what), binding_(std::move(binding)) {}

    const std::string &binding() const noexcept { return binding_; }

private:
    std::string binding_;
};

} // namespace starris

#endif
