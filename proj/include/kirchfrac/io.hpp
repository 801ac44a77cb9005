// Copyright 2026 The kirchfrac Authors
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

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kirchfrac/fractional_operator.hpp"
#include "kirchfrac/function_spaces.hpp"
#include "kirchfrac/minimizer.hpp"

namespace kirchfrac {

/// Nodal values of B with a commented geometry header:
///   # kirchfrac-field dim=1 lo=0,0 hi=1,0 cells=16,0 margin=8,0
///   node,x,y,value
void write_field_csv(std::ostream& os, const DiscreteField& u);
void write_field_csv(const std::string& path, const DiscreteField& u);

/// Reads a field written by write_field_csv. When `dom` is given the header
/// must describe the same grid. Throws ConfigError on malformed input.
DiscreteField read_field_csv(std::istream& is, const DomainPtr& dom = nullptr);
DiscreteField read_field_csv(const std::string& path, const DomainPtr& dom = nullptr);

/// Grid described by a field header.
DomainSpec parse_field_header(const std::string& line);

/// iter,energy,grad_norm,step,backtracks,certificate,norm_u,norm_v
void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);
void write_trace_csv(const std::string& path, const std::vector<TraceEntry>& trace);

/// index,r_u,r_v
void write_residual_csv(std::ostream& os, const WeakResidual& r);
void write_residual_csv(const std::string& path, const WeakResidual& r);

/// Whitespace-separated columns for gnuplot: iter energy grad_norm certificate.
void write_plotdata(std::ostream& os, const std::vector<TraceEntry>& trace);
void write_plotdata(const std::string& path, const std::vector<TraceEntry>& trace);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace kirchfrac
