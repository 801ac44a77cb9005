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

#include "kirchfrac/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "kirchfrac/errors.hpp"

namespace kirchfrac {

namespace {

constexpr const char* kFieldTag = "# kirchfrac-field";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  return in;
}

bool masked(const DomainSpec& d) {
  int box = 1;
  for (int a = 0; a < d.dim(); ++a) box *= d.omega_cells(a);
  return d.num_omega_cells() != box;
}

std::string mask_string(const DomainSpec& d) {
  std::string out;
  const int nx = d.omega_cells(0);
  const int ny = d.dim() == 2 ? d.omega_cells(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Index idx{i + d.margin(0), d.dim() == 2 ? j + d.margin(1) : 0};
      out += d.cell_in_omega(d.cell_flat(idx)) ? '1' : '0';
    }
  }
  return out;
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("field header: bad number '{}'", item));
    }
  }
  return out;
}

}  // namespace

void write_field_csv(std::ostream& os, const DiscreteField& u) {
  const DomainSpec& d = u.domain();
  fmt::print(os, "{} dim={} lo={:.17g},{:.17g} hi={:.17g},{:.17g} cells={},{} margin={},{}", kFieldTag, d.dim(),
             d.omega_lo()[0], d.omega_lo()[1], d.omega_hi()[0], d.omega_hi()[1], d.omega_cells(0),
             d.dim() == 2 ? d.omega_cells(1) : 0, d.margin(0), d.dim() == 2 ? d.margin(1) : 0);
  if (masked(d)) fmt::print(os, " mask={}", mask_string(d));
  os << "\nnode,x,y,value\n";
  const auto& values = u.nodal();
  for (int node = 0; node < d.num_nodes(); ++node) {
    const Point x = d.node_coord(node);
    fmt::print(os, "{},{:.17g},{:.17g},{:.17g}\n", node, x[0], d.dim() == 2 ? x[1] : 0.0, values[node]);
  }
}

void write_field_csv(const std::string& path, const DiscreteField& u) {
  auto out = open_out(path);
  write_field_csv(out, u);
}

DomainSpec parse_field_header(const std::string& line) {
  if (line.rfind(kFieldTag, 0) != 0) throw ConfigError("field file lacks the geometry header");
  std::map<std::string, std::string> kv;
  std::stringstream ss(line.substr(std::string(kFieldTag).size()));
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("field header: bad token '{}'", token));
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"dim", "lo", "hi", "cells", "margin"}) {
    if (!kv.count(key)) throw ConfigError(fmt::format("field header: missing '{}'", key));
  }
  const auto dimv = split_numbers(kv["dim"]);
  const auto lo = split_numbers(kv["lo"]);
  const auto hi = split_numbers(kv["hi"]);
  const auto cells = split_numbers(kv["cells"]);
  const auto margin = split_numbers(kv["margin"]);
  if (dimv.size() != 1 || lo.size() != 2 || hi.size() != 2 || cells.size() != 2 || margin.size() != 2) {
    throw ConfigError("field header: wrong number of entries");
  }
  const int dim = static_cast<int>(dimv[0]);
  try {
    DomainSpec d = DomainSpec::box(dim, {lo[0], lo[1]}, {hi[0], hi[1]},
                                   {static_cast<int>(cells[0]), static_cast<int>(cells[1])},
                                   {static_cast<int>(margin[0]), static_cast<int>(margin[1])});
    if (kv.count("mask")) {
      const std::string& m = kv["mask"];
      std::vector<bool> flags;
      for (char c : m) {
        if (c != '0' && c != '1') throw ConfigError("field header: mask must be a 0/1 string");
        flags.push_back(c == '1');
      }
      d = d.with_mask(std::move(flags));
    }
    return d;
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("field header: {}", e.what()));
  }
}

DiscreteField read_field_csv(std::istream& is, const DomainPtr& dom) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty field file");
  auto header = std::make_shared<const DomainSpec>(parse_field_header(line));
  if (dom && !dom->same_grid(*header)) throw ConfigError("field file describes a different grid");
  DomainPtr target = dom ? dom : header;
  if (!std::getline(is, line) || line.rfind("node,", 0) != 0) throw ConfigError("field file lacks a column header");
  std::vector<double> values(target->num_nodes(), 0.0);
  std::vector<bool> seen(values.size(), false);
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = split_numbers(line);
    if (cols.size() != 4) throw ConfigError(fmt::format("field file: bad row '{}'", line));
    const int node = static_cast<int>(cols[0]);
    if (node < 0 || node >= target->num_nodes() || cols[0] != node || seen[node]) {
      throw ConfigError(fmt::format("field file: bad node index in '{}'", line));
    }
    seen[node] = true;
    values[node] = cols[3];
    ++rows;
  }
  if (rows != target->num_nodes()) throw ConfigError("field file: missing nodes");
  try {
    return DiscreteField(target, std::move(values));
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("field file: {}", e.what()));
  }
}

DiscreteField read_field_csv(const std::string& path, const DomainPtr& dom) {
  auto in = open_in(path);
  return read_field_csv(in, dom);
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "iter,energy,grad_norm,step,backtracks,certificate,norm_u,norm_v\n";
  for (const auto& t : trace) {
    fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g}\n", t.iteration, t.energy, t.grad_norm,
               t.step, t.backtracks, t.certificate, t.norm_u, t.norm_v);
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceEntry>& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
}

void write_residual_csv(std::ostream& os, const WeakResidual& r) {
  os << "index,r_u,r_v\n";
  for (Eigen::Index i = 0; i < r.r_u.size(); ++i) fmt::print(os, "{},{:.17g},{:.17g}\n", i, r.r_u[i], r.r_v[i]);
}

void write_residual_csv(const std::string& path, const WeakResidual& r) {
  auto out = open_out(path);
  write_residual_csv(out, r);
}

void write_plotdata(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "# iter energy grad_norm certificate\n";
  for (const auto& t : trace) {
    fmt::print(os, "{} {:.17g} {:.17g} {:.17g}\n", t.iteration, t.energy, t.grad_norm, t.certificate);
  }
}

void write_plotdata(const std::string& path, const std::vector<TraceEntry>& trace) {
  auto out = open_out(path);
  write_plotdata(out, trace);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace kirchfrac
