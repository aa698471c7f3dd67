// Copyright 2026 starcorr contributors
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

#ifndef STARCORR_IO_HPP
#define STARCORR_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "starcorr/bell.hpp"
#include "starcorr/nlocal.hpp"
#include "starcorr/qnet.hpp"
#include "starcorr/star.hpp"

// File formats and machine-readable reports. All parsers throw
// ValidationError on malformed input. Formats are documented in README.md.
namespace starcorr::io {

using nlohmann::json;

// Bell matrix: {"rows": int, "cols": int, "entries": [[row-major reals]]}.
json matrix_to_json(const bell::BellMatrix& m);
bell::BellMatrix matrix_from_json(const json& j);

// Scenario: {"sources": N, "edge_matrices": [matrix...],
//            "node": {"alphabets": {"y": size}, "settings": [{"y":, "f": [bits]}]}}.
json scenario_to_json(const star::StarScenario& sc);
star::StarScenario scenario_from_json(const json& j);

// Classical strategy: {"supports": [{"weights": [...]}], "edges": [[...]],
//                      "node": {"y": [outcome per lambda tuple]}}.
json strategy_to_json(const nlocal::NLocalStrategy& st);
nlocal::NLocalStrategy strategy_from_json(const json& j);

// Observables: {"bloch": [x,y,z]} | {"pauli": 1|2|3} | {"matrix": [[re,im]...]}.
json observable_to_json(const qmath::Observable& o);
qmath::Observable observable_from_json(const json& j);

// States: {"preset": "psi00"} | {"werner": {"v": v}} | {"matrix": [[re,im]...]}
// with optional "dims": [edge, node]. Measurements: {"bsm2": true} |
// {"product": [obs...]} | {"pattern": [obs...]} | {"projectors": [[[re,im]...]...]}.
json quantum_to_json(const qnet::QuantumNetworkStrategy& qs);
qnet::QuantumNetworkStrategy quantum_from_json(const json& j);

// Bipartite strategy: {"state": state, "alice": [obs...], "bob": [obs...]}.
json bell_strategy_to_json(const qnet::BellStrategy& bs);
qnet::BellStrategy bell_strategy_from_json(const json& j);

json reduced_to_json(const nlocal::ReducedStrategy& r);

/// Preset strategy files in the symbolic measurement grammar; kept in sync
/// with qnet::preset by a round-trip test.
json preset_strategy_json(const std::string& name, int sources);

struct Report {
  std::string command;
  std::string inputs_digest;
  json results;
  double timing_ms = 0.0;
};

json report_to_json(const Report& r);
Report report_from_json(const json& j);

/// CSV projection of a report: scalar results and scalar arrays become
/// columns; vector I flattens to I_1..I_n.
std::string report_to_csv(const Report& r);

/// FNV-1a 64-bit digest over the concatenated file contents.
std::string digest_files(const std::vector<std::string>& paths);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

/// The tolerance constants in force, echoed into every report.
json tolerance_constants(double violation_tol);

}  // namespace starcorr::io

#endif  // STARCORR_IO_HPP
