#pragma once

// Serialization of states, Ramsey scans and execution traces.
//
// State dump (JSON):
//   { "n_ions": int, "n_max": int,
//     "frame": { "tag": "R" | "Rprime", "detuning": float },
//     "clock": float,
//     "amplitudes": [[re, im], ...] }     // flat = n * 2^N + ion_bits
//
// Ramsey CSV: header `delta,T,P_sim,P_analytic`, 15 significant digits.

#include "ionghz/hilbert.hpp"
#include "ionghz/protocol.hpp"
#include "ionghz/seqlang.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace ionghz::io {

nlohmann::json state_to_json(const StateVector& state);

/// Rebuilds a dumped state. Trap scales not stored in the dump (nu, eta,
/// rabi) come from `base`; n_ions and n_max must be present in the JSON.
StateVector state_from_json(const nlohmann::json& j, TrapParams base = {});

/// "%.14e": fixed 15 significant digits, platform independent.
std::string csv_number(double value);

void write_ramsey_csv(std::ostream& out, const RamseyResult& result);
nlohmann::json ramsey_to_json(const RamseyResult& result);

/// { "steps": [ { "step", "line", "label", "clock", "norm", "fock_populations" } ] }
nlohmann::json trace_to_json(const std::vector<seqlang::TraceEntry>& trace);
void write_trace_csv(std::ostream& out, const std::vector<seqlang::TraceEntry>& trace);

}  // namespace ionghz::io
