#pragma once

// Line-oriented pulse-sequence language (.pseq).
//
//   # comment
//   ions N=<int>
//   trap nu=<float> eta=<float> rabi=<float> nmax=<int>
//   frame R | frame Rprime delta=<float>
//   carrier_pi2 ion=<int> [phase=<float>]
//   jc_pi ion=<int> n=<int> [mode=ideal|physical]
//   disp_pi ion=<int> n=<int> [mode=ideal|physical]
//   disp_pi all n=<int> [mode=ideal|physical]
//   wait T=<float>
//
// `ion=N` (the literal letter) addresses the last ion and may be omitted on
// the pulse statements. Header lines may appear at most once each; missing
// ones take the defaults of TrapParams and frame R.

#include "ionghz/hilbert.hpp"
#include "ionghz/pulses.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ionghz::seqlang {

struct SourceSpan {
    int line = 0;
    int column = 0;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    int line = 0;
    int column = 0;
    std::string message;

    /// "line:col: severity: message"
    std::string to_string() const;
};

struct SequenceStep {
    PulseSpec spec;
    bool ion_is_last = false;  // written as ion=N
    SourceSpan span;           // start of the statement
    SourceSpan ion_span;
    SourceSpan n_span;
};

struct SequenceProgram {
    TrapParams params;
    Frame frame;
    std::vector<SequenceStep> steps;

    /// Equality of params, frame and step specs, ignoring source positions.
    bool structurally_equal(const SequenceProgram& other) const;
};

struct ParseResult {
    std::optional<SequenceProgram> program;  // set iff there are no errors
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

/// Never throws on malformed input; every problem becomes a diagnostic.
ParseResult parse(std::string_view source);

/// Range checks of each step against the program's own params.
std::vector<ParseDiagnostic> validate(const SequenceProgram& program);

/// Canonical text: full header, one step per line, fixed key order, no comments.
std::string format(const SequenceProgram& program);

/// The five-pulse preparation sequence as a program.
SequenceProgram canonical_program(const TrapParams& params, PulseMode mode = PulseMode::Ideal);

struct TraceEntry {
    std::size_t step = 0;
    int line = 0;
    std::string label;
    double clock = 0.0;
    double norm = 0.0;
    std::vector<double> fock_populations;
};

struct ExecutionResult {
    StateVector final_state;
    std::vector<TraceEntry> trace;
};

/// A pulse failed while executing; what() carries the source position.
class ExecutionError : public std::runtime_error {
public:
    ExecutionError(SourceSpan span, const std::string& message);
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

/// Runs the steps back to back from `initial` (ground state by default).
/// Throws std::invalid_argument if the program does not validate.
ExecutionResult execute(const SequenceProgram& program, std::optional<StateVector> initial = std::nullopt);

}  // namespace ionghz::seqlang
