#include "ionghz/seqlang.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace ionghz::seqlang {

namespace {

struct Token {
    std::string_view text;
    int column = 0;
};

struct KeyValue {
    std::string_view key;
    std::string_view value;
    int key_column = 0;
    int value_column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') {
            break;
        }
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') {
            ++i;
        }
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

std::string number_text(double value) {
    char buffer[64];
    const auto result = std::to_chars(std::begin(buffer), std::end(buffer), value);
    return std::string(buffer, result.ptr);
}

// Collects diagnostics for one statement and parses its operands.
class StatementParser {
public:
    StatementParser(int line, const Token& keyword, std::vector<ParseDiagnostic>& out)
        : line_(line), keyword_(keyword), out_(out) {}

    void error(int column, std::string message) {
        out_.push_back({Severity::Error, line_, column, std::move(message)});
        failed_ = true;
    }

    bool failed() const { return failed_; }
    SourceSpan at(int column) const { return {line_, column}; }

    // Splits operands into key=value pairs and bare words; rejects unknown or
    // duplicate keys.
    void split(std::span<const Token> operands, std::initializer_list<std::string_view> keys,
               std::initializer_list<std::string_view> words) {
        for (const auto& token : operands) {
            const auto eq = token.text.find('=');
            if (eq == std::string_view::npos) {
                if (std::find(words.begin(), words.end(), token.text) == words.end()) {
                    error(token.column, "unexpected operand '" + std::string(token.text) + "' for '" +
                                            std::string(keyword_.text) + "'");
                } else if (word_.has_value()) {
                    error(token.column, "repeated operand '" + std::string(token.text) + "'");
                } else {
                    word_ = token;
                }
                continue;
            }
            KeyValue kv{token.text.substr(0, eq), token.text.substr(eq + 1), token.column,
                        token.column + static_cast<int>(eq) + 1};
            if (std::find(keys.begin(), keys.end(), kv.key) == keys.end()) {
                error(token.column, "unknown key '" + std::string(kv.key) + "' for '" + std::string(keyword_.text) + "'");
                continue;
            }
            if (values_.count(kv.key)) {
                error(token.column, "duplicate key '" + std::string(kv.key) + "'");
                continue;
            }
            values_[kv.key] = kv;
        }
    }

    const std::optional<Token>& word() const { return word_; }

    const KeyValue* find(std::string_view key) const {
        const auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    const KeyValue* require(std::string_view key) {
        const KeyValue* kv = find(key);
        if (!kv) {
            error(keyword_.column, "'" + std::string(keyword_.text) + "' requires " + std::string(key) + "=");
        }
        return kv;
    }

    std::optional<int> integer(const KeyValue& kv) {
        int value = 0;
        const auto* first = kv.value.data();
        const auto* last = first + kv.value.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (kv.value.empty() || ec != std::errc{} || ptr != last) {
            error(kv.value_column, "malformed integer '" + std::string(kv.value) + "' for " + std::string(kv.key));
            return std::nullopt;
        }
        return value;
    }

    std::optional<double> real(const KeyValue& kv) {
        double value = 0.0;
        const auto* first = kv.value.data();
        const auto* last = first + kv.value.size();
        if (first != last && *first == '+') {
            ++first;
        }
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (kv.value.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
            error(kv.value_column, "malformed number '" + std::string(kv.value) + "' for " + std::string(kv.key));
            return std::nullopt;
        }
        return value;
    }

    std::optional<PulseMode> mode() {
        const KeyValue* kv = find("mode");
        if (!kv) {
            return PulseMode::Ideal;
        }
        if (kv->value == "ideal") {
            return PulseMode::Ideal;
        }
        if (kv->value == "physical") {
            return PulseMode::Physical;
        }
        error(kv->value_column, "unknown mode '" + std::string(kv->value) + "' (expected ideal or physical)");
        return std::nullopt;
    }

private:
    int line_;
    Token keyword_;
    std::vector<ParseDiagnostic>& out_;
    bool failed_ = false;
    std::map<std::string_view, KeyValue, std::less<>> values_;
    std::optional<Token> word_;
};

struct Header {
    std::optional<int> ions_line;
    std::optional<int> trap_line;
    std::optional<int> frame_line;
    std::optional<int> n_ions;
    SourceSpan n_ions_span;
};

void parse_ion(StatementParser& p, SequenceStep& step) {
    const KeyValue* kv = p.find("ion");
    if (!kv || kv->value == "N") {
        step.ion_is_last = true;
        step.ion_span = kv ? p.at(kv->value_column) : step.span;
        return;
    }
    step.ion_span = p.at(kv->value_column);
    if (auto ion = p.integer(*kv)) {
        step.spec.target_ion = *ion;
    }
}

}  // namespace

std::string ParseDiagnostic::to_string() const {
    std::ostringstream out;
    out << line << ':' << column << ": " << (severity == Severity::Error ? "error" : "warning") << ": " << message;
    return out.str();
}

bool SequenceProgram::structurally_equal(const SequenceProgram& other) const {
    if (!(params == other.params) || !(frame == other.frame) || steps.size() != other.steps.size()) {
        return false;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i].spec == other.steps[i].spec) || steps[i].ion_is_last != other.steps[i].ion_is_last) {
            return false;
        }
    }
    return true;
}

ParseResult parse(std::string_view source) {
    ParseResult result;
    auto& diags = result.diagnostics;
    SequenceProgram program;
    Header header;
    bool any_error = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t end = std::min(source.find('\n', pos), source.size());
        const std::string_view line = source.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            if (end == source.size()) {
                break;
            }
            continue;
        }
        const Token& keyword = tokens.front();
        const std::span<const Token> operands(tokens.begin() + 1, tokens.end());
        StatementParser p(line_no, keyword, diags);

        const auto duplicate_header = [&](std::optional<int>& seen) {
            if (seen) {
                p.error(keyword.column, "duplicate '" + std::string(keyword.text) + "' line (first on line " +
                                            std::to_string(*seen) + ")");
                return true;
            }
            seen = line_no;
            return false;
        };

        SequenceStep step;
        step.span = p.at(keyword.column);
        bool is_step = false;

        if (keyword.text == "ions") {
            if (!duplicate_header(header.ions_line)) {
                p.split(operands, {"N"}, {});
                if (const KeyValue* kv = p.require("N")) {
                    if (auto n = p.integer(*kv)) {
                        if (*n < 1) {
                            p.error(kv->value_column, "ion count must be >= 1");
                        } else {
                            program.params.n_ions = *n;
                            header.n_ions = *n;
                            header.n_ions_span = p.at(kv->value_column);
                        }
                    }
                }
            }
        } else if (keyword.text == "trap") {
            if (!duplicate_header(header.trap_line)) {
                p.split(operands, {"nu", "eta", "rabi", "nmax"}, {});
                const auto non_negative = [&](const char* key, double& field) {
                    if (const KeyValue* kv = p.find(key)) {
                        if (auto v = p.real(*kv)) {
                            if (*v < 0.0) {
                                p.error(kv->value_column, std::string(key) + " must be non-negative");
                            } else {
                                field = *v;
                            }
                        }
                    }
                };
                non_negative("nu", program.params.trap_freq);
                non_negative("eta", program.params.lamb_dicke);
                non_negative("rabi", program.params.base_rabi);
                if (const KeyValue* kv = p.find("nmax")) {
                    if (auto v = p.integer(*kv)) {
                        if (*v < 1) {
                            p.error(kv->value_column, "nmax must be >= 1");
                        } else {
                            program.params.fock_cutoff = *v;
                        }
                    }
                }
            }
        } else if (keyword.text == "frame") {
            if (!duplicate_header(header.frame_line)) {
                p.split(operands, {"delta"}, {"R", "Rprime"});
                if (!p.word()) {
                    p.error(keyword.column, "'frame' requires R or Rprime");
                } else if (p.word()->text == "R") {
                    if (const KeyValue* kv = p.find("delta")) {
                        p.error(kv->key_column, "frame R has no detuning; use 'frame Rprime delta=...'");
                    }
                    program.frame = Frame::atomic();
                } else if (const KeyValue* kv = p.require("delta")) {
                    if (auto delta = p.real(*kv)) {
                        program.frame = Frame::laser(*delta);
                    }
                }
            }
        } else if (keyword.text == "carrier_pi2") {
            is_step = true;
            p.split(operands, {"ion", "phase"}, {});
            step.spec = PulseSpec::carrier_pi_half(1);
            parse_ion(p, step);
            if (const KeyValue* kv = p.find("phase")) {
                if (auto phase = p.real(*kv)) {
                    step.spec.laser_phase = *phase;
                }
            }
        } else if (keyword.text == "jc_pi" || keyword.text == "disp_pi") {
            is_step = true;
            const bool jc = keyword.text == "jc_pi";
            if (jc) {
                p.split(operands, {"ion", "n", "mode"}, {});
            } else {
                p.split(operands, {"ion", "n", "mode"}, {"all"});
            }
            const bool all = p.word().has_value();
            step.spec.kind = jc ? PulseKind::JaynesCummingsPi
                                : (all ? PulseKind::DispersiveCollectivePi : PulseKind::DispersiveSinglePi);
            if (all) {
                step.spec.target_ion = 0;
                if (const KeyValue* kv = p.find("ion")) {
                    p.error(kv->key_column, "'disp_pi all' addresses every ion; drop ion=");
                }
            } else {
                parse_ion(p, step);
            }
            if (auto mode = p.mode()) {
                step.spec.mode = *mode;
            }
            if (const KeyValue* kv = p.require("n")) {
                step.n_span = p.at(kv->value_column);
                if (auto n = p.integer(*kv)) {
                    step.spec.target_n = *n;
                    if (jc && *n < 0) {
                        p.error(kv->value_column, "Jaynes-Cummings pulse requires n >= 0");
                    } else if (!jc && *n < 1) {
                        p.error(kv->value_column,
                                "dispersive pulse requires n >= 1: its Rabi frequency vanishes at n = 0");
                    }
                }
            }
        } else if (keyword.text == "wait") {
            is_step = true;
            p.split(operands, {"T"}, {});
            step.spec = PulseSpec::wait(0.0);
            if (const KeyValue* kv = p.require("T")) {
                if (auto t = p.real(*kv)) {
                    if (*t < 0.0) {
                        p.error(kv->value_column, "wait time must be non-negative");
                    } else {
                        step.spec.wait_time = *t;
                    }
                }
            }
        } else {
            p.error(keyword.column, "unknown keyword '" + std::string(keyword.text) + "'");
        }

        any_error = any_error || p.failed();
        if (is_step && !p.failed()) {
            program.steps.push_back(step);
        }
        if (end == source.size()) {
            break;
        }
    }

    for (auto& step : program.steps) {
        if (step.ion_is_last) {
            step.spec.target_ion = program.params.n_ions;
        }
    }

    if (!any_error) {
        auto range = validate(program);
        any_error = !range.empty();
        diags.insert(diags.end(), range.begin(), range.end());
    }
    if (program.steps.empty() && !any_error) {
        diags.push_back({Severity::Warning, 1, 1, "no steps"});
    }
    if (!any_error) {
        result.program = std::move(program);
    }
    return result;
}

std::vector<ParseDiagnostic> validate(const SequenceProgram& program) {
    std::vector<ParseDiagnostic> diags;
    try {
        program.params.validate();
        program.frame.validate();
    } catch (const std::exception& e) {
        diags.push_back({Severity::Error, 1, 1, e.what()});
        return diags;
    }
    const auto& p = program.params;
    for (const auto& step : program.steps) {
        const auto error = [&](SourceSpan at, std::string message) {
            diags.push_back({Severity::Error, at.line, at.column, std::move(message)});
        };
        const auto& spec = step.spec;
        const bool addresses_ion = spec.kind == PulseKind::CarrierPiHalf || spec.kind == PulseKind::JaynesCummingsPi ||
                                   spec.kind == PulseKind::DispersiveSinglePi;
        if (addresses_ion && (spec.target_ion < 1 || spec.target_ion > p.n_ions)) {
            error(step.ion_span, "ion " + std::to_string(spec.target_ion) + " outside [1, " +
                                     std::to_string(p.n_ions) + "]");
            continue;
        }
        if (spec.kind == PulseKind::JaynesCummingsPi && spec.target_n + 1 > p.fock_cutoff) {
            error(step.n_span, "Jaynes-Cummings n=" + std::to_string(spec.target_n) + " couples to n+1 beyond nmax=" +
                                   std::to_string(p.fock_cutoff));
            continue;
        }
        if ((spec.kind == PulseKind::DispersiveSinglePi || spec.kind == PulseKind::DispersiveCollectivePi) &&
            spec.target_n > p.fock_cutoff) {
            error(step.n_span, "dispersive n=" + std::to_string(spec.target_n) + " beyond nmax=" +
                                   std::to_string(p.fock_cutoff));
            continue;
        }
        try {
            validate_pulse(spec, p);
        } catch (const std::exception& e) {
            error(step.span, e.what());
        }
    }
    return diags;
}

std::string format(const SequenceProgram& program) {
    std::ostringstream out;
    const auto& p = program.params;
    out << "ions N=" << p.n_ions << '\n';
    out << "trap nu=" << number_text(p.trap_freq) << " eta=" << number_text(p.lamb_dicke)
        << " rabi=" << number_text(p.base_rabi) << " nmax=" << p.fock_cutoff << '\n';
    if (program.frame.tag == FrameTag::R) {
        out << "frame R\n";
    } else {
        out << "frame Rprime delta=" << number_text(program.frame.detuning) << '\n';
    }
    for (const auto& step : program.steps) {
        const auto& s = step.spec;
        const std::string ion = step.ion_is_last ? "N" : std::to_string(s.target_ion);
        switch (s.kind) {
            case PulseKind::CarrierPiHalf:
                out << "carrier_pi2 ion=" << ion;
                if (s.laser_phase != 0.0) {
                    out << " phase=" << number_text(s.laser_phase);
                }
                break;
            case PulseKind::JaynesCummingsPi:
                out << "jc_pi ion=" << ion << " n=" << s.target_n << " mode=" << to_string(s.mode);
                break;
            case PulseKind::DispersiveSinglePi:
                out << "disp_pi ion=" << ion << " n=" << s.target_n << " mode=" << to_string(s.mode);
                break;
            case PulseKind::DispersiveCollectivePi:
                out << "disp_pi all n=" << s.target_n << " mode=" << to_string(s.mode);
                break;
            case PulseKind::Wait:
                out << "wait T=" << number_text(s.wait_time);
                break;
        }
        out << '\n';
    }
    return out.str();
}

SequenceProgram canonical_program(const TrapParams& params, PulseMode mode) {
    SequenceProgram program;
    program.params = params;
    program.frame = Frame::atomic();
    const PulseSpec pulses[] = {
        PulseSpec::carrier_pi_half(params.n_ions),  PulseSpec::jc_pi(params.n_ions, 0, mode),
        PulseSpec::dispersive_all_pi(1, mode),      PulseSpec::dispersive_pi(params.n_ions, 1, mode),
        PulseSpec::jc_pi(params.n_ions, 0, mode),
    };
    int line = 4;
    for (const auto& spec : pulses) {
        SequenceStep step;
        step.spec = spec;
        step.ion_is_last = spec.kind != PulseKind::DispersiveCollectivePi;
        step.span = step.ion_span = step.n_span = {line++, 1};
        program.steps.push_back(step);
    }
    return program;
}

ExecutionError::ExecutionError(SourceSpan span, const std::string& message)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": error: " + message),
      span_(span) {}

ExecutionResult execute(const SequenceProgram& program, std::optional<StateVector> initial) {
    if (auto diags = validate(program); !diags.empty()) {
        throw std::invalid_argument(diags.front().to_string());
    }
    StateVector state = initial ? std::move(*initial) : ground_state(program.params, program.frame);
    if (!(state.params() == program.params) || !(state.frame() == program.frame)) {
        throw std::invalid_argument("initial state does not match the program header");
    }

    std::vector<TraceEntry> trace;
    for (std::size_t i = 0; i < program.steps.size(); ++i) {
        const auto& step = program.steps[i];
        try {
            apply_pulse(state, step.spec);
            check_leakage(state);
            check_normalized(state);
        } catch (const std::exception& e) {
            throw ExecutionError(step.span, e.what());
        }
        trace.push_back({i + 1, step.span.line, describe(step.spec), state.clock(), state.norm(),
                         fock_populations(state)});
    }
    return {std::move(state), std::move(trace)};
}

}  // namespace ionghz::seqlang
