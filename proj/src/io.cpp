#include "ionghz/io.hpp"

#include <cstdio>
#include <ostream>

namespace ionghz::io {

nlohmann::json state_to_json(const StateVector& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return {
        {"n_ions", state.params().n_ions},
        {"n_max", state.params().fock_cutoff},
        {"frame", {{"tag", to_string(state.frame().tag)}, {"detuning", state.frame().detuning}}},
        {"clock", state.clock()},
        {"amplitudes", std::move(amps)},
    };
}

StateVector state_from_json(const nlohmann::json& j, TrapParams base) {
    base.n_ions = j.at("n_ions").get<int>();
    base.fock_cutoff = j.at("n_max").get<int>();
    const auto& frame_json = j.at("frame");
    const std::string tag = frame_json.at("tag").get<std::string>();
    Frame frame;
    if (tag == "R") {
        frame = Frame::atomic();
    } else if (tag == "Rprime") {
        frame = Frame::laser(frame_json.at("detuning").get<double>());
    } else {
        throw std::invalid_argument("unknown frame tag '" + tag + "'");
    }

    StateVector state(base, frame);
    const auto& amps = j.at("amplitudes");
    if (amps.size() != state.size()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amps.size()) + " does not match dimension " +
                                    std::to_string(state.size()));
    }
    auto out = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out[i] = {amps[i].at(0).get<double>(), amps[i].at(1).get<double>()};
    }
    state.advance_clock(j.at("clock").get<double>());
    return state;
}

std::string csv_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.14e", value);
    return buffer;
}

void write_ramsey_csv(std::ostream& out, const RamseyResult& result) {
    out << "delta,T,P_sim,P_analytic\n";
    for (const auto& s : result.samples) {
        out << csv_number(s.delta) << ',' << csv_number(s.wait_time) << ',' << csv_number(s.p_sim) << ','
            << csv_number(s.p_analytic) << '\n';
    }
}

nlohmann::json ramsey_to_json(const RamseyResult& result) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : result.samples) {
        samples.push_back({{"delta", s.delta}, {"T", s.wait_time}, {"P_sim", s.p_sim}, {"P_analytic", s.p_analytic}});
    }
    return {{"samples", std::move(samples)}, {"max_abs_error", result.max_abs_error}, {"warnings", result.warnings}};
}

nlohmann::json trace_to_json(const std::vector<seqlang::TraceEntry>& trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& t : trace) {
        steps.push_back({{"step", t.step},
                         {"line", t.line},
                         {"label", t.label},
                         {"clock", t.clock},
                         {"norm", t.norm},
                         {"fock_populations", t.fock_populations}});
    }
    return {{"steps", std::move(steps)}};
}

void write_trace_csv(std::ostream& out, const std::vector<seqlang::TraceEntry>& trace) {
    out << "step,line,label,clock,norm";
    const std::size_t levels = trace.empty() ? 0 : trace.front().fock_populations.size();
    for (std::size_t n = 0; n < levels; ++n) {
        out << ",p_n" << n;
    }
    out << '\n';
    for (const auto& t : trace) {
        out << t.step << ',' << t.line << ",\"" << t.label << "\"," << csv_number(t.clock) << ','
            << csv_number(t.norm);
        for (double p : t.fock_populations) {
            out << ',' << csv_number(p);
        }
        out << '\n';
    }
}

}  // namespace ionghz::io
