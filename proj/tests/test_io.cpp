#include "ionghz/io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace ionghz;

TEST_SUITE("io") {

TEST_CASE("state dump schema") {
    TrapParams p;
    p.n_ions = 2;
    p.fock_cutoff = 1;
    auto s = target_ghz(p, 0.5, Frame::laser(0.02));
    s.advance_clock(3.25);
    const auto j = io::state_to_json(s);
    CHECK(j.at("n_ions") == 2);
    CHECK(j.at("n_max") == 1);
    CHECK(j.at("frame").at("tag") == "Rprime");
    CHECK(j.at("frame").at("detuning") == 0.02);
    CHECK(j.at("clock") == 3.25);
    REQUIRE(j.at("amplitudes").size() == 8);
    CHECK(j.at("amplitudes")[0][0].get<double>() == doctest::Approx(std::sqrt(0.5)));
    CHECK(j.at("amplitudes")[3][1].get<double>() == doctest::Approx(std::sqrt(0.5) * std::sin(0.5)));
}

TEST_CASE("state dump reloads exactly") {
    std::mt19937_64 rng(4);
    TrapParams p;
    p.n_ions = 3;
    p.fock_cutoff = 2;
    p.trap_freq = 1.7;
    auto s = oracle::random_state(p, rng);
    s.advance_clock(0.123456789);
    const auto back = io::state_from_json(nlohmann::json::parse(io::state_to_json(s).dump()), p);
    CHECK(back.clock() == s.clock());
    CHECK(back.params() == s.params());
    CHECK(std::equal(s.amplitudes().begin(), s.amplitudes().end(), back.amplitudes().begin()));
}

TEST_CASE("state dump rejects inconsistent input") {
    auto j = io::state_to_json(ground_state(TrapParams{}));
    j["amplitudes"].erase(0);
    CHECK_THROWS_AS(io::state_from_json(j), std::invalid_argument);
    j = io::state_to_json(ground_state(TrapParams{}));
    j["frame"]["tag"] = "lab";
    CHECK_THROWS_AS(io::state_from_json(j), std::invalid_argument);
}

TEST_CASE("Ramsey CSV") {
    RamseyResult r;
    r.samples = {{0.0, 2.0, 1.0, 1.0}, {-0.125, 2.0, 0.3333333333333333, 0.33333333333333337}};
    std::ostringstream out;
    io::write_ramsey_csv(out, r);
    CHECK(out.str() ==
          "delta,T,P_sim,P_analytic\n"
          "0.00000000000000e+00,2.00000000000000e+00,1.00000000000000e+00,1.00000000000000e+00\n"
          "-1.25000000000000e-01,2.00000000000000e+00,3.33333333333333e-01,3.33333333333333e-01\n");
}

TEST_CASE("Ramsey and trace JSON") {
    RamseyResult r;
    r.samples = {{0.5, 1.0, 0.25, 0.25}};
    r.max_abs_error = 1e-17;
    const auto j = io::ramsey_to_json(r);
    CHECK(j.at("samples")[0].at("P_sim") == 0.25);
    CHECK(j.at("max_abs_error") == 1e-17);

    std::vector<seqlang::TraceEntry> trace = {{1, 4, "wait T=1", 1.0, 1.0, {1.0, 0.0}}};
    const auto t = io::trace_to_json(trace);
    CHECK(t.at("steps")[0].at("line") == 4);
    CHECK(t.at("steps")[0].at("fock_populations").size() == 2);
    std::ostringstream csv;
    io::write_trace_csv(csv, trace);
    CHECK(csv.str().rfind("step,line,label,clock,norm,p_n0,p_n1\n", 0) == 0);
}

}
