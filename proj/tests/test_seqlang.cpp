#include "ionghz/protocol.hpp"
#include "ionghz/seqlang.hpp"
#include "program_gen.hpp"

#include <doctest.h>

using namespace ionghz;
using namespace ionghz::seqlang;

namespace {

constexpr const char* kCanonical = R"(# five-pulse GHZ preparation
ions N=3
trap nu=1 eta=0.1 rabi=1 nmax=4
frame R
carrier_pi2 ion=N
jc_pi n=0
disp_pi all n=1
disp_pi ion=N n=1
jc_pi ion=N n=0
)";

bool has_error_at(const ParseResult& r, int line, int column) {
    for (const auto& d : r.diagnostics) {
        if (d.severity == Severity::Error && d.line == line && d.column == column) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_SUITE("seqlang") {

TEST_CASE("canonical program parses to five steps") {
    const auto r = parse(kCanonical);
    REQUIRE(r.ok());
    CHECK(r.diagnostics.empty());
    const auto& prog = *r.program;
    CHECK(prog.params.n_ions == 3);
    REQUIRE(prog.steps.size() == 5);
    CHECK(prog.steps[0].spec == PulseSpec::carrier_pi_half(3));
    CHECK(prog.steps[1].spec == PulseSpec::jc_pi(3, 0));
    CHECK(prog.steps[2].spec == PulseSpec::dispersive_all_pi(1));
    CHECK(prog.steps[3].spec == PulseSpec::dispersive_pi(3, 1));
    CHECK(prog.steps[4].spec == PulseSpec::jc_pi(3, 0));
    CHECK(prog.steps[1].span.line == 6);
    CHECK(prog.structurally_equal(canonical_program(prog.params)));
}

TEST_CASE("dispersive n = 0 is rejected with a position") {
    const auto r = parse("ions N=2\ndisp_pi all n=0\n");
    CHECK_FALSE(r.ok());
    REQUIRE(has_error_at(r, 2, 15));
    CHECK(r.diagnostics.front().to_string() ==
          "2:15: error: dispersive pulse requires n >= 1: its Rabi frequency vanishes at n = 0");
}

TEST_CASE("empty source is an empty program with a warning") {
    for (const char* src : {"", "\n\n", "# only a comment\n"}) {
        const auto r = parse(src);
        REQUIRE(r.ok());
        CHECK(r.program->steps.empty());
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].severity == Severity::Warning);
        CHECK(r.diagnostics[0].message == "no steps");
    }
}

TEST_CASE("diagnostics") {
    CHECK(has_error_at(parse("pulse ion=1\n"), 1, 1));
    CHECK(has_error_at(parse("wait T=abc\n"), 1, 8));
    CHECK(has_error_at(parse("wait T=1.5x\n"), 1, 8));
    CHECK(has_error_at(parse("wait T=-1\n"), 1, 8));
    CHECK(has_error_at(parse("wait\n"), 1, 1));
    CHECK(has_error_at(parse("ions N=2\nions N=3\n"), 2, 1));
    CHECK(has_error_at(parse("trap nu=1\ntrap eta=0.2\n"), 2, 1));
    CHECK(has_error_at(parse("jc_pi ion=1 n=0 mode=fast\n"), 1, 22));
    CHECK(has_error_at(parse("jc_pi ion=1 n=0 n=1\n"), 1, 17));
    CHECK(has_error_at(parse("jc_pi ion=1 n=0 colour=red\n"), 1, 17));
    CHECK(has_error_at(parse("ions N=2\ncarrier_pi2 ion=3\n"), 2, 17));
    CHECK(has_error_at(parse("trap nmax=2\njc_pi ion=1 n=2\n"), 2, 15));
    CHECK(has_error_at(parse("trap nmax=2\ndisp_pi ion=1 n=3\n"), 2, 17));
    CHECK(has_error_at(parse("frame R delta=0.1\n"), 1, 9));
    CHECK(has_error_at(parse("frame Rprime\n"), 1, 1));
    CHECK(has_error_at(parse("disp_pi all ion=1 n=1\n"), 1, 13));
    CHECK(has_error_at(parse("   ions N=0\n"), 1, 11));
    // Range checks see header lines that follow the step.
    CHECK(has_error_at(parse("carrier_pi2 ion=3\nions N=2\n"), 1, 17));
}

TEST_CASE("all errors of a file are reported") {
    const auto r = parse("bogus\nwait T=x\ndisp_pi all n=0\n");
    CHECK(r.diagnostics.size() == 3);
}

TEST_CASE("parser never throws") {
    std::mt19937_64 rng(99);
    const std::string alphabet = "abcdijlmnoprstwNTR_=.-+#0123456789 \t\n";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> length(0, 80);
    for (int k = 0; k < 2000; ++k) {
        std::string src;
        const int len = length(rng);
        for (int i = 0; i < len; ++i) {
            src += alphabet[pick(rng)];
        }
        CHECK_NOTHROW(parse(src));
    }
    CHECK_NOTHROW(parse("wait T=1e999999\n"));
    CHECK_FALSE(parse("wait T=1e999999\n").ok());
}

TEST_CASE("format canonicalizes") {
    const auto r = parse("# header\njc_pi   n=0 ion=1    # trailing\nwait T=0.5\n");
    REQUIRE(r.ok());
    const std::string text = format(*r.program);
    CHECK(text ==
          "ions N=1\n"
          "trap nu=1 eta=0.1 rabi=1 nmax=4\n"
          "frame R\n"
          "jc_pi ion=1 n=0 mode=ideal\n"
          "wait T=0.5\n");
    const auto again = parse(text);
    REQUIRE(again.ok());
    CHECK(format(*again.program) == text);
    CHECK(again.program->structurally_equal(*r.program));
}

TEST_CASE("round trip on generated programs") {
    std::mt19937_64 rng(1234);
    for (int k = 0; k < 200; ++k) {
        const auto program = testgen::random_program(rng);
        const auto parsed = parse(format(program));
        REQUIRE(parsed.ok());
        CHECK(parsed.program->structurally_equal(program));
    }
}

TEST_CASE("executing the canonical program equals the built-in preparation") {
    for (int n = 1; n <= 6; ++n) {
        TrapParams p;
        p.n_ions = n;
        const auto result = execute(canonical_program(p));
        const auto report = prepare_max_entangled(p);
        double worst = 0.0;
        for (std::size_t i = 0; i < result.final_state.size(); ++i) {
            worst = std::max(worst, std::abs(result.final_state.amplitudes()[i] - report.final_state.amplitudes()[i]));
        }
        CHECK(worst <= 1e-12);
        CHECK(fidelity(result.final_state, target_ghz(p, 0.0)) >= 1.0 - 1e-12);
        REQUIRE(result.trace.size() == 5);
        CHECK(result.trace.back().clock == report.pulse_times[4]);
        CHECK(result.trace[1].fock_populations[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("canonical source executes to the GHZ state") {
    const auto r = parse(kCanonical);
    REQUIRE(r.ok());
    const auto result = execute(*r.program);
    CHECK(fidelity(result.final_state, target_ghz(r.program->params, 0.0)) >= 1.0 - 1e-12);
}

TEST_CASE("a single wait only adds vibrational phases") {
    const auto r = parse("ions N=2\ntrap nu=1 nmax=2\nwait T=1\n");
    REQUIRE(r.ok());
    StateVector start(r.program->params, r.program->frame);
    start[{0b01, 1}] = 1.0;
    const auto result = execute(*r.program, start);
    CHECK(std::abs(result.final_state[{0b01, 1}] - std::polar(1.0, -1.0)) < 1e-15);
    CHECK(result.final_state.clock() == 1.0);
}

TEST_CASE("canonical program, its mirror and a zero wait") {
    for (int n = 1; n <= 6; ++n) {
        std::string src = "ions N=" + std::to_string(n) + "\n";
        src += "carrier_pi2 ion=N\njc_pi n=0\ndisp_pi all n=1\ndisp_pi n=1\njc_pi n=0\n";
        src += "wait T=0\n";
        src += "jc_pi n=0\ndisp_pi n=1\ndisp_pi all n=1\njc_pi n=0\ncarrier_pi2\n";
        const auto r = parse(src);
        REQUIRE(r.ok());
        const auto result = execute(*r.program);
        CHECK(excited_population(result.final_state, n) ==
              doctest::Approx(n % 2 == 0 ? 0.0 : 1.0).epsilon(1e-10));
    }
}

TEST_CASE("execution errors carry the source position") {
    // Starting high in the Fock ladder walks population onto the cutoff.
    const auto r = parse("ions N=1\ntrap nmax=2\n\njc_pi ion=1 n=1\n");
    REQUIRE(r.ok());
    StateVector start(r.program->params, r.program->frame);
    start[{1, 1}] = 1.0;
    try {
        execute(*r.program, start);
        FAIL("expected an ExecutionError");
    } catch (const ExecutionError& e) {
        CHECK(e.span().line == 4);
        CHECK(std::string(e.what()).rfind("4:1: error:", 0) == 0);
    }
}

}
