#include "doctest.h"

#include "ecnsim/prr.hpp"
#include "prr_trace.hpp"

#include <random>
#include <stdexcept>

using namespace ecnsim;

namespace {

PrrState state(PrrMode mode, std::int64_t delivered, std::int64_t out, std::int64_t recover_fs, std::int64_t ssthresh)
{
    PrrState s;
    s.mode = mode;
    s.prr_delivered = delivered;
    s.prr_out = out;
    s.recover_fs = recover_fs;
    s.ssthresh = ssthresh;
    return s;
}

constexpr PrrMode kModes[] = {PrrMode::Rfc6937, PrrMode::LinuxBugged, PrrMode::Patched};

} // namespace

TEST_CASE("entry zeroes counters and snapshots pipe")
{
    const PrrState s = enter_recovery(100, 90, 95, PrrMode::Patched);
    CHECK(s.prr_delivered == 0);
    CHECK(s.prr_out == 0);
    CHECK(s.recover_fs == 90);
    CHECK(s.ssthresh == 95);
    CHECK(enter_recovery(10, 0, 5, PrrMode::Rfc6937).recover_fs == 1);
    CHECK_THROWS_AS(enter_recovery(10, 5, 1, PrrMode::Patched), std::invalid_argument);
}

TEST_CASE("proportional part above ssthresh")
{
    for (PrrMode m : kModes) {
        CHECK(on_ack_sndcnt(state(m, 10, 8, 100, 90), 1, 100) == 1);
    }
}

TEST_CASE("no deferred allowance: all modes grant 3")
{
    for (PrrMode m : kModes) {
        // surplus 0 with delivered_now 2
        CHECK(on_ack_sndcnt(state(m, 2, 2, 100, 90), 2, 80) == 3);
    }
}

TEST_CASE("deferred allowance: the bugged form throws it away")
{
    CHECK(on_ack_sndcnt(state(PrrMode::Rfc6937, 12, 4, 100, 90), 2, 80) == 9);
    CHECK(on_ack_sndcnt(state(PrrMode::Patched, 12, 4, 100, 90), 2, 80) == 9);
    CHECK(on_ack_sndcnt(state(PrrMode::LinuxBugged, 12, 4, 100, 90), 2, 80) == 3);
}

TEST_CASE("grant is never negative and off mode is not a PRR mode")
{
    CHECK(on_ack_sndcnt(state(PrrMode::Patched, 1, 50, 100, 90), 1, 95) == 0);
    CHECK(on_ack_sndcnt(state(PrrMode::Patched, 1, 0, 100, 90), 1, 95) == 1);
    CHECK_THROWS_AS(on_ack_sndcnt(state(PrrMode::Off, 1, 0, 10, 5), 1, 3), std::logic_error);
}

TEST_CASE("record_sent accounting")
{
    PrrState s = state(PrrMode::Patched, 3, 0, 10, 5);
    CHECK(record_sent(s, 0).prr_out == 0);
    CHECK(record_sent(s, 3).surplus() == 0);
    CHECK_THROWS_AS(record_sent(s, -1), std::invalid_argument);

    // grant 3, TSO holds it back: surplus keeps growing with each delivery
    PrrState t = enter_recovery(20, 20, 18, PrrMode::Patched);
    prr_on_ack(t, 3, 17);
    t = record_sent(t, 0);
    CHECK(t.surplus() == 3);
    prr_on_ack(t, 2, 15);
    CHECK(t.surplus() == 5);
}

TEST_CASE("mode names round-trip")
{
    for (PrrMode m : {PrrMode::Rfc6937, PrrMode::LinuxBugged, PrrMode::Patched, PrrMode::Off}) {
        CHECK(parse_prr_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_prr_mode("sometimes"), std::invalid_argument);
}

TEST_CASE("grant never exceeds delta at or below ssthresh")
{
    std::mt19937_64 g(3);
    std::uniform_int_distribution<std::int64_t> u(0, 500);
    for (int i = 0; i < 20000; ++i) {
        const std::int64_t ss = 2 + u(g);
        const std::int64_t pipe = std::uniform_int_distribution<std::int64_t>(0, ss)(g);
        const std::int64_t del = 1 + u(g);
        const std::int64_t out = u(g);
        const std::int64_t now = 1 + u(g) % 3;
        for (PrrMode m : kModes) {
            CHECK(on_ack_sndcnt(state(m, del, out, 1 + u(g), ss), now, pipe) <= ss - pipe);
        }
    }
}

TEST_CASE("without deferral every mode follows the RFC interpreter ack for ack")
{
    std::mt19937_64 g(2024);
    for (int i = 0; i < 3000; ++i) {
        const oracle::Trace t = oracle::random_trace(g, false);
        const auto ref = oracle::run_reference(t);
        for (PrrMode m : kModes) {
            const auto got = oracle::run_library(t, m);
            REQUIRE(got.sndcnt == ref.sndcnt);
            CHECK(got.exit_cwnd >= t.ssthresh - 1);
            CHECK(got.exit_cwnd <= t.ssthresh + 1);
        }
    }
}

TEST_CASE("with deferral the RFC and patched forms still match the interpreter")
{
    std::mt19937_64 g(77);
    for (int i = 0; i < 3000; ++i) {
        const oracle::Trace t = oracle::random_trace(g, true);
        const auto ref = oracle::run_reference(t);
        CHECK(oracle::run_library(t, PrrMode::Rfc6937).sndcnt == ref.sndcnt);
        CHECK(oracle::run_library(t, PrrMode::Patched).sndcnt == ref.sndcnt);
    }
}

TEST_CASE("bugged form under deferral ends below ssthresh and never climbs back")
{
    std::mt19937_64 g(8);
    int eligible = 0;
    int below = 0;
    for (int i = 0; i < 4000; ++i) {
        const oracle::Trace t = oracle::random_trace(g, true);
        if (t.ssthresh - t.pipe_at_entry() <= t.per_ack) {
            continue;
        }
        ++eligible;
        const auto bug = oracle::run_library(t, PrrMode::LinuxBugged);
        if (bug.exit_cwnd < t.ssthresh) {
            ++below;
        }
        // once under, cwnd = pipe + per_ack + 1 at most on every later ack
        CHECK(bug.exit_cwnd <= std::max(t.pipe_at_entry(), t.per_ack) + t.per_ack + 1);
    }
    CHECK(eligible > 100);
    CHECK(below == eligible);
}

TEST_CASE("patched form under deferral holds at least the entry pipe")
{
    // pipe + surplus is fixed at the entry pipe, so the grant keeps cwnd at
    // pipe_at_entry + 1 (capped by ssthresh) even when TSO sends nothing.
    std::mt19937_64 g(9);
    for (int i = 0; i < 4000; ++i) {
        const oracle::Trace t = oracle::random_trace(g, true);
        const auto pat = oracle::run_library(t, PrrMode::Patched);
        CHECK(pat.exit_cwnd >= std::min(t.ssthresh, t.pipe_at_entry() + 1));
        CHECK(pat.exit_cwnd <= t.ssthresh);
    }
}
