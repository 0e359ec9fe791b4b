#include <gtest/gtest.h>

#include "firesim/config.hpp"
#include "firesim/scenario.hpp"
#include "firesim/trace.hpp"

using namespace firesim;

TEST(Trace, SequenceStartsAtOneAndIsDense) {
    Trace t;
    EXPECT_EQ(t.last_seq(), 0u);
    t.emit(0, "A");
    t.emit(0, "B", {{"x", 1}});
    t.emit(5, "C");
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t.events()[i].seq, i + 1);
    EXPECT_EQ(t.since(1).size(), 2u);
    EXPECT_EQ(t.since(1).front().kind, "B");
    EXPECT_TRUE(t.since(3).empty());
    EXPECT_TRUE(t.since(99).empty());
}

TEST(Trace, CanonicalFormSortsKeys) {
    Trace t;
    t.emit(7, "AT_TX", {{"z", 1}, {"bytes", "AT\r"}});
    EXPECT_EQ(t.events()[0].canonical(), R"({"kind":"AT_TX","payload":{"bytes":"AT\r","z":1},"seq":1,"t":7})");
}

TEST(Trace, JsonlRoundTrip) {
    Trace t;
    t.emit(0, "A", {{"s", "\r\n\"x\""}});
    t.emit(3, "B", {{"n", json::array({1, 2})}});
    const auto parsed = parse_jsonl(t.to_jsonl());
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[0], t.events()[0]);
    EXPECT_EQ(parsed[1], t.events()[1]);
    EXPECT_FALSE(compare_traces(parsed, t.events()));
}

TEST(Trace, ListenerSeesEveryEvent) {
    Trace t;
    std::vector<std::uint64_t> seen;
    t.set_listener([&](const TraceEvent& e) { seen.push_back(e.seq); });
    t.emit(0, "A");
    t.emit(1, "B");
    EXPECT_EQ(seen, (std::vector<std::uint64_t>{1, 2}));
}

TEST(CompareTraces, ReportsFirstDivergence) {
    Trace a;
    Trace b;
    for (int i = 1; i <= 20; ++i) {
        a.emit(i, "TICK", {{"i", i}});
        b.emit(i, "TICK", {{"i", i == 12 ? -1 : i}});
    }
    const auto d = compare_traces(a.events(), b.events());
    ASSERT_TRUE(d);
    EXPECT_EQ(d->seq, 12u);
    EXPECT_EQ(d->field, "payload");
}

TEST(CompareTraces, TimeKindAndLength) {
    Trace a;
    Trace b;
    a.emit(1, "X");
    b.emit(2, "X");
    EXPECT_EQ(compare_traces(a.events(), b.events())->field, "t");

    Trace c;
    c.emit(1, "Y");
    EXPECT_EQ(compare_traces(a.events(), c.events())->field, "kind");

    Trace d;
    d.emit(1, "X");
    d.emit(2, "Z");
    const auto div = compare_traces(a.events(), d.events());
    ASSERT_TRUE(div);
    EXPECT_EQ(div->seq, 2u);
    EXPECT_EQ(div->field, "missing");
}

TEST(Transcript, EscapesBytes) {
    EXPECT_EQ(escape_bytes("AT\r\n\"x\"\\"), R"(AT\r\n\"x\"\\)");
    EXPECT_EQ(escape_bytes(std::string(1, '\x01')), "\\x01");
    Trace t;
    t.emit(5, "AT_TX", {{"bytes", "AT\r"}});
    t.emit(6, "OTHER");
    t.emit(20, "AT_RX", {{"bytes", "\r\nOK\r\n"}, {"final", "OK"}});
    t.emit(30, "AT_URC", {{"bytes", "\r\nNO CARRIER\r\n"}, {"final", "NO CARRIER"}});
    EXPECT_EQ(at_transcript(t.events()),
              "00000005 TX  \"AT\\r\"\n"
              "00000020 RX  \"\\r\\nOK\\r\\n\"\n"
              "00000030 URC \"\\r\\nNO CARRIER\\r\\n\"\n");
}

TEST(Scenario, ParsesAllOps) {
    const auto s = parse_scenario(R"({
      "name": "all",
      "events": [
        {"t": 50, "op": "expect", "kind": "ALERT_BYTE", "match": {"sensor": "Temp1"}, "count": 2, "since": 10},
        {"t": 0, "op": "set_temp", "sensor": 1, "celsius": 65},
        {"t": 0, "op": "set_smoke", "sensor": 2, "density": 0.5},
        {"t": 1, "op": "press_pw_mode", "latch": "0x3F"},
        {"t": 2, "op": "commit_password", "latch": 12},
        {"t": 3, "op": "set_threshold_local", "latch": 63, "select": [1, 0], "range": "PB6"},
        {"t": 3, "op": "set_threshold_local", "latch": 63, "select": 1, "range": 3},
        {"t": 4, "op": "send_sms", "from": "01711111111", "text": "mypass R"}
      ]})");
    EXPECT_EQ(s.name, "all");
    ASSERT_EQ(s.events.size(), 8u);
    EXPECT_EQ(op_name(s.events[0].action), "set_temp");
    EXPECT_EQ(op_name(s.events[1].action), "set_smoke");  // stable for equal t
    EXPECT_EQ(op_name(s.events.back().action), "expect");
    EXPECT_EQ(std::get<PressPasswordMode>(s.events[2].action).latch, fw::kDefaultPassword);
    const auto& local = std::get<SetThresholdLocal>(s.events[4].action);
    EXPECT_TRUE(local.select.button2);
    EXPECT_FALSE(local.select.button1);
    EXPECT_EQ(local.range, fw::RangeButton::PB6);
    const auto& coded = std::get<SetThresholdLocal>(s.events[5].action);
    EXPECT_FALSE(coded.select.button2);
    EXPECT_TRUE(coded.select.button1);
    EXPECT_EQ(coded.range, fw::RangeButton::PB3);
    const auto& x = std::get<Expect>(s.events.back().action);
    EXPECT_EQ(x.count, 2u);
    EXPECT_EQ(x.since, 10);
}

TEST(Scenario, BareArrayAccepted) {
    const auto s = parse_scenario(R"([{"t": 5, "op": "set_temp", "sensor": 2, "celsius": 20}])");
    EXPECT_TRUE(s.name.empty());
    EXPECT_EQ(s.events.size(), 1u);
}

TEST(Scenario, RoundTripThroughJson) {
    const auto s = parse_scenario(R"([
        {"t": 1, "op": "set_threshold_local", "latch": 63, "select": [1, 1], "range": "PB7"},
        {"t": 2, "op": "expect", "kind": "RING", "match": {"to": "01711111111"}},
        {"t": 0, "op": "send_sms", "from": "01711111111", "text": "mypass A"}
    ])");
    const auto again = parse_scenario(to_json(s).dump());
    EXPECT_EQ(to_json(again), to_json(s));
}

TEST(Scenario, Errors) {
    EXPECT_THROW(parse_scenario(R"([{"t": -1, "op": "set_temp", "sensor": 1, "celsius": 20}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "explode"}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "set_temp", "sensor": 3, "celsius": 20}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "set_temp", "sensor": 1}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "press_pw_mode", "latch": 128}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "press_pw_mode", "latch": "lots"}])"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"([{"t": 0, "op": "set_threshold_local", "latch": 1, "select": 4, "range": 0}])"),
                 ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"name": "x"})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"events": 3})"), ScenarioError);
}

TEST(Scenario, ErrorMessagesNameTheProblem) {
    try {
        parse_scenario(R"([{"t": -1, "op": "set_temp", "sensor": 1, "celsius": 20}])");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("non-negative"), std::string::npos);
    }
    try {
        parse_scenario(R"([{"t": 0, "op": "explode"}])");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("explode"), std::string::npos);
    }
}

TEST(Scenario, SyntaxErrorCarriesLineAndColumn) {
    try {
        parse_scenario("[\n  {\"t\": 0,\n   \"op\" \"set_temp\"}\n]");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 18u);  // last byte of the offending token
    }
}

TEST(PayloadMatch, Subsets) {
    const json p{{"a", 1}, {"b", {{"c", "x"}, {"d", 2}}}};
    EXPECT_TRUE(payload_matches(p, json::object()));
    EXPECT_TRUE(payload_matches(p, {{"a", 1}}));
    EXPECT_TRUE(payload_matches(p, {{"b", {{"c", "x"}}}}));
    EXPECT_FALSE(payload_matches(p, {{"a", 2}}));
    EXPECT_FALSE(payload_matches(p, {{"z", 1}}));
}

TEST(Config, DefaultsAndOverrides) {
    const auto d = default_config();
    EXPECT_EQ(d.gateway.destinations.size(), 2u);
    EXPECT_EQ(d.gateway.server_password, "mypass");
    EXPECT_EQ(d.modem.outbox.size(), 4u);

    const auto c = config_from_json({{"gateway", {{"destinations", {"01733333333"}}, {"at_gap_ms", 150}}}});
    EXPECT_EQ(c.gateway.destinations, std::vector<std::string>{"01733333333"});
    EXPECT_EQ(c.gateway.at_gap_ms, 150);
    EXPECT_EQ(c.gateway.server_password, "mypass");

    EXPECT_THROW(config_from_json({{"bogus", 1}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"gateway", {{"destinations", {"1"}}}}}), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
    const auto d = default_config();
    EXPECT_EQ(to_json(config_from_json(to_json(d))), to_json(d));
}
