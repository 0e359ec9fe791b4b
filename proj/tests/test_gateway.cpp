#include <gtest/gtest.h>

#include <functional>

#include "firesim/gateway.hpp"
#include "firesim/gsm.hpp"

using namespace firesim;
using namespace firesim::gw;

namespace {

GatewayConfig two_destinations() {
    GatewayConfig c;
    c.destinations = {"01711111111", "01722222222"};
    c.server_password = "mypass";
    return c;
}

/// Gateway wired to a scripted modem. The responder maps a command line to
/// the reply bytes; an empty reply leaves the command unanswered.
struct Rig {
    using Responder = std::function<std::string(const std::string&)>;

    Trace trace;
    serial::PortRegistry ports = serial::standard_ports();
    Gateway gw;
    Responder responder;
    std::vector<std::string> commands;
    std::string line;
    LogicalMs now = 0;

    explicit Rig(Responder r, GatewayConfig cfg = two_destinations())
        : gw(std::move(cfg), ports, trace), responder(std::move(r)) {}

    void step(LogicalMs ticks) {
        auto& modem = ports.at("COM15");
        for (LogicalMs i = 0; i < ticks; ++i, ++now) {
            for (char c : modem.to_device.read(now)) {
                if (c != '\r') {
                    line.push_back(c);
                    continue;
                }
                commands.push_back(line);
                modem.to_host.write(responder(line), now);
                line.clear();
            }
            gw.tick(now);
        }
    }

    void alert(char byte) { ports.at("COM1").to_host.write(std::string(1, byte), now); }

    std::vector<std::string> kinds() const {
        std::vector<std::string> out;
        for (const auto& e : trace.events()) out.push_back(e.kind);
        return out;
    }

    std::size_t count(std::string_view kind) const {
        std::size_t n = 0;
        for (const auto& e : trace.events()) n += e.kind == kind;
        return n;
    }
};

std::string always_ok(const std::string& cmd) {
    if (cmd.rfind("AT+CMSS", 0) == 0) return "\r\n+CMSS: 1\r\n\r\nOK\r\n";
    return "\r\nOK\r\n";
}

}  // namespace

TEST(RemoteCommand, Parsing) {
    EXPECT_EQ(parse_remote_command("mypass C"), (RemoteCommand{"mypass", 'C'}));
    EXPECT_EQ(parse_remote_command("mypass R"), (RemoteCommand{"mypass", 'R'}));
    EXPECT_EQ(parse_remote_command("0123456789 P"), (RemoteCommand{"0123456789", 'P'}));
    EXPECT_FALSE(parse_remote_command("mypass Q"));
    EXPECT_FALSE(parse_remote_command("a b c"));
    EXPECT_FALSE(parse_remote_command("mypass"));
    EXPECT_FALSE(parse_remote_command("mypass  C"));
    EXPECT_FALSE(parse_remote_command(" C"));
    EXPECT_FALSE(parse_remote_command("mypass c"));
    EXPECT_FALSE(parse_remote_command("01234567890 C"));
    EXPECT_FALSE(parse_remote_command("mypass C "));
}

TEST(RemoteCommand, CharacterSet) {
    std::string accepted;
    for (int c = 0; c < 128; ++c) {
        if (is_remote_command_char(static_cast<char>(c))) accepted.push_back(static_cast<char>(c));
    }
    EXPECT_EQ(accepted, "ABCDEFGHIJKLMNOPR");
}

TEST(TakeResponse, SimpleFinals) {
    std::string buf = "\r\nOK\r\n\r\nERROR\r\n";
    auto a = take_response(buf);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->final, AtResponse::Final::Ok);
    EXPECT_EQ(a->raw, "\r\nOK\r\n");
    auto b = take_response(buf);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->final, AtResponse::Final::Error);
    EXPECT_TRUE(buf.empty());
    EXPECT_FALSE(take_response(buf));
}

TEST(TakeResponse, IncompleteWaits) {
    std::string buf = "\r\n+CMSS: 4\r\n\r\nO";
    EXPECT_FALSE(take_response(buf));
    buf += "K\r\n";
    auto r = take_response(buf);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->lines, std::vector<std::string>{"+CMSS: 4"});
}

TEST(TakeResponse, CmgrBodyMayReadOk) {
    std::string buf = "\r\n+CMGR: \"REC UNREAD\",\"01711111111\",,\"10/01/01,00:00:00+00\"\r\nOK\r\n\r\nOK\r\n";
    auto r = take_response(buf);
    ASSERT_TRUE(r);
    EXPECT_TRUE(buf.empty());
    auto rec = parse_cmgr(*r);
    ASSERT_TRUE(rec);
    EXPECT_EQ(rec->text, "OK");
    EXPECT_EQ(rec->from, "01711111111");
    EXPECT_EQ(rec->timestamp, "10/01/01,00:00:00+00");
    EXPECT_EQ(rec->status, "REC UNREAD");
}

TEST(TakeResponse, NoCarrierAndCmsError) {
    std::string buf = "\r\nNO CARRIER\r\n\r\n+CMS ERROR: 321\r\n";
    EXPECT_EQ(take_response(buf)->final, AtResponse::Final::NoCarrier);
    EXPECT_EQ(take_response(buf)->final, AtResponse::Final::Error);
}

TEST(ParseCmgr, EmptySlot) {
    std::string buf = "\r\nOK\r\n";
    EXPECT_FALSE(parse_cmgr(*take_response(buf)));
}

TEST(Config, Validation) {
    auto c = two_destinations();
    EXPECT_NO_THROW(c.validate());
    c.destinations.clear();
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_destinations();
    c.destinations.push_back("12");
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_destinations();
    c.server_password = "has space";
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_destinations();
    c.server_password = "01234567890";
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_destinations();
    c.sensor_outbox_slot[SensorId::Smoke2] = 9;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_destinations();
    c.mcu_poll_ms = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Gateway, InitSequence) {
    Rig r(always_ok);
    r.step(500);
    ASSERT_GE(r.commands.size(), 2u);
    EXPECT_EQ(r.commands[0], "AT+CMGF=1");
    EXPECT_EQ(r.commands[1], "AT+CPMS=\"SM\"");
    EXPECT_EQ(r.gw.status(), GatewayStatus::Ready);
    EXPECT_EQ(r.count("GATEWAY_READY"), 1u);
}

TEST(Gateway, InitFailureStopsEverything) {
    Rig r([](const std::string& cmd) { return cmd == "AT+CMGF=1" ? "\r\nERROR\r\n" : "\r\nOK\r\n"; });
    r.step(100);
    r.alert('1');
    r.step(5000);
    EXPECT_EQ(r.gw.status(), GatewayStatus::Failed);
    EXPECT_EQ(r.commands, std::vector<std::string>{"AT+CMGF=1"});
    EXPECT_EQ(r.count("STARTUP_FAILED"), 1u);
    EXPECT_EQ(r.count("ALERT_LATCHED"), 0u);
}

TEST(Gateway, DispatchOrderSmsThenCalls) {
    Rig r([](const std::string& cmd) -> std::string {
        if (cmd.rfind("ATD", 0) == 0) return "\r\nOK\r\n\r\nNO CARRIER\r\n";
        return always_ok(cmd);
    });
    r.step(300);
    r.alert('3');
    r.step(2000);
    const std::vector<std::string> expected{
        "AT+CMGF=1",
        "AT+CPMS=\"SM\"",
        "AT+CMSS=3,\"01711111111\"",
        "AT+CMSS=3,\"01722222222\"",
        "ATD01711111111;",
        "ATD01722222222;",
    };
    ASSERT_GE(r.commands.size(), expected.size());
    EXPECT_EQ(std::vector<std::string>(r.commands.begin(), r.commands.begin() + 6), expected);
    EXPECT_EQ(r.count("DISPATCH_DONE"), 1u);
    EXPECT_TRUE(r.gw.latched().contains(SensorId::Smoke1));
}

TEST(Gateway, ErrorDoesNotAbortDispatch) {
    Rig r([](const std::string& cmd) -> std::string {
        if (cmd == "AT+CMSS=1,\"01711111111\"") return "\r\nERROR\r\n";
        if (cmd.rfind("ATD", 0) == 0) return "\r\nOK\r\n\r\nNO CARRIER\r\n";
        return always_ok(cmd);
    });
    r.step(300);
    r.alert('1');
    r.step(2000);
    EXPECT_EQ(r.count("DISPATCH_FAILED"), 1u);
    EXPECT_EQ(r.count("DISPATCH_DONE"), 1u);
    EXPECT_NE(std::find(r.commands.begin(), r.commands.end(), "ATD01722222222;"), r.commands.end());
}

TEST(Gateway, LatchedSensorNotResent) {
    Rig r([](const std::string& cmd) -> std::string {
        if (cmd.rfind("ATD", 0) == 0) return "\r\nOK\r\n\r\nNO CARRIER\r\n";
        return always_ok(cmd);
    });
    r.step(300);
    for (int i = 0; i < 20; ++i) {
        r.alert('2');
        r.step(50);
    }
    r.step(2000);
    EXPECT_EQ(r.count("ALERT_LATCHED"), 1u);
    EXPECT_EQ(std::count(r.commands.begin(), r.commands.end(), "AT+CMSS=2,\"01711111111\""), 1);
}

TEST(Gateway, GapBetweenCommands) {
    Rig r([](const std::string& cmd) -> std::string {
        if (cmd.rfind("ATD", 0) == 0) return "\r\nOK\r\n\r\nNO CARRIER\r\n";
        return always_ok(cmd);
    });
    r.step(300);
    r.alert('1');
    r.alert('4');
    r.step(6000);
    LogicalMs last_done = -1;
    for (const auto& e : r.trace.events()) {
        if (e.kind == "AT_TX") {
            if (last_done >= 0) EXPECT_GE(e.t - last_done, 100) << e.canonical();
            last_done = -1;
        } else if (e.kind == "AT_RX" || e.kind == "AT_URC") {
            last_done = e.t;
        }
    }
}

TEST(Gateway, UnknownMcuByteTraced) {
    Rig r(always_ok);
    r.step(300);
    r.alert('x');
    r.step(100);
    EXPECT_EQ(r.count("MCU_UNKNOWN_BYTE"), 1u);
}

TEST(Gateway, SilentModemTimesOut) {
    Rig r([](const std::string&) { return std::string(); });
    r.step(5100);
    EXPECT_EQ(r.count("AT_TIMEOUT"), 1u);
    EXPECT_EQ(r.gw.status(), GatewayStatus::Failed);
}

TEST(Gateway, RemoteTextHandling) {
    Rig r(always_ok);
    r.step(300);
    r.gw.handle_remote_text("01711111111", "mypass A", r.now);
    r.gw.handle_remote_text("01711111111", "wrong A", r.now);
    r.gw.handle_remote_text("01711111111", "mypass Q", r.now);
    EXPECT_EQ(r.count("CMD_EXECUTED"), 1u);
    EXPECT_EQ(r.count("CMD_REJECTED"), 1u);
    EXPECT_EQ(r.count("CMD_INVALID"), 1u);
    EXPECT_EQ(r.ports.at("COM1").to_device.read(r.now + 10), "A");
}

TEST(Gateway, ResetClearsLatchSet) {
    Rig r([](const std::string& cmd) -> std::string {
        if (cmd.rfind("ATD", 0) == 0) return "\r\nOK\r\n\r\nNO CARRIER\r\n";
        return always_ok(cmd);
    });
    r.step(300);
    r.alert('1');
    r.step(100);
    ASSERT_EQ(r.gw.latched().size(), 1u);
    r.gw.handle_remote_text("01711111111", "mypass R", r.now);
    EXPECT_TRUE(r.gw.latched().empty());
    EXPECT_EQ(r.trace.events().back().payload["cleared"], json::array({"Temp1"}));
    r.alert('1');
    r.step(3000);
    EXPECT_EQ(r.count("ALERT_LATCHED"), 2u);
}
