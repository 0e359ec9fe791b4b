#include <optional>
#include <string>
#include <tuple>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "firesim/envmodel.hpp"
#include "firesim/firmware.hpp"
#include "firesim/gateway.hpp"
#include "firesim/system.hpp"

namespace py = pybind11;
using namespace firesim;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

SystemConfig config_from(const std::optional<std::string>& text) {
    return text ? config_from_json(json::parse(*text)) : default_config();
}

SensorId sensor_arg(const std::string& name) {
    auto s = sensor_from_string(name);
    if (!s) throw py::value_error("unknown sensor '" + name + "'");
    return *s;
}

int threshold_code_for(const std::string& sensor_name, const py::object& value) {
    const SensorId sensor = sensor_arg(sensor_name);
    fw::ThresholdSetting t;
    if (is_temperature(sensor)) {
        fw::apply(t, {sensor, value.cast<int>()});
    } else {
        auto cls = fw::smoke_class_from_string(value.cast<std::string>());
        if (!cls) throw py::value_error("smoke class must be High, Medium or Low");
        fw::apply(t, {sensor, *cls});
    }
    return fw::threshold_code(sensor, t).value;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fire-alert system simulator core";

    // Domain and argument errors surface as ValueError.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::domain_error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const std::invalid_argument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ScenarioError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("lm35_output", [](double c) { return env::lm35_output(c); }, py::arg("celsius"));
    m.def("ldr_resistance", [](double light) { return env::ldr_resistance(light); }, py::arg("light"));
    m.def("scatter_fraction", [](double d) { return env::scatter_fraction(d); }, py::arg("density"));
    m.def("divider_voltage", [](double r) { return env::divider_voltage(r); }, py::arg("r_ldr"));
    m.def("amplify", [](double v) { return env::amplify(v); }, py::arg("volts"));
    m.def("smoke_chain_output", [](double d) { return env::smoke_chain_output(d); }, py::arg("density"));
    m.def("adc_sample", [](double v) { return fw::adc_sample(v).value; }, py::arg("volts"));
    m.def("threshold_code", &threshold_code_for, py::arg("sensor"), py::arg("value"));

    m.def(
        "parse_remote_command",
        [](const std::string& text) -> std::optional<std::tuple<std::string, std::string>> {
            auto rc = gw::parse_remote_command(text);
            if (!rc) return std::nullopt;
            return std::make_tuple(rc->password, std::string(1, rc->cmd));
        },
        py::arg("text"));

    m.def("default_config_json", [] { return to_json(default_config()).dump(); });

    m.def(
        "run",
        [](const std::string& scenario, LogicalMs duration, const std::optional<std::string>& config) {
            const auto result = run(parse_scenario(scenario), duration, config_from(config));
            py::dict out;
            out["trace_jsonl"] = result.trace_jsonl;
            out["ok"] = result.ok();
            out["expectations_checked"] = result.expectations_checked;
            if (result.failure) {
                out["failure"] = py::make_tuple(result.failure->t, result.failure->message);
            } else {
                out["failure"] = py::none();
            }
            return out;
        },
        py::arg("scenario_json"), py::arg("duration_ms"), py::arg("config_json") = py::none());

    m.def(
        "compare_traces",
        [](const std::string& a, const std::string& b) -> std::optional<std::tuple<std::uint64_t, std::string>> {
            auto d = compare_traces(parse_jsonl(a), parse_jsonl(b));
            if (!d) return std::nullopt;
            return std::make_tuple(d->seq, d->field);
        },
        py::arg("a_jsonl"), py::arg("b_jsonl"));

    m.def("at_transcript", [](const std::string& jsonl) { return at_transcript(parse_jsonl(jsonl)); },
          py::arg("trace_jsonl"));

    py::class_<System>(m, "System")
        .def(py::init([](const std::optional<std::string>& config) { return new System(config_from(config)); }),
             py::arg("config_json") = py::none())
        .def("step", &System::step, py::arg("ticks"))
        .def_property_readonly("now", &System::now)
        .def("submit", [](System& s, const std::string& event) { s.submit(event_from_json(json::parse(event)).action); },
             py::arg("event_json"))
        .def("state_json", [](const System& s) { return s.state_json().dump(); })
        .def("trace_jsonl", [](const System& s) { return s.trace().to_jsonl(); });

    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
}
