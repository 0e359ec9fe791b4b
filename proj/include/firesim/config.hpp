#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firesim/envmodel.hpp"
#include "firesim/gateway.hpp"
#include "firesim/gsm.hpp"
#include "firesim/trace.hpp"

namespace firesim {

/// Everything needed to build a fresh simulated system.
struct SystemConfig {
    gw::GatewayConfig gateway;
    gsm::ModemConfig modem;
    /// Registered handsets besides the destinations (which are always registered).
    std::vector<std::string> handsets;
    env::EnvState env;
};

/// Two destinations, password "mypass", per-sensor alert texts in outbox slots 1-4,
/// 25 degC ambient and clean air.
SystemConfig default_config();

/// Fields absent from `j` keep their default_config() values. Unknown keys
/// and invalid values throw std::invalid_argument.
SystemConfig config_from_json(const json& j);
SystemConfig load_config(const std::filesystem::path& path);
json to_json(const SystemConfig& config);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace firesim
