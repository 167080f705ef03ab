#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepfir/engine.hpp"
#include "deepfir/latency.hpp"
#include "deepfir/metrics.hpp"
#include "deepfir/model.hpp"

namespace deepfir {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kEngineVersion = "1.0.0";

// nlohmann::json keeps object keys sorted, so dumps are byte-stable.
using Json = nlohmann::json;

Json to_json(const StreamConfig& config);
Json to_json(const LatencyReport& report);
Json to_json(const TimingReport& report);
Json to_json(const ModelDims& dims);
Json to_json(const CostModel& cost);
Json to_json(const Table1Row& row);

// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::byte> bytes);

}  // namespace deepfir
