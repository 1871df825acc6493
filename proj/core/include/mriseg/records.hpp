#ifndef MRISEG_RECORDS_HPP
#define MRISEG_RECORDS_HPP

#include <filesystem>
#include <span>
#include <string>

#include "mriseg/metrics.hpp"

namespace mriseg {

/// One evaluated segmentation run.
struct RunRecord {
    std::string algorithm;  // kmeans | fcm | hybrid
    std::string input;      // image identifier
    EvalReport report;
    std::string config_summary;  // human-readable parameter echo
    std::string timestamp;       // ISO-8601 UTC; not serialized into records files
};

enum class RecordFormat { Csv, Json };

/// CSV column order; JSON records carry the same field names.
inline constexpr const char* kRecordCsvHeader =
    "algorithm,input,dice,compactness,separation,wall_time_s,iterations";

std::string records_to_csv(std::span<const RunRecord> records);
std::string records_to_json(std::span<const RunRecord> records);

/// Writes the records in the chosen format; records must be nonempty.
/// Identical records always produce byte-identical files.
void write_records(std::span<const RunRecord> records, const std::filesystem::path& path,
                   RecordFormat format);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

}  // namespace mriseg

#endif
