#include "mriseg/records.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mriseg/image_io.hpp"

namespace mriseg {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string records_to_csv(std::span<const RunRecord> records) {
    std::ostringstream out;
    out << kRecordCsvHeader << "\n";
    for (const auto& r : records) {
        out << r.algorithm << "," << r.input << "," << fmt_double(r.report.dice) << ","
            << fmt_double(r.report.compactness) << "," << fmt_double(r.report.separation) << ","
            << fmt_double(r.report.wall_time_s) << "," << r.report.iterations << "\n";
    }
    return out.str();
}

std::string records_to_json(std::span<const RunRecord> records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        arr.push_back({{"algorithm", r.algorithm},
                       {"input", r.input},
                       {"dice", r.report.dice},
                       {"compactness", r.report.compactness},
                       {"separation", r.report.separation},
                       {"wall_time_s", r.report.wall_time_s},
                       {"iterations", r.report.iterations}});
    }
    return arr.dump(2) + "\n";
}

void write_records(std::span<const RunRecord> records, const std::filesystem::path& path,
                   RecordFormat format) {
    if (records.empty()) {
        throw std::invalid_argument("write_records: no records");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError(path.string() + ": cannot open for writing");
    }
    out << (format == RecordFormat::Csv ? records_to_csv(records) : records_to_json(records));
    if (!out) {
        throw WriteError(path.string() + ": write failed");
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mriseg
