#include "output.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>

#include "collab/errors.hpp"
#include "collab/parallel.hpp"
#include "collab/synth.hpp"

namespace collab::tools {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return {buf, end};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

json envelope(std::string_view command, json result, const std::vector<std::string>& args) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["metadata"] = {{"tool", "collab"},
                     {"generated_at", stamp},
                     {"threads", thread_count()},
                     {"rng_algorithm", kRngAlgorithm},
                     {"args", args}};
  doc["result"] = std::move(result);
  return doc;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

json strip_metadata(json doc) {
  doc.erase("metadata");
  return doc;
}

}  // namespace collab::tools
