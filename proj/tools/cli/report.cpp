#include "cli.hpp"

#include "surplus/detail/overloaded.hpp"
#include "surplus/errors.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace surplus::cli {

using surplus::detail::Overloaded;

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ConfigError("output.format must be csv or json, got '" + name + "'");
}

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

namespace {

std::string csv_cell(const Value& value) {
    return std::visit(Overloaded{
                          [](std::monostate) { return std::string(); },
                          [](bool b) { return std::string(b ? "true" : "false"); },
                          [](std::int64_t i) { return std::to_string(i); },
                          [](double d) { return shortest(d); },
                          [](const std::string& s) {
                              if (s.find_first_of(",\"\n") == std::string::npos) return s;
                              std::string quoted = "\"";
                              for (char c : s) {
                                  if (c == '"') quoted += '"';
                                  quoted += c;
                              }
                              return quoted + "\"";
                          },
                      },
                      value);
}

Json json_value(const Value& value) {
    return std::visit(Overloaded{
                          [](std::monostate) { return Json(nullptr); },
                          [](bool b) { return Json(b); },
                          [](std::int64_t i) { return Json(i); },
                          [](double d) {
                              // JSON has no infinities; keep them readable as strings.
                              return std::isfinite(d) ? Json(d) : Json(shortest(d));
                          },
                          [](const std::string& s) { return Json(s); },
                      },
                      value);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<Record>& records) {
    if (records.empty()) return;
    for (std::size_t i = 0; i < records.front().size(); ++i) {
        os << (i ? "," : "") << records.front()[i].name;
    }
    os << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i].value);
        os << '\n';
    }
}

void write_json_lines(std::ostream& os, const std::vector<Record>& records) {
    for (const auto& r : records) {
        // Doubles go through shortest() rather than nlohmann's 17-digit output.
        os << '{';
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto* d = std::get_if<double>(&r[i].value);
            os << (i ? "," : "") << Json(r[i].name).dump() << ':'
               << (d != nullptr && std::isfinite(*d) ? shortest(*d) : json_value(r[i].value).dump());
        }
        os << "}\n";
    }
}

}  // namespace surplus::cli
