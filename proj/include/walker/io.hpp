#ifndef WALKER_IO_HPP
#define WALKER_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace walker {

// Reads and parses a JSON config; wraps I/O and parse failures in ConfigError.
nlohmann::json load_json(const std::string& path);

// Shortest decimal form with up to 17 significant digits, '.' decimal point.
std::string format_g17(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace walker

#endif
