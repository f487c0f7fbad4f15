#pragma once

#include <string>

#include "credal/io.hpp"

namespace credal::testing {

inline std::string data_path(const std::string& rel) { return std::string(CREDAL_DATA_DIR) + "/" + rel; }

inline CredalNetwork load_network(const std::string& example) {
  return parse_network(read_file(data_path(example + "/network.json")));
}

inline GbrTask load_task(const std::string& example) { return parse_task(read_file(data_path(example + "/query.json"))); }

inline CredalSpec singleton(Pmf q) { return CredalSpec{{std::move(q)}, {}}; }

}  // namespace credal::testing
