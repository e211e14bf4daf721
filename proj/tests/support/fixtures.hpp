#ifndef NPP_TEST_FIXTURES_HPP
#define NPP_TEST_FIXTURES_HPP

#include <string>

#include "npp/instance.hpp"

namespace npp::testing {

inline std::string data_path(const std::string& name) { return std::string(NPP_DATA_DIR) + "/" + name; }

inline Instance example(int id) { return load_instance(data_path("example" + std::to_string(id) + ".json")); }

}  // namespace npp::testing

#endif
